use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{usage, Error, Result};
use crate::exact::linalg;
use crate::exact::symbolic::same_basis;
use crate::exact::{BasisTable, SymbolicReal};
use crate::phase::{Phase, MAX_BITS, MIN_BITS};

/// The step family `α_1, …, α_ℓ` together with an expansion
/// `α_i = Σ_j p_{i,j} β_j + q_i` with integer `p_{i,j}`, rational `q_i`, and
/// `β_1, …, β_r` a basis of `span_Q(1, α_1, …, α_ℓ)` modulo the rationals.
///
/// The `β_j` are themselves rational combinations of declared basis reals;
/// they are chosen from the reduced row echelon form of the coefficient
/// matrix and rescaled so that every `p_{i,j}` is an integer.
#[derive(Debug, Clone)]
pub struct StepSystem {
    basis: Arc<BasisTable>,
    alphas: Vec<SymbolicReal>,
    betas: Vec<SymbolicReal>,
    p: Vec<Vec<i64>>,
    q: Vec<BigRational>,
    lambda: usize,
}

impl StepSystem {
    pub fn new(alphas: Vec<SymbolicReal>) -> Result<Self> {
        let Some(first) = alphas.first() else {
            return usage("a step system needs at least one step");
        };
        let basis = first.basis().clone();
        if alphas.iter().any(|a| !same_basis(a.basis(), &basis)) {
            return usage("steps reference different basis tables");
        }
        for a in &alphas {
            for &i in a.coeffs().keys() {
                if !basis.entries()[i].declared_irrational {
                    return Err(Error::Usage(format!(
                        "basis entry {:?} is not declared irrational",
                        basis.label(i)
                    )));
                }
            }
        }
        let width = basis.len();
        let coeff_rows: Vec<Vec<BigRational>> =
            alphas.iter().map(|a| (0..width).map(|j| a.coeff(j)).collect()).collect();
        let (rows, pivots) = linalg::rref(&coeff_rows);

        let mut betas = Vec::with_capacity(rows.len());
        let mut p = vec![Vec::with_capacity(rows.len()); alphas.len()];
        for (row, &pc) in rows.iter().zip(&pivots) {
            let a: Vec<BigRational> = coeff_rows.iter().map(|c| c[pc].clone()).collect();
            let den = a.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = a.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            // β_j = (g / den) · row_j, p_ij = a_ij · den / g
            let scale = BigRational::new(g.clone(), den);
            let beta = SymbolicReal::from_parts(
                &basis,
                BigRational::zero(),
                row.iter().enumerate().map(|(k, c)| (k, c * &scale)),
            );
            betas.push(beta);
            for (i, v) in ints.iter().enumerate() {
                let pij = (v / &g)
                    .to_i64()
                    .ok_or_else(|| Error::Guard("expansion coefficient exceeds i64".into()))?;
                p[i].push(pij);
            }
        }
        let q = alphas.iter().map(|a| a.constant().clone()).collect();
        let dense: Vec<Vec<BigRational>> = alphas.iter().map(SymbolicReal::dense).collect();
        let lambda = linalg::rank(&dense);
        let sys = Self { basis, alphas, betas, p, q, lambda };
        debug_assert!(sys.expansion_holds());
        Ok(sys)
    }

    /// Parses each step from a linear expression over `basis`.
    pub fn parse(basis: &Arc<BasisTable>, exprs: &[&str]) -> Result<Self> {
        let alphas = exprs.iter().map(|e| SymbolicReal::parse(basis, e)).collect::<Result<Vec<_>>>()?;
        Self::new(alphas)
    }

    /// All-rational steps `num/den`.
    pub fn rational(steps: &[(i64, i64)]) -> Result<Self> {
        let basis = BasisTable::empty().shared();
        let alphas = steps
            .iter()
            .map(|&(n, d)| {
                if d == 0 {
                    return usage("zero denominator");
                }
                Ok(SymbolicReal::from_ratio(&basis, n, d))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphas)
    }

    pub fn basis(&self) -> &Arc<BasisTable> {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn alphas(&self) -> &[SymbolicReal] {
        &self.alphas
    }

    /// The expansion basis `β_1, …, β_r`.
    pub fn betas(&self) -> &[SymbolicReal] {
        &self.betas
    }

    /// Integer coefficient matrix `p_{i,j}` (`ℓ × r`).
    pub fn p(&self) -> &[Vec<i64>] {
        &self.p
    }

    /// Rational parts `q_i`.
    pub fn q(&self) -> &[BigRational] {
        &self.q
    }

    /// `dim span_Q(1, α_1, …, α_ℓ) − 1`.
    pub fn r(&self) -> usize {
        self.betas.len()
    }

    /// `dim span_Q(α_1, …, α_ℓ)`.
    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// `max_i Σ_j |p_{i,j}|`.
    pub fn m(&self) -> u64 {
        self.p.iter().map(|row| row.iter().map(|x| x.unsigned_abs()).sum()).max().unwrap_or(0)
    }

    /// Each step reduced mod 1 and rounded to `bits` bits.
    pub fn phases(&self, bits: u32) -> Result<Vec<Phase>> {
        check_bits(bits)?;
        Ok(self.alphas.iter().map(|a| a.phase(bits)).collect())
    }

    /// Exact check of `α_i = Σ_j p_{i,j} β_j + q_i`.
    pub fn expansion_holds(&self) -> bool {
        self.alphas.iter().enumerate().all(|(i, a)| {
            let mut acc = SymbolicReal::rational(&self.basis, self.q[i].clone());
            for (j, b) in self.betas.iter().enumerate() {
                acc = &acc + &b.scale(&BigRational::from_integer(self.p[i][j].into()));
            }
            acc == *a
        })
    }

    /// Least common multiple of the denominators of the `q_i`.
    pub fn q_denominator_lcm(&self) -> BigInt {
        self.q.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// `Σ_j |β_j|`, from the decimal values.
    pub fn beta_abs_sum(&self) -> BigRational {
        self.betas.iter().fold(BigRational::zero(), |acc, b| acc + b.value().abs())
    }
}

pub(crate) fn check_bits(bits: u32) -> Result<()> {
    if !(MIN_BITS..=MAX_BITS).contains(&bits) {
        return usage(format!("precision must be between {MIN_BITS} and {MAX_BITS} bits, got {bits}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn independent_basis_is_identity() {
        let b = BasisTable::sqrts(&[2, 3], 60).unwrap().shared();
        let s = StepSystem::parse(&b, &["sqrt2", "sqrt3"]).unwrap();
        assert_eq!(s.r(), 2);
        assert_eq!(s.lambda(), 2);
        assert_eq!(s.p(), &[vec![1, 0], vec![0, 1]]);
        assert!(s.expansion_holds());
        assert_eq!(s.m(), 1);
    }

    #[test]
    fn rational_coefficients_become_integers() {
        let b = BasisTable::sqrts(&[2, 3], 60).unwrap().shared();
        let s = StepSystem::parse(&b, &["sqrt2/2 + 1/3", "sqrt2/3", "1/5"]).unwrap();
        assert_eq!(s.r(), 1);
        assert_eq!(s.lambda(), 2);
        assert!(s.expansion_holds());
        assert_eq!(s.p(), &[vec![3], vec![2], vec![0]]);
        assert_eq!(s.q()[0], q(1, 3));
    }

    #[test]
    fn dependent_combination_reduces_r() {
        let b = BasisTable::sqrts(&[2, 3], 60).unwrap().shared();
        let s = StepSystem::parse(&b, &["sqrt2 + sqrt3", "2*sqrt2 + 2*sqrt3 + 1/2"]).unwrap();
        assert_eq!(s.r(), 1);
        assert_eq!(s.lambda(), 2);
        assert!(s.expansion_holds());
    }

    #[test]
    fn rational_only() {
        let s = StepSystem::rational(&[(1, 4), (1, 2)]).unwrap();
        assert_eq!(s.r(), 0);
        assert_eq!(s.lambda(), 1);
        assert_eq!(s.q_denominator_lcm(), BigInt::from(4));
    }

    #[test]
    fn rejects_undeclared_labels_and_bad_bits() {
        let mut e = BasisTable::sqrts(&[2], 60).unwrap().entries().to_vec();
        e[0].declared_irrational = false;
        let b = BasisTable::new(e).unwrap().shared();
        assert!(StepSystem::parse(&b, &["sqrt2"]).is_err());
        let s = StepSystem::rational(&[(1, 3)]).unwrap();
        assert!(s.phases(32).is_err());
        assert!(s.phases(129).is_err());
    }
}
