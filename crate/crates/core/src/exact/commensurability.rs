//! Multiplicative relations `γ = Π ρ_i^{t_i}` between contraction ratios,
//! decided exactly in a log-coordinate representation.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg;
use super::primes::{factor_rational, PrimeExponents};
use super::simplex;
use super::symbolic::same_basis;
use super::SymbolicReal;
use crate::error::{domain, guard, usage, Result};

/// Largest number of ratios for which vertices are enumerated.
pub const MAX_VERTEX_ENUMERATION: usize = 16;

/// A contraction ratio in `(0, 1)` with an exact logarithm representation.
#[derive(Debug, Clone, PartialEq)]
pub enum LogRatio {
    /// A rational ratio; its logarithm is represented by the prime-exponent
    /// vector.
    Rational(BigRational),
    /// `log ρ` itself, expanded over a declared log-basis.
    Log(SymbolicReal),
}

impl LogRatio {
    pub fn rational(num: i64, den: i64) -> Self {
        LogRatio::Rational(BigRational::new(num.into(), den.into()))
    }

    fn check_domain(&self) -> Result<()> {
        match self {
            LogRatio::Rational(x) => {
                if !x.is_positive() || *x >= BigRational::one() {
                    return domain(format!("ratio {x} outside (0, 1)"));
                }
            }
            LogRatio::Log(l) => {
                if !l.value().is_negative() {
                    return domain(format!("log-ratio {l} is not negative, ratio outside (0, 1)"));
                }
            }
        }
        Ok(())
    }
}

/// Coordinates of several logarithms in a common exact frame.
#[derive(Debug, Clone)]
pub struct LogCoordinates {
    /// Prime numbers (rational case) or `"1"` followed by basis labels.
    pub labels: Vec<String>,
    /// Primes, in the rational case.
    pub primes: Vec<u64>,
    /// One coordinate vector per input.
    pub vectors: Vec<Vec<BigRational>>,
}

/// Expresses each logarithm over a common coordinate system. All inputs must
/// be of the same kind.
pub fn log_coordinates(ratios: &[LogRatio]) -> Result<LogCoordinates> {
    for r in ratios {
        r.check_domain()?;
    }
    let all_rational = ratios.iter().all(|r| matches!(r, LogRatio::Rational(_)));
    let all_log = ratios.iter().all(|r| matches!(r, LogRatio::Log(_)));
    if all_rational {
        let exps: Vec<PrimeExponents> = ratios
            .iter()
            .map(|r| match r {
                LogRatio::Rational(x) => factor_rational(x),
                LogRatio::Log(_) => unreachable!(),
            })
            .collect::<Result<_>>()?;
        let primes: Vec<u64> = exps.iter().flat_map(|e| e.keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
        let vectors = exps
            .iter()
            .map(|e| primes.iter().map(|p| BigRational::from_integer(e.get(p).copied().unwrap_or(0).into())).collect())
            .collect();
        Ok(LogCoordinates { labels: primes.iter().map(u64::to_string).collect(), primes, vectors })
    } else if all_log {
        let logs: Vec<&SymbolicReal> = ratios
            .iter()
            .map(|r| match r {
                LogRatio::Log(l) => l,
                LogRatio::Rational(_) => unreachable!(),
            })
            .collect();
        let basis = logs[0].basis();
        if logs.iter().any(|l| !same_basis(l.basis(), basis)) {
            return usage("log-ratios reference different basis tables");
        }
        let mut labels = vec!["1".to_string()];
        labels.extend(basis.entries().iter().map(|e| e.label.clone()));
        Ok(LogCoordinates { labels, primes: Vec::new(), vectors: logs.iter().map(|l| l.dense()).collect() })
    } else {
        usage("cannot mix rational ratios and symbolic log-ratios")
    }
}

/// Per-column outcome of the commensurability search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnVerdict {
    /// A nonnegative solution with every denominator within the bound.
    Bounded(Vec<BigRational>),
    /// Solvable over the nonnegative rationals, but no vertex solution meets
    /// the denominator bound. Carries a vertex solution.
    FeasibleUnbounded(Vec<BigRational>),
    Infeasible,
}

/// Nonnegative rational exponents `t_{i,j}` with `γ_j = Π_i ρ_i^{t_{i,j}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommensurabilityWitness {
    /// `ℓ × m`, row `i` is ratio `ρ_i`, column `j` is `γ_j`.
    pub t: Vec<Vec<BigRational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommensurabilityReport {
    pub columns: Vec<ColumnVerdict>,
}

impl CommensurabilityReport {
    /// The full witness matrix, when every column has a bounded solution.
    pub fn witness(&self) -> Option<CommensurabilityWitness> {
        let cols: Option<Vec<&Vec<BigRational>>> = self
            .columns
            .iter()
            .map(|c| match c {
                ColumnVerdict::Bounded(t) => Some(t),
                _ => None,
            })
            .collect();
        let cols = cols?;
        let ell = cols.first().map_or(0, |c| c.len());
        Some(CommensurabilityWitness {
            t: (0..ell).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect(),
        })
    }
}

fn max_denominator(t: &[BigRational]) -> BigRational {
    t.iter().map(|x| BigRational::from_integer(x.denom().clone())).max().unwrap_or_else(BigRational::one)
}

/// Enumerates the vertices of `{t ≥ 0 : V t = w}`. Each vertex is the unique
/// solution on a column subset of full column rank.
fn vertices(cols: &[Vec<BigRational>], w: &[BigRational]) -> Vec<Vec<BigRational>> {
    let ell = cols.len();
    let dim = w.len();
    let mut out: Vec<Vec<BigRational>> = Vec::new();
    for mask in 1u32..(1u32 << ell) {
        let subset: Vec<usize> = (0..ell).filter(|i| mask & (1 << i) != 0).collect();
        if subset.len() > dim.max(1) {
            continue;
        }
        let a: Vec<Vec<BigRational>> = (0..dim).map(|r| subset.iter().map(|&i| cols[i][r].clone()).collect()).collect();
        let Some(sol) = linalg::solve_unique(&a, w) else { continue };
        if !linalg::is_nonnegative(&sol) {
            continue;
        }
        let mut t = vec![BigRational::zero(); ell];
        for (&i, v) in subset.iter().zip(sol) {
            t[i] = v;
        }
        if !out.contains(&t) {
            out.push(t);
        }
    }
    out
}

/// Decides, for each `γ_j`, whether `log γ_j = Σ_i t_i log ρ_i` has a
/// solution `t ∈ Q_+^ℓ`, and searches the vertices of the solution set for
/// one whose denominators are at most `denominator_bound`.
pub fn commensurability_witness(
    rhos: &[LogRatio],
    gammas: &[LogRatio],
    denominator_bound: u64,
) -> Result<CommensurabilityReport> {
    if rhos.is_empty() {
        return usage("need at least one ratio rho");
    }
    if rhos.len() > MAX_VERTEX_ENUMERATION {
        return guard(format!("at most {MAX_VERTEX_ENUMERATION} ratios supported"));
    }
    let mut all = rhos.to_vec();
    all.extend(gammas.iter().cloned());
    let coords = log_coordinates(&all)?;
    let (rho_vecs, gamma_vecs) = coords.vectors.split_at(rhos.len());
    let dim = coords.labels.len();
    let matrix: Vec<Vec<BigRational>> = (0..dim).map(|r| rho_vecs.iter().map(|c| c[r].clone()).collect()).collect();
    let bound = BigRational::from_integer(denominator_bound.into());

    let columns = gamma_vecs
        .iter()
        .map(|w| {
            if simplex::feasible_point(&matrix, w).is_none() {
                return ColumnVerdict::Infeasible;
            }
            let mut verts = vertices(rho_vecs, w);
            verts.sort_by(|a, b| max_denominator(a).cmp(&max_denominator(b)).then_with(|| a.cmp(b)));
            match verts.first() {
                Some(t) if max_denominator(t) <= bound => ColumnVerdict::Bounded(t.clone()),
                Some(t) => ColumnVerdict::FeasibleUnbounded(t.clone()),
                None => unreachable!("a feasible pointed polyhedron has a vertex"),
            }
        })
        .collect();
    Ok(CommensurabilityReport { columns })
}

/// Exact check of a witness column against rational ratios.
pub fn verify_rational_column(rhos: &[BigRational], gamma: &BigRational, t: &[BigRational]) -> Result<bool> {
    let mut all: Vec<LogRatio> = rhos.iter().cloned().map(LogRatio::Rational).collect();
    all.push(LogRatio::Rational(gamma.clone()));
    let c = log_coordinates(&all)?;
    let (r, g) = c.vectors.split_at(rhos.len());
    Ok((0..c.labels.len()).all(|k| {
        let lhs = r.iter().zip(t).fold(BigRational::zero(), |acc, (v, ti)| acc + &v[k] * ti);
        lhs == g[0][k]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::BasisTable;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn spec_examples() {
        let r = commensurability_witness(&[LogRatio::rational(1, 3)], &[LogRatio::rational(1, 9)], 64).unwrap();
        assert_eq!(r.witness().unwrap().t, vec![vec![q(2, 1)]]);

        let r = commensurability_witness(
            &[LogRatio::rational(1, 2), LogRatio::rational(1, 3)],
            &[LogRatio::rational(1, 6)],
            64,
        )
        .unwrap();
        assert_eq!(r.witness().unwrap().t, vec![vec![q(1, 1)], vec![q(1, 1)]]);

        let r = commensurability_witness(&[LogRatio::rational(1, 2)], &[LogRatio::rational(1, 3)], 64).unwrap();
        assert_eq!(r.columns, vec![ColumnVerdict::Infeasible]);
        assert!(r.witness().is_none());
    }

    #[test]
    fn fractional_exponent_and_bound() {
        // (1/8) = (1/4)^{3/2}
        let r = commensurability_witness(&[LogRatio::rational(1, 4)], &[LogRatio::rational(1, 8)], 2).unwrap();
        assert_eq!(r.columns, vec![ColumnVerdict::Bounded(vec![q(3, 2)])]);
        let r = commensurability_witness(&[LogRatio::rational(1, 4)], &[LogRatio::rational(1, 8)], 1).unwrap();
        assert_eq!(r.columns, vec![ColumnVerdict::FeasibleUnbounded(vec![q(3, 2)])]);
    }

    #[test]
    fn negative_exponent_is_infeasible() {
        // 1/3 = (1/6)·(1/2)^-1 needs a negative exponent
        let r = commensurability_witness(
            &[LogRatio::rational(1, 6), LogRatio::rational(1, 2)],
            &[LogRatio::rational(1, 3)],
            64,
        )
        .unwrap();
        assert_eq!(r.columns, vec![ColumnVerdict::Infeasible]);
    }

    #[test]
    fn domain_and_mixing_errors() {
        assert!(commensurability_witness(&[LogRatio::rational(3, 2)], &[LogRatio::rational(1, 2)], 8).is_err());
        let b = BasisTable::sqrts(&[2], 60).unwrap().shared();
        let l = SymbolicReal::parse(&b, "-sqrt2").unwrap();
        assert!(commensurability_witness(&[LogRatio::Log(l)], &[LogRatio::rational(1, 2)], 8).is_err());
    }

    #[test]
    fn symbolic_logs() {
        let b = BasisTable::sqrts(&[2, 3], 60).unwrap().shared();
        let lr = |s: &str| LogRatio::Log(SymbolicReal::parse(&b, s).unwrap());
        let r = commensurability_witness(&[lr("-sqrt2"), lr("-sqrt3")], &[lr("-2*sqrt2 - sqrt3/2")], 8).unwrap();
        assert_eq!(r.witness().unwrap().t, vec![vec![q(2, 1)], vec![q(1, 2)]]);
        let r = commensurability_witness(&[lr("-sqrt2")], &[lr("-sqrt3")], 8).unwrap();
        assert_eq!(r.columns, vec![ColumnVerdict::Infeasible]);
    }

    #[test]
    fn verifier() {
        assert!(verify_rational_column(&[q(1, 2), q(1, 3)], &q(1, 6), &[q(1, 1), q(1, 1)]).unwrap());
        assert!(!verify_rational_column(&[q(1, 2), q(1, 3)], &q(1, 6), &[q(2, 1), q(1, 1)]).unwrap());
    }
}
