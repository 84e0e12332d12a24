//! Rank of rational spans and the two mod-1 independence deciders.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::linalg;
use super::simplex;
use super::symbolic::same_basis;
use super::SymbolicReal;
use crate::error::{usage, Result};
use crate::orbit::StepSystem;

/// `dim span_Q(u_1, …, u_k)`, optionally adjoining the constant 1.
///
/// Each real contributes its dense vector `(q0, c_1, …, c_r)`, so rational
/// inputs span the `1`-coordinate even when `include_one` is false.
pub fn rank_span(reals: &[SymbolicReal], include_one: bool) -> Result<usize> {
    if let Some(first) = reals.first() {
        if reals.iter().any(|r| !same_basis(r.basis(), first.basis())) {
            return usage("rank_span inputs reference different basis tables");
        }
    }
    let mut rows: Vec<Vec<BigRational>> = reals.iter().map(SymbolicReal::dense).collect();
    if include_one {
        let width = reals.first().map_or(1, |r| r.basis().len() + 1);
        let mut one = vec![BigRational::zero(); width];
        one[0] = BigRational::one();
        rows.push(one);
    }
    Ok(linalg::rank(&rows))
}

/// Outcome of a mod-1 independence test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Independent,
    /// `Σ t_i α_i` is an integer; `t ≠ 0`.
    Dependent { witness: Vec<BigRational> },
}

impl Verdict {
    pub fn is_independent(&self) -> bool {
        matches!(self, Verdict::Independent)
    }

    pub fn witness(&self) -> Option<&[BigRational]> {
        match self {
            Verdict::Independent => None,
            Verdict::Dependent { witness } => Some(witness),
        }
    }
}

/// The `ℓ × r` matrix `p` transposed to `r × ℓ` rationals.
fn p_transpose(steps: &StepSystem) -> Vec<Vec<BigRational>> {
    (0..steps.r())
        .map(|j| steps.p().iter().map(|row| BigRational::from_integer(row[j].into())).collect())
        .collect()
}

/// Takes a nonzero direction `u` in the kernel of `pᵀ` and returns the
/// smallest positive multiple `μ·u` with `Σ μ u_i q_i ∈ Z`.
///
/// Along a kernel direction the `β`-coefficients of `Σ t_i α_i` vanish, so
/// only the rational part matters. If `s = u·q` is zero, `μ = 1` works
/// (`u` is primitive integral). Otherwise `s = a/b` in lowest terms and
/// `μ = b/|a|` is the least positive scale making `μ s` an integer.
fn integral_witness(u: &[BigRational], q: &[BigRational]) -> Vec<BigRational> {
    let prim: Vec<BigRational> = linalg::primitive_integer(u).into_iter().map(BigRational::from_integer).collect();
    let s = linalg::dot(&prim, q);
    let mu = if s.is_zero() {
        BigRational::one()
    } else {
        BigRational::new(s.denom().clone(), s.numer().abs())
    };
    prim.into_iter().map(|x| x * &mu).collect()
}

/// Decides `Q_+`-independence mod 1 exactly.
///
/// Dependence means a nonzero `t ≥ 0` with `Σ_i t_i p_{i,j} = 0` for every
/// `j` and `Σ_i t_i q_i ∈ Z`. The first condition is a nonnegative-kernel
/// feasibility problem, solved by exact simplex with `Σ t = 1`. The second
/// then always holds after positive rescaling: if `Σ t_i q_i = 0` it holds
/// already, and otherwise dividing by `|Σ t_i q_i|` turns it into `±1`.
pub fn qplus_independent_mod1(steps: &StepSystem) -> Verdict {
    let ell = steps.len();
    let a = p_transpose(steps);
    match simplex::nonnegative_kernel_vector(&a, ell) {
        None => Verdict::Independent,
        Some(t) => Verdict::Dependent { witness: integral_witness(&t, steps.q()) },
    }
}

/// Decides `Q`-independence mod 1 exactly: dependent iff `pᵀ` has a
/// nontrivial rational kernel.
pub fn q_independent_mod1(steps: &StepSystem) -> Verdict {
    let ell = steps.len();
    let a = p_transpose(steps);
    let ker = linalg::kernel(&a, ell);
    match ker.first() {
        None => Verdict::Independent,
        Some(u) => Verdict::Dependent { witness: integral_witness(u, steps.q()) },
    }
}

/// Exact check that `Σ t_i α_i` has no basis part and an integer constant.
pub fn witness_is_integral(steps: &StepSystem, t: &[BigRational]) -> bool {
    if t.len() != steps.len() || t.iter().all(Zero::is_zero) {
        return false;
    }
    let mut acc = SymbolicReal::rational(steps.basis(), BigRational::zero());
    for (ti, a) in t.iter().zip(steps.alphas()) {
        acc = &acc + &a.scale(ti);
    }
    acc.is_rational() && acc.constant().is_integer()
}

/// Renders a witness as `p/q` strings.
pub fn witness_strings(t: &[BigRational]) -> Vec<String> {
    t.iter().map(fraction_string).collect()
}

/// `"p/q"` rendering, with `"/1"` kept for integers.
pub fn fraction_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}
