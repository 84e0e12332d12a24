use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::generate::Orbit;
use crate::error::{guard, usage, Result};
use crate::exact::SymbolicReal;
use crate::phase::Phase;

/// The orbit rewritten over a shifted basis, `x̃_n ≡ Σ_j b_j(n) β*_j`.
#[derive(Debug, Clone)]
pub struct ReducedOrbit {
    /// One-based index of the shifted basis element.
    pub shift_index: usize,
    pub shift_amount: i64,
    /// `β*_j`: the expansion basis with `β*_{r0} = β_{r0} + M`.
    pub betas_star: Vec<SymbolicReal>,
    /// `q*_i = q_i − p_{i,r0}·M`, so that `α_i = Σ_j p_{i,j} β*_j + q*_i`.
    pub q_star: Vec<BigRational>,
    /// `x̃_0, …, x̃_n`.
    pub xtilde: Vec<Phase>,
    /// Observed values of `x_n − x̃_n ≡ Σ_i q*_i N_i(n)` in `[0, 1)`.
    pub difference_values: BTreeSet<BigRational>,
}

/// Default shift: the least integer `M > 1 + Σ_j |β_j|`.
pub fn auto_shift(orbit: &Orbit) -> i64 {
    let bound = BigRational::one() + orbit.steps().beta_abs_sum();
    (bound.floor().to_integer() + BigInt::one()).to_i64().unwrap_or(i64::MAX)
}

/// Builds `x̃_n` with the basis element `shift_index` (one-based) shifted by
/// `shift_amount`, or by [`auto_shift`] when `None`.
pub fn reduced_orbit(orbit: &Orbit, shift_index: usize, shift_amount: Option<i64>) -> Result<ReducedOrbit> {
    let steps = orbit.steps();
    let r = steps.r();
    if r == 0 {
        return usage("all steps are rational (r = 0); no reduced orbit");
    }
    if shift_index == 0 || shift_index > r {
        return usage(format!("shift index {shift_index} outside 1..={r}"));
    }
    let shift = shift_amount.unwrap_or_else(|| auto_shift(orbit));
    let m = BigRational::from_integer(shift.into());
    let j0 = shift_index - 1;
    let betas_star: Vec<SymbolicReal> = steps
        .betas()
        .iter()
        .enumerate()
        .map(|(j, b)| if j == j0 { b.add_rational(&m) } else { b.clone() })
        .collect();
    let q_star: Vec<BigRational> = steps
        .q()
        .iter()
        .zip(steps.p())
        .map(|(qi, row)| qi - BigRational::from_integer(row[j0].into()) * &m)
        .collect();

    // per-symbol increment of x̃: Σ_j p_{i,j} β*_j
    let increments: Vec<Phase> = steps
        .p()
        .iter()
        .map(|row| {
            let mut acc = SymbolicReal::rational(steps.basis(), BigRational::zero());
            for (pij, b) in row.iter().zip(&betas_star) {
                acc = &acc + &b.scale(&BigRational::from_integer((*pij).into()));
            }
            acc.phase(orbit.bits())
        })
        .collect();
    let mut xtilde = Vec::with_capacity(orbit.len() + 1);
    let mut x = Phase::ZERO;
    xtilde.push(x);
    for &s in orbit.omega_raw() {
        x = x.add(increments[s as usize]);
        xtilde.push(x);
    }

    // Σ q*_i N_i(n) mod 1 in units of 1/L
    let l = q_star.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let Some(l64) = l.to_u64() else {
        return guard("denominator of the rational parts exceeds u64");
    };
    let units: Vec<u64> = q_star
        .iter()
        .map(|x| {
            let v = (x * BigRational::from_integer(l.clone())).to_integer().mod_floor(&l);
            v.to_u64().expect("reduced below L")
        })
        .collect();
    let mut seen: BTreeSet<u64> = BTreeSet::new();
    let mut acc = 0u64;
    seen.insert(0);
    for &s in orbit.omega_raw() {
        acc = ((acc as u128 + units[s as usize] as u128) % l64 as u128) as u64;
        seen.insert(acc);
    }
    let difference_values = seen
        .into_iter()
        .map(|k| BigRational::new(BigInt::from(k), l.clone()))
        .collect();

    Ok(ReducedOrbit { shift_index, shift_amount: shift, betas_star, q_star, xtilde, difference_values })
}
