use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::generate::Orbit;
use crate::error::{usage, Result};

const PAIR_SEED: u64 = 0x7a75_6469_7363;

/// Integer statistics of the counting function `τ(n) = N_2(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauReport {
    pub n_max: usize,
    /// `τ(n_max) / n_max`.
    pub tau_estimate: BigRational,
    /// Largest `|τ(n+m) − τ(n) − τ(m)|` over the checked pairs.
    pub max_subadditivity_defect: u64,
    pub pairs_checked: u64,
    /// Whether every checked defect was `< bound`.
    pub defect_below_bound: bool,
    pub bound: u64,
    /// Largest `|τ(n) − round(n τ)|`, rounding half toward zero.
    pub max_round_discrepancy: u64,
    /// Largest `|τ(n) − floor(n τ)|`.
    pub max_floor_discrepancy: u64,
}

/// Subadditivity and linear-growth diagnostics for `τ`.
///
/// `bound` is the constant the defect is compared against. When all pairs
/// `n, m ≥ 1` with `n + m ≤ n_max` number at most `samples`, every pair is
/// checked; otherwise `samples` pairs are drawn from a fixed-seed stream, so
/// the report is deterministic.
pub fn tau_discrepancy(orbit: &Orbit, bound: u64, samples: u64) -> Result<TauReport> {
    let Some(tau) = orbit.tau() else {
        return usage("the tau report needs exactly two steps");
    };
    let n_max = orbit.len();
    let t = tau[n_max];
    let defect = |n: usize, m: usize| (tau[n + m] as i64 - tau[n] as i64 - tau[m] as i64).unsigned_abs();

    let total_pairs = (n_max as u64) * (n_max as u64 - 1) / 2;
    let mut max_defect = 0;
    let mut checked = 0u64;
    if total_pairs <= samples {
        for n in 1..n_max {
            for m in 1..=(n_max - n) {
                max_defect = max_defect.max(defect(n, m));
                checked += 1;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(PAIR_SEED);
        for _ in 0..samples {
            let n = rng.gen_range(1..n_max);
            let m = rng.gen_range(1..=(n_max - n));
            max_defect = max_defect.max(defect(n, m));
            checked += 1;
        }
    }

    // n·τ = n·t / n_max exactly
    let mut max_round = 0u64;
    let mut max_floor = 0u64;
    let nm = n_max as u128;
    for (n, &tn) in tau.iter().enumerate().skip(1) {
        let num = n as u128 * t as u128;
        let fl = num / nm;
        let rem = num % nm;
        let rounded = if 2 * rem <= nm { fl } else { fl + 1 };
        max_round = max_round.max((tn as i128 - rounded as i128).unsigned_abs() as u64);
        max_floor = max_floor.max((tn as i128 - fl as i128).unsigned_abs() as u64);
    }

    Ok(TauReport {
        n_max,
        tau_estimate: BigRational::new((t as i64).into(), (n_max as i64).into()),
        max_subadditivity_defect: max_defect,
        pairs_checked: checked,
        defect_below_bound: max_defect < bound,
        bound,
        max_round_discrepancy: max_round,
        max_floor_discrepancy: max_floor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{generate_orbit, StepSystem, Strategy};

    fn orbit(strategy: Strategy, n: usize) -> Orbit {
        let s = StepSystem::rational(&[(1, 5), (2, 7)]).unwrap();
        generate_orbit(&s, &strategy, n, 128).unwrap()
    }

    #[test]
    fn alternating_word() {
        let r = tau_discrepancy(&orbit(Strategy::Periodic(vec![1, 2]), 1000), 2, 10_000).unwrap();
        assert_eq!(r.tau_estimate, BigRational::new(1.into(), 2.into()));
        assert_eq!(r.max_round_discrepancy, 0);
        assert!(r.max_floor_discrepancy <= 1);
        assert!(r.max_subadditivity_defect <= 1);
        assert!(r.defect_below_bound);
    }

    #[test]
    fn constant_word() {
        let r = tau_discrepancy(&orbit(Strategy::Periodic(vec![1]), 500), 1, 1_000_000).unwrap();
        assert_eq!(r.tau_estimate, BigRational::new(0.into(), 1.into()));
        assert_eq!(r.max_subadditivity_defect, 0);
        assert_eq!(r.max_round_discrepancy, 0);
        assert_eq!(r.pairs_checked, 500 * 499 / 2);
    }

    #[test]
    fn random_word_has_growing_defect() {
        let small = tau_discrepancy(&orbit(Strategy::Random { seed: 1 }, 100), 1, 50_000).unwrap();
        let large = tau_discrepancy(&orbit(Strategy::Random { seed: 1 }, 10_000), 1, 50_000).unwrap();
        assert!(large.max_subadditivity_defect > small.max_subadditivity_defect);
        assert!(!large.defect_below_bound);
    }

    #[test]
    fn requires_two_steps() {
        let s = StepSystem::rational(&[(1, 5), (2, 7), (1, 3)]).unwrap();
        let o = generate_orbit(&s, &Strategy::Periodic(vec![1, 2, 3]), 10, 128).unwrap();
        assert!(tau_discrepancy(&o, 1, 10).is_err());
    }
}
