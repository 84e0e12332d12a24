use std::collections::HashMap;

use crate::error::{guard, usage, Result};
use crate::orbit::check_bits;
use crate::phase::Phase;

/// Largest `(mn)^r + 1` accepted.
pub const MAX_PIGEONHOLE_RANGE: u128 = 1 << 40;
/// Linear-scan steps tried before switching to cube bucketing.
pub const SCAN_BUDGET: u64 = 1 << 28;
/// Sub-cube table size at which bucketing gives up.
const BUCKET_LIMIT: usize = 1 << 26;

/// Which construction produced `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxPath {
    /// Linear scan; `k` is minimal.
    Scan,
    /// Two multiples in one sub-cube; `k` is their index difference.
    Bucketing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    pub k: u64,
    pub m: u64,
    pub n: u64,
    pub r: usize,
    /// `‖k β_j‖` evaluated on the fixed-point inputs.
    pub achieved: Vec<f64>,
    pub path: ApproxPath,
}

impl ApproxResult {
    /// `(mn)^r + 1`.
    pub fn range(&self) -> u128 {
        (self.m as u128 * self.n as u128).pow(self.r as u32) + 1
    }
}

/// Largest raw norm that is `≤ 1/q`.
pub(crate) fn raw_threshold(q: u128) -> u128 {
    if q <= 1 {
        u128::MAX
    } else if q.is_power_of_two() {
        1u128 << (128 - q.trailing_zeros())
    } else {
        u128::MAX / q
    }
}

/// `floor(x · q / 2^128)` for `q < 2^64`.
fn sub_cube(x: u128, q: u128) -> u128 {
    let (hi, lo) = (x >> 64, x & u64::MAX as u128);
    (hi * q + ((lo * q) >> 64)) >> 64
}

/// Smallest `k ≥ 1` with `‖k β_j‖ ≤ 1/(mn)` for every `j`.
///
/// Scans up to [`SCAN_BUDGET`] multiples; past that the cube-bucketing
/// construction runs and its `k` need not be minimal.
pub fn pigeonhole_approx(betas: &[Phase], m: u64, n: u64, bits: u32) -> Result<ApproxResult> {
    pigeonhole_with_budget(betas, m, n, bits, SCAN_BUDGET)
}

pub(crate) fn pigeonhole_with_budget(betas: &[Phase], m: u64, n: u64, bits: u32, budget: u64) -> Result<ApproxResult> {
    check_bits(bits)?;
    if m == 0 || n == 0 {
        return usage("m and n must be positive");
    }
    let q = m as u128 * n as u128;
    // 2^(4-B) < 1/q
    if q >= 1u128 << (bits - 4) {
        return usage(format!("precision {bits} too low for 1/{q}"));
    }
    let r = betas.len();
    let range = q.checked_pow(r as u32).map(|c| c + 1).filter(|&c| c <= MAX_PIGEONHOLE_RANGE);
    let Some(range) = range else {
        return guard(format!("(mn)^r + 1 exceeds 2^40 (mn = {q}, r = {r})"));
    };
    let betas: Vec<Phase> = betas.iter().map(|b| b.truncate(bits)).collect();
    let limit = raw_threshold(q);
    let done = |k: u64, path| {
        let achieved = betas.iter().map(|b| b.mul_int(k).norm()).collect();
        Ok(ApproxResult { k, m, n, r, achieved, path })
    };

    let mut acc = betas.clone();
    let scan_end = (range as u64).min(budget);
    for k in 1..=scan_end {
        if acc.iter().all(|x| x.norm_raw() <= limit) {
            return done(k, ApproxPath::Scan);
        }
        for (a, b) in acc.iter_mut().zip(&betas) {
            *a = a.add(*b);
        }
    }
    if scan_end == range as u64 {
        unreachable!("pigeonhole range exhausted");
    }

    let mut seen: HashMap<Vec<u128>, u64> = HashMap::new();
    let mut acc = vec![Phase::ZERO; r];
    for k in 0..range as u64 {
        let key: Vec<u128> = acc.iter().map(|x| sub_cube(x.0, q)).collect();
        if let Some(&prev) = seen.get(&key) {
            return done(k - prev, ApproxPath::Bucketing);
        }
        if seen.len() >= BUCKET_LIMIT {
            return guard("bucketing table exceeded its size limit");
        }
        seen.insert(key, k);
        for (a, b) in acc.iter_mut().zip(&betas) {
            *a = a.add(*b);
        }
    }
    unreachable!("pigeonhole principle guarantees a shared sub-cube")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{BasisTable, SymbolicReal};

    fn sqrt2() -> Phase {
        let b = BasisTable::sqrts(&[2], 60).unwrap().shared();
        SymbolicReal::parse(&b, "sqrt2").unwrap().phase(128)
    }

    #[test]
    fn examples() {
        let s = sqrt2();
        let a = pigeonhole_approx(&[s], 1, 2, 128).unwrap();
        assert_eq!((a.k, a.path), (1, ApproxPath::Scan));
        assert!((a.achieved[0] - 0.41421356237309503).abs() < 1e-15);
        assert_eq!(pigeonhole_approx(&[s], 1, 3, 128).unwrap().k, 2);
        let half = Phase(1 << 127);
        // ‖1/2‖ = 1/2 already meets the bound at n = 2
        assert_eq!(pigeonhole_approx(&[half], 1, 2, 128).unwrap().k, 1);
        for n in 3..10 {
            let a = pigeonhole_approx(&[half], 1, n, 128).unwrap();
            assert_eq!((a.k, a.achieved[0]), (2, 0.0));
        }
    }

    #[test]
    fn guards() {
        let s = sqrt2();
        assert!(matches!(pigeonhole_approx(&[s; 3], 1 << 14, 1, 128), Err(crate::Error::Guard(_))));
        assert!(matches!(pigeonhole_approx(&[s], 1 << 40, 1 << 21, 64), Err(crate::Error::Usage(_))));
        assert!(pigeonhole_approx(&[s], 0, 3, 128).is_err());
    }

    #[test]
    fn threshold_is_exact() {
        use num_bigint::BigUint;
        let full = BigUint::from(1u8) << 128;
        for q in [2u128, 3, 5, 7, 8, 192, 4096, 1 << 40] {
            let t = BigUint::from(raw_threshold(q));
            let q = BigUint::from(q);
            assert!(&t * &q <= full && (&t + 1u8) * &q > full);
        }
        assert_eq!(raw_threshold(1), u128::MAX);
    }

    #[test]
    fn sub_cube_matches_bigint() {
        use num_bigint::BigUint;
        for (x, q) in [(u128::MAX, 192u128), (1u128 << 127, 3), (12345678901234567890123456789, (1 << 40) - 1)] {
            let want = (BigUint::from(x) * BigUint::from(q)) >> 128u32;
            assert_eq!(BigUint::from(sub_cube(x, q)), want);
        }
    }

    #[test]
    fn bucketing_meets_bound() {
        let b = BasisTable::sqrts(&[2, 3, 5], 60).unwrap().shared();
        let betas: Vec<Phase> = ["sqrt2", "sqrt3", "sqrt5"].iter().map(|s| SymbolicReal::parse(&b, s).unwrap().phase(128)).collect();
        for n in [3u64, 7, 20] {
            let scan = pigeonhole_with_budget(&betas, 2, n, 128, SCAN_BUDGET).unwrap();
            let bucket = pigeonhole_with_budget(&betas, 2, n, 128, 0).unwrap();
            assert_eq!(bucket.path, ApproxPath::Bucketing);
            assert!(bucket.k >= scan.k && (bucket.k as u128) < bucket.range());
            assert!(bucket.achieved.iter().all(|&a| a <= 1.0 / (2 * n) as f64));
        }
    }
}
