use crate::error::{usage, Result};
use crate::par::Exec;
use crate::phase::Phase;

/// Largest scale exponent accepted (points carry at most 128 bits and the
/// last two absorb rounding).
pub const MAX_SCALE: u32 = 126;

/// Number of occupied dyadic cells of side `2^-k`.
///
/// The grid count is within a factor 2 of the minimal number of length-`2^-k`
/// intervals needed to cover the set, so both give the same box dimension.
pub fn covering_count(points: &[Phase], k: u32) -> Result<u64> {
    if points.is_empty() {
        return usage("covering count of an empty set");
    }
    if k > MAX_SCALE {
        return usage(format!("scale exponent {k} exceeds {MAX_SCALE}"));
    }
    if k <= 24 {
        let mut bits = vec![0u64; (1usize << k).div_ceil(64)];
        for x in points {
            let c = x.cell(k) as usize;
            bits[c >> 6] |= 1 << (c & 63);
        }
        Ok(bits.iter().map(|w| w.count_ones() as u64).sum())
    } else {
        let mut cells: Vec<u128> = points.iter().map(|x| x.cell(k)).collect();
        cells.sort_unstable();
        cells.dedup();
        Ok(cells.len() as u64)
    }
}

/// Dyadic covering counts over a range of scales.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringProfile {
    pub k_min: u32,
    pub k_max: u32,
    /// `N_{2^-k}` for `k = k_min..=k_max`.
    pub counts: Vec<u64>,
    pub n_points: usize,
}

impl CoveringProfile {
    pub fn count(&self, k: u32) -> Option<u64> {
        (self.k_min..=self.k_max).contains(&k).then(|| self.counts[(k - self.k_min) as usize])
    }

    pub fn scales(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        (self.k_min..=self.k_max).zip(self.counts.iter().copied())
    }

    /// Checks `1 ≤ N_k ≤ min(n, 2^k)`, monotonicity and `N_{k+1} ≤ 2 N_k`.
    pub fn invariants_hold(&self) -> bool {
        let bounded = self.scales().all(|(k, n)| {
            let cap = if k >= 64 { u64::MAX } else { 1u64 << k };
            n >= 1 && n <= cap.min(self.n_points as u64)
        });
        let steps = self.counts.windows(2).all(|w| w[0] <= w[1] && w[1] <= 2 * w[0]);
        bounded && steps
    }
}

/// Builds the profile for `k_min..=k_max` with the default execution mode.
pub fn covering_profile(points: &[Phase], k_min: u32, k_max: u32) -> Result<CoveringProfile> {
    covering_profile_with(points, k_min, k_max, Exec::default())
}

/// Sorts once, then counts cell boundaries at every scale; scales are
/// processed independently under `exec`.
pub fn covering_profile_with(points: &[Phase], k_min: u32, k_max: u32, exec: Exec) -> Result<CoveringProfile> {
    if points.is_empty() {
        return usage("covering profile of an empty set");
    }
    if k_min > k_max || k_max > MAX_SCALE {
        return usage(format!("invalid scale range [{k_min}, {k_max}]"));
    }
    let mut sorted: Vec<u128> = points.iter().map(|x| x.0).collect();
    sorted.sort_unstable();
    let ks: Vec<u32> = (k_min..=k_max).collect();
    let counts = exec.map(&ks, |&k| {
        if k == 0 {
            return 1;
        }
        let shift = 128 - k;
        1 + sorted.windows(2).filter(|w| (w[0] >> shift) != (w[1] >> shift)).count() as u64
    });
    Ok(CoveringProfile { k_min, k_max, counts, n_points: points.len() })
}

/// Box-dimension estimates read off a covering profile.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDimEstimate {
    /// Smallest local slope; finite data cannot certify a liminf, so this is
    /// the lower-dimension estimate.
    pub lower_est: f64,
    /// Largest local slope.
    pub upper_est: f64,
    /// Least-squares slope of `log2 N` against `k`.
    pub slope_global: f64,
    /// `log2 N_{k+1} − log2 N_k` for consecutive scales.
    pub slopes_local: Vec<f64>,
    /// Set when the coarsest scale already separates every point.
    pub resolution_limited: bool,
}

/// Minimum number of scales a profile must span for estimation.
pub const MIN_SCALES: usize = 4;

pub fn box_dim_estimate(profile: &CoveringProfile) -> Result<BoxDimEstimate> {
    let n = profile.counts.len();
    if n < MIN_SCALES {
        return usage(format!("need at least {MIN_SCALES} scales, got {n}"));
    }
    let logs: Vec<f64> = profile.counts.iter().map(|&c| (c as f64).log2()).collect();
    let slopes_local: Vec<f64> = logs.windows(2).map(|w| w[1] - w[0]).collect();
    let lower_est = slopes_local.iter().copied().fold(f64::INFINITY, f64::min);
    let upper_est = slopes_local.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ks: Vec<f64> = (profile.k_min..=profile.k_max).map(f64::from).collect();
    let mk = ks.iter().sum::<f64>() / n as f64;
    let ml = logs.iter().sum::<f64>() / n as f64;
    let sxy: f64 = ks.iter().zip(&logs).map(|(k, l)| (k - mk) * (l - ml)).sum();
    let sxx: f64 = ks.iter().map(|k| (k - mk) * (k - mk)).sum();
    Ok(BoxDimEstimate {
        lower_est,
        upper_est,
        slope_global: sxy / sxx,
        slopes_local,
        resolution_limited: profile.counts[0] as usize >= profile.n_points,
    })
}
