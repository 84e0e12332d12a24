use crate::error::{usage, Result};
use crate::par::Exec;
use crate::phase::Phase;

fn sorted_unique(points: &[Phase]) -> Vec<u128> {
    let mut v: Vec<u128> = points.iter().map(|x| x.0).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Minimal number of closed arcs of raw length `len` (in units of `2^-128`)
/// covering `points` on the circle.
///
/// A minimal cover can always be shifted so that some arc starts at a data
/// point lying within `len` behind the first sorted point; each such start is
/// tried with a greedy sweep.
pub fn minimal_arc_cover(points: &[Phase], len: u128) -> usize {
    let xs = sorted_unique(points);
    let n = xs.len();
    if n <= 1 {
        return n;
    }
    let mut best = n;
    let starts = (0..n).filter(|&j| xs[0].wrapping_sub(xs[j]) <= len);
    for s in starts {
        let offset = |i: usize| xs[(s + i) % n].wrapping_sub(xs[s]);
        let mut arcs = 1;
        let mut cur = 0usize;
        loop {
            let Some(reach) = offset(cur).checked_add(len) else { break };
            // first index in (cur, n) with offset beyond reach
            let (mut lo, mut hi) = (cur + 1, n);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if offset(mid) > reach {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            if lo == n {
                break;
            }
            arcs += 1;
            if arcs >= best {
                break;
            }
            cur = lo;
        }
        best = best.min(arcs);
    }
    best
}

/// One comparison of covering numbers for a scaled set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaledCoverCheck {
    /// Arcs of length `p·2^-k` needed for `pA`.
    pub scaled: usize,
    /// Arcs of length `2^-k` needed for `A`.
    pub base: usize,
}

impl ScaledCoverCheck {
    pub fn holds(&self) -> bool {
        self.scaled <= self.base
    }
}

/// Compares `N_{pδ}(pA)` with `N_δ(A)` for `δ = 2^-k`, requiring `pδ < 1`.
pub fn scaled_covering_check(points: &[Phase], p: u64, k: u32) -> Result<ScaledCoverCheck> {
    if points.is_empty() {
        return usage("scaled covering check of an empty set");
    }
    if p == 0 || k == 0 || k > 127 {
        return usage(format!("invalid multiplier {p} or scale {k}"));
    }
    let unit = 1u128 << (128 - k);
    let Some(scaled_len) = unit.checked_mul(p as u128) else {
        return usage(format!("p·2^-k must be below 1 (p = {p}, k = {k})"));
    };
    if p as u128 >= 1u128 << k {
        return usage(format!("p·2^-k must be below 1 (p = {p}, k = {k})"));
    }
    let scaled: Vec<Phase> = points.iter().map(|x| x.mul_int(p)).collect();
    Ok(ScaledCoverCheck { scaled: minimal_arc_cover(&scaled, scaled_len), base: minimal_arc_cover(points, unit) })
}

/// Totals from a sweep of scaled covering checks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub checks: usize,
    pub skipped: usize,
    pub violations: Vec<(usize, u64, u32)>,
}

/// Runs [`scaled_covering_check`] for every set, every `p ≤ p_max` and every
/// `k ≤ k_max` with `p·2^-k < 1`.
pub fn scaled_covering_sweep(sets: &[Vec<Phase>], p_max: u64, k_max: u32, exec: Exec) -> Result<SweepSummary> {
    if sets.iter().any(|s| s.is_empty()) {
        return usage("scaled covering sweep over an empty set");
    }
    let per_set = exec.map_range(sets.len(), |i| {
        let mut out = SweepSummary::default();
        for p in 1..=p_max {
            for k in 1..=k_max {
                if (p as u128) >= 1u128 << k {
                    out.skipped += 1;
                    continue;
                }
                let c = scaled_covering_check(&sets[i], p, k).expect("validated arguments");
                out.checks += 1;
                if !c.holds() {
                    out.violations.push((i, p, k));
                }
            }
        }
        out
    });
    Ok(per_set.into_iter().fold(SweepSummary::default(), |mut acc, s| {
        acc.checks += s.checks;
        acc.skipped += s.skipped;
        acc.violations.extend(s.violations);
        acc
    }))
}
