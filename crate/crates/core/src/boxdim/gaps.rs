use crate::error::{usage, Result};
use crate::phase::Phase;

/// Gap statistics of a finite set on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct GapProfile {
    /// Longest circular gap between consecutive distinct points.
    pub max_gap: f64,
    /// Fraction of dyadic cells of side `2^-k` that are occupied.
    pub occupied_fraction: f64,
    /// Longest run of consecutive occupied cells (circular).
    pub longest_run: usize,
    pub k: u32,
}

pub fn gap_profile(points: &[Phase], k: u32) -> Result<GapProfile> {
    if points.is_empty() {
        return usage("gap profile of an empty set");
    }
    if k > 24 {
        return usage(format!("gap profile resolution {k} exceeds 24"));
    }
    let mut xs: Vec<u128> = points.iter().map(|p| p.0).collect();
    xs.sort_unstable();
    xs.dedup();
    let mut max_gap = xs[0].wrapping_sub(xs[xs.len() - 1]);
    for w in xs.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    // a single point leaves the whole circle as its gap
    let max_gap = if xs.len() == 1 { 1.0 } else { Phase(max_gap).to_f64() };
    let size = 1usize << k;
    let mut occ = vec![false; size];
    for &x in &xs {
        occ[Phase(x).cell(k) as usize] = true;
    }
    let count = occ.iter().filter(|&&b| b).count();
    let longest_run = if count == size {
        size
    } else {
        let start = occ.iter().position(|&b| !b).unwrap_or(0);
        let (mut best, mut run) = (0, 0);
        for i in 1..=size {
            if occ[(start + i) % size] {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        best
    };
    Ok(GapProfile { max_gap, occupied_fraction: count as f64 / size as f64, longest_run, k })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::phase_of_fraction;

    #[test]
    fn examples() {
        let pts = [phase_of_fraction(0, 8, 128), phase_of_fraction(1, 8, 128), phase_of_fraction(7, 8, 128)];
        let g = gap_profile(&pts, 3).unwrap();
        assert!((g.max_gap - 0.75).abs() < 1e-15);
        assert_eq!(g.longest_run, 3);
        assert!((g.occupied_fraction - 3.0 / 8.0).abs() < 1e-15);
        let one = gap_profile(&[Phase::ZERO], 2).unwrap();
        assert_eq!((one.max_gap, one.longest_run), (1.0, 1));
    }
}
