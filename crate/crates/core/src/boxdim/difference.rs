use crate::error::{guard, usage, Result};
use crate::phase::Phase;

use super::profile::covering_count;

/// Above this many points the exact difference set is replaced by a cell cover.
pub const EXACT_DIFFERENCE_LIMIT: usize = 4096;
/// Resolution of the cell-level fallback.
pub const DIFFERENCE_CELL_BITS: u32 = 16;

/// `A − A` on the circle, either exactly or as a cover by dyadic cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DifferenceSet {
    Exact(Vec<Phase>),
    /// Cells of side `2^-k` whose union contains every difference.
    Cells { k: u32, occupied: Vec<u64> },
}

impl DifferenceSet {
    pub fn is_exact(&self) -> bool {
        matches!(self, DifferenceSet::Exact(_))
    }

    /// Occupied-cell count at scale `k`; for a cell cover this is an upper
    /// bound and `k` may not exceed the cover's resolution.
    pub fn covering_count(&self, k: u32) -> Result<u64> {
        match self {
            DifferenceSet::Exact(v) => covering_count(v, k),
            DifferenceSet::Cells { k: res, occupied } => {
                if k > *res {
                    return usage(format!("cell cover has resolution {res}, asked for {k}"));
                }
                let mut seen = vec![false; 1usize << k];
                for (w, word) in occupied.iter().enumerate() {
                    let mut bits = *word;
                    while bits != 0 {
                        let c = w * 64 + bits.trailing_zeros() as usize;
                        seen[c >> (res - k)] = true;
                        bits &= bits - 1;
                    }
                }
                Ok(seen.iter().filter(|&&b| b).count() as u64)
            }
        }
    }
}

/// Exact `A − A` for small sets, otherwise [`cell_difference`] at
/// [`DIFFERENCE_CELL_BITS`].
pub fn difference_set(points: &[Phase]) -> Result<DifferenceSet> {
    if points.is_empty() {
        return usage("difference set of an empty set");
    }
    let mut xs: Vec<Phase> = points.to_vec();
    xs.sort_unstable_by_key(|p| p.0);
    xs.dedup();
    if xs.len() <= EXACT_DIFFERENCE_LIMIT {
        let mut d: Vec<Phase> = Vec::with_capacity(xs.len() * xs.len());
        for a in &xs {
            for b in &xs {
                d.push(a.sub(*b));
            }
        }
        d.sort_unstable_by_key(|p| p.0);
        d.dedup();
        Ok(DifferenceSet::Exact(d))
    } else {
        cell_difference(&xs, DIFFERENCE_CELL_BITS)
    }
}

/// Cover of `A − A` by cells of side `2^-k`: if `a` lies in cell `i` and `b`
/// in cell `j`, then `a − b` lies in cell `i − j` or `i − j − 1`.
pub fn cell_difference(points: &[Phase], k: u32) -> Result<DifferenceSet> {
    if points.is_empty() {
        return usage("difference set of an empty set");
    }
    if !(1..=20).contains(&k) {
        return guard(format!("cell difference resolution {k} outside 1..=20"));
    }
    let size = 1usize << k;
    let mask = size - 1;
    let mut occ = vec![false; size];
    for p in points {
        occ[p.cell(k) as usize] = true;
    }
    let cells: Vec<usize> = (0..size).filter(|&c| occ[c]).collect();
    let occupied = if size < 256 {
        let mut out = vec![0u64; size.div_ceil(64)];
        for &i in &cells {
            for &j in &cells {
                let d = i.wrapping_sub(j) & mask;
                for c in [d, d.wrapping_sub(1) & mask] {
                    out[c >> 6] |= 1 << (c & 63);
                }
            }
        }
        out
    } else {
        // union of rotations of −A's bitset by each occupied cell
        let neg: Vec<bool> = (0..size).map(|c| occ[c.wrapping_neg() & mask]).collect();
        let neg_bits = pack(&neg);
        let mut out = vec![0u64; size / 64];
        for &i in &cells {
            rotate_or(&neg_bits, i, &mut out);
        }
        let base = out.clone();
        rotate_or(&base, size - 1, &mut out);
        out
    };
    Ok(DifferenceSet::Cells { k, occupied })
}

fn pack(bits: &[bool]) -> Vec<u64> {
    let mut out = vec![0u64; bits.len().div_ceil(64)];
    for (c, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
        out[c >> 6] |= 1 << (c & 63);
    }
    out
}

/// `out |= src` rotated up by `by` bits; the length is a multiple of 64.
fn rotate_or(src: &[u64], by: usize, out: &mut [u64]) {
    let words = src.len();
    let (w, b) = (by / 64, (by % 64) as u32);
    for (i, &word) in src.iter().enumerate() {
        let lo = (i + w) % words;
        let hi = (lo + 1) % words;
        out[lo] |= word << b;
        if b != 0 {
            out[hi] |= word >> (64 - b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::phase_of_fraction;

    #[test]
    fn exact_small() {
        let pts = [Phase::ZERO, phase_of_fraction(1, 4, 128)];
        let DifferenceSet::Exact(d) = difference_set(&pts).unwrap() else { panic!() };
        let want: Vec<Phase> = [0, 1, 3].iter().map(|&i| phase_of_fraction(i, 4, 128)).collect();
        assert_eq!(d, want);
    }

    #[test]
    fn rotation_matches_direct() {
        let pts: Vec<Phase> = (0..40u64).map(|i| Phase((i as u128 * 104729).wrapping_mul(0x9E37_79B9_7F4A_7C15_F39C_C060_5CED_C835))).collect();
        let DifferenceSet::Cells { occupied, .. } = cell_difference(&pts, 9).unwrap() else { panic!() };
        let cells: Vec<usize> = pts.iter().map(|p| p.cell(9) as usize).collect();
        let mut want = vec![false; 512];
        for &i in &cells {
            for &j in &cells {
                want[(i + 512 - j) % 512] = true;
                want[(i + 1023 - j) % 512] = true;
            }
        }
        assert_eq!(occupied, pack(&want));
    }

    #[test]
    fn cell_cover_contains_exact() {
        let pts: Vec<Phase> = (0..300u64).map(|i| Phase((i as u128 * 7919).wrapping_mul(0x9E37_79B9_7F4A_7C15_F39C_C060_5CED_C835))).collect();
        let DifferenceSet::Exact(exact) = difference_set(&pts).unwrap() else { panic!() };
        let cover = cell_difference(&pts, 10).unwrap();
        let DifferenceSet::Cells { occupied, .. } = &cover else { panic!() };
        for d in &exact {
            let c = d.cell(10) as usize;
            assert!(occupied[c >> 6] >> (c & 63) & 1 == 1);
        }
        for k in 1..=10 {
            assert!(cover.covering_count(k).unwrap() >= covering_count(&exact, k).unwrap());
        }
        assert!(cover.covering_count(11).is_err());
    }
}
