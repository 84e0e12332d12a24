use num_rational::BigRational;

use crate::error::{usage, Result};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Dimension threshold `c(ℓ, λ)` below which `dim_H E` rules out an affine
/// embedding: `1/4` for `ℓ = 2`, `1/4` for `ℓ ≥ 3, λ = 1`, and `1/(2λ+2)`
/// for `ℓ ≥ 3, λ > 1`.
pub fn threshold_c(ell: usize, lambda: usize) -> Result<BigRational> {
    if ell < 2 || lambda < 1 {
        return usage(format!("threshold needs ℓ ≥ 2 and λ ≥ 1, got ({ell}, {lambda})"));
    }
    Ok(if ell == 2 || lambda == 1 { ratio(1, 4) } else { ratio(1, 2 * lambda as i64 + 2) })
}

/// Lower box-dimension bound for an infinite orbit with two steps.
pub fn two_step_box_bound() -> BigRational {
    ratio(1, 2)
}

/// Lower box-dimension bound in terms of `r = dim span_Q(1, α) − 1`:
/// `1` for `r = 1`, `1/(r+1)` for `r > 1`. `None` for `r = 0`, where every
/// orbit is finite.
pub fn rank_box_bound(r: usize) -> Option<BigRational> {
    match r {
        0 => None,
        1 => Some(ratio(1, 1)),
        _ => Some(ratio(1, r as i64 + 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table() {
        assert_eq!(threshold_c(2, 7).unwrap(), ratio(1, 4));
        assert_eq!(threshold_c(3, 1).unwrap(), ratio(1, 4));
        assert_eq!(threshold_c(3, 2).unwrap(), ratio(1, 6));
        assert_eq!(threshold_c(6, 5).unwrap(), ratio(1, 12));
        assert!(threshold_c(1, 1).is_err());
        assert!(threshold_c(3, 0).is_err());
        assert_eq!(rank_box_bound(2), Some(ratio(1, 3)));
        assert_eq!(rank_box_bound(1), Some(ratio(1, 1)));
        assert_eq!(rank_box_bound(0), None);
    }
}
