use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Rotation angle as a fraction of a full turn.
#[derive(Debug, Clone, PartialEq)]
pub enum Turn {
    /// Exact turn, reduced into `[0, 1)`.
    Rational(BigRational),
    /// Turn declared irrational, with a floating approximation for geometry.
    Irrational { label: String, approx: f64 },
}

impl Turn {
    pub fn rational(t: BigRational) -> Turn {
        Turn::Rational(&t - t.floor())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Turn::Rational(t) => crate::exact::hiprec::to_f64(t),
            Turn::Irrational { approx, .. } => *approx,
        }
    }
}

/// Orthogonal part of a similitude.
#[derive(Debug, Clone, PartialEq)]
pub enum Orthogonal {
    /// `±1` on the line.
    Sign(i8),
    /// Planar rotation.
    Rotation(Turn),
    /// Orthogonal part in dimension `dim ≥ 3`; carried for reporting only.
    General { dim: usize },
}

impl fmt::Display for Orthogonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orthogonal::Sign(s) => write!(f, "{s:+}"),
            Orthogonal::Rotation(Turn::Rational(t)) => write!(f, "turn {t}"),
            Orthogonal::Rotation(Turn::Irrational { label, .. }) => write!(f, "turn {label}"),
            Orthogonal::General { dim } => write!(f, "O({dim})"),
        }
    }
}

/// Smallest `k` such that the closure of `{P^{kj} : j ≥ 0}` is connected.
pub fn orthogonal_power_period(part: &Orthogonal) -> Result<u64> {
    match part {
        Orthogonal::Sign(1) => Ok(1),
        Orthogonal::Sign(-1) => Ok(2),
        Orthogonal::Sign(s) => Err(Error::Domain(format!("sign must be ±1, got {s}"))),
        Orthogonal::Rotation(Turn::Rational(t)) => {
            let t = t - t.floor();
            if t.is_zero() {
                return Ok(1);
            }
            // BigRational keeps lowest terms, so the denominator is the order
            u64::try_from(t.denom().clone()).map_err(|_| Error::Guard("rotation order exceeds u64".into()))
        }
        Orthogonal::Rotation(Turn::Irrational { .. }) => Ok(1),
        Orthogonal::General { dim } => Err(Error::Unsupported(format!("orthogonal period in dimension {dim}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn turn(p: i64, q: i64) -> Orthogonal {
        Orthogonal::Rotation(Turn::rational(BigRational::new(p.into(), q.into())))
    }

    #[test]
    fn periods() {
        assert_eq!(orthogonal_power_period(&Orthogonal::Sign(1)).unwrap(), 1);
        assert_eq!(orthogonal_power_period(&Orthogonal::Sign(-1)).unwrap(), 2);
        assert_eq!(orthogonal_power_period(&turn(1, 4)).unwrap(), 4);
        assert_eq!(orthogonal_power_period(&turn(3, 5)).unwrap(), 5);
        assert_eq!(orthogonal_power_period(&turn(6, 10)).unwrap(), 5);
        assert_eq!(orthogonal_power_period(&turn(-1, 3)).unwrap(), 3);
        assert_eq!(orthogonal_power_period(&turn(2, 1)).unwrap(), 1);
        let irr = Orthogonal::Rotation(Turn::Irrational { label: "sqrt2".into(), approx: 0.414 });
        assert_eq!(orthogonal_power_period(&irr).unwrap(), 1);
        assert!(matches!(orthogonal_power_period(&Orthogonal::General { dim: 3 }), Err(Error::Unsupported(_))));
    }
}
