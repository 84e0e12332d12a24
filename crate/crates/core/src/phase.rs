//! Points of the circle `T = R/Z` as unsigned fixed-point fractions.
//!
//! A [`Phase`] stores `x ∈ [0, 1)` as `x · 2^128` in a `u128`. Orbits built
//! at precision `B < 128` keep the low `128 − B` bits zero, so addition mod 1
//! is a wrapping add and is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Phase(pub u128);

pub const MIN_BITS: u32 = 64;
pub const MAX_BITS: u32 = 128;

impl Phase {
    pub const ZERO: Phase = Phase(0);

    #[inline]
    pub fn add(self, other: Phase) -> Phase {
        Phase(self.0.wrapping_add(other.0))
    }

    #[inline]
    pub fn sub(self, other: Phase) -> Phase {
        Phase(self.0.wrapping_sub(other.0))
    }

    /// `k·x mod 1`, exact on the stored value.
    #[inline]
    pub fn mul_int(self, k: u64) -> Phase {
        Phase(self.0.wrapping_mul(k as u128))
    }

    /// Index of the dyadic cell of side `2^-k` containing the point.
    #[inline]
    pub fn cell(self, k: u32) -> u128 {
        if k == 0 {
            0
        } else {
            self.0 >> (128 - k)
        }
    }

    /// Distance to the nearest integer, as a fixed-point value in `[0, 2^127]`.
    #[inline]
    pub fn norm_raw(self) -> u128 {
        self.0.min(self.0.wrapping_neg())
    }

    /// Distance to the nearest integer.
    pub fn norm(self) -> f64 {
        self.norm_raw() as f64 / 2f64.powi(128)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2f64.powi(128)
    }

    /// Nearest phase with the given precision to a real `x` (reduced mod 1).
    pub fn from_f64(x: f64, bits: u32) -> Phase {
        let f = x - x.floor();
        let raw = (f * 2f64.powi(64)) as u128;
        Phase(raw << 64).truncate(bits)
    }

    /// Rounds `x mod 1` to `bits` bits, round-half-up.
    pub fn from_rational(x: &BigRational, bits: u32) -> Phase {
        assert!((1..=MAX_BITS).contains(&bits));
        let scaled = x * BigRational::from_integer(BigInt::one() << bits);
        let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
        let modulus = BigInt::one() << bits;
        let r = rounded.mod_floor(&modulus);
        let raw = r.to_u128().expect("reduced value fits");
        Phase(if bits == 128 { raw } else { raw << (128 - bits) })
    }

    /// Exact rational value of the stored fraction.
    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.0), BigInt::one() << 128u32)
    }

    /// Clears all bits below precision `bits`.
    pub fn truncate(self, bits: u32) -> Phase {
        if bits >= 128 {
            self
        } else {
            Phase(self.0 & !(u128::MAX >> bits))
        }
    }

    /// Top `bits` bits as a big-endian hex string (zero padded).
    pub fn to_hex(self, bits: u32) -> String {
        let width = bits.div_ceil(4) as usize;
        let v = if bits >= 128 { self.0 } else { self.0 >> (128 - bits) };
        format!("{v:0width$x}")
    }

    /// Little-endian bytes of the top `bits` bits, `ceil(bits / 8)` long.
    pub fn to_le_bytes(self, bits: u32) -> Vec<u8> {
        let nbytes = bits.div_ceil(8) as usize;
        let v = if bits >= 128 { self.0 } else { self.0 >> (128 - bits) };
        v.to_le_bytes()[..nbytes].to_vec()
    }

    pub fn from_le_bytes(bytes: &[u8], bits: u32) -> Phase {
        let mut buf = [0u8; 16];
        buf[..bytes.len()].copy_from_slice(bytes);
        let v = u128::from_le_bytes(buf);
        Phase(if bits >= 128 { v } else { v << (128 - bits) })
    }
}

/// Rational `p/q` in `[0,1)` as a phase, exact when `q` is a power of two.
pub fn phase_of_fraction(p: i64, q: u64, bits: u32) -> Phase {
    Phase::from_rational(&BigRational::new(p.into(), q.into()), bits)
}

/// `2^-e` as an exact rational.
pub fn pow2_inv(e: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << e)
}

/// Fractional part of a rational, in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    let f = x - x.floor();
    debug_assert!(f >= BigRational::zero());
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_steps_wrap() {
        let q = phase_of_fraction(1, 4, 128);
        let mut x = Phase::ZERO;
        for _ in 0..4 {
            x = x.add(q);
        }
        assert_eq!(x, Phase::ZERO);
        assert_eq!(q.cell(2), 1);
        assert_eq!(q.cell(3), 2);
    }

    #[test]
    fn rational_rounding_and_negative_reduction() {
        let third = phase_of_fraction(1, 3, 64);
        assert_eq!(third.0 & (u128::MAX >> 64), 0);
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-18);
        let neg = phase_of_fraction(-1, 4, 128);
        assert_eq!(neg, phase_of_fraction(3, 4, 128));
    }

    #[test]
    fn norm_is_distance_to_integer() {
        assert_eq!(phase_of_fraction(1, 4, 128).norm(), 0.25);
        assert_eq!(phase_of_fraction(3, 4, 128).norm(), 0.25);
        assert_eq!(Phase::ZERO.norm(), 0.0);
    }

    #[test]
    fn bytes_roundtrip() {
        let x = Phase::from_f64(0.123456789, 80);
        let b = x.to_le_bytes(80);
        assert_eq!(b.len(), 10);
        assert_eq!(Phase::from_le_bytes(&b, 80), x);
        assert_eq!(phase_of_fraction(1, 2, 64).to_hex(64), "8000000000000000");
    }
}
