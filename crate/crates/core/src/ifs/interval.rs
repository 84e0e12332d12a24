use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Closed interval with exact endpoints, `lo ≤ hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn length(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Distance between the intervals (zero when they meet).
    pub fn distance(&self, other: &Interval) -> BigRational {
        let gap = (&other.lo - &self.hi).max(&self.lo - &other.hi);
        if gap.is_positive() { gap } else { BigRational::zero() }
    }

    pub fn distance_to(&self, x: &BigRational) -> BigRational {
        self.distance(&Interval::point(x.clone()))
    }

    pub fn expand(&self, by: &BigRational) -> Interval {
        Interval { lo: &self.lo - by, hi: &self.hi + by }
    }

    /// Image under `x ↦ a x + c`.
    pub fn affine(&self, a: &BigRational, c: &BigRational) -> Interval {
        Interval::new(a * &self.lo + c, a * &self.hi + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn basics() {
        let a = Interval::new(r(1, 3), r(0, 1));
        assert_eq!(a.lo, r(0, 1));
        let b = Interval::new(r(2, 3), r(1, 1));
        assert_eq!(a.distance(&b), r(1, 3));
        assert_eq!(b.distance(&a), r(1, 3));
        assert!(a.distance(&a).is_zero());
        assert_eq!(a.affine(&r(-1, 2), &r(1, 1)), Interval::new(r(5, 6), r(1, 1)));
        assert!(a.expand(&r(1, 10)).contains(&r(-1, 10)));
    }
}
