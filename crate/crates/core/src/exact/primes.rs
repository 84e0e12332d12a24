//! Prime-exponent vectors of positive rationals.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{guard, Error, Result};

/// Largest prime tried by trial division.
pub const TRIAL_LIMIT: u64 = 1_000_000;

/// Exponents `e_p` with `x = Π p^{e_p}`; zero exponents are not stored.
pub type PrimeExponents = BTreeMap<u64, i64>;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        sieve.iter().enumerate().filter(|(_, &p)| p).map(|(i, _)| i as u64).collect()
    })
}

/// Factors a positive integer. Cofactors left after trial division are
/// accepted as prime when below `TRIAL_LIMIT²`; anything larger is refused.
pub fn factor_integer(n: &BigInt) -> Result<PrimeExponents> {
    if !n.is_positive() {
        return Err(Error::Domain(format!("cannot factor non-positive integer {n}")));
    }
    let mut rest = n.clone();
    let mut out = PrimeExponents::new();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0i64;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.insert(p, e);
        }
    }
    if !rest.is_one() {
        let limit = BigInt::from(TRIAL_LIMIT) * BigInt::from(TRIAL_LIMIT);
        if rest >= limit {
            return guard(format!("{n} has a prime factor above the trial-division limit"));
        }
        let p = rest.to_u64().expect("below 10^12");
        *out.entry(p).or_insert(0) += 1;
    }
    Ok(out)
}

/// Prime-exponent vector of a positive rational.
pub fn factor_rational(x: &BigRational) -> Result<PrimeExponents> {
    if !x.is_positive() {
        return Err(Error::Domain(format!("cannot factor non-positive rational {x}")));
    }
    let mut out = factor_integer(x.numer())?;
    for (p, e) in factor_integer(x.denom())? {
        *out.entry(p).or_insert(0) -= e;
    }
    out.retain(|_, e| *e != 0);
    Ok(out)
}

/// Rebuilds the rational from its exponents.
pub fn multiply_out(e: &PrimeExponents) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (&p, &k) in e {
        let pk = num_traits::pow(BigInt::from(p), k.unsigned_abs() as usize);
        if k > 0 {
            num *= pk;
        } else {
            den *= pk;
        }
    }
    BigRational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn factors_simple_rationals() {
        let e = factor_rational(&q(1, 9)).unwrap();
        assert_eq!(e, PrimeExponents::from([(3, -2)]));
        let e = factor_rational(&q(12, 35)).unwrap();
        assert_eq!(e, PrimeExponents::from([(2, 2), (3, 1), (5, -1), (7, -1)]));
        assert!(factor_rational(&q(1, 1)).unwrap().is_empty());
        assert!(factor_rational(&q(-1, 2)).is_err());
    }

    #[test]
    fn large_cofactors() {
        // 999983 is the largest prime below 10^6
        let n = BigInt::from(999_983u64) * BigInt::from(999_983u64);
        assert_eq!(factor_integer(&n).unwrap(), PrimeExponents::from([(999_983, 2)]));
        // prime just above 10^6 is accepted as a cofactor
        assert_eq!(factor_integer(&BigInt::from(1_000_003u64)).unwrap(), PrimeExponents::from([(1_000_003, 1)]));
        // product of two primes above 10^6 is refused
        let big = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        assert!(matches!(factor_integer(&big), Err(Error::Guard(_))));
    }

    #[test]
    fn roundtrip() {
        for (p, d) in [(1, 6), (8, 27), (1000, 1001), (5, 1)] {
            assert_eq!(multiply_out(&factor_rational(&q(p, d)).unwrap()), q(p, d));
        }
    }
}
