//! Binary fixed-point big-integer routines for producing high-precision
//! decimal expansions (square roots, logarithms) of basis values.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `floor(sqrt(n) * 10^digits)` rendered as a decimal string with `digits`
/// fractional digits.
pub fn sqrt_decimal(n: u64, digits: usize) -> String {
    let scale = BigUint::from(10u32).pow(2 * digits as u32);
    let root = (BigUint::from(n) * scale).sqrt();
    render_scaled(&BigInt::from(root), digits)
}

fn render_scaled(v: &BigInt, digits: usize) -> String {
    let neg = v.is_negative();
    let s = v.abs().to_string();
    let s = if s.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
    } else {
        s
    };
    let (int, frac) = s.split_at(s.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// `2·atanh(z)` for `|z| < 1`, in fixed point with `bits` fractional bits.
fn two_atanh(z: &BigRational, bits: u32) -> BigInt {
    let one = BigInt::one() << bits;
    let zf = (z * BigRational::from_integer(one.clone())).to_integer();
    let z2 = (&zf * &zf) >> bits;
    let mut term = zf;
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !term.is_zero() {
        sum += &term / BigInt::from(k);
        term = (&term * &z2) >> bits;
        k += 2;
    }
    sum * 2
}

/// Natural logarithm of a positive rational, scaled by `2^bits` and
/// truncated. Accurate to a few units in the last place; callers add guard
/// bits.
pub fn ln_fixed(x: &BigRational, bits: u32) -> BigInt {
    assert!(x.is_positive(), "ln of a non-positive number");
    let work = bits + 32;
    let two = BigRational::from_integer(BigInt::from(2));
    // x = 2^e · y with y in [1, 2)
    let mut e: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut y = if e >= 0 {
        x / BigRational::from_integer(BigInt::one() << e as u32)
    } else {
        x * BigRational::from_integer(BigInt::one() << (-e) as u32)
    };
    while y >= two {
        y /= &two;
        e += 1;
    }
    while y < BigRational::one() {
        y *= &two;
        e -= 1;
    }
    let ln2 = two_atanh(&BigRational::new(BigInt::one(), BigInt::from(3)), work);
    let z = (&y - BigRational::one()) / (&y + BigRational::one());
    let lny = two_atanh(&z, work);
    (ln2 * BigInt::from(e) + lny) >> 32u32
}

/// Decimal rendering of a fixed-point value with `bits` fractional bits.
pub fn fixed_to_decimal(v: &BigInt, bits: u32, digits: usize) -> String {
    let scaled = (v * BigInt::from(10u32).pow(digits as u32)).div_floor(&(BigInt::one() << bits));
    render_scaled(&scaled, digits)
}

/// `ln(x)` as a decimal string with `digits` fractional digits.
pub fn ln_decimal(x: &BigRational, digits: usize) -> String {
    let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16;
    fixed_to_decimal(&ln_fixed(x, bits), bits, digits)
}

/// Parses a decimal string such as `"-12.3405"` into an exact rational.
/// Returns the value and the number of significant digits.
pub fn parse_decimal(s: &str) -> Option<(BigRational, usize)> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let mantissa: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = BigInt::from(10u32).pow(frac.len() as u32);
    let sig = digits.trim_start_matches('0').len();
    let v = BigRational::new(if neg { -mantissa } else { mantissa }, denom);
    Some((v, sig))
}

/// Lossy conversion used only for reporting.
pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
