use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::basis::BasisTable;
use crate::error::{Error, Result};
use crate::phase::Phase;

/// An exact real `q0 + Σ_j c_j β_j` over a shared [`BasisTable`].
///
/// Coefficients are kept canonical: zero coefficients are never stored, so
/// structural equality is value equality relative to the declared basis.
#[derive(Debug, Clone)]
pub struct SymbolicReal {
    basis: Arc<BasisTable>,
    q0: BigRational,
    coeffs: BTreeMap<usize, BigRational>,
}

impl PartialEq for SymbolicReal {
    fn eq(&self, other: &Self) -> bool {
        same_basis(&self.basis, &other.basis) && self.q0 == other.q0 && self.coeffs == other.coeffs
    }
}

impl Eq for SymbolicReal {}

pub(crate) fn same_basis(a: &Arc<BasisTable>, b: &Arc<BasisTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl SymbolicReal {
    pub fn rational(basis: &Arc<BasisTable>, q: BigRational) -> Self {
        Self { basis: basis.clone(), q0: q, coeffs: BTreeMap::new() }
    }

    pub fn from_ratio(basis: &Arc<BasisTable>, num: i64, den: i64) -> Self {
        Self::rational(basis, BigRational::new(num.into(), den.into()))
    }

    /// The basis element with the given label.
    pub fn basis_element(basis: &Arc<BasisTable>, label: &str) -> Result<Self> {
        let i = basis
            .position(label)
            .ok_or_else(|| Error::Usage(format!("unknown basis label {label:?}")))?;
        Ok(Self::from_parts(basis, BigRational::zero(), [(i, BigRational::one())]))
    }

    /// Builds from a constant and `(basis index, coefficient)` pairs,
    /// merging repeats and dropping zeros.
    pub fn from_parts(
        basis: &Arc<BasisTable>,
        q0: BigRational,
        terms: impl IntoIterator<Item = (usize, BigRational)>,
    ) -> Self {
        let mut coeffs: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (i, c) in terms {
            assert!(i < basis.len(), "basis index out of range");
            *coeffs.entry(i).or_insert_with(BigRational::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self { basis: basis.clone(), q0, coeffs }
    }

    /// Parses a linear expression such as `"1/2 + 2*sqrt2 - sqrt3/3"`.
    pub fn parse(basis: &Arc<BasisTable>, text: &str) -> Result<Self> {
        parse_linear(basis, text)
    }

    pub fn basis(&self) -> &Arc<BasisTable> {
        &self.basis
    }

    pub fn constant(&self) -> &BigRational {
        &self.q0
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, BigRational> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(&i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.q0.is_zero()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::rational(&self.basis, BigRational::zero());
        }
        Self {
            basis: self.basis.clone(),
            q0: &self.q0 * k,
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, c * k)).collect(),
        }
    }

    /// Adds an integer or rational constant.
    pub fn add_rational(&self, q: &BigRational) -> Self {
        let mut out = self.clone();
        out.q0 += q;
        out
    }

    /// Dense coefficient vector `(q0, c_1, …, c_r)` over the whole table.
    pub fn dense(&self) -> Vec<BigRational> {
        let mut v = vec![self.q0.clone()];
        v.extend((0..self.basis.len()).map(|i| self.coeff(i)));
        v
    }

    /// Rational value obtained from the decimal expansions of the basis.
    pub fn value(&self) -> BigRational {
        self.coeffs
            .iter()
            .fold(self.q0.clone(), |acc, (&i, c)| acc + c * self.basis.value(i))
    }

    /// Bound on `|value() − true value|` induced by basis truncation.
    pub fn value_error(&self) -> BigRational {
        self.coeffs
            .iter()
            .fold(BigRational::zero(), |acc, (&i, c)| acc + c.abs() * self.basis.value_error(i))
    }

    pub fn to_f64(&self) -> f64 {
        super::hiprec::to_f64(&self.value())
    }

    /// `self mod 1` rounded to a `bits`-bit phase.
    pub fn phase(&self, bits: u32) -> Phase {
        Phase::from_rational(&self.value(), bits)
    }

    fn checked_same(&self, other: &Self) {
        assert!(same_basis(&self.basis, &other.basis), "symbolic reals over different basis tables");
    }
}

impl Add for &SymbolicReal {
    type Output = SymbolicReal;
    fn add(self, rhs: &SymbolicReal) -> SymbolicReal {
        self.checked_same(rhs);
        SymbolicReal::from_parts(
            &self.basis,
            &self.q0 + &rhs.q0,
            self.coeffs.iter().chain(rhs.coeffs.iter()).map(|(&i, c)| (i, c.clone())),
        )
    }
}

impl Sub for &SymbolicReal {
    type Output = SymbolicReal;
    fn sub(self, rhs: &SymbolicReal) -> SymbolicReal {
        self + &(-rhs)
    }
}

impl Neg for &SymbolicReal {
    type Output = SymbolicReal;
    fn neg(self) -> SymbolicReal {
        SymbolicReal {
            basis: self.basis.clone(),
            q0: -&self.q0,
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, -c)).collect(),
        }
    }
}

impl fmt::Display for SymbolicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.q0.is_zero() || self.coeffs.is_empty() {
            write!(f, "{}", self.q0)?;
            first = false;
        }
        for (&i, c) in &self.coeffs {
            let label = self.basis.label(i);
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            match (first, sign) {
                (true, "-") => write!(f, "-")?,
                (true, _) => {}
                (false, s) => write!(f, " {s} ")?,
            }
            if mag.is_one() {
                write!(f, "{label}")?;
            } else {
                write!(f, "{mag}*{label}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Parses an exact rational: integer, `p/q`, or finite decimal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    super::hiprec::parse_decimal(s)
        .map(|(v, _)| v)
        .ok_or_else(|| Error::Parse(format!("bad rational {s:?}")))
}

fn parse_linear(basis: &Arc<BasisTable>, text: &str) -> Result<SymbolicReal> {
    let bad = || Error::Parse(format!("bad linear expression {text:?}"));
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in text.chars() {
        match ch {
            '+' | '-' if cur.trim().is_empty() => {
                if ch == '-' {
                    neg = !neg;
                }
            }
            '+' | '-' => {
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            }
            c if c.is_whitespace() => cur.push(' '),
            c => cur.push(c),
        }
    }
    if cur.trim().is_empty() {
        return Err(bad());
    }
    terms.push((neg, cur));

    let mut q0 = BigRational::zero();
    let mut parts = Vec::new();
    for (neg, raw) in terms {
        let raw = raw.trim();
        let sign = if neg { -BigRational::one() } else { BigRational::one() };
        // forms: rational | label | rational*label | label/int | rational*label/int
        let (coef, rest) = match raw.split_once('*') {
            Some((c, l)) => (parse_rational(c)?, l.trim()),
            None => (BigRational::one(), raw),
        };
        let is_label = rest.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_');
        let (coef, label, divisor) = if is_label {
            match rest.split_once('/') {
                Some((l, d)) => {
                    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(bad());
                    }
                    (coef, Some(l.trim()), BigRational::from_integer(d))
                }
                None => (coef, Some(rest), BigRational::one()),
            }
        } else {
            (coef * parse_rational(rest)?, None, BigRational::one())
        };
        let value = sign * coef / divisor;
        match label {
            Some(l) => {
                let i = basis
                    .position(l)
                    .ok_or_else(|| Error::Usage(format!("unknown basis label {l:?}")))?;
                parts.push((i, value));
            }
            None => q0 += value,
        }
    }
    Ok(SymbolicReal::from_parts(basis, q0, parts))
}
