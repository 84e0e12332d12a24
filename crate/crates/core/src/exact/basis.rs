use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::hiprec;
use crate::error::{Error, Result};

/// Minimum number of significant digits a basis value must carry.
pub const MIN_SIGNIFICANT_DIGITS: usize = 50;

/// One declared basis real.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisEntry {
    pub label: String,
    /// Decimal expansion as supplied.
    pub value: String,
    /// User assertion that this value is irrational and, together with the
    /// other declared entries and 1, linearly independent over the rationals.
    /// It is trusted, never proven.
    pub declared_irrational: bool,
}

/// An ordered table of basis reals `β_1, …, β_r`.
///
/// Every independence verdict produced by this crate is relative to the
/// declaration carried here.
#[derive(Debug, Clone)]
pub struct BasisTable {
    entries: Vec<BasisEntry>,
    values: Vec<BigRational>,
    index: HashMap<String, usize>,
}

impl PartialEq for BasisTable {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for BasisTable {}

impl BasisTable {
    pub fn new(entries: Vec<BasisEntry>) -> Result<Self> {
        let mut index = HashMap::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        let upper = BigRational::from_integer(1_000_000.into());
        for (i, e) in entries.iter().enumerate() {
            if e.label.is_empty() || !is_label(&e.label) {
                return Err(Error::Parse(format!("invalid basis label {:?}", e.label)));
            }
            if index.insert(e.label.clone(), i).is_some() {
                return Err(Error::Usage(format!("duplicate basis label {:?}", e.label)));
            }
            let (v, sig) = hiprec::parse_decimal(&e.value)
                .ok_or_else(|| Error::Parse(format!("basis {}: not a decimal: {:?}", e.label, e.value)))?;
            if sig < MIN_SIGNIFICANT_DIGITS {
                return Err(Error::Usage(format!(
                    "basis {}: {sig} significant digits, need at least {MIN_SIGNIFICANT_DIGITS}",
                    e.label
                )));
            }
            if !v.is_positive() || v >= upper {
                return Err(Error::Domain(format!("basis {}: value outside (0, 1e6)", e.label)));
            }
            values.push(v);
        }
        Ok(Self { entries, values, index })
    }

    /// Empty table, for purely rational inputs.
    pub fn empty() -> Self {
        Self { entries: Vec::new(), values: Vec::new(), index: HashMap::new() }
    }

    /// Table of square roots `sqrt(n)` for the given square-free integers,
    /// labelled `sqrt<n>`, with `digits` fractional digits.
    pub fn sqrts(ns: &[u64], digits: usize) -> Result<Self> {
        let entries = ns
            .iter()
            .map(|&n| BasisEntry {
                label: format!("sqrt{n}"),
                value: hiprec::sqrt_decimal(n, digits.max(MIN_SIGNIFICANT_DIGITS)),
                declared_irrational: true,
            })
            .collect();
        Self::new(entries)
    }

    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BasisEntry] {
        &self.entries
    }

    pub fn label(&self, i: usize) -> &str {
        &self.entries[i].label
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Exact rational value of the supplied decimal expansion.
    pub fn value(&self, i: usize) -> &BigRational {
        &self.values[i]
    }

    /// Upper bound on the truncation error of entry `i`'s decimal expansion.
    pub fn value_error(&self, i: usize) -> BigRational {
        let frac = self.entries[i].value.split_once('.').map_or(0, |(_, f)| f.len());
        BigRational::new(1.into(), num_bigint::BigInt::from(10u32).pow(frac as u32))
    }

    pub fn all_declared(&self) -> bool {
        self.entries.iter().all(|e| e.declared_irrational)
    }

    /// Sum of the absolute basis values.
    pub fn abs_sum(&self) -> BigRational {
        self.values.iter().fold(BigRational::zero(), |acc, v| acc + v.abs())
    }
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '(' || c == ')')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_values() {
        let err = BasisTable::new(vec![BasisEntry {
            label: "sqrt2".into(),
            value: "1.41421356".into(),
            declared_irrational: true,
        }])
        .unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn rejects_duplicates_and_range() {
        let v = hiprec::sqrt_decimal(2, 60);
        let e = BasisEntry { label: "a".into(), value: v.clone(), declared_irrational: true };
        assert!(BasisTable::new(vec![e.clone(), e.clone()]).is_err());
        let neg = BasisEntry { label: "b".into(), value: format!("-{v}"), declared_irrational: true };
        assert!(matches!(BasisTable::new(vec![neg]), Err(Error::Domain(_))));
    }

    #[test]
    fn sqrt_table() {
        let t = BasisTable::sqrts(&[2, 3], 60).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.position("sqrt3"), Some(1));
        assert!(t.all_declared());
        let v = hiprec::to_f64(t.value(0));
        assert!((v - 2f64.sqrt()).abs() < 1e-15);
    }
}
