//! Exact arithmetic over the rationals and over declared symbolic reals, with
//! decision procedures for rational rank, mod-1 independence and
//! multiplicative commensurability.

mod basis;
pub mod commensurability;
pub mod hiprec;
pub mod independence;
pub mod linalg;
pub mod primes;
pub mod relation;
pub mod simplex;
pub mod symbolic;

pub use basis::{BasisEntry, BasisTable, MIN_SIGNIFICANT_DIGITS};
pub use commensurability::{
    commensurability_witness, ColumnVerdict, CommensurabilityReport, CommensurabilityWitness, LogRatio,
};
pub use independence::{q_independent_mod1, qplus_independent_mod1, rank_span, witness_is_integral, Verdict};
pub use symbolic::{parse_rational, SymbolicReal};
