//! Computational tools for multi-rotation invariant sets on the circle and
//! affine embeddings of self-similar sets.
//!
//! * [`exact`]: rationals, declared symbolic reals, rank and mod-1
//!   independence deciders, multiplicative commensurability.
//! * [`orbit`]: `(α_1, …, α_ℓ)`-orbits in fixed point with their counters.
//! * [`boxdim`]: dyadic covering counts, box-dimension estimates, difference
//!   sets, exact minimal circular covers.
//! * [`diophantine`]: pigeonhole simultaneous approximation and the
//!   `‖k x̃_n‖` separation diagnostic.
//! * [`ifs`]: similar IFSs in dimension 1 and 2, separation certificates,
//!   attractor samples, affine containment checks.
//! * [`embedtrace`]: codings, the `s_n` trace and its ratio bounds, induced
//!   orbits and the dimension threshold.

pub mod boxdim;
pub mod diophantine;
pub mod embedtrace;
pub mod error;
pub mod exact;
pub mod ifs;
pub mod orbit;
pub mod par;
pub mod phase;

pub use error::{Error, Result};
pub use par::Exec;
pub use phase::Phase;
