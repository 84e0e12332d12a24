//! Simultaneous approximation by pigeonhole and the `‖k x_n‖` separation
//! diagnostic.

mod approx;
mod separation;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

pub use approx::{pigeonhole_approx, ApproxPath, ApproxResult, MAX_PIGEONHOLE_RANGE, SCAN_BUDGET};
pub use separation::{kxn_separation, kxn_separation_with, SeparationReport, SeparationRow};

use crate::phase::Phase;

/// Distance from `x` to the nearest integer.
pub fn norm_dist(x: f64) -> f64 {
    let f = x - x.floor();
    f.min(1.0 - f)
}

pub fn norm_dist_phase(x: Phase) -> f64 {
    x.norm()
}

pub fn norm_dist_rational(x: &BigRational) -> BigRational {
    let f = x - x.floor();
    let g = BigRational::from_integer(1.into()) - &f;
    if f <= g { f } else { g }
}

/// `‖k x‖` computed exactly.
pub fn norm_dist_multiple(x: &BigRational, k: u64) -> BigRational {
    let kx = x * BigRational::from_integer(k.into());
    let r = kx.numer().mod_floor(kx.denom());
    norm_dist_rational(&BigRational::new(r, kx.denom().clone())).abs()
}
