//! Self-similar IFSs on the line (exact) and in the plane (floating point).

mod interval;
mod line;
mod orthogonal;
mod plane;

use num_rational::BigRational;

pub use interval::Interval;
pub use line::{Containment, LineIFS, LineMap, SscCertificate, MAX_WORDS};
pub use orthogonal::{orthogonal_power_period, Orthogonal, Turn};
pub use plane::{identity2, Disk, PlaneContainment, PlaneIFS, PlaneMap, PlaneSscCertificate, Point2, MAX_SSC_DISKS};

use crate::error::{domain, usage, Result};

/// Root `s ≥ 0` of `Σ ρ_i^s = 1` by bisection.
pub fn similarity_dimension(ratios: &[f64]) -> Result<f64> {
    if ratios.is_empty() {
        return usage("similarity dimension of an empty list");
    }
    if let Some(r) = ratios.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return domain(format!("ratio {r} outside (0, 1)"));
    }
    let f = |s: f64| ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while f(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-15 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A similar IFS in dimension 1 or 2.
#[derive(Debug, Clone, PartialEq)]
pub enum SimilarIFS {
    Line(LineIFS),
    Plane(PlaneIFS),
}

impl SimilarIFS {
    pub fn dim(&self) -> usize {
        match self {
            SimilarIFS::Line(_) => 1,
            SimilarIFS::Plane(_) => 2,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            SimilarIFS::Line(f) => f.len(),
            SimilarIFS::Plane(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ratios(&self) -> Vec<BigRational> {
        match self {
            SimilarIFS::Line(f) => f.ratios(),
            SimilarIFS::Plane(f) => f.ratios(),
        }
    }

    pub fn orthogonal_parts(&self) -> Vec<Orthogonal> {
        match self {
            SimilarIFS::Line(f) => f.maps().iter().map(LineMap::orthogonal).collect(),
            SimilarIFS::Plane(f) => f.maps().iter().map(PlaneMap::orthogonal).collect(),
        }
    }

    pub fn similarity_dimension(&self) -> Result<f64> {
        match self {
            SimilarIFS::Line(f) => f.similarity_dimension(),
            SimilarIFS::Plane(f) => f.similarity_dimension(),
        }
    }

    /// `(certified, delta)`; the plane bound is floating point.
    pub fn ssc(&self, depth: usize) -> Result<(bool, f64)> {
        match self {
            SimilarIFS::Line(f) => f.ssc_check(depth).map(|c| (c.certified, crate::exact::hiprec::to_f64(&c.delta))),
            SimilarIFS::Plane(f) => f.ssc_check(depth).map(|c| (c.certified, c.delta)),
        }
    }
}
