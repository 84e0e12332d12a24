use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, usage, Result};
use crate::exact::hiprec::to_f64;
use crate::par::Exec;

use super::line::MAX_WORDS;
use super::orthogonal::{Orthogonal, Turn};
use super::similarity_dimension;

/// Largest number of cylinders compared pairwise in [`PlaneIFS::ssc_check`].
pub const MAX_SSC_DISKS: u64 = 1 << 12;

pub type Point2 = [f64; 2];

/// Planar similitude `x ↦ ratio · R(turn) x + shift`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneMap {
    ratio: BigRational,
    turn: Turn,
    shift: [BigRational; 2],
    // floating copies used by the geometry
    r: f64,
    cos: f64,
    sin: f64,
    t: Point2,
}

impl PlaneMap {
    pub fn new(ratio: BigRational, turn: Turn, shift: [BigRational; 2]) -> Result<Self> {
        if !ratio.is_positive() || ratio >= BigRational::one() {
            return domain(format!("contraction ratio {ratio} outside (0, 1)"));
        }
        let angle = std::f64::consts::TAU * turn.to_f64();
        let t = [to_f64(&shift[0]), to_f64(&shift[1])];
        Ok(PlaneMap { r: to_f64(&ratio), cos: angle.cos(), sin: angle.sin(), ratio, turn, shift, t })
    }

    pub fn ratio(&self) -> &BigRational {
        &self.ratio
    }

    pub fn turn(&self) -> &Turn {
        &self.turn
    }

    pub fn shift(&self) -> &[BigRational; 2] {
        &self.shift
    }

    pub fn orthogonal(&self) -> Orthogonal {
        Orthogonal::Rotation(self.turn.clone())
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        [
            self.r * (self.cos * p[0] - self.sin * p[1]) + self.t[0],
            self.r * (self.sin * p[0] + self.cos * p[1]) + self.t[1],
        ]
    }

    pub fn fixed_point(&self) -> Point2 {
        // (I − rR) x = t
        let (a, b) = (1.0 - self.r * self.cos, self.r * self.sin);
        let det = a * a + b * b;
        [(a * self.t[0] - b * self.t[1]) / det, (b * self.t[0] + a * self.t[1]) / det]
    }
}

/// Disk `|x − center| ≤ radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
}

impl Disk {
    pub fn distance(&self, other: &Disk) -> f64 {
        (dist(self.center, other.center) - self.radius - other.radius).max(0.0)
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        dist(self.center, p) <= self.radius + tol
    }
}

fn dist(a: Point2, b: Point2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Planar SSC bound; floating point, so only as good as its rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneSscCertificate {
    pub certified: bool,
    pub delta: f64,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlaneContainment {
    Contained { checked: usize, depth: usize },
    Violated { point: Point2, image: Point2, depth: usize },
}

impl PlaneContainment {
    pub fn is_contained(&self) -> bool {
        matches!(self, PlaneContainment::Contained { .. })
    }
}

/// IFS of planar similitudes (rotations only).
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneIFS {
    maps: Vec<PlaneMap>,
    hull: Disk,
}

impl PlaneIFS {
    pub fn new(maps: Vec<PlaneMap>) -> Result<Self> {
        if maps.is_empty() {
            return usage("an IFS needs at least one map");
        }
        let fixed: Vec<Point2> = maps.iter().map(PlaneMap::fixed_point).collect();
        let n = fixed.len() as f64;
        let center = [fixed.iter().map(|p| p[0]).sum::<f64>() / n, fixed.iter().map(|p| p[1]).sum::<f64>() / n];
        let radius = maps.iter().map(|m| dist(m.apply(center), center) / (1.0 - m.r)).fold(0.0, f64::max);
        Ok(PlaneIFS { maps, hull: Disk { center, radius } })
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[PlaneMap] {
        &self.maps
    }

    pub fn ratios(&self) -> Vec<BigRational> {
        self.maps.iter().map(|m| m.ratio.clone()).collect()
    }

    /// An invariant disk: every map sends it into itself. Not the smallest
    /// one in general.
    pub fn hull(&self) -> Disk {
        self.hull
    }

    pub fn similarity_dimension(&self) -> Result<f64> {
        similarity_dimension(&self.maps.iter().map(|m| m.r).collect::<Vec<_>>())
    }

    fn image(&self, i: usize, d: &Disk) -> Disk {
        Disk { center: self.maps[i].apply(d.center), radius: self.maps[i].r * d.radius }
    }

    pub fn cylinder(&self, word: &[usize]) -> Disk {
        word.iter().rev().fold(self.hull, |acc, &i| self.image(i, &acc))
    }

    fn words(&self, depth: usize, limit: u64) -> Result<u64> {
        (self.len() as u64)
            .checked_pow(depth as u32)
            .filter(|&c| c <= limit)
            .map_or_else(|| usage(format!("{}^{depth} words exceed {limit}", self.len())), Ok)
    }

    fn expand<T: Clone + Send + Sync>(&self, seed: Vec<T>, depth: usize, f: &(impl Fn(usize, &T) -> T + Sync + Send), exec: Exec) -> Vec<T> {
        if depth == 0 {
            return seed;
        }
        let inner = self.expand(seed, depth - 1, f, Exec::Sequential);
        exec.map_range(self.len(), |i| inner.iter().map(|x| f(i, x)).collect::<Vec<_>>()).concat()
    }

    pub fn attractor_sample(&self, depth: usize) -> Result<Vec<Point2>> {
        self.attractor_sample_with(depth, Exec::default())
    }

    pub fn attractor_sample_with(&self, depth: usize, exec: Exec) -> Result<Vec<Point2>> {
        self.words(depth, MAX_WORDS)?;
        Ok(self.expand(vec![self.maps[0].fixed_point()], depth, &|i, p| self.maps[i].apply(*p), exec))
    }

    pub fn ssc_check(&self, depth: usize) -> Result<PlaneSscCertificate> {
        if depth == 0 {
            return usage("SSC depth must be at least 1");
        }
        self.words(depth, MAX_SSC_DISKS)?;
        let mut best = 0.0f64;
        for d in 1..=depth {
            let disks = self.expand(vec![self.hull], d, &|i, disk| self.image(i, disk), Exec::Sequential);
            let per = disks.len() / self.len();
            let mut gap = f64::INFINITY;
            for a in 0..disks.len() {
                for b in (a / per + 1) * per..disks.len() {
                    gap = gap.min(disks[a].distance(&disks[b]));
                }
            }
            if gap.is_finite() {
                best = best.max(gap);
            }
        }
        Ok(PlaneSscCertificate { certified: best > 0.0, delta: best, depth })
    }

    fn locate(&self, y: Point2, depth: usize, tol: f64, word: &mut Vec<usize>) -> bool {
        if word.len() == depth {
            return true;
        }
        for i in 0..self.len() {
            word.push(i);
            if self.cylinder(word).contains(y, tol) && self.locate(y, depth, tol, word) {
                return true;
            }
            word.pop();
        }
        false
    }

    /// Planar analogue of the line check; `m` is row-major.
    pub fn check_affine_embedding(&self, m: &[[BigRational; 2]; 2], b: &[BigRational; 2], f: &PlaneIFS, depth: usize, tol: Option<f64>) -> Result<PlaneContainment> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if det.is_zero() {
            return domain("embedding matrix is singular");
        }
        let rho_star = self.maps.iter().map(|m| m.r).fold(0.0, f64::max);
        let tol = tol.unwrap_or(rho_star.powi(depth as i32) * 2.0 * self.hull.radius);
        let mf = m.clone().map(|row| row.map(|x| to_f64(&x)));
        let bf = [to_f64(&b[0]), to_f64(&b[1])];
        let sample = f.attractor_sample(depth)?;
        let image = |p: &Point2| [mf[0][0] * p[0] + mf[0][1] * p[1] + bf[0], mf[1][0] * p[0] + mf[1][1] * p[1] + bf[1]];
        let ok = Exec::default().map(&sample, |p| self.locate(image(p), depth, tol, &mut Vec::new()));
        Ok(match ok.iter().position(|&v| !v) {
            None => PlaneContainment::Contained { checked: sample.len(), depth },
            Some(i) => PlaneContainment::Violated { point: sample[i], image: image(&sample[i]), depth },
        })
    }
}

/// Identity matrix helper for callers building embeddings.
pub fn identity2() -> [[BigRational; 2]; 2] {
    let (o, z) = (BigRational::one(), BigRational::zero());
    [[o.clone(), z.clone()], [z, o]]
}
