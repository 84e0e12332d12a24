use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, usage, Result};
use crate::exact::hiprec::to_f64;
use crate::par::Exec;

use super::interval::Interval;
use super::orthogonal::Orthogonal;
use super::similarity_dimension;

/// Largest number of words expanded at one depth.
pub const MAX_WORDS: u64 = 1 << 24;

/// Similitude `x ↦ sign · ratio · x + shift` on the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineMap {
    ratio: BigRational,
    sign: i8,
    shift: BigRational,
    /// `sign · ratio`
    slope: BigRational,
}

impl LineMap {
    pub fn new(ratio: BigRational, sign: i8, shift: BigRational) -> Result<Self> {
        if !ratio.is_positive() || ratio >= BigRational::one() {
            return domain(format!("contraction ratio {ratio} outside (0, 1)"));
        }
        if sign != 1 && sign != -1 {
            return domain(format!("sign must be ±1, got {sign}"));
        }
        let slope = if sign < 0 { -ratio.clone() } else { ratio.clone() };
        Ok(LineMap { ratio, sign, shift, slope })
    }

    pub fn ratio(&self) -> &BigRational {
        &self.ratio
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn shift(&self) -> &BigRational {
        &self.shift
    }

    pub fn orthogonal(&self) -> Orthogonal {
        Orthogonal::Sign(self.sign)
    }

    pub fn apply(&self, x: &BigRational) -> BigRational {
        &self.slope * x + &self.shift
    }

    pub fn fixed_point(&self) -> BigRational {
        &self.shift / (BigRational::one() - &self.slope)
    }

    /// The identity, which has ratio 1 and so is not a contraction.
    pub fn identity() -> LineMap {
        let one = BigRational::one();
        LineMap { ratio: one.clone(), sign: 1, shift: BigRational::zero(), slope: one }
    }

    /// `self^k` as a single similitude (`k = 0` gives the identity).
    pub fn power(&self, k: u32) -> LineMap {
        (0..k).fold(LineMap::identity(), |acc, _| self.then(&acc))
    }

    pub fn invert(&self, y: &BigRational) -> BigRational {
        (y - &self.shift) / &self.slope
    }

    /// `self ∘ inner`.
    pub fn then(&self, inner: &LineMap) -> LineMap {
        let slope = &self.slope * &inner.slope;
        let shift = &self.slope * &inner.shift + &self.shift;
        LineMap { ratio: slope.abs(), sign: if slope.is_negative() { -1 } else { 1 }, shift, slope }
    }

    pub fn image(&self, i: &Interval) -> Interval {
        i.affine(&self.slope, &self.shift)
    }
}

/// SSC certificate; `delta` bounds `min_{i≠j} dist(φ_i(E), φ_j(E))` from below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SscCertificate {
    pub certified: bool,
    pub delta: BigRational,
    pub depth: usize,
}

/// Result of checking `M(F) + b ⊂ E` on a finite sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Containment {
    /// Every sample image lies within tolerance of a depth-`depth` cylinder.
    Contained { checked: usize, depth: usize },
    /// `image = M point + b` is farther than the tolerance from every cylinder.
    Violated { point: BigRational, image: BigRational, depth: usize },
}

impl Containment {
    pub fn is_contained(&self) -> bool {
        matches!(self, Containment::Contained { .. })
    }
}

/// IFS of similitudes on the line with rational data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineIFS {
    maps: Vec<LineMap>,
    hull: Interval,
}

impl LineIFS {
    pub fn new(maps: Vec<LineMap>) -> Result<Self> {
        if maps.is_empty() {
            return usage("an IFS needs at least one map");
        }
        let hull = invariant_hull(&maps);
        Ok(LineIFS { maps, hull })
    }

    /// Convenience constructor from `(ratio, sign, shift)` triples of
    /// `(numerator, denominator)` pairs.
    pub fn from_triples(maps: &[((i64, i64), i8, (i64, i64))]) -> Result<Self> {
        let r = |(p, q): (i64, i64)| BigRational::new(p.into(), q.into());
        LineIFS::new(maps.iter().map(|&(a, s, c)| LineMap::new(r(a), s, r(c))).collect::<Result<_>>()?)
    }

    /// The middle-third Cantor system.
    pub fn middle_third() -> Self {
        LineIFS::from_triples(&[((1, 3), 1, (0, 1)), ((1, 3), 1, (2, 3))]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[LineMap] {
        &self.maps
    }

    pub fn ratios(&self) -> Vec<BigRational> {
        self.maps.iter().map(|m| m.ratio.clone()).collect()
    }

    pub fn rho_star(&self) -> BigRational {
        self.maps.iter().map(|m| m.ratio.clone()).max().unwrap()
    }

    /// Convex hull of the attractor.
    pub fn hull(&self) -> &Interval {
        &self.hull
    }

    /// Diameter of the attractor (its hull endpoints belong to it).
    pub fn diam(&self) -> BigRational {
        self.hull.length()
    }

    pub fn similarity_dimension(&self) -> Result<f64> {
        similarity_dimension(&self.ratios().iter().map(to_f64).collect::<Vec<_>>())
    }

    /// `φ_{i_1} ∘ … ∘ φ_{i_n}` applied to `x`; words are 0-based.
    pub fn apply_word(&self, word: &[usize], x: &BigRational) -> BigRational {
        word.iter().rev().fold(x.clone(), |acc, &i| self.maps[i].apply(&acc))
    }

    /// `φ_I(hull)`.
    pub fn cylinder(&self, word: &[usize]) -> Interval {
        word.iter().rev().fold(self.hull.clone(), |acc, &i| self.maps[i].image(&acc))
    }

    pub fn word_ratio(&self, word: &[usize]) -> BigRational {
        word.iter().fold(BigRational::one(), |acc, &i| acc * &self.maps[i].ratio)
    }

    fn word_count(&self, depth: usize) -> Result<u64> {
        (self.len() as u64)
            .checked_pow(depth as u32)
            .filter(|&c| c <= MAX_WORDS)
            .map_or_else(|| usage(format!("{}^{depth} words exceed 2^24", self.len())), Ok)
    }

    /// All depth-`depth` cylinder hulls in lexicographic word order.
    pub fn cylinders(&self, depth: usize) -> Result<Vec<Interval>> {
        self.word_count(depth)?;
        Ok(self.expand(vec![self.hull.clone()], depth, &|m, i| m.image(i), Exec::Sequential))
    }

    fn expand<T: Clone + Send + Sync>(&self, seed: Vec<T>, depth: usize, f: &(impl Fn(&LineMap, &T) -> T + Sync + Send), exec: Exec) -> Vec<T> {
        if depth == 0 {
            return seed;
        }
        let inner = self.expand(seed, depth - 1, f, Exec::Sequential);
        exec.map(&self.maps, |m| inner.iter().map(|x| f(m, x)).collect::<Vec<_>>()).concat()
    }

    /// `{φ_I(x_0) : |I| = depth}` in lexicographic order, with `x_0` the
    /// fixed point of the first map.
    pub fn attractor_sample(&self, depth: usize) -> Result<Vec<BigRational>> {
        self.attractor_sample_with(depth, Exec::default())
    }

    pub fn attractor_sample_with(&self, depth: usize, exec: Exec) -> Result<Vec<BigRational>> {
        self.word_count(depth)?;
        Ok(self.expand(vec![self.maps[0].fixed_point()], depth, &|m, x| m.apply(x), exec))
    }

    /// Gap bound from depth-`depth` cylinder hulls grouped by first symbol.
    pub fn ssc_check(&self, depth: usize) -> Result<SscCertificate> {
        if depth == 0 {
            return usage("SSC depth must be at least 1");
        }
        if self.len() == 1 {
            return Ok(SscCertificate { certified: true, delta: self.diam(), depth });
        }
        let mut best = BigRational::zero();
        for d in 1..=depth {
            let gap = self.branch_gap(d)?;
            if gap > best {
                best = gap;
            }
        }
        Ok(SscCertificate { certified: best.is_positive(), delta: best, depth })
    }

    fn branch_gap(&self, depth: usize) -> Result<BigRational> {
        let per_branch = self.cylinders(depth - 1)?;
        let mut all: Vec<(usize, Interval)> = Vec::with_capacity(per_branch.len() * self.len());
        for (i, m) in self.maps.iter().enumerate() {
            all.extend(per_branch.iter().map(|c| (i, m.image(c))));
        }
        all.sort_by(|a, b| a.1.lo.cmp(&b.1.lo));
        // nearest earlier interval of another branch is the one reaching furthest right
        let mut reach: Vec<Option<BigRational>> = vec![None; self.len()];
        let mut best: Option<BigRational> = None;
        for (i, iv) in &all {
            for (j, r) in reach.iter().enumerate() {
                if j == *i {
                    continue;
                }
                if let Some(r) = r {
                    let d = (&iv.lo - r).max(BigRational::zero());
                    if best.as_ref().is_none_or(|b| &d < b) {
                        best = Some(d);
                    }
                }
            }
            if reach[*i].as_ref().is_none_or(|r| &iv.hi > r) {
                reach[*i] = Some(iv.hi.clone());
            }
        }
        Ok(best.unwrap_or_else(BigRational::zero))
    }

    /// Default containment tolerance: one refinement cell `ρ*^depth · diam`.
    pub fn refinement_cell(&self, depth: usize) -> BigRational {
        num_traits::pow(self.rho_star(), depth) * self.diam()
    }

    /// Some depth-`depth` word whose cylinder, widened by `tol`, contains `y`.
    pub fn locate(&self, y: &BigRational, depth: usize, tol: &BigRational) -> Option<Vec<usize>> {
        let mut word = Vec::with_capacity(depth);
        self.locate_from(y, depth, tol, &mut word).then_some(word)
    }

    // `y ∈ φ_i(X)` widened by `t` iff `φ_i^{-1}(y) ∈ X` widened by `t/ρ_i`
    fn locate_from(&self, y: &BigRational, depth: usize, tol: &BigRational, word: &mut Vec<usize>) -> bool {
        if word.len() == depth {
            return true;
        }
        for (i, m) in self.maps.iter().enumerate() {
            if m.image(&self.hull).expand(tol).contains(y) {
                word.push(i);
                if self.locate_from(&m.invert(y), depth, &(tol / &m.ratio), word) {
                    return true;
                }
                word.pop();
            }
        }
        false
    }

    /// `φ_{i_1} ∘ … ∘ φ_{i_n}` as one similitude.
    pub fn word_map(&self, word: &[usize]) -> LineMap {
        word.iter().fold(LineMap::identity(), |acc, &i| acc.then(&self.maps[i]))
    }

    /// Checks `x ↦ m x + b` maps the depth-`depth` sample of `f` into the
    /// depth-`depth` cylinders of `self`, within `tol` (default one
    /// refinement cell).
    pub fn check_affine_embedding(&self, m: &BigRational, b: &BigRational, f: &LineIFS, depth: usize, tol: Option<&BigRational>) -> Result<Containment> {
        self.check_affine_embedding_with(m, b, f, depth, tol, Exec::default())
    }

    pub fn check_affine_embedding_with(
        &self,
        m: &BigRational,
        b: &BigRational,
        f: &LineIFS,
        depth: usize,
        tol: Option<&BigRational>,
        exec: Exec,
    ) -> Result<Containment> {
        if m.is_zero() {
            return domain("embedding matrix is singular");
        }
        let tol = tol.cloned().unwrap_or_else(|| self.refinement_cell(depth));
        if tol.is_negative() {
            return usage("tolerance must be nonnegative");
        }
        self.word_count(depth)?;
        let sample = f.attractor_sample_with(depth, exec)?;
        let ok = exec.map(&sample, |x| self.locate(&(m * x + b), depth, &tol).is_some());
        Ok(match ok.iter().position(|&v| !v) {
            None => Containment::Contained { checked: sample.len(), depth },
            Some(i) => Containment::Violated { point: sample[i].clone(), image: m * &sample[i] + b, depth },
        })
    }
}

/// Smallest interval `J` with `⋃ φ_i(J) ⊂ J`, found by trying every choice of
/// which maps attain the extremes and keeping the consistent one.
fn invariant_hull(maps: &[LineMap]) -> Interval {
    let one = BigRational::one();
    for a in maps {
        for c in maps {
            // lo = a(lo or hi), hi = c(hi or lo), depending on signs
            let (lo, hi) = match (a.sign > 0, c.sign > 0) {
                (true, true) => (a.fixed_point(), c.fixed_point()),
                (true, false) => {
                    let lo = a.fixed_point();
                    (lo.clone(), &c.slope * &lo + &c.shift)
                }
                (false, true) => {
                    let hi = c.fixed_point();
                    (&a.slope * &hi + &a.shift, hi)
                }
                (false, false) => {
                    // lo = sa·hi + ta, hi = sc·lo + tc
                    let det = &one - &a.slope * &c.slope;
                    let lo = (&a.slope * &c.shift + &a.shift) / &det;
                    let hi = &c.slope * &lo + &c.shift;
                    (lo, hi)
                }
            };
            if lo > hi {
                continue;
            }
            let j = Interval { lo, hi };
            if maps.iter().all(|m| j.contains_interval(&m.image(&j))) {
                return j;
            }
        }
    }
    unreachable!("the hull of a contracting IFS is attained by some pair of maps")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn hulls() {
        assert_eq!(LineIFS::middle_third().hull(), &Interval::new(r(0, 1), r(1, 1)));
        let q = LineIFS::from_triples(&[((1, 4), 1, (0, 1)), ((1, 4), 1, (1, 2))]).unwrap();
        assert_eq!(q.hull(), &Interval::new(r(0, 1), r(2, 3)));
        // x ↦ -x/2 + 1 and x ↦ x/3
        let s = LineIFS::from_triples(&[((1, 2), -1, (1, 1)), ((1, 3), 1, (0, 1))]).unwrap();
        assert_eq!(s.hull(), &Interval::new(r(0, 1), r(1, 1)));
        let f = LineIFS::from_triples(&[((1, 2), -1, (0, 1)), ((1, 2), -1, (1, 1))]).unwrap();
        for m in f.maps() {
            assert!(f.hull().contains_interval(&m.image(f.hull())));
        }
        assert_eq!(f.hull(), &Interval::new(r(-2, 3), r(4, 3)));
    }

    #[test]
    fn ssc_examples() {
        let c = LineIFS::middle_third().ssc_check(4).unwrap();
        assert!(c.certified);
        assert_eq!(c.delta, r(1, 3));
        let half = LineIFS::from_triples(&[((1, 2), 1, (0, 1)), ((1, 2), 1, (1, 2))]).unwrap();
        assert!(!half.ssc_check(5).unwrap().certified);
        let q = LineIFS::from_triples(&[((1, 4), 1, (0, 1)), ((1, 4), 1, (1, 2))]).unwrap();
        let c = q.ssc_check(6).unwrap();
        assert!(c.certified && c.delta >= r(1, 4));
        assert_eq!(c.delta, r(1, 3));
        assert!(q.ssc_check(0).is_err());
    }

    #[test]
    fn samples() {
        let e = LineIFS::middle_third();
        assert_eq!(e.attractor_sample(1).unwrap(), vec![r(0, 1), r(2, 3)]);
        assert_eq!(e.attractor_sample(2).unwrap(), vec![r(0, 1), r(2, 9), r(2, 3), r(8, 9)]);
        assert_eq!(e.attractor_sample_with(7, Exec::Sequential).unwrap(), e.attractor_sample_with(7, Exec::Parallel).unwrap());
        assert!(e.attractor_sample(25).is_err());
    }

    #[test]
    fn embedding_examples() {
        let e = LineIFS::middle_third();
        let f = LineIFS::from_triples(&[((1, 9), 1, (0, 1)), ((1, 9), 1, (8, 9))]).unwrap();
        let one = r(1, 1);
        let tol = num_traits::pow(r(1, 3), 8);
        assert!(e.check_affine_embedding(&one, &r(0, 1), &f, 8, Some(&tol)).unwrap().is_contained());
        assert!(e.check_affine_embedding(&one, &r(0, 1), &e, 8, None).unwrap().is_contained());
        match e.check_affine_embedding(&one, &r(1, 2), &e, 8, None).unwrap() {
            Containment::Violated { image, .. } => assert_eq!(image, r(1, 2)),
            c => panic!("{c:?}"),
        }
        assert!(e.check_affine_embedding(&r(0, 1), &r(0, 1), &e, 3, None).is_err());
    }

    #[test]
    fn locate_codes_points() {
        let e = LineIFS::middle_third();
        let z = BigRational::zero();
        assert_eq!(e.locate(&r(0, 1), 5, &z), Some(vec![0; 5]));
        assert_eq!(e.locate(&r(2, 3), 3, &z), Some(vec![1, 0, 0]));
        assert_eq!(e.locate(&r(1, 2), 1, &z), None);
    }

    #[test]
    fn powers() {
        let m = LineMap::new(r(1, 3), -1, r(1, 1)).unwrap();
        let p = m.power(2);
        assert_eq!((p.ratio(), p.sign()), (&r(1, 9), 1));
        assert_eq!(p.apply(&r(0, 1)), m.apply(&m.apply(&r(0, 1))));
        assert_eq!(p.fixed_point(), m.fixed_point());
        assert_eq!(m.power(0).apply(&r(5, 7)), r(5, 7));
        assert_eq!(m.invert(&m.apply(&r(5, 7))), r(5, 7));
        let e = LineIFS::middle_third();
        let w = e.word_map(&[1, 0, 1]);
        assert_eq!(w.apply(&r(1, 2)), e.apply_word(&[1, 0, 1], &r(1, 2)));
        assert_eq!(w.image(e.hull()), e.cylinder(&[1, 0, 1]));
    }
}
