use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::phase::Phase;

/// Resolution of the occupancy grid used by the greedy-avoid rule.
pub const GREEDY_CELL_BITS: u32 = 20;

/// An open arc `(start, start + len)` of the circle. `len = 0` is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleInterval {
    pub start: Phase,
    pub len: u128,
}

impl CircleInterval {
    pub const EMPTY: CircleInterval = CircleInterval { start: Phase::ZERO, len: 0 };

    /// The arc from `a` to `b` (counter-clockwise, wrapping when `b < a`).
    pub fn from_f64(a: f64, b: f64) -> Self {
        let start = Phase::from_f64(a, 128);
        let end = Phase::from_f64(b, 128);
        CircleInterval { start, len: end.sub(start).0 }
    }

    #[inline]
    pub fn contains(&self, x: Phase) -> bool {
        let d = x.sub(self.start).0;
        d > 0 && d < self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn length(&self) -> f64 {
        self.len as f64 / 2f64.powi(128)
    }
}

/// How the next symbol of an orbit is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// A fixed word of symbols in `1..=ℓ`; must cover the requested length.
    Explicit(Vec<usize>),
    /// A word repeated forever.
    Periodic(Vec<usize>),
    /// Uniform symbols from a seeded ChaCha8 stream.
    Random { seed: u64 },
    /// Avoid an arc when possible, else revisit occupied cells, else take
    /// the smallest symbol.
    GreedyAvoid { forbidden: CircleInterval },
}

impl Strategy {
    pub fn seed(&self) -> Option<u64> {
        match self {
            Strategy::Random { seed } => Some(*seed),
            _ => None,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |w: &[usize]| w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("");
        match self {
            Strategy::Explicit(w) => write!(f, "explicit(len={})", w.len()),
            Strategy::Periodic(w) => write!(f, "periodic({})", word(w)),
            Strategy::Random { seed } => write!(f, "random(seed={seed})"),
            Strategy::GreedyAvoid { forbidden } => {
                let a = forbidden.start.to_f64();
                write!(f, "greedy-avoid({a:.6},{:.6})", (a + forbidden.length()).fract())
            }
        }
    }
}

/// Builds the greedy-avoid strategy for a forbidden arc.
pub fn greedy_avoid_strategy(forbidden: CircleInterval) -> Strategy {
    Strategy::GreedyAvoid { forbidden }
}

/// Mutable per-orbit state behind a [`Strategy`].
pub(crate) enum Chooser<'a> {
    Word { word: &'a [usize], periodic: bool },
    Random(ChaCha8Rng),
    Greedy { forbidden: CircleInterval, occupied: Vec<u64> },
}

impl<'a> Chooser<'a> {
    pub(crate) fn new(strategy: &'a Strategy, start: Phase) -> Self {
        match strategy {
            Strategy::Explicit(w) => Chooser::Word { word: w, periodic: false },
            Strategy::Periodic(w) => Chooser::Word { word: w, periodic: true },
            Strategy::Random { seed } => Chooser::Random(ChaCha8Rng::seed_from_u64(*seed)),
            Strategy::GreedyAvoid { forbidden } => {
                let mut occupied = vec![0u64; 1 << (GREEDY_CELL_BITS - 6)];
                mark(&mut occupied, start);
                Chooser::Greedy { forbidden: *forbidden, occupied }
            }
        }
    }

    /// Zero-based symbol for step `n` (0-based) from the current point.
    #[inline]
    pub(crate) fn next(&mut self, n: usize, x: Phase, steps: &[Phase]) -> usize {
        match self {
            Chooser::Word { word, periodic } => {
                let s = if *periodic { word[n % word.len()] } else { word[n] };
                s - 1
            }
            Chooser::Random(rng) => rng.gen_range(0..steps.len()),
            Chooser::Greedy { forbidden, occupied } => {
                let mut best = 0;
                let mut best_key = (true, true);
                for (i, &a) in steps.iter().enumerate() {
                    let y = x.add(a);
                    let key = (forbidden.contains(y), !is_marked(occupied, y));
                    if i == 0 || key < best_key {
                        best = i;
                        best_key = key;
                    }
                }
                mark(occupied, x.add(steps[best]));
                best
            }
        }
    }
}

#[inline]
fn is_marked(bits: &[u64], x: Phase) -> bool {
    let c = x.cell(GREEDY_CELL_BITS) as usize;
    bits[c >> 6] & (1 << (c & 63)) != 0
}

#[inline]
fn mark(bits: &mut [u64], x: Phase) {
    let c = x.cell(GREEDY_CELL_BITS) as usize;
    bits[c >> 6] |= 1 << (c & 63);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::phase_of_fraction;

    #[test]
    fn interval_membership_is_open() {
        let iv = CircleInterval::from_f64(0.25, 0.5);
        assert!(iv.contains(phase_of_fraction(3, 8, 128)));
        assert!(!iv.contains(phase_of_fraction(1, 4, 128)));
        assert!(!iv.contains(phase_of_fraction(1, 2, 128)));
        let wrap = CircleInterval::from_f64(0.9, 0.1);
        assert!(wrap.contains(Phase::ZERO));
        assert!(!wrap.contains(phase_of_fraction(1, 2, 128)));
        assert!(!CircleInterval::EMPTY.contains(Phase::ZERO));
    }

    #[test]
    fn greedy_rule_example() {
        // steps (1/4, 1/2), forbidden (0.6, 0.9), x = 0: both land outside,
        // both cells are new, so the smallest symbol wins
        let steps = [phase_of_fraction(1, 4, 128), phase_of_fraction(1, 2, 128)];
        let s = greedy_avoid_strategy(CircleInterval::from_f64(0.6, 0.9));
        let mut c = Chooser::new(&s, Phase::ZERO);
        assert_eq!(c.next(0, Phase::ZERO, &steps), 0);
        // from x = 1/4: 1/2 is fine, 3/4 is forbidden
        let x = phase_of_fraction(1, 4, 128);
        let s2 = greedy_avoid_strategy(CircleInterval::from_f64(0.6, 0.9));
        let mut c2 = Chooser::new(&s2, Phase::ZERO);
        assert_eq!(c2.next(0, x, &[steps[1], steps[0]]), 1);
    }

    #[test]
    fn greedy_prefers_occupied_cells() {
        // from 0, stepping by 0 revisits the start cell; stepping by 1/2 is new
        let steps = [phase_of_fraction(1, 2, 128), Phase::ZERO];
        let s = greedy_avoid_strategy(CircleInterval::EMPTY);
        let mut c = Chooser::new(&s, Phase::ZERO);
        assert_eq!(c.next(0, Phase::ZERO, &steps), 1);
    }
}
