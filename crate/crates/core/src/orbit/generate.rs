use num_rational::BigRational;
use num_traits::Zero;

use super::steps::{check_bits, StepSystem};
use super::strategy::{Chooser, CircleInterval, Strategy};
use crate::error::{guard, usage, Result};
use crate::exact::SymbolicReal;
use crate::phase::Phase;

/// Longest orbit that will be materialized in memory.
pub const MAX_ORBIT_LEN: usize = 1 << 27;

/// A generated `(α_1, …, α_ℓ)`-orbit `x_0 = 0, x_1, …, x_n`.
///
/// Points are `bits`-bit phases. Since each step is added exactly mod 1 the
/// only error is the initial rounding of the steps, so `|x_n − true x_n| ≤
/// n·2^{-bits+2}` (see [`Orbit::error_bound_log2`]).
#[derive(Debug, Clone)]
pub struct Orbit {
    steps: StepSystem,
    bits: u32,
    step_phases: Vec<Phase>,
    omega: Vec<u8>,
    points: Vec<Phase>,
    strategy: String,
    seed: Option<u64>,
}

/// Generates an orbit of length `n` from `x_0 = 0`.
pub fn generate_orbit(steps: &StepSystem, strategy: &Strategy, n: usize, bits: u32) -> Result<Orbit> {
    check_bits(bits)?;
    let ell = steps.len();
    if n == 0 {
        return usage("orbit length must be at least 1");
    }
    if n > MAX_ORBIT_LEN {
        return guard(format!("orbit length {n} exceeds {MAX_ORBIT_LEN}"));
    }
    if ell > u8::MAX as usize {
        return usage("at most 255 steps supported");
    }
    match strategy {
        Strategy::Explicit(w) if w.len() < n => {
            return usage(format!("explicit word has length {} < {n}", w.len()));
        }
        Strategy::Periodic(w) if w.is_empty() => return usage("periodic word is empty"),
        Strategy::Explicit(w) | Strategy::Periodic(w) => {
            if let Some(s) = w.iter().find(|&&s| s == 0 || s > ell) {
                return usage(format!("symbol {s} outside 1..={ell}"));
            }
        }
        _ => {}
    }
    let step_phases = steps.phases(bits)?;
    let mut omega = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n + 1);
    let mut x = Phase::ZERO;
    points.push(x);
    let mut chooser = Chooser::new(strategy, x);
    for i in 0..n {
        let s = chooser.next(i, x, &step_phases);
        x = x.add(step_phases[s]);
        omega.push(s as u8);
        points.push(x);
    }
    Ok(Orbit {
        steps: steps.clone(),
        bits,
        step_phases,
        omega,
        points,
        strategy: strategy.to_string(),
        seed: strategy.seed(),
    })
}

impl Orbit {
    /// Number of steps `n`.
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn steps(&self) -> &StepSystem {
        &self.steps
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn step_phases(&self) -> &[Phase] {
        &self.step_phases
    }

    /// `x_0, …, x_n`.
    pub fn points(&self) -> &[Phase] {
        &self.points
    }

    /// Zero-based symbols `ω_1 − 1, …, ω_n − 1`.
    pub fn omega_raw(&self) -> &[u8] {
        &self.omega
    }

    /// The one-based symbol `ω_n` for `n ≥ 1`.
    pub fn symbol(&self, n: usize) -> usize {
        self.omega[n - 1] as usize + 1
    }

    pub fn strategy_descriptor(&self) -> &str {
        &self.strategy
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `log2` of the accumulated error bound `n·2^{-B+2}`.
    pub fn error_bound_log2(&self) -> f64 {
        (self.len() as f64).log2() + 2.0 - self.bits as f64
    }

    /// Prefix counts `N_i(0..=n)`, one vector per symbol.
    pub fn counts(&self) -> Vec<Vec<u64>> {
        let ell = self.steps.len();
        let mut out = vec![Vec::with_capacity(self.len() + 1); ell];
        let mut cur = vec![0u64; ell];
        for c in out.iter_mut() {
            c.push(0);
        }
        for &s in &self.omega {
            cur[s as usize] += 1;
            for (c, v) in out.iter_mut().zip(&cur) {
                c.push(*v);
            }
        }
        out
    }

    /// `N_i(n)` for every symbol.
    pub fn counts_at(&self, n: usize) -> Vec<u64> {
        let mut cur = vec![0u64; self.steps.len()];
        for &s in &self.omega[..n] {
            cur[s as usize] += 1;
        }
        cur
    }

    /// `τ(n) = N_2(n)` for `n = 0..=len`; `None` unless `ℓ = 2`.
    pub fn tau(&self) -> Option<Vec<u64>> {
        if self.steps.len() != 2 {
            return None;
        }
        let mut t = 0u64;
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(0);
        for &s in &self.omega {
            t += s as u64;
            out.push(t);
        }
        Some(out)
    }

    /// `b_j(0..=n) = Σ_i p_{i,j} N_i(n)`, one vector per basis element.
    pub fn b_sequences(&self) -> Vec<Vec<i64>> {
        let r = self.steps.r();
        let p = self.steps.p();
        let mut out = vec![Vec::with_capacity(self.len() + 1); r];
        let mut cur = vec![0i64; r];
        for c in out.iter_mut() {
            c.push(0);
        }
        for &s in &self.omega {
            for j in 0..r {
                cur[j] += p[s as usize][j];
                out[j].push(cur[j]);
            }
        }
        out
    }

    /// `B(n) = Σ_j b_j(n) β_j` as an exact symbolic real.
    pub fn b_value(&self, n: usize) -> SymbolicReal {
        let counts = self.counts_at(n);
        let p = self.steps.p();
        let mut acc = SymbolicReal::rational(self.steps.basis(), BigRational::zero());
        for (j, beta) in self.steps.betas().iter().enumerate() {
            let bj: i64 = counts.iter().enumerate().map(|(i, &c)| p[i][j] * c as i64).sum();
            acc = &acc + &beta.scale(&BigRational::from_integer(bj.into()));
        }
        acc
    }

    /// `Σ_i N_i(n) α_i` computed symbolically.
    pub fn exact_point(&self, n: usize) -> SymbolicReal {
        let counts = self.counts_at(n);
        let mut acc = SymbolicReal::rational(self.steps.basis(), BigRational::zero());
        for (c, a) in counts.iter().zip(self.steps.alphas()) {
            acc = &acc + &a.scale(&BigRational::from_integer((*c).into()));
        }
        acc
    }

    /// First `n ≥ 1` with `x_n` inside the arc.
    pub fn first_visit(&self, arc: &CircleInterval) -> Option<usize> {
        self.points.iter().enumerate().skip(1).find(|(_, x)| arc.contains(**x)).map(|(i, _)| i)
    }

    /// Number of distinct points among `x_0, …, x_n`.
    pub fn distinct_points(&self) -> usize {
        let mut v = self.points.clone();
        v.sort_unstable();
        v.dedup();
        v.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::BasisTable;
    use crate::phase::phase_of_fraction;

    #[test]
    fn quarter_steps() {
        let s = StepSystem::rational(&[(1, 4), (1, 4)]).unwrap();
        for strat in [Strategy::Random { seed: 3 }, Strategy::Periodic(vec![1, 2])] {
            let o = generate_orbit(&s, &strat, 4, 128).unwrap();
            let want: Vec<Phase> = [0, 1, 2, 3, 0].iter().map(|&k| phase_of_fraction(k, 4, 128)).collect();
            assert_eq!(o.points(), want.as_slice());
        }
    }

    #[test]
    fn sqrt_word() {
        let b = BasisTable::sqrts(&[2, 3], 60).unwrap().shared();
        let s = StepSystem::parse(&b, &["sqrt2", "sqrt3"]).unwrap();
        let o = generate_orbit(&s, &Strategy::Explicit(vec![1, 2]), 2, 128).unwrap();
        // frac(√2 + √3) to 50 digits: 0.14626436994197234232913506571557044551247712918732...
        let x2 = o.points()[2].to_f64();
        assert!((x2 - 0.146_264_369_941_972_34).abs() < 1e-15);
        assert_eq!(o.symbol(1), 1);
        assert_eq!(o.symbol(2), 2);
    }

    #[test]
    fn random_is_deterministic() {
        let b = BasisTable::sqrts(&[2, 3], 60).unwrap().shared();
        let s = StepSystem::parse(&b, &["sqrt2", "sqrt3"]).unwrap();
        let a = generate_orbit(&s, &Strategy::Random { seed: 42 }, 1000, 128).unwrap();
        let c = generate_orbit(&s, &Strategy::Random { seed: 42 }, 1000, 128).unwrap();
        assert_eq!(a.points(), c.points());
        assert_eq!(a.omega_raw(), c.omega_raw());
        let d = generate_orbit(&s, &Strategy::Random { seed: 43 }, 1000, 128).unwrap();
        assert_ne!(a.omega_raw(), d.omega_raw());
    }

    #[test]
    fn usage_errors() {
        let s = StepSystem::rational(&[(1, 4), (1, 3)]).unwrap();
        assert!(generate_orbit(&s, &Strategy::Explicit(vec![1, 2]), 3, 128).is_err());
        assert!(generate_orbit(&s, &Strategy::Explicit(vec![1, 3]), 2, 128).is_err());
        assert!(generate_orbit(&s, &Strategy::Periodic(vec![]), 2, 128).is_err());
        assert!(generate_orbit(&s, &Strategy::Periodic(vec![1]), 0, 128).is_err());
        assert!(generate_orbit(&s, &Strategy::Periodic(vec![1]), 2, 63).is_err());
    }

    #[test]
    fn counters() {
        let b = BasisTable::sqrts(&[2, 3], 60).unwrap().shared();
        let s = StepSystem::parse(&b, &["sqrt2 + 1/3", "2*sqrt2 - sqrt3"]).unwrap();
        let o = generate_orbit(&s, &Strategy::Periodic(vec![1, 2, 2]), 30, 128).unwrap();
        let counts = o.counts();
        for n in 0..=30 {
            assert_eq!(counts[0][n] + counts[1][n], n as u64);
        }
        assert_eq!(o.tau().unwrap()[30], 20);
        let bs = o.b_sequences();
        for n in 0..30 {
            for (j, bj) in bs.iter().enumerate() {
                assert_eq!(bj[n + 1] - bj[n], s.p()[o.symbol(n + 1) - 1][j]);
            }
        }
        // x_n ≡ B(n) + Σ q_i N_i(n)
        let lhs = o.exact_point(17);
        let q_part = &s.q()[0] * BigRational::from_integer(counts[0][17].into())
            + &s.q()[1] * BigRational::from_integer(counts[1][17].into());
        assert_eq!(lhs, o.b_value(17).add_rational(&q_part));
    }
}
