use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{domain, usage, Error, Result};
use crate::ifs::{orthogonal_power_period, LineIFS, LineMap};

/// Depth used to certify the gap of `E` when building an instance.
pub const SSC_DEPTH: usize = 8;

/// Coding of `y` to depth `n`: at each level the first child cylinder that,
/// widened by one depth-`n` refinement cell, contains `y`. Words are 0-based.
pub fn coding_of_point(e: &LineIFS, y: &BigRational, n: usize) -> Result<Vec<usize>> {
    let slack = e.refinement_cell(n);
    let mut word = Vec::with_capacity(n);
    for level in 1..=n {
        word.push(0);
        let found = (0..e.len()).find(|&i| {
            word[level - 1] = i;
            e.cylinder(&word).expand(&slack).contains(y)
        });
        if found.is_none() {
            return Err(Error::NotInSet { depth: level });
        }
    }
    Ok(word)
}

/// The data of an affine embedding `x ↦ m x + b` of `F` into `E` on the line.
#[derive(Debug, Clone)]
pub struct EmbeddingInstance {
    pub e: LineIFS,
    pub f: LineIFS,
    pub m: BigRational,
    pub b: BigRational,
    /// Power taken of the first map of `F`.
    pub l: u64,
    /// First map of `F` raised to the power `l`.
    pub psi1: LineMap,
    pub gamma1: BigRational,
    /// Largest and smallest stretch of `m`; both `|m|` on the line.
    pub norm: BigRational,
    pub conorm: BigRational,
    pub rho_star: BigRational,
    pub diam_e: BigRational,
    pub diam_f: BigRational,
    /// Certified lower bound for the first-level gap of `E`.
    pub delta: BigRational,
    /// Fixed point of `psi1`.
    pub x: BigRational,
    /// `m x + b`.
    pub y: BigRational,
    /// Coding of `y` in `E`, 0-based.
    pub coding: Vec<usize>,
}

impl EmbeddingInstance {
    /// Builds the instance and codes `y` to depth `coding_depth`.
    pub fn new(e: LineIFS, f: LineIFS, m: BigRational, b: BigRational, coding_depth: usize) -> Result<Self> {
        if m.is_zero() {
            return domain("embedding matrix is singular");
        }
        if e.len() < 2 || f.len() < 2 {
            return usage("E and F must each have at least two maps");
        }
        let ssc = e.ssc_check(SSC_DEPTH)?;
        if !ssc.certified {
            return domain(format!("strong separation of E not certified at depth {SSC_DEPTH}"));
        }
        let first = &f.maps()[0];
        let l = orthogonal_power_period(&first.orthogonal())?;
        let psi1 = first.power(l as u32);
        let x = psi1.fixed_point();
        let y = &m * &x + &b;
        let coding = coding_of_point(&e, &y, coding_depth)?;
        Ok(EmbeddingInstance {
            gamma1: psi1.ratio().clone(),
            norm: m.abs(),
            conorm: m.abs(),
            rho_star: e.rho_star(),
            diam_e: e.diam(),
            diam_f: f.diam(),
            delta: ssc.delta,
            e,
            f,
            m,
            b,
            l,
            psi1,
            x,
            y,
            coding,
        })
    }

    /// `γ₁δ / (ρ* ‖M‖ diam F)`, valid for `s_n ≥ 1`.
    pub fn lower_bound(&self) -> BigRational {
        &self.gamma1 * &self.delta / (&self.rho_star * &self.norm * &self.diam_f)
    }

    /// `diam E / (⟦M⟧ diam F)`.
    pub fn upper_bound(&self) -> BigRational {
        &self.diam_e / (&self.conorm * &self.diam_f)
    }
}
