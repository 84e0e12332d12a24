use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::boxdim::{box_dim_estimate, covering_profile};
use crate::error::{domain, usage, Result};
use crate::exact::hiprec::{fixed_to_decimal, ln_fixed};
use crate::exact::primes::factor_rational;
use crate::exact::{BasisEntry, BasisTable, SymbolicReal};
use crate::orbit::{generate_orbit, Orbit, StepSystem, Strategy};

use super::instance::EmbeddingInstance;

/// Decimal digits carried by the generated log-ratio basis.
const LOG_DIGITS: usize = 70;
const LOG_BITS: u32 = 320;

/// Steps `α_i = log ρ_i / log γ₁`.
///
/// Writing `log γ₁ = Σ g_p log p` and `v_p = log p / log(1/γ₁)` gives the
/// single relation `Σ g_p v_p = −1`; eliminating one prime with `g_p ≠ 0`
/// leaves the remaining `v_p` and 1 linearly independent over the rationals
/// by unique factorization, so they are declared irrational.
pub fn induced_steps(rhos: &[BigRational], gamma1: &BigRational) -> Result<StepSystem> {
    let one = BigRational::one();
    for x in rhos.iter().chain(std::iter::once(gamma1)) {
        if !x.is_positive() || x >= &one {
            return domain(format!("ratio {x} outside (0, 1)"));
        }
    }
    if rhos.is_empty() {
        return usage("at least one ratio is required");
    }
    let g = factor_rational(gamma1)?;
    let es = rhos.iter().map(factor_rational).collect::<Result<Vec<_>>>()?;
    let (&p0, &g0) = g.iter().find(|(_, &e)| e != 0).expect("γ₁ < 1 has a prime factor");
    let primes: BTreeSet<u64> = es.iter().flat_map(|e| e.keys().copied()).chain(g.keys().copied()).filter(|&p| p != p0).collect();

    let exp = |m: &crate::exact::primes::PrimeExponents, p: u64| BigRational::from_integer(m.get(&p).copied().unwrap_or(0).into());
    let g0 = BigRational::from_integer(g0.into());
    // α_i = Σ e_ip u_p with u_p = −v_p and Σ g_p u_p = 1
    let coeffs: Vec<(BigRational, Vec<(u64, BigRational)>)> = es
        .iter()
        .map(|e| {
            let lead = exp(e, p0) / &g0;
            let rest = primes.iter().map(|&p| (p, -(exp(e, p) - &lead * exp(&g, p)))).filter(|(_, c)| !c.is_zero()).collect();
            (lead, rest)
        })
        .collect();
    let used: BTreeSet<u64> = coeffs.iter().flat_map(|(_, r)| r.iter().map(|(p, _)| *p)).collect();

    let ln_g = -ln_fixed(gamma1, LOG_BITS);
    let entries = used
        .iter()
        .map(|&p| {
            let lnp = ln_fixed(&BigRational::from_integer(p.into()), LOG_BITS);
            let v = (lnp << LOG_BITS) / &ln_g;
            BasisEntry { label: format!("log{p}_g"), value: fixed_to_decimal(&v, LOG_BITS, LOG_DIGITS), declared_irrational: true }
        })
        .collect();
    let basis = BasisTable::new(entries)?.shared();
    let alphas = coeffs
        .into_iter()
        .map(|(lead, rest)| {
            let terms = rest.into_iter().map(|(p, c)| (basis.position(&format!("log{p}_g")).unwrap(), c));
            SymbolicReal::from_parts(&basis, lead, terms)
        })
        .collect();
    StepSystem::new(alphas)
}

/// Steps built from `E`'s ratios and `γ₁`, with the orbit along the coding.
#[derive(Debug, Clone)]
pub struct InducedOrbit {
    pub steps: StepSystem,
    pub orbit: Orbit,
}

pub fn induced_orbit(inst: &EmbeddingInstance, n: usize, bits: u32) -> Result<InducedOrbit> {
    if n > inst.coding.len() {
        return usage(format!("coding has length {}, orbit needs {n}", inst.coding.len()));
    }
    let steps = induced_steps(&inst.e.ratios(), &inst.gamma1)?;
    let word: Vec<usize> = inst.coding[..n].iter().map(|i| i + 1).collect();
    let orbit = generate_orbit(&steps, &Strategy::Explicit(word), n, bits)?;
    Ok(InducedOrbit { steps, orbit })
}

/// Estimator-level comparison of `dim E` with half the upper box estimate of
/// the induced orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionChain {
    pub dim_e_similarity: f64,
    pub half_upper_box_estimate: f64,
    pub distinct_points: usize,
    pub tolerance: f64,
    /// `dim E ≥ half estimate − tolerance`; estimates only, never a proof.
    pub inequality_satisfied: bool,
}

pub fn dimension_chain_report(inst: &EmbeddingInstance, orbit_length: usize, k_min: u32, k_max: u32, tolerance: f64) -> Result<DimensionChain> {
    let induced = induced_orbit(inst, orbit_length, 128)?;
    let points = induced.orbit.points();
    let profile = covering_profile(points, k_min, k_max)?;
    let est = box_dim_estimate(&profile)?;
    let distinct = induced.orbit.distinct_points();
    // rational steps give a finite orbit closure, of box dimension zero
    let half = if induced.steps.r() == 0 { 0.0 } else { est.upper_est / 2.0 };
    let dim_e = inst.e.similarity_dimension()?;
    Ok(DimensionChain {
        dim_e_similarity: dim_e,
        half_upper_box_estimate: half,
        distinct_points: distinct,
        tolerance,
        inequality_satisfied: dim_e >= half - tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{qplus_independent_mod1, rank_span};
    use crate::ifs::LineIFS;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn rational_steps() {
        let s = induced_steps(&[r(1, 3), r(1, 3)], &r(1, 9)).unwrap();
        assert!(s.alphas().iter().all(|a| a.is_rational() && a.constant() == &r(1, 2)));
        assert_eq!(s.lambda(), 1);
    }

    #[test]
    fn two_three_six() {
        let s = induced_steps(&[r(1, 2), r(1, 3)], &r(1, 6)).unwrap();
        let want = [2f64.ln() / 6f64.ln(), 3f64.ln() / 6f64.ln()];
        for (a, w) in s.alphas().iter().zip(want) {
            assert!((a.to_f64() - w).abs() < 1e-15);
        }
        let sum = &s.alphas()[0] + &s.alphas()[1];
        assert!(sum.is_rational() && sum.constant() == &r(1, 1));
        let v = qplus_independent_mod1(&s);
        let t = v.witness().unwrap();
        assert_eq!(t[0], t[1]);
        assert_eq!(s.lambda(), 2);
    }

    #[test]
    fn halves_over_third() {
        let s = induced_steps(&[r(1, 2), r(1, 2)], &r(1, 3)).unwrap();
        assert!((s.alphas()[0].to_f64() - 2f64.ln() / 3f64.ln()).abs() < 1e-15);
        assert!(qplus_independent_mod1(&s).is_independent());
        assert_eq!((s.lambda(), rank_span(s.alphas(), true).unwrap()), (1, 2));
    }

    #[test]
    fn cantor_pair_orbit() {
        let e = LineIFS::middle_third();
        let f = LineIFS::from_triples(&[((1, 9), 1, (0, 1)), ((1, 9), 1, (8, 9))]).unwrap();
        let inst = EmbeddingInstance::new(e, f, r(1, 1), r(0, 1), 40).unwrap();
        let io = induced_orbit(&inst, 40, 128).unwrap();
        assert_eq!(io.orbit.distinct_points(), 2);
        assert!(induced_orbit(&inst, 41, 128).is_err());
        let chain = dimension_chain_report(&inst, 40, 2, 8, 0.1).unwrap();
        assert_eq!(chain.half_upper_box_estimate, 0.0);
        assert!(chain.inequality_satisfied);
    }
}
