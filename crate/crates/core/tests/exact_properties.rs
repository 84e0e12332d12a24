use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

use multirot::exact::{q_independent_mod1, qplus_independent_mod1, rank_span, witness_is_integral, BasisTable, SymbolicReal};
use multirot::orbit::StepSystem;

fn basis() -> Arc<BasisTable> {
    BasisTable::sqrts(&[2, 3, 5, 7], 60).unwrap().shared()
}

/// `(q_num, q_den, [c_1..c_4])` describing `q_num/q_den + Σ c_j √p_j`.
type Spec = (i64, i64, Vec<i64>);

fn spec(width: usize) -> impl Strategy<Value = Spec> {
    (-6i64..=6, 1i64..=6, prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -4i64..=4], width))
}

fn build(b: &Arc<BasisTable>, s: &Spec) -> SymbolicReal {
    let terms = s.2.iter().enumerate().map(|(j, &c)| (j, BigRational::from_integer(c.into())));
    SymbolicReal::from_parts(b, BigRational::new(s.0.into(), s.1.into()), terms)
}

/// Exhaustive search for `t ≥ 0`, `t ≠ 0`, entries `n/d` with `n, d ≤ 8`,
/// such that `Σ t_i α_i` is an integer. Works on integer numerators.
fn brute_force_witness(specs: &[Spec]) -> bool {
    let den: i64 = specs.iter().fold(1, |acc, s| acc.lcm(&s.1));
    // α_i = (a0 + Σ a_j s_j) / den
    let rows: Vec<(i64, Vec<i64>)> = specs.iter().map(|s| (s.0 * (den / s.1), s.2.iter().map(|c| c * den).collect())).collect();
    let mut values: Vec<(i64, i64)> = Vec::new();
    for d in 1..=8i64 {
        for n in 0..=8i64 {
            if n.gcd(&d) == 1 || n == 0 && d == 1 {
                values.push((n, d));
            }
        }
    }
    let ell = specs.len();
    let mut idx = vec![0usize; ell];
    loop {
        let ts: Vec<(i64, i64)> = idx.iter().map(|&i| values[i]).collect();
        if ts.iter().any(|t| t.0 != 0) {
            let l: i64 = ts.iter().fold(1, |acc, t| acc.lcm(&t.1));
            let w: Vec<i64> = ts.iter().map(|t| t.0 * (l / t.1)).collect();
            let width = rows[0].1.len();
            let irr_zero = (0..width).all(|j| rows.iter().zip(&w).map(|(r, wi)| r.1[j] * wi).sum::<i64>() == 0);
            let c: i64 = rows.iter().zip(&w).map(|(r, wi)| r.0 * wi).sum();
            if irr_zero && c % (den * l) == 0 {
                return true;
            }
        }
        let mut k = 0;
        loop {
            if k == ell {
                return false;
            }
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn rank_is_invariant_under_permutation_and_scaling(
        specs in prop::collection::vec(spec(4), 1..6),
        perm_seed in any::<u64>(),
        scales in prop::collection::vec((1i64..9, 1i64..9, any::<bool>()), 6),
    ) {
        let b = basis();
        let reals: Vec<SymbolicReal> = specs.iter().map(|s| build(&b, s)).collect();
        let mut permuted = reals.clone();
        // deterministic Fisher–Yates from the seed
        let mut state = perm_seed;
        for i in (1..permuted.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            permuted.swap(i, (state >> 33) as usize % (i + 1));
        }
        let scaled: Vec<SymbolicReal> = permuted.iter().zip(&scales).map(|(x, &(n, d, neg))| {
            let k = BigRational::new(if neg { -n } else { n }.into(), d.into());
            x.scale(&k)
        }).collect();
        for include_one in [false, true] {
            let r0 = rank_span(&reals, include_one).unwrap();
            prop_assert_eq!(r0, rank_span(&permuted, include_one).unwrap());
            prop_assert_eq!(r0, rank_span(&scaled, include_one).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn qplus_agrees_with_brute_force(specs in prop::collection::vec(spec(2), 1..4)) {
        let b = basis();
        let steps = StepSystem::new(specs.iter().map(|s| build(&b, s)).collect()).unwrap();
        let verdict = qplus_independent_mod1(&steps);
        if let Some(t) = verdict.witness() {
            prop_assert!(witness_is_integral(&steps, t));
            prop_assert!(t.iter().all(|x| *x >= BigRational::from_integer(0.into())));
            prop_assert!(t.iter().any(|x| *x != BigRational::from_integer(0.into())));
        }
        if brute_force_witness(&specs) {
            prop_assert!(!verdict.is_independent(), "brute force found a witness the checker missed");
        }
    }

    #[test]
    fn q_independence_implies_qplus(specs in prop::collection::vec(spec(4), 1..5)) {
        let b = basis();
        let steps = StepSystem::new(specs.iter().map(|s| build(&b, s)).collect()).unwrap();
        if q_independent_mod1(&steps).is_independent() {
            prop_assert!(qplus_independent_mod1(&steps).is_independent());
        }
        if let Some(t) = q_independent_mod1(&steps).witness() {
            prop_assert!(witness_is_integral(&steps, t));
        }
    }
}
