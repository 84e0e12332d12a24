use num_rational::BigRational;

use multirot::boxdim::{box_dim_estimate, covering_profile, scaled_covering_sweep};
use multirot::diophantine::kxn_separation;
use multirot::embedtrace::{induced_orbit, sn_sequence, EmbeddingInstance};
use multirot::exact::{rank_span, BasisTable};
use multirot::ifs::LineIFS;
use multirot::orbit::{generate_orbit, reduced_orbit, StepSystem, Strategy};
use multirot::{Exec, Phase};

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[test]
fn separation_holds_past_reported_k0() {
    let b = BasisTable::sqrts(&[2, 3], 60).unwrap().shared();
    let steps = StepSystem::parse(&b, &["sqrt2", "sqrt3"]).unwrap();
    assert_eq!(rank_span(steps.alphas(), true).unwrap(), 3);
    let orbit = generate_orbit(&steps, &Strategy::Random { seed: 7 }, 100_000, 128).unwrap();
    let reduced = reduced_orbit(&orbit, 1, None).unwrap();
    let report = kxn_separation(&reduced.xtilde, 1, 400).unwrap();
    let k0 = report.observed_k0.expect("maxima eventually stay above 1/5");
    assert!(k0 + 100 <= 400, "k0 = {k0}");
    for row in &report.rows[(k0 - 1) as usize..(k0 + 100) as usize] {
        assert!(row.sup_norm >= 0.2, "k = {}", row.k);
    }
}

#[test]
fn cantor_sample_dimension() {
    let e = LineIFS::middle_third();
    let pts: Vec<Phase> = e.attractor_sample(12).unwrap().iter().map(|x| Phase::from_rational(x, 128)).collect();
    let profile = covering_profile(&pts, 4, 16).unwrap();
    let est = box_dim_estimate(&profile).unwrap();
    let target = 2f64.ln() / 3f64.ln();
    assert!((est.slope_global - target).abs() < 0.05, "{}", est.slope_global);
}

#[test]
fn scaled_sweep_small() {
    let sets: Vec<Vec<Phase>> = (0..50u64)
        .map(|s| (0..(5 + s % 40)).map(|i| Phase::from_f64(((s * 7919 + i * 104729) % 10007) as f64 / 10007.0, 128)).collect())
        .collect();
    let summary = scaled_covering_sweep(&sets, 16, 12, Exec::default()).unwrap();
    assert!(summary.violations.is_empty());
}

#[test]
fn cantor_pair_trace_and_orbit() {
    let e = LineIFS::middle_third();
    let f = LineIFS::from_triples(&[((1, 9), 1, (0, 1)), ((1, 9), 1, (8, 9))]).unwrap();
    let inst = EmbeddingInstance::new(e, f, r(1, 1), r(0, 1), 40).unwrap();
    let trace = sn_sequence(&inst, 40, 6).unwrap();
    for entry in &trace.entries {
        assert_eq!(entry.s_n, entry.n.div_ceil(2) as u64);
    }
    assert!(trace.all_within_bounds());
    let io = induced_orbit(&inst, 40, 128).unwrap();
    assert!(io.steps.alphas().iter().all(|a| a.is_rational() && a.constant() == &r(1, 2)));
    assert_eq!(io.orbit.distinct_points(), 2);
}
