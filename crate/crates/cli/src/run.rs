//! Dispatch from a validated config to the library.

use num_rational::BigRational;
use serde_json::{json, Value};

use multirot::boxdim::{box_dim_estimate, covering_profile_with, profile_svg, write_profile_csv, BoxDimEstimate, CoveringProfile};
use multirot::diophantine::{kxn_separation_with, pigeonhole_approx, ApproxPath};
use multirot::embedtrace::{dimension_chain_report, induced_orbit, sn_sequence, EmbeddingInstance};
use multirot::exact::hiprec::to_f64;
use multirot::exact::independence::{fraction_string, witness_strings};
use multirot::exact::{q_independent_mod1, qplus_independent_mod1, rank_span, Verdict};
use multirot::ifs::{LineIFS, SimilarIFS};
use multirot::orbit::{generate_orbit, reduced_orbit, write_csv, Orbit};
use multirot::{Exec, Phase};

use crate::build;
use crate::config::{ExperimentConfig, Kind, ScaleRange};
use crate::error::{invalid, CliError, CliResult};
use crate::output::{csv_writer, finish, Artifacts};
use crate::verify;

pub const DEFAULT_BITS: u32 = 128;
pub const DEFAULT_SCALES: ScaleRange = ScaleRange { k_min: 6, k_max: 14 };
/// Default depth for attractor samples.
pub const DEFAULT_IFS_DEPTH: usize = 12;

/// Runs one experiment entirely in memory.
pub fn run_config(cfg: &ExperimentConfig, exec: Exec) -> CliResult<Artifacts> {
    let mut out = match cfg.kind {
        Kind::Rank => rank(cfg)?,
        Kind::Independence => independence(cfg)?,
        Kind::Orbit => orbit(cfg)?,
        Kind::Boxdim => boxdim(cfg, exec)?,
        Kind::Diophantine => diophantine(cfg, exec)?,
        Kind::Ifs => ifs(cfg, exec)?,
        Kind::Embed => embed(cfg, exec)?,
        Kind::VerifyTheorem => {
            let Some(name) = &cfg.theorem else {
                return invalid("verify-theorem needs a theorem name");
            };
            verify::verify_theorem(name, cfg, exec)?
        }
    };
    if let Value::Object(map) = &mut out.summary {
        map.insert("kind".into(), serde_json::to_value(cfg.kind).expect("kind serializes"));
    }
    Ok(out)
}

pub(crate) fn bits(cfg: &ExperimentConfig) -> u32 {
    cfg.bits.unwrap_or(DEFAULT_BITS)
}

fn require_n(cfg: &ExperimentConfig) -> CliResult<usize> {
    cfg.n.ok_or_else(|| CliError::Validation("n is required".into()))
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::Independent => json!({ "independent": true }),
        Verdict::Dependent { witness } => json!({ "independent": false, "witness": witness_strings(witness) }),
    }
}

fn rank(cfg: &ExperimentConfig) -> CliResult<Artifacts> {
    let reals = build::reals(cfg)?;
    let include_one = cfg.include_one.unwrap_or(false);
    let rank = rank_span(&reals, include_one)?;
    let mut w = csv_writer();
    w.write_record(["index", "expression", "approx"]).map_err(csv_err)?;
    for (i, (expr, x)) in cfg.steps.iter().zip(&reals).enumerate() {
        w.write_record([(i + 1).to_string(), expr.clone(), x.to_f64().to_string()]).map_err(csv_err)?;
    }
    let declared = reals.first().is_some_and(|x| x.basis().all_declared());
    Ok(Artifacts {
        csv: finish(w),
        summary: json!({ "rank": rank, "include_one": include_one, "reals": reals.len(), "basis_declared_irrational": declared }),
        svg: None,
    })
}

fn independence(cfg: &ExperimentConfig) -> CliResult<Artifacts> {
    let steps = build::step_system(cfg)?;
    let qplus = qplus_independent_mod1(&steps);
    let q = q_independent_mod1(&steps);
    let mut w = csv_writer();
    w.write_record(["test", "independent", "witness"]).map_err(csv_err)?;
    for (name, v) in [("qplus_mod1", &qplus), ("q_mod1", &q)] {
        let witness = v.witness().map_or(String::new(), |t| witness_strings(t).join(" "));
        w.write_record([name.to_string(), v.is_independent().to_string(), witness]).map_err(csv_err)?;
    }
    Ok(Artifacts {
        csv: finish(w),
        summary: json!({
            "ell": steps.len(),
            "r": steps.r(),
            "lambda": steps.lambda(),
            "qplus_mod1": verdict_json(&qplus),
            "q_mod1": verdict_json(&q),
        }),
        svg: None,
    })
}

fn make_orbit(cfg: &ExperimentConfig) -> CliResult<Orbit> {
    let steps = build::step_system(cfg)?;
    let strategy = build::strategy(cfg)?;
    Ok(generate_orbit(&steps, &strategy, require_n(cfg)?, bits(cfg))?)
}

fn orbit_summary(orbit: &Orbit) -> Value {
    let steps = orbit.steps();
    json!({
        "n": orbit.len(),
        "bits": orbit.bits(),
        "ell": steps.len(),
        "r": steps.r(),
        "lambda": steps.lambda(),
        "strategy": orbit.strategy_descriptor(),
        "seed": orbit.seed(),
        "distinct_points": orbit.distinct_points(),
        "final_counts": orbit.counts_at(orbit.len()),
        "error_bound_log2": orbit.error_bound_log2(),
    })
}

fn orbit(cfg: &ExperimentConfig) -> CliResult<Artifacts> {
    let orbit = make_orbit(cfg)?;
    let mut csv = Vec::new();
    write_csv(&orbit, &mut csv)?;
    Ok(Artifacts { csv, summary: orbit_summary(&orbit), svg: None })
}

pub(crate) fn scales(cfg: &ExperimentConfig) -> ScaleRange {
    cfg.scales.unwrap_or(DEFAULT_SCALES)
}

pub(crate) fn estimate_json(est: &BoxDimEstimate) -> Value {
    json!({
        "lower_box_estimate": est.lower_est,
        "upper_box_estimate": est.upper_est,
        "slope_global": est.slope_global,
        "slopes_local": est.slopes_local,
        "resolution_limited": est.resolution_limited,
    })
}

pub(crate) fn profile_artifacts(profile: &CoveringProfile, mut summary: Value) -> CliResult<Artifacts> {
    let est = box_dim_estimate(profile)?;
    let mut csv = Vec::new();
    write_profile_csv(profile, &mut csv)?;
    if let (Value::Object(map), Value::Object(e)) = (&mut summary, estimate_json(&est)) {
        map.extend(e);
        map.insert("k_min".into(), profile.k_min.into());
        map.insert("k_max".into(), profile.k_max.into());
        map.insert("points".into(), profile.n_points.into());
    }
    Ok(Artifacts { csv, summary, svg: Some(profile_svg(profile, Some(&est))) })
}

/// Sample points of a line attractor, placed on the circle by `x ↦ (x − lo)/(2 diam)`.
pub(crate) fn line_sample_phases(e: &LineIFS, depth: usize, exec: Exec) -> CliResult<Vec<Phase>> {
    let lo = e.hull().lo.clone();
    let width = e.diam() * BigRational::from_integer(2.into());
    let sample = e.attractor_sample_with(depth, exec)?;
    Ok(sample.iter().map(|x| Phase::from_rational(&((x - &lo) / &width), 128)).collect())
}

fn boxdim(cfg: &ExperimentConfig, exec: Exec) -> CliResult<Artifacts> {
    let s = scales(cfg);
    if let Some(spec) = &cfg.ifs {
        if !cfg.steps.is_empty() {
            return invalid("boxdim takes either steps or an ifs, not both");
        }
        let e = build::line_ifs(spec)?;
        let depth = spec.depth.unwrap_or(DEFAULT_IFS_DEPTH);
        let points = line_sample_phases(&e, depth, exec)?;
        let profile = covering_profile_with(&points, s.k_min, s.k_max, exec)?;
        return profile_artifacts(&profile, json!({ "source": "ifs", "depth": depth, "similarity_dimension": e.similarity_dimension()? }));
    }
    let orbit = make_orbit(cfg)?;
    let profile = covering_profile_with(orbit.points(), s.k_min, s.k_max, exec)?;
    let summary = json!({ "source": "orbit", "orbit": orbit_summary(&orbit), "r": orbit.steps().r() });
    profile_artifacts(&profile, summary)
}

fn diophantine(cfg: &ExperimentConfig, exec: Exec) -> CliResult<Artifacts> {
    let orbit = make_orbit(cfg)?;
    let steps = orbit.steps();
    let spec = cfg.diophantine.clone().unwrap_or_default();
    let reduced = reduced_orbit(&orbit, spec.shift_index.unwrap_or(1), None)?;
    let (k_min, k_max) = (spec.k_min.unwrap_or(1), spec.k_max.unwrap_or(400));
    let report = kxn_separation_with(&reduced.xtilde, k_min, k_max, exec)?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;

    let betas: Vec<Phase> = steps.betas().iter().map(|b| b.phase(orbit.bits())).collect();
    let m = spec.m.unwrap_or(steps.m());
    let n = spec.approx_n.unwrap_or(16);
    let approx = pigeonhole_approx(&betas, m, n, orbit.bits())?;
    let approx_json = json!({
        "k": approx.k,
        "m": approx.m,
        "n": approx.n,
        "range": approx.range().to_string(),
        "achieved": approx.achieved,
        "bound": 1.0 / (approx.m as f64 * approx.n as f64),
        "path": match approx.path { ApproxPath::Scan => "scan", ApproxPath::Bucketing => "bucketing" },
    });
    Ok(Artifacts {
        csv,
        summary: json!({
            "orbit": orbit_summary(&orbit),
            "shift_index": reduced.shift_index,
            "shift_amount": reduced.shift_amount,
            "k_min": k_min,
            "k_max": k_max,
            "observed_k0": report.observed_k0,
            "k_below_fifth": report.below_fifth().collect::<Vec<_>>(),
            "pigeonhole": approx_json,
        }),
        svg: None,
    })
}

fn ifs(cfg: &ExperimentConfig, exec: Exec) -> CliResult<Artifacts> {
    let Some(spec) = &cfg.ifs else {
        return invalid("kind ifs needs an ifs section");
    };
    let system = build::similar_ifs(spec)?;
    let depth = spec.depth.unwrap_or(DEFAULT_IFS_DEPTH);
    let (ssc, delta) = system.ssc(multirot::embedtrace::SSC_DEPTH)?;
    let mut summary = json!({
        "dim": system.dim(),
        "maps": system.len(),
        "ratios": system.ratios().iter().map(fraction_string).collect::<Vec<_>>(),
        "orthogonal": system.orthogonal_parts().iter().map(|o| o.to_string()).collect::<Vec<_>>(),
        "similarity_dimension": system.similarity_dimension()?,
        "ssc_certified": ssc,
        "ssc_delta": delta,
        "depth": depth,
    });
    match &system {
        SimilarIFS::Line(e) => {
            let s = scales(cfg);
            let points = line_sample_phases(e, depth, exec)?;
            let profile = covering_profile_with(&points, s.k_min, s.k_max, exec)?;
            if let Value::Object(map) = &mut summary {
                map.insert("hull".into(), json!([fraction_string(&e.hull().lo), fraction_string(&e.hull().hi)]));
            }
            profile_artifacts(&profile, summary)
        }
        SimilarIFS::Plane(p) => {
            let sample = p.attractor_sample_with(depth, exec)?;
            let mut w = csv_writer();
            w.write_record(["index", "x", "y"]).map_err(csv_err)?;
            for (i, [x, y]) in sample.iter().enumerate() {
                w.write_record([i.to_string(), x.to_string(), y.to_string()]).map_err(csv_err)?;
            }
            Ok(Artifacts { csv: finish(w), summary, svg: None })
        }
    }
}

/// Default refinement depth for trace containment tests.
pub const TRACE_DEPTH: usize = 6;

pub(crate) fn embed_artifacts(spec: &crate::config::EmbedSpec, exec: Exec) -> CliResult<Artifacts> {
    let e = build::line_ifs(&spec.e)?;
    let f = build::line_ifs(&spec.f)?;
    let m = build::rational("m", &spec.m)?;
    let b = build::rational("b", &spec.b)?;
    let depth = spec.sample_depth.unwrap_or(TRACE_DEPTH);
    let containment = e.check_affine_embedding_with(&m, &b, &f, depth, None, exec)?;
    if !containment.is_contained() {
        return invalid(format!("the map does not send F into E: {containment:?}"));
    }
    let inst = EmbeddingInstance::new(e, f, m, b, spec.n_max)?;
    let trace = sn_sequence(&inst, spec.n_max, depth)?;
    let mut csv = Vec::new();
    trace.write_csv(&mut csv)?;
    let orbit_len = spec.orbit_length.unwrap_or(spec.n_max).min(spec.n_max);
    let induced = induced_orbit(&inst, orbit_len, 128)?;
    let alphas: Vec<Value> = induced
        .steps
        .alphas()
        .iter()
        .map(|a| if a.is_rational() { fraction_string(a.constant()).into() } else { a.to_f64().into() })
        .collect();
    let mut summary = json!({
        "l": inst.l,
        "gamma1": fraction_string(&inst.gamma1),
        "delta": fraction_string(&inst.delta),
        "y": fraction_string(&inst.y),
        "coding": inst.coding.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "lower_bound": fraction_string(&trace.lower_bound),
        "upper_bound": fraction_string(&trace.upper_bound),
        "lower_bound_approx": to_f64(&trace.lower_bound),
        "upper_bound_approx": to_f64(&trace.upper_bound),
        "s_n": trace.entries.iter().map(|t| t.s_n).collect::<Vec<_>>(),
        "flagged": trace.entries.iter().filter(|t| t.flagged).count(),
        "all_within_bounds": trace.all_within_bounds(),
        "induced_alphas": alphas,
        "induced_r": induced.steps.r(),
        "induced_distinct_points": induced.orbit.distinct_points(),
    });
    if let (Some(tol), Value::Object(map)) = (spec.tolerance, &mut summary) {
        let chain = dimension_chain_report(&inst, orbit_len, 2, 8, tol)?;
        map.insert(
            "dimension_chain".into(),
            json!({
                "dim_e_similarity": chain.dim_e_similarity,
                "half_upper_box_estimate": chain.half_upper_box_estimate,
                "distinct_points": chain.distinct_points,
                "tolerance": chain.tolerance,
                "inequality_satisfied": chain.inequality_satisfied,
            }),
        );
    }
    Ok(Artifacts { csv, summary, svg: None })
}

fn embed(cfg: &ExperimentConfig, exec: Exec) -> CliResult<Artifacts> {
    let Some(spec) = &cfg.embed else {
        return invalid("kind embed needs an embed section");
    };
    embed_artifacts(spec, exec)
}

pub(crate) fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}
