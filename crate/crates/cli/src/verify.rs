//! Named verification recipes with measured values, bounds and verdicts.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use multirot::boxdim::{box_dim_estimate, cell_difference, covering_profile_with, gap_profile, scaled_covering_check, scaled_covering_sweep};
use multirot::embedtrace::{rank_box_bound, threshold_c};
use multirot::exact::hiprec::to_f64;
use multirot::exact::independence::fraction_string;
use multirot::orbit::{generate_orbit, greedy_avoid_strategy, CircleInterval, Orbit, StepSystem, Strategy};
use multirot::{Exec, Phase};

use crate::build;
use crate::config::{BasisSpec, EmbedSpec, ExperimentConfig, VerifyParams};
use crate::error::{invalid, CliResult};
use crate::output::{csv_writer, finish, Artifacts};
use crate::run::{bits, csv_err, embed_artifacts, scales};

pub const THEOREMS: [&str; 5] = ["lemma2.2", "thm1.5i", "thm1.5ii", "bounds-eq:EFub-EFlb", "threshold-c"];

/// Seed used by recipes whose config gives none.
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_ORBIT_LEN: usize = 1_000_000;
/// Forbidden arc for the greedy-avoid run of the rank recipe.
pub const DEFAULT_FORBIDDEN: [f64; 2] = [0.4, 0.6];

/// Accepts the canonical names and their bare numeric forms.
pub fn canonical_name(name: &str) -> Option<&'static str> {
    let n = name.trim();
    let n = n.strip_prefix("theorem").or_else(|| n.strip_prefix("thm")).unwrap_or(n);
    match n {
        "lemma2.2" | "2.2" => Some(THEOREMS[0]),
        "1.5i" | "1.5(i)" => Some(THEOREMS[1]),
        "1.5ii" | "1.5(ii)" => Some(THEOREMS[2]),
        "bounds-eq:EFub-EFlb" | "eq:EFub-EFlb" | "bounds" => Some(THEOREMS[3]),
        "threshold-c" | "threshold" => Some(THEOREMS[4]),
        _ => None,
    }
}

pub fn verify_theorem(name: &str, cfg: &ExperimentConfig, exec: Exec) -> CliResult<Artifacts> {
    let Some(theorem) = canonical_name(name) else {
        return invalid(format!("unknown theorem {name:?}; expected one of {}", THEOREMS.join(", ")));
    };
    let params = cfg.params.clone().unwrap_or_default();
    let mut out = match theorem {
        "lemma2.2" => scaled_cover(cfg, &params, exec)?,
        "thm1.5i" => difference_fill(cfg, &params)?,
        "thm1.5ii" => rank_bound(cfg, &params, exec)?,
        "bounds-eq:EFub-EFlb" => trace_bounds(cfg, exec)?,
        _ => threshold_table(&params)?,
    };
    if let Value::Object(map) = &mut out.summary {
        map.insert("theorem".into(), theorem.into());
    }
    Ok(out)
}

fn seed(cfg: &ExperimentConfig) -> u64 {
    cfg.seed.unwrap_or(DEFAULT_SEED)
}

/// Steps from the config, or `(√2, √3)` when none are given.
fn recipe_steps(cfg: &ExperimentConfig) -> CliResult<StepSystem> {
    if cfg.steps.is_empty() {
        let mut c = cfg.clone();
        c.basis = vec![BasisSpec::sqrt(2), BasisSpec::sqrt(3)];
        c.steps = vec!["sqrt2".into(), "sqrt3".into()];
        return build::step_system(&c);
    }
    build::step_system(cfg)
}

fn recipe_strategy(cfg: &ExperimentConfig) -> CliResult<Strategy> {
    match cfg.strategy {
        Some(_) => {
            let mut c = cfg.clone();
            c.seed = Some(seed(cfg));
            build::strategy(&c)
        }
        None => Ok(Strategy::Random { seed: seed(cfg) }),
    }
}

fn recipe_orbit(cfg: &ExperimentConfig, steps: &StepSystem, strategy: &Strategy) -> CliResult<Orbit> {
    Ok(generate_orbit(steps, strategy, cfg.n.unwrap_or(DEFAULT_ORBIT_LEN), bits(cfg))?)
}

/// Random sets of at most `max_points` points; sizes and points from one stream.
pub fn random_sets(seed: u64, count: usize, max_points: usize) -> Vec<Vec<Phase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=max_points);
            (0..size).map(|_| Phase(rng.gen::<u128>())).collect()
        })
        .collect()
}

fn scaled_cover(cfg: &ExperimentConfig, params: &VerifyParams, exec: Exec) -> CliResult<Artifacts> {
    let count = params.sets.unwrap_or(1000);
    let max_points = params.max_points.unwrap_or(256);
    let p_max = params.p_max.unwrap_or(16);
    let k_max = params.k_max.unwrap_or(12);
    if count == 0 || max_points == 0 {
        return invalid("sets and max_points must be positive");
    }
    let sets = random_sets(seed(cfg), count, max_points);
    let summary = scaled_covering_sweep(&sets, p_max, k_max, exec)?;
    let mut w = csv_writer();
    w.write_record(["set", "p", "k", "scaled", "base"]).map_err(csv_err)?;
    for &(i, p, k) in &summary.violations {
        let c = scaled_covering_check(&sets[i], p, k)?;
        w.write_record([i.to_string(), p.to_string(), k.to_string(), c.scaled.to_string(), c.base.to_string()]).map_err(csv_err)?;
    }
    Ok(Artifacts {
        csv: finish(w),
        summary: json!({
            "seed": seed(cfg),
            "sets": count,
            "max_points": max_points,
            "p_max": p_max,
            "k_max": k_max,
            "checks": summary.checks,
            "skipped": summary.skipped,
            "violations": summary.violations.len(),
            "passed": summary.violations.is_empty(),
        }),
        svg: None,
    })
}

fn difference_fill(cfg: &ExperimentConfig, params: &VerifyParams) -> CliResult<Artifacts> {
    let resolution = params.resolution.unwrap_or(12);
    let interval_bits = params.interval_bits.unwrap_or(8);
    if interval_bits > resolution {
        return invalid("interval_bits must not exceed resolution");
    }
    let steps = recipe_steps(cfg)?;
    let strategy = recipe_strategy(cfg)?;
    let orbit = recipe_orbit(cfg, &steps, &strategy)?;
    let points = orbit.points();
    let diff = cell_difference(points, resolution)?;
    let cells = 1u64 << resolution;
    let filled = diff.covering_count(resolution)?;
    let gaps = gap_profile(points, resolution)?;
    let needed_run = 1usize << (resolution - interval_bits);
    let fills = filled == cells;
    let interval = gaps.longest_run >= needed_run;

    let mut occupied = vec![false; cells as usize];
    for x in points {
        occupied[x.cell(resolution) as usize] = true;
    }
    let diff_cells: Vec<bool> = match &diff {
        multirot::boxdim::DifferenceSet::Cells { occupied, .. } => (0..cells).map(|c| occupied[(c / 64) as usize] >> (c % 64) & 1 == 1).collect(),
        multirot::boxdim::DifferenceSet::Exact(d) => {
            let mut v = vec![false; cells as usize];
            for x in d {
                v[x.cell(resolution) as usize] = true;
            }
            v
        }
    };
    let mut w = csv_writer();
    w.write_record(["cell", "difference_occupied", "orbit_occupied"]).map_err(csv_err)?;
    for c in 0..cells as usize {
        w.write_record([c.to_string(), u8::from(diff_cells[c]).to_string(), u8::from(occupied[c]).to_string()]).map_err(csv_err)?;
    }
    let verdict = if fills {
        "difference set fills all cells"
    } else if interval {
        "interval present"
    } else {
        "neither"
    };
    Ok(Artifacts {
        csv: finish(w),
        summary: json!({
            "strategy": orbit.strategy_descriptor(),
            "n": orbit.len(),
            "resolution": resolution,
            "difference_cells": filled,
            "cells": cells,
            "difference_fills": fills,
            "longest_run_cells": gaps.longest_run,
            "required_run_cells": needed_run,
            "interval_present": interval,
            "occupied_fraction": gaps.occupied_fraction,
            "max_gap": gaps.max_gap,
            "verdict": verdict,
            "passed": fills || interval,
        }),
        svg: None,
    })
}

fn rank_bound(cfg: &ExperimentConfig, params: &VerifyParams, exec: Exec) -> CliResult<Artifacts> {
    let tolerance = params.tolerance.unwrap_or(0.1);
    let steps = recipe_steps(cfg)?;
    let Some(bound) = rank_box_bound(steps.r()) else {
        return invalid("all steps are rational; the orbit is finite and no bound applies");
    };
    let bound_value = to_f64(&bound);
    let strategies = match cfg.strategy {
        Some(_) => vec![recipe_strategy(cfg)?],
        None => {
            let [a, b] = DEFAULT_FORBIDDEN;
            vec![Strategy::Random { seed: seed(cfg) }, greedy_avoid_strategy(CircleInterval::from_f64(a, b))]
        }
    };
    let s = scales(cfg);
    let mut w = csv_writer();
    w.write_record(["strategy", "k", "N", "local_slope"]).map_err(csv_err)?;
    let mut runs = Vec::new();
    let mut lowest = f64::INFINITY;
    for strategy in &strategies {
        let orbit = recipe_orbit(cfg, &steps, strategy)?;
        let profile = covering_profile_with(orbit.points(), s.k_min, s.k_max, exec)?;
        let est = box_dim_estimate(&profile)?;
        let name = orbit.strategy_descriptor().to_string();
        for (i, (k, n)) in profile.scales().enumerate() {
            let slope = if i == 0 { String::new() } else { format!("{:.12}", est.slopes_local[i - 1]) };
            w.write_record([name.clone(), k.to_string(), n.to_string(), slope]).map_err(csv_err)?;
        }
        let passed = est.lower_est >= bound_value - tolerance;
        lowest = lowest.min(est.lower_est);
        runs.push(json!({
            "strategy": name,
            "n": orbit.len(),
            "lower_box_estimate": est.lower_est,
            "upper_box_estimate": est.upper_est,
            "slope_global": est.slope_global,
            "passed": passed,
        }));
    }
    let passed = lowest >= bound_value - tolerance;
    Ok(Artifacts {
        csv: finish(w),
        summary: json!({
            "r": steps.r(),
            "lambda": steps.lambda(),
            "k_min": s.k_min,
            "k_max": s.k_max,
            "bound": fraction_string(&bound),
            "bound_value": bound_value,
            "tolerance": tolerance,
            "lower_box_estimate": lowest,
            "runs": runs,
            "passed": passed,
        }),
        svg: None,
    })
}

fn trace_bounds(cfg: &ExperimentConfig, exec: Exec) -> CliResult<Artifacts> {
    let spec = cfg.embed.clone().unwrap_or_else(|| EmbedSpec::cantor_pair(40));
    let mut out = embed_artifacts(&spec, exec)?;
    if let Value::Object(map) = &mut out.summary {
        let ok = map.get("all_within_bounds").and_then(Value::as_bool).unwrap_or(false);
        map.insert("passed".into(), ok.into());
    }
    Ok(out)
}

/// The three regimes of the threshold, written out independently.
fn expected_threshold(ell: usize, lambda: usize) -> BigRational {
    let q = if ell == 2 || lambda == 1 { 4 } else { 2 * lambda as i64 + 2 };
    BigRational::new(1.into(), q.into())
}

fn threshold_table(params: &VerifyParams) -> CliResult<Artifacts> {
    let ell_max = params.ell_max.unwrap_or(6);
    let lambda_max = params.lambda_max.unwrap_or(5);
    if ell_max < 2 || lambda_max < 1 {
        return invalid("threshold table needs ell_max ≥ 2 and lambda_max ≥ 1");
    }
    let mut w = csv_writer();
    w.write_record(["ell", "lambda", "c", "expected", "match"]).map_err(csv_err)?;
    let mut mismatches = 0usize;
    let mut rows = 0usize;
    for ell in 2..=ell_max {
        for lambda in 1..=lambda_max {
            let c = threshold_c(ell, lambda)?;
            let e = expected_threshold(ell, lambda);
            mismatches += usize::from(c != e);
            rows += 1;
            w.write_record([ell.to_string(), lambda.to_string(), fraction_string(&c), fraction_string(&e), (c == e).to_string()])
                .map_err(csv_err)?;
        }
    }
    Ok(Artifacts {
        csv: finish(w),
        summary: json!({ "ell_max": ell_max, "lambda_max": lambda_max, "entries": rows, "mismatches": mismatches, "passed": mismatches == 0 }),
        svg: None,
    })
}
