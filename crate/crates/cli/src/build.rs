//! Turns config sections into library objects.

use std::sync::Arc;

use num_rational::BigRational;

use multirot::exact::hiprec::sqrt_decimal;
use multirot::exact::{parse_rational, BasisEntry, BasisTable, SymbolicReal};
use multirot::ifs::{LineIFS, LineMap, PlaneIFS, PlaneMap, SimilarIFS, Turn};
use multirot::orbit::{greedy_avoid_strategy, CircleInterval, StepSystem, Strategy};

use crate::config::{ExperimentConfig, IfsSpec, StrategySpec};
use crate::error::{invalid, CliResult};

/// Fractional digits used for `sqrt` basis entries.
pub const SQRT_DIGITS: usize = 60;

pub fn basis_table(cfg: &ExperimentConfig) -> CliResult<Arc<BasisTable>> {
    let mut entries = Vec::with_capacity(cfg.basis.len());
    for b in &cfg.basis {
        let value = match (&b.value, b.sqrt) {
            (Some(v), None) => v.clone(),
            (None, Some(n)) => sqrt_decimal(n, SQRT_DIGITS),
            _ => return invalid(format!("basis {}: give exactly one of value, sqrt", b.label)),
        };
        entries.push(BasisEntry { label: b.label.clone(), value, declared_irrational: b.declared_irrational.unwrap_or(true) });
    }
    Ok(BasisTable::new(entries)?.shared())
}

pub fn reals(cfg: &ExperimentConfig) -> CliResult<Vec<SymbolicReal>> {
    if cfg.steps.is_empty() {
        return invalid("steps: need at least one expression");
    }
    let basis = basis_table(cfg)?;
    cfg.steps.iter().map(|s| Ok(SymbolicReal::parse(&basis, s)?)).collect()
}

pub fn step_system(cfg: &ExperimentConfig) -> CliResult<StepSystem> {
    Ok(StepSystem::new(reals(cfg)?)?)
}

pub fn strategy(cfg: &ExperimentConfig) -> CliResult<Strategy> {
    match &cfg.strategy {
        None => invalid("strategy is required"),
        Some(StrategySpec::Random { seed }) => match seed.or(cfg.seed) {
            Some(seed) => Ok(Strategy::Random { seed }),
            None => invalid("a random strategy needs a seed"),
        },
        Some(StrategySpec::Explicit { word }) => Ok(Strategy::Explicit(word.clone())),
        Some(StrategySpec::Periodic { word }) => Ok(Strategy::Periodic(word.clone())),
        Some(StrategySpec::GreedyAvoid { forbidden: [a, b] }) => {
            if ![a, b].iter().all(|x| x.is_finite() && (0.0..=1.0).contains(*x)) {
                return invalid("forbidden interval endpoints must lie in [0, 1]");
            }
            Ok(greedy_avoid_strategy(CircleInterval::from_f64(*a, *b)))
        }
    }
}

pub fn rational(field: &str, s: &str) -> CliResult<BigRational> {
    parse_rational(s).or_else(|e| invalid(format!("{field}: {e}")))
}

pub fn similar_ifs(spec: &IfsSpec) -> CliResult<SimilarIFS> {
    let Some(first) = spec.maps.first() else {
        return invalid("ifs: no maps");
    };
    match first.shift.len() {
        1 => line_ifs(spec).map(SimilarIFS::Line),
        2 => {
            let mut maps = Vec::with_capacity(spec.maps.len());
            for m in &spec.maps {
                if m.shift.len() != 2 || m.sign.is_some() {
                    return invalid("ifs: planar maps need two shift coordinates and no sign");
                }
                let turn = match (&m.turn, &m.irrational_turn) {
                    (None, None) => Turn::rational(BigRational::from_integer(0.into())),
                    (Some(t), None) => Turn::rational(rational("turn", t)?),
                    (None, Some(t)) => Turn::Irrational { label: t.label.clone(), approx: t.approx },
                    _ => return invalid("ifs: give at most one of turn, irrational_turn"),
                };
                let shift = [rational("shift", &m.shift[0])?, rational("shift", &m.shift[1])?];
                maps.push(PlaneMap::new(rational("ratio", &m.ratio)?, turn, shift)?);
            }
            Ok(SimilarIFS::Plane(PlaneIFS::new(maps)?))
        }
        n => invalid(format!("ifs: shifts of dimension {n} are not supported")),
    }
}

pub fn line_ifs(spec: &IfsSpec) -> CliResult<LineIFS> {
    let mut maps = Vec::with_capacity(spec.maps.len());
    for m in &spec.maps {
        if m.shift.len() != 1 || m.turn.is_some() || m.irrational_turn.is_some() {
            return invalid("ifs: line maps take one shift coordinate and a sign");
        }
        maps.push(LineMap::new(rational("ratio", &m.ratio)?, m.sign.unwrap_or(1), rational("shift", &m.shift[0])?)?);
    }
    Ok(LineIFS::new(maps)?)
}
