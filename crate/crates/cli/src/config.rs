//! Experiment configuration, stored as JSON.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Rank,
    Independence,
    Orbit,
    Boxdim,
    Diophantine,
    Ifs,
    Embed,
    VerifyTheorem,
}

/// A basis real: either a decimal `value` or `sqrt` of an integer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sqrt: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_irrational: Option<bool>,
}

impl BasisSpec {
    pub fn sqrt(n: u64) -> Self {
        BasisSpec { label: format!("sqrt{n}"), value: None, sqrt: Some(n), declared_irrational: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StrategySpec {
    Random {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    Explicit {
        word: Vec<usize>,
    },
    Periodic {
        word: Vec<usize>,
    },
    GreedyAvoid {
        forbidden: [f64; 2],
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleRange {
    pub k_min: u32,
    pub k_max: u32,
}

/// One similitude: `ratio` as `"p/q"`, orientation, and translation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub ratio: String,
    /// One coordinate on the line, two in the plane.
    pub shift: Vec<String>,
    /// `±1` on the line (default `+1`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i8>,
    /// Rational rotation turn `"p/q"` in the plane.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turn: Option<String>,
    /// Rotation declared irrational, with a floating value for geometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irrational_turn: Option<IrrationalTurn>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrationalTurn {
    pub label: String,
    pub approx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IfsSpec {
    pub maps: Vec<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

impl IfsSpec {
    /// Line IFS from `(ratio, sign, shift)` strings.
    pub fn line(maps: &[(&str, i8, &str)]) -> Self {
        IfsSpec {
            maps: maps
                .iter()
                .map(|&(r, s, c)| MapSpec { ratio: r.into(), shift: vec![c.into()], sign: Some(s), turn: None, irrational_turn: None })
                .collect(),
            depth: None,
        }
    }

    pub fn middle_third() -> Self {
        IfsSpec::line(&[("1/3", 1, "0"), ("1/3", 1, "2/3")])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbedSpec {
    pub e: IfsSpec,
    pub f: IfsSpec,
    pub m: String,
    pub b: String,
    pub n_max: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl EmbedSpec {
    /// Middle-third `E`, `F = {x/9, x/9 + 8/9}`, identity embedding.
    pub fn cantor_pair(n_max: usize) -> Self {
        EmbedSpec {
            e: IfsSpec::middle_third(),
            f: IfsSpec::line(&[("1/9", 1, "0"), ("1/9", 1, "8/9")]),
            m: "1".into(),
            b: "0".into(),
            n_max,
            sample_depth: None,
            orbit_length: None,
            tolerance: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiophantineSpec {
    /// The `n` of the pigeonhole bound `1/(mn)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx_n: Option<u64>,
    /// Overrides `m = max_i Σ_j |p_{i,j}|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_min: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_index: Option<usize>,
}

/// Extra knobs for `verify-theorem`; unset fields take per-theorem defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<BasisSpec>,
    /// Step expressions over the basis; the reals to rank for `rank`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub include_one: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<ScaleRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ifs: Option<IfsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embed: Option<EmbedSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diophantine: Option<DiophantineSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<VerifyParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<String>,
}

impl ExperimentConfig {
    pub fn new(kind: Kind) -> Self {
        ExperimentConfig {
            kind,
            basis: Vec::new(),
            steps: Vec::new(),
            include_one: None,
            strategy: None,
            seed: None,
            n: None,
            bits: None,
            scales: None,
            ifs: None,
            embed: None,
            diophantine: None,
            theorem: None,
            params: None,
            output_dir: None,
        }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(cfg: &ExperimentConfig) {
        let text = cfg.to_json();
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(&back, cfg);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn configs_round_trip() {
        let mut c = ExperimentConfig::new(Kind::Orbit);
        c.basis = vec![BasisSpec::sqrt(2), BasisSpec { label: "x".into(), value: Some("0.1".to_string()), sqrt: None, declared_irrational: Some(false) }];
        c.steps = vec!["sqrt2".into(), "1/2 + sqrt2".into()];
        c.strategy = Some(StrategySpec::GreedyAvoid { forbidden: [0.4, 0.6000000000000001] });
        c.n = Some(1000);
        c.scales = Some(ScaleRange { k_min: 2, k_max: 9 });
        round_trip(&c);

        let mut v = ExperimentConfig::new(Kind::VerifyTheorem);
        v.theorem = Some("lemma2.2".into());
        v.params = Some(VerifyParams { sets: Some(10), tolerance: Some(0.1), ..Default::default() });
        v.embed = Some(EmbedSpec::cantor_pair(40));
        v.strategy = Some(StrategySpec::Random { seed: None });
        v.seed = Some(9);
        round_trip(&v);
    }

    #[test]
    fn rejects_unknown() {
        assert!(ExperimentConfig::from_json(r#"{"kind": "nope"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"kind": "rank", "extra": 1}"#).is_err());
        let c = ExperimentConfig::from_json(r#"{"kind": "verify-theorem", "theorem": "threshold-c"}"#).unwrap();
        assert_eq!(c.kind, Kind::VerifyTheorem);
    }
}
