//! Flat key=value experiment configuration files.
//!
//! One `key=value` pair per line; `#` starts a comment. `case_id` selects a
//! predefined case (A-D) or names a custom one; every other key overrides
//! the corresponding field. Command-line flags override file values.

use anyhow::{anyhow, bail, Context};
use descent_lab::estimators::EstimatorKind;
use descent_lab::harness::{AlphaMode, CaseId, ExperimentConfig};
use descent_lab::model::GeneratorKind;

/// Keys in serialization order.
const KEYS: [&str; 10] = [
    "case_id",
    "epsilon",
    "generator_kind",
    "n_train",
    "n_max",
    "noise_variance",
    "replicates",
    "base_seed",
    "estimator",
    "alpha_mode",
];

pub fn serialize_config(config: &ExperimentConfig<f64>) -> String {
    let estimator = match config.estimator {
        EstimatorKind::MinNorm => "min_norm".to_string(),
        EstimatorKind::Ridge { lambda } => format!("ridge:{lambda}"),
    };
    let values = [
        config.case_id.label().to_string(),
        format!("{}", config.epsilon),
        config.generator_kind.label().to_string(),
        config.n_train.to_string(),
        config.n_max.to_string(),
        format!("{}", config.noise_variance),
        config.replicates.to_string(),
        config.base_seed.to_string(),
        estimator,
        config.alpha_mode.label().to_string(),
    ];
    let mut out = String::new();
    for (key, value) in KEYS.iter().zip(values) {
        out.push_str(key);
        out.push('=');
        out.push_str(&value);
        out.push('\n');
    }
    out
}

fn parse_estimator(value: &str) -> anyhow::Result<EstimatorKind<f64>> {
    if value == "min_norm" {
        return Ok(EstimatorKind::MinNorm);
    }
    if let Some(rest) = value.strip_prefix("ridge:") {
        let lambda: f64 = rest
            .parse()
            .with_context(|| format!("bad ridge penalty '{rest}'"))?;
        return Ok(EstimatorKind::Ridge { lambda });
    }
    bail!("unknown estimator '{value}' (expected min_norm or ridge:<lambda>)")
}

/// Builds a config from key=value text. Starts from the predefined defaults
/// for cases A-D (custom names start from the case-A shape with epsilon 0 and
/// the lin generator) and applies every other key as an override.
pub fn parse_config(text: &str) -> anyhow::Result<ExperimentConfig<f64>> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {}: expected key=value, got '{line}'", lineno + 1))?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }

    let case_id = pairs
        .iter()
        .find(|(k, _)| k == "case_id")
        .map(|(_, v)| CaseId::parse(v))
        .ok_or_else(|| anyhow!("config is missing case_id"))?;

    let mut config = match &case_id {
        CaseId::Custom(_) => {
            let mut base = ExperimentConfig::<f64>::for_case(CaseId::A, 0)
                .expect("case A preset exists");
            base.case_id = case_id.clone();
            base.epsilon = 0.0;
            base
        }
        predefined => ExperimentConfig::<f64>::for_case(predefined.clone(), 0)
            .expect("predefined case exists"),
    };

    for (key, value) in &pairs {
        match key.as_str() {
            "case_id" => {}
            "epsilon" => {
                config.epsilon = value
                    .parse()
                    .with_context(|| format!("bad epsilon '{value}'"))?
            }
            "generator_kind" => config.generator_kind = GeneratorKind::parse(value)?,
            "n_train" => {
                config.n_train = value
                    .parse()
                    .with_context(|| format!("bad n_train '{value}'"))?
            }
            "n_max" => {
                config.n_max = value
                    .parse()
                    .with_context(|| format!("bad n_max '{value}'"))?
            }
            "noise_variance" => {
                config.noise_variance = value
                    .parse()
                    .with_context(|| format!("bad noise_variance '{value}'"))?
            }
            "replicates" => {
                config.replicates = value
                    .parse()
                    .with_context(|| format!("bad replicates '{value}'"))?
            }
            "base_seed" => {
                config.base_seed = value
                    .parse()
                    .with_context(|| format!("bad base_seed '{value}'"))?
            }
            "estimator" => config.estimator = parse_estimator(value)?,
            "alpha_mode" => config.alpha_mode = AlphaMode::parse(value)?,
            other => bail!("unknown config key '{other}'"),
        }
    }

    config.validate()?;
    Ok(config)
}
