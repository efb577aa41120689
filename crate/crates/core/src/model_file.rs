//! JSON model files with exact decimal round-trips.
//!
//! Reals are stored as strings in scientific notation with 17 significant
//! digits, which reproduces every `f64` bit-for-bit on reload.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::ExpectationEstimates;
use crate::features::{FeatureMap, ThresholdSpec};
use crate::learn::MrcModel;
use crate::num::Scalar;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ThresholdRecord {
    dimension: usize,
    value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ModelFile {
    schema_version: u32,
    num_labels: usize,
    thresholds: Vec<ThresholdRecord>,
    mu: Vec<String>,
    nu: String,
    upper_bound: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lower_bound: Option<String>,
    lambda: Vec<String>,
    n: usize,
    label_names: Vec<String>,
    /// Empirical expectations; absent in minimal files.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tau: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    feature_names: Vec<String>,
}

/// A model together with the dataset vocabulary needed to apply it.
#[derive(Debug, Clone, PartialEq)]
pub struct SavedModel<T> {
    pub model: MrcModel<T>,
    pub label_names: Vec<String>,
    /// Training feature columns in order; empty when unknown.
    pub feature_names: Vec<String>,
}

fn encode<T: Scalar>(v: T) -> String {
    format!("{:.16e}", v.as_f64())
}

fn decode<T: Scalar>(s: &str, field: &str) -> Result<T> {
    s.trim()
        .parse::<f64>()
        .map(T::of)
        .map_err(|_| Error::InvalidInput(format!("model field {field}: {s:?} is not a number")))
}

fn decode_all<T: Scalar>(v: &[String], field: &str) -> Result<Vec<T>> {
    v.iter().map(|s| decode(s, field)).collect()
}

pub fn to_json<T: Scalar>(saved: &SavedModel<T>) -> Result<String> {
    let m = &saved.model;
    let file = ModelFile {
        schema_version: SCHEMA_VERSION,
        num_labels: m.feature_map.num_labels(),
        thresholds: m
            .feature_map
            .thresholds()
            .iter()
            .map(|t| ThresholdRecord {
                dimension: t.dimension,
                value: encode(t.value),
            })
            .collect(),
        mu: m.mu.iter().map(|&v| encode(v)).collect(),
        nu: encode(m.nu),
        upper_bound: encode(m.upper_bound),
        lower_bound: m.lower_bound.map(encode),
        lambda: m.estimates.lambda.iter().map(|&v| encode(v)).collect(),
        n: m.estimates.n,
        label_names: saved.label_names.clone(),
        tau: m.estimates.tau.iter().map(|&v| encode(v)).collect(),
        feature_names: saved.feature_names.clone(),
    };
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    Ok(text)
}

pub fn from_json<T: Scalar>(text: &str) -> Result<SavedModel<T>> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let version = value.get("schema_version");
    if version.and_then(serde_json::Value::as_u64) != Some(u64::from(SCHEMA_VERSION)) {
        return Err(Error::SchemaMismatch {
            found: version.map_or_else(|| "missing".to_string(), |v| v.to_string()),
            expected: SCHEMA_VERSION,
        });
    }
    let file: ModelFile = serde_json::from_value(value)?;
    let thresholds = file
        .thresholds
        .iter()
        .map(|t| {
            Ok(ThresholdSpec {
                dimension: t.dimension,
                value: decode(&t.value, "thresholds")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let feature_map = FeatureMap::new(file.num_labels, thresholds);
    let m = feature_map.dim();
    let mu: Vec<T> = decode_all(&file.mu, "mu")?;
    let lambda: Vec<T> = decode_all(&file.lambda, "lambda")?;
    let tau: Vec<T> = if file.tau.is_empty() {
        vec![T::zero(); m]
    } else {
        decode_all(&file.tau, "tau")?
    };
    if mu.len() != m || lambda.len() != m || tau.len() != m {
        return Err(Error::InvalidInput(format!(
            "model vectors do not match the {m} features implied by its thresholds"
        )));
    }
    if file.label_names.len() != file.num_labels {
        return Err(Error::InvalidInput("label_names does not match num_labels".into()));
    }
    let estimates = ExpectationEstimates::from_moments(tau, lambda, file.n, feature_map.feature_ranges())?;
    let model = MrcModel {
        feature_map,
        mu,
        nu: decode(&file.nu, "nu")?,
        upper_bound: decode(&file.upper_bound, "upper_bound")?,
        lower_bound: file
            .lower_bound
            .as_deref()
            .map(|s| decode(s, "lower_bound"))
            .transpose()?,
        estimates,
    };
    Ok(SavedModel {
        model,
        label_names: file.label_names,
        feature_names: file.feature_names,
    })
}

pub fn save_model<T: Scalar, P: AsRef<Path>>(saved: &SavedModel<T>, path: P) -> Result<()> {
    fs::write(path, to_json(saved)?)?;
    Ok(())
}

pub fn load_model<T: Scalar, P: AsRef<Path>>(path: P) -> Result<SavedModel<T>> {
    from_json(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SavedModel<f64> {
        let fm = FeatureMap::new(2, vec![ThresholdSpec { dimension: 0, value: 0.1 + 0.2 }]);
        let est = ExpectationEstimates::from_moments(
            vec![0.5, 1.0 / 3.0, 0.5, 0.1],
            vec![0.25; 4],
            7,
            fm.feature_ranges(),
        )
        .unwrap();
        SavedModel {
            model: MrcModel {
                feature_map: fm,
                mu: vec![-1.0 / 7.0, 0.0, 1e-300, -0.0],
                nu: -0.6,
                upper_bound: 0.2999999999999999,
                lower_bound: None,
                estimates: est,
            },
            label_names: vec!["no".into(), "yes".into()],
            feature_names: vec!["f".into()],
        }
    }

    #[test]
    fn exact_round_trip() {
        let s = sample();
        let back: SavedModel<f64> = from_json(&to_json(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(back.model.lower_bound.is_none());
    }

    #[test]
    fn unknown_version_is_rejected() {
        let text = to_json(&sample()).unwrap().replace("\"schema_version\": 1", "\"schema_version\": 9");
        assert!(matches!(
            from_json::<f64>(&text),
            Err(Error::SchemaMismatch { expected: 1, .. })
        ));
    }
}
