use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0} must be strictly positive, got {1}")]
    NonPositiveGamma(&'static str, f64),
    #[error("{0} must be a non-negative finite number, got {1}")]
    Negative(&'static str, f64),
    #[error("f1_empty_empty must lie in [0, 1], got {0}")]
    EmptyEmptyRange(f64),
    #[error("failed to read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NerWeights {
    pub w_t: f64,
    pub w_p: f64,
    pub gamma: f64,
    pub lambda_t: f64,
    pub lambda_p: f64,
}

impl Default for NerWeights {
    fn default() -> Self {
        Self {
            w_t: 0.2,
            w_p: 0.8,
            gamma: 1.5,
            lambda_t: 0.6,
            lambda_p: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReWeights {
    pub w_t: f64,
    pub w_h: f64,
    pub w_a: f64,
    pub w_r: f64,
    pub gamma: f64,
    pub lambda_t: f64,
    pub lambda_r: f64,
}

impl Default for ReWeights {
    fn default() -> Self {
        Self {
            w_t: 0.05,
            w_h: 0.10,
            w_a: 0.10,
            w_r: 0.75,
            gamma: 1.3,
            lambda_t: 0.15,
            lambda_r: 0.25,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EeWeights {
    #[serde(rename = "w_E")]
    pub w_event: f64,
    #[serde(rename = "w_T")]
    pub w_trigger: f64,
    #[serde(rename = "w_F")]
    pub w_full: f64,
    pub gamma: f64,
    #[serde(rename = "lambda_E")]
    pub lambda_event: f64,
    #[serde(rename = "lambda_T")]
    pub lambda_trigger: f64,
    #[serde(rename = "lambda_F")]
    pub lambda_full: f64,
}

impl Default for EeWeights {
    fn default() -> Self {
        Self {
            w_event: 0.05,
            w_trigger: 0.15,
            w_full: 0.8,
            gamma: 1.0,
            lambda_event: 1.0,
            lambda_trigger: 0.5,
            lambda_full: 0.3,
        }
    }
}

/// Weights, exponents, penalties and edge-case policies for the rewards.
///
/// `SfrConfig::default()` carries the published hyperparameters. The EE
/// exponent is not published and defaults to the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SfrConfig {
    pub ner: NerWeights,
    pub re: ReWeights,
    pub ee: EeWeights,
    /// Clamp the final total to `[0, 1]`.
    pub clip_to_unit: bool,
    /// Value of F1 when gold and prediction are both empty.
    pub f1_empty_empty: f64,
}

impl Default for SfrConfig {
    fn default() -> Self {
        Self {
            ner: NerWeights::default(),
            re: ReWeights::default(),
            ee: EeWeights::default(),
            clip_to_unit: false,
            f1_empty_empty: 1.0,
        }
    }
}

impl SfrConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, gamma) in [
            ("ner.gamma", self.ner.gamma),
            ("re.gamma", self.re.gamma),
            ("ee.gamma", self.ee.gamma),
        ] {
            if !(gamma > 0.0 && gamma.is_finite()) {
                return Err(ConfigError::NonPositiveGamma(name, gamma));
            }
        }
        let weights = [
            ("ner.w_t", self.ner.w_t),
            ("ner.w_p", self.ner.w_p),
            ("ner.lambda_t", self.ner.lambda_t),
            ("ner.lambda_p", self.ner.lambda_p),
            ("re.w_t", self.re.w_t),
            ("re.w_h", self.re.w_h),
            ("re.w_a", self.re.w_a),
            ("re.w_r", self.re.w_r),
            ("re.lambda_t", self.re.lambda_t),
            ("re.lambda_r", self.re.lambda_r),
            ("ee.w_E", self.ee.w_event),
            ("ee.w_T", self.ee.w_trigger),
            ("ee.w_F", self.ee.w_full),
            ("ee.lambda_E", self.ee.lambda_event),
            ("ee.lambda_T", self.ee.lambda_trigger),
            ("ee.lambda_F", self.ee.lambda_full),
        ];
        for (name, w) in weights {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(ConfigError::Negative(name, w));
            }
        }
        if !(0.0..=1.0).contains(&self.f1_empty_empty) {
            return Err(ConfigError::EmptyEmptyRange(self.f1_empty_empty));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: SfrConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Applies a partial JSON object on top of this config.
    pub fn with_overrides(&self, overrides: &serde_json::Value) -> Result<Self, ConfigError> {
        let mut base = serde_json::to_value(self)?;
        merge(&mut base, overrides);
        let cfg: SfrConfig = serde_json::from_value(base)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn merge(base: &mut serde_json::Value, patch: &serde_json::Value) {
    match (base, patch) {
        (serde_json::Value::Object(b), serde_json::Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (slot, value) => *slot = value.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_published_values() {
        let cfg = SfrConfig::default();
        assert_eq!(
            (cfg.ner.w_t, cfg.ner.w_p, cfg.ner.gamma, cfg.ner.lambda_t, cfg.ner.lambda_p),
            (0.2, 0.8, 1.5, 0.6, 0.2)
        );
        assert_eq!(
            (cfg.re.w_t, cfg.re.w_h, cfg.re.w_a, cfg.re.w_r, cfg.re.gamma, cfg.re.lambda_t, cfg.re.lambda_r),
            (0.05, 0.10, 0.10, 0.75, 1.3, 0.15, 0.25)
        );
        assert_eq!(
            (
                cfg.ee.w_event,
                cfg.ee.w_trigger,
                cfg.ee.w_full,
                cfg.ee.gamma,
                cfg.ee.lambda_event,
                cfg.ee.lambda_trigger,
                cfg.ee.lambda_full
            ),
            (0.05, 0.15, 0.8, 1.0, 1.0, 0.5, 0.3)
        );
        assert!(!cfg.clip_to_unit);
        assert_eq!(cfg.f1_empty_empty, 1.0);
    }

    #[test]
    fn empty_file_reproduces_defaults() {
        assert_eq!(SfrConfig::from_json("{}").unwrap(), SfrConfig::default());
    }

    #[test]
    fn json_layout_uses_symbol_names() {
        let v = serde_json::to_value(SfrConfig::default()).unwrap();
        assert_eq!(v["ee"]["w_E"], 0.05);
        assert_eq!(v["ee"]["lambda_F"], 0.3);
        assert_eq!(v["re"]["w_r"], 0.75);
    }

    #[test]
    fn partial_overrides() {
        let cfg = SfrConfig::default()
            .with_overrides(&serde_json::json!({"clip_to_unit": true, "ner": {"gamma": 2.0}}))
            .unwrap();
        assert!(cfg.clip_to_unit);
        assert_eq!(cfg.ner.gamma, 2.0);
        assert_eq!(cfg.ner.w_p, 0.8);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(
            SfrConfig::from_json(r#"{"ner":{"gamma":0}}"#),
            Err(ConfigError::NonPositiveGamma("ner.gamma", _))
        ));
        assert!(matches!(
            SfrConfig::from_json(r#"{"ee":{"lambda_E":-1}}"#),
            Err(ConfigError::Negative("ee.lambda_E", _))
        ));
        assert!(matches!(
            SfrConfig::from_json(r#"{"f1_empty_empty":2}"#),
            Err(ConfigError::EmptyEmptyRange(_))
        ));
        assert!(SfrConfig::from_json(r#"{"ner":{"w_x":1}}"#).is_err());
    }
}
