//! Experiment configuration: names, parameters, seeds.
//!
//! A config can come from CLI flags, a JSON file mirroring them, or both
//! (flags win). The seed fully determines every random choice downstream.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use smoothlearn::funcrep::Smoothness;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown experiment {0:?}; known: {known}", known = EXPERIMENTS.join(", "))]
    UnknownExperiment(String),
    #[error("field {field}: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
    #[error("config file: {0}")]
    File(String),
}

pub const EXPERIMENTS: &[&str] = &[
    "twopoint",
    "pqlow",
    "sandwich2q",
    "holder",
    "pq_exact",
    "dyadic",
    "grid",
    "nnupper",
    "boundedm",
    "dlower",
    "exp",
];

pub const SCALAR_LEARNERS: &[&str] = &["linint", "zero", "random", "midpoint"];
pub const MULTI_LEARNERS: &[&str] = &["nn", "linint", "zero", "random"];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub q: Option<Smoothness>,
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub stages: Option<usize>,
    #[serde(default)]
    pub learner: Option<String>,
    #[serde(default)]
    pub adversary: Option<String>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub transcripts: bool,
}

fn default_seed() -> u64 {
    0
}

fn default_replicates() -> usize {
    1
}

impl ExperimentConfig {
    pub fn new(experiment: impl Into<String>) -> Self {
        ExperimentConfig {
            experiment: experiment.into(),
            p: None,
            q: None,
            d: None,
            m: None,
            epsilon: None,
            n: None,
            stages: None,
            learner: None,
            adversary: None,
            seed: default_seed(),
            replicates: default_replicates(),
            out: None,
            transcripts: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::File(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !EXPERIMENTS.contains(&self.experiment.as_str()) {
            return Err(ConfigError::UnknownExperiment(self.experiment.clone()));
        }
        if self.replicates == 0 {
            return Err(ConfigError::Invalid {
                field: "replicates",
                message: "must be positive".into(),
            });
        }
        if let Some(p) = self.p {
            if !(p > 0.0) {
                return Err(ConfigError::Invalid {
                    field: "p",
                    message: "must be positive".into(),
                });
            }
        }
        if let Some(Smoothness::Finite(q)) = self.q {
            if !(q >= 1.0) {
                return Err(ConfigError::Invalid {
                    field: "q",
                    message: "must be >= 1".into(),
                });
            }
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0 && e < 1.0) {
                return Err(ConfigError::Invalid {
                    field: "epsilon",
                    message: "must lie in (0,1)".into(),
                });
            }
        }
        if let Some(learner) = &self.learner {
            if !SCALAR_LEARNERS.contains(&learner.as_str())
                && !MULTI_LEARNERS.contains(&learner.as_str())
            {
                return Err(ConfigError::Invalid {
                    field: "learner",
                    message: format!("unknown learner {learner:?}"),
                });
            }
        }
        if let Some(adv) = &self.adversary {
            let known = matches!(
                adv.as_str(),
                "twopoint" | "binsplit" | "dyadic" | "grid" | "exp"
            ) || adv
                .strip_prefix("lift:")
                .is_some_and(|inner| matches!(inner, "twopoint" | "binsplit"));
            if !known {
                return Err(ConfigError::Invalid {
                    field: "adversary",
                    message: format!(
                        "unknown adversary {adv:?}; known: twopoint, binsplit, dyadic, grid, exp, lift:<twopoint|binsplit>"
                    ),
                });
            }
        }
        Ok(())
    }

    /// Seed for replicate `r`, derived so replicates never share streams.
    pub fn replicate_seed(&self, r: usize) -> u64 {
        self.seed
            .wrapping_add((r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

/// Parses "inf" or a float as a smoothness exponent.
pub fn parse_smoothness(text: &str) -> Result<Smoothness, String> {
    if text.eq_ignore_ascii_case("inf") || text == "∞" {
        Ok(Smoothness::Infinite)
    } else {
        text.parse::<f64>()
            .map(Smoothness::Finite)
            .map_err(|e| format!("{e}"))
    }
}
