//! The exponential-family adversary.
//!
//! Both candidate targets are exponentials `e^{ax+b}` through the same
//! anchor value at 0, one increasing with derivative range `[1-ε, 1]` and
//! one decreasing with range `[-1, -1+ϱ]` where `ϱ = 1 - (1-ε)^{1/(1-ε)}`.
//! After anchoring, the adversary reveals whichever value at 1 is farther
//! from the guess; the two candidates straddle a gap that tends to 2 as
//! ε → 0, so the forced error approaches 1.

use serde::{Deserialize, Serialize};

use crate::arena::{LossParams, Transcript};
use crate::funcrep::SmoothnessClass;
use crate::learners::{Constant, Learner};

use super::{scalar_input, scored_budget, Adversary, AdversaryError, Play, Witness};

#[derive(Debug, Clone, Copy)]
pub struct ExpAdversaryConfig {
    pub epsilon: f64,
    pub rho: f64,
}

impl ExpAdversaryConfig {
    pub fn new(epsilon: f64) -> Result<Self, AdversaryError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(AdversaryError::InvalidConfig(format!(
                "epsilon must lie in (0,1), got {epsilon}"
            )));
        }
        let rho = 1.0 - (1.0 - epsilon).powf(1.0 / (1.0 - epsilon));
        Ok(ExpAdversaryConfig { epsilon, rho })
    }

    /// The anchor value revealed at 0: `-(1-ε)/ln(1-ε)`.
    pub fn anchor(&self) -> f64 {
        -(1.0 - self.epsilon) / (1.0 - self.epsilon).ln()
    }

    /// Candidate values at 1, `(increasing, decreasing)` branch.
    pub fn candidates(&self) -> (f64, f64) {
        let up = -1.0 / (1.0 - self.epsilon).ln();
        let down = -(1.0 - self.rho) / (1.0 - self.rho).ln();
        (up, down)
    }

    pub fn gap(&self) -> f64 {
        let (up, down) = self.candidates();
        up - down
    }

    /// Exponent parameters `(a, b)` of the chosen branch's `e^{ax+b}`.
    pub fn branch_params(&self, branch: ExpBranch) -> (f64, f64) {
        match branch {
            ExpBranch::Increasing => {
                let a = -(1.0 - self.epsilon).ln();
                let b = (1.0 - self.epsilon).ln() - (-(1.0 - self.epsilon).ln()).ln();
                (a, b)
            }
            ExpBranch::Decreasing => {
                let a = (1.0 - self.rho).ln();
                let b = -(-(1.0 - self.rho).ln()).ln();
                (a, b)
            }
        }
    }

    /// The guess-minimizing opponent: always the midpoint of the two
    /// candidate values, which caps the trial-1 error at exactly gap/2.
    pub fn midpoint_learner(&self) -> Constant {
        let (up, down) = self.candidates();
        Constant::new((up + down) / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpBranch {
    Increasing,
    Decreasing,
}

/// Witness exponential: the chosen branch plus both candidate parameter
/// pairs so derivative ranges can be audited.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpWitness {
    pub epsilon: f64,
    pub rho: f64,
    pub chosen: ExpBranch,
    pub increasing: (f64, f64),
    pub decreasing: (f64, f64),
}

impl ExpWitness {
    fn params_of(&self, branch: ExpBranch) -> (f64, f64) {
        match branch {
            ExpBranch::Increasing => self.increasing,
            ExpBranch::Decreasing => self.decreasing,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let (a, b) = self.params_of(self.chosen);
        (a * x + b).exp()
    }

    pub fn derivative(&self, branch: ExpBranch, x: f64) -> f64 {
        let (a, b) = self.params_of(branch);
        a * (a * x + b).exp()
    }

    /// Both branches must keep their derivative ranges: `[1-ε, 1]` for the
    /// increasing branch, `[-1, -1+ϱ]` for the decreasing one.
    pub fn check_derivative_ranges(&self, samples: usize) -> Result<(), String> {
        let tol = 1e-9;
        for s in 0..=samples {
            let x = s as f64 / samples as f64;
            let up = self.derivative(ExpBranch::Increasing, x);
            if up < 1.0 - self.epsilon - tol || up > 1.0 + tol {
                return Err(format!(
                    "increasing branch derivative {up} at {x} escapes [{}, 1]",
                    1.0 - self.epsilon
                ));
            }
            let down = self.derivative(ExpBranch::Decreasing, x);
            if down < -1.0 - tol || down > -1.0 + self.rho + tol {
                return Err(format!(
                    "decreasing branch derivative {down} at {x} escapes [-1, {}]",
                    -1.0 + self.rho
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ExpFamily {
    cfg: ExpAdversaryConfig,
}

impl ExpFamily {
    pub fn new(cfg: ExpAdversaryConfig) -> Self {
        ExpFamily { cfg }
    }

    pub fn config(&self) -> &ExpAdversaryConfig {
        &self.cfg
    }
}

impl Adversary<f64> for ExpFamily {
    fn play(&self, learner: &mut dyn Learner<f64>, params: &LossParams) -> Play {
        let cfg = self.cfg;
        let budget = scored_budget(params);
        let mut tr = Transcript::new(params.clone());

        let anchor = cfg.anchor();
        let yhat0 = learner.predict(&0.0);
        tr.push(scalar_input(0.0), yhat0, anchor);
        learner.observe(&0.0, anchor).expect("fresh input");

        let (up, down) = cfg.candidates();
        let mut chosen = ExpBranch::Increasing;
        if budget >= 1 {
            let yhat1 = learner.predict(&1.0);
            let y = super::farther_from(yhat1, down, up);
            chosen = if y == up {
                ExpBranch::Increasing
            } else {
                ExpBranch::Decreasing
            };
            tr.push(scalar_input(1.0), yhat1, y);
            learner.observe(&1.0, y).expect("fresh input");
        }

        let witness = ExpWitness {
            epsilon: cfg.epsilon,
            rho: cfg.rho,
            chosen,
            increasing: cfg.branch_params(ExpBranch::Increasing),
            decreasing: cfg.branch_params(ExpBranch::Decreasing),
        };
        Play {
            transcript: tr,
            witness: Witness::Exponential(witness),
            class: SmoothnessClass::univariate(params.q),
        }
    }
}
