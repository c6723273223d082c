//! Adversary strategies and the witness functions that certify them.
//!
//! Every adversary drives the same protocol: it chooses inputs, hears the
//! learner's guess, and reveals a value chosen to hurt. When the game ends
//! it hands back a witness, a member of the advertised smoothness class
//! consistent with everything it revealed, so a play can be audited.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arena::{LossParams, Transcript, TrialInput};
use crate::funcrep::{PiecewiseLinear, Smoothness, SmoothnessClass};
use crate::learners::{Learner, MultiPoint};

mod binsplit;
mod dyadic;
mod exp;
mod grid;
mod lift;
mod twopoint;

pub use binsplit::{BinarySplit, BinarySplitConfig};
pub use dyadic::{Dyadic, DyadicConfig, DyadicOutcome, StageTrace};
pub use exp::{ExpAdversaryConfig, ExpBranch, ExpFamily, ExpWitness};
pub use grid::{GridAdversary, GridConfig, SignGrid};
pub use lift::{Lift, TensorSum};
pub use twopoint::TwoPoint;

#[derive(Debug, Error, PartialEq)]
pub enum AdversaryError {
    #[error("invalid adversary parameter: {0}")]
    InvalidConfig(String),
}

/// Result of one full game: the transcript, the consistent witness, and the
/// class the adversary claims the witness belongs to.
#[derive(Debug, Clone)]
pub struct Play {
    pub transcript: Transcript,
    pub witness: Witness,
    pub class: SmoothnessClass,
}

/// An adversary strategy over input type `X`. A play is self-contained and
/// strictly sequential; independent plays may run in parallel.
pub trait Adversary<X> {
    fn play(&self, learner: &mut dyn Learner<X>, params: &LossParams) -> Play;
}

/// Picks whichever of `lo`/`hi` is farther from `guess`; ties go to the
/// larger candidate.
pub(crate) fn farther_from(guess: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    if (guess - hi).abs() >= (guess - lo).abs() {
        hi
    } else {
        lo
    }
}

pub(crate) fn scored_budget(params: &LossParams) -> usize {
    params.m.unwrap_or(usize::MAX)
}

/// A function certifying that an adversary's reveals were consistent with
/// its advertised class.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Univariate piecewise-linear interpolant.
    Interpolant { f: PiecewiseLinear },
    /// Sign-per-cell sawtooth over `[0,1]^d`.
    SignGrid(SignGrid),
    /// Sum of univariate components, one per axis.
    TensorSum(TensorSum),
    /// Exponential `e^{ax+b}`, one of two candidate branches.
    Exponential(ExpWitness),
}

impl Witness {
    /// Witness value at a transcript input.
    pub fn value(&self, x: &TrialInput) -> f64 {
        match (self, x) {
            (Witness::Interpolant { f }, TrialInput::Scalar(x)) => {
                f.eval(*x).expect("transcript inputs lie in [0,1]")
            }
            (Witness::Exponential(w), TrialInput::Scalar(x)) => w.value(*x),
            (Witness::SignGrid(g), TrialInput::Point(p)) => g.value(p),
            (Witness::TensorSum(t), TrialInput::Point(p)) => t.value(p),
            _ => panic!("witness dimensionality does not match transcript input"),
        }
    }

    /// Checks the witness reproduces every revealed value.
    pub fn check_consistency(&self, tr: &Transcript) -> Result<(), String> {
        for trial in tr.trials() {
            let w = self.value(&trial.x);
            if (w - trial.y).abs() > 1e-9 * (1.0 + trial.y.abs()) {
                return Err(format!(
                    "witness value {w} disagrees with revealed {} at trial {}",
                    trial.y, trial.t
                ));
            }
        }
        Ok(())
    }

    /// Checks class membership: exact action/slope computation for
    /// univariate witnesses, per-axis sampling on a 10^3 grid otherwise.
    pub fn check_class(&self, cls: &SmoothnessClass) -> Result<(), String> {
        match self {
            Witness::Interpolant { f } => {
                let uni = SmoothnessClass::univariate(cls.q);
                if f.in_class(&uni) {
                    Ok(())
                } else {
                    Err(format!(
                        "interpolant witness outside F_{} (action {}, max slope {})",
                        cls.q,
                        match cls.q {
                            Smoothness::Finite(q) => f.action(q),
                            Smoothness::Infinite => f64::NAN,
                        },
                        f.max_slope()
                    ))
                }
            }
            Witness::SignGrid(g) => {
                let quot = g.max_sampled_axis_quotient(1000);
                if quot <= 1.0 + 1e-9 {
                    Ok(())
                } else {
                    Err(format!(
                        "sign-grid witness has sampled axis quotient {quot} > 1"
                    ))
                }
            }
            Witness::TensorSum(t) => {
                if t.sections_in_class(cls.q) {
                    Ok(())
                } else {
                    Err("tensor-sum witness has an axis section outside the class".into())
                }
            }
            Witness::Exponential(w) => w.check_derivative_ranges(1000),
        }
    }
}

pub(crate) fn scalar_input(x: f64) -> TrialInput {
    TrialInput::Scalar(x)
}

pub(crate) fn point_input(p: &MultiPoint) -> TrialInput {
    TrialInput::Point(p.clone())
}
