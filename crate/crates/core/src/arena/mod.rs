//! Protocol driver and loss accounting.
//!
//! A game is a sequence of trials: the learner sees an input, guesses, then
//! hears the true value. Trial 0 is a freebie: it is recorded but never
//! scored. The arena runs learner-vs-fixed-target and learner-vs-adversary
//! games, scores transcripts under any error exponent, and computes the
//! nearest-previous-input diagnostics that drive the Hölder-style ceilings.

pub mod gen;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversaries::{Adversary, Play, Witness};
use crate::funcrep::{PiecewiseLinear, Smoothness, SmoothnessClass};
use crate::learners::{Learner, MultiPoint};

#[derive(Debug, Error, PartialEq)]
pub enum ArenaError {
    #[error("target is not a member of the declared class {0:?}")]
    ClassViolation(SmoothnessClass),
    #[error("invalid inputs: {0}")]
    InvalidInputs(String),
    #[error("diagnostics are defined for univariate transcripts only")]
    MultivariateDiagnostics,
}

/// Loss parameters: error exponent `p`, class exponent `q`, dimension `d`,
/// optional budget `m` of scored trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossParams {
    pub p: f64,
    pub q: Smoothness,
    pub d: usize,
    pub m: Option<usize>,
}

impl LossParams {
    pub fn new(p: f64, q: Smoothness, d: usize, m: Option<usize>) -> Self {
        assert!(p > 0.0, "error exponent must be positive");
        assert!(d >= 1);
        LossParams { p, q, d, m }
    }

    pub fn class(&self) -> SmoothnessClass {
        SmoothnessClass::new(self.q, self.d)
    }
}

/// A trial input: a scalar for univariate games, a point for multivariate
/// ones. Serializes as a bare number or an array of coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TrialInput {
    Scalar(f64),
    Point(MultiPoint),
}

impl TrialInput {
    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            TrialInput::Scalar(x) => Some(*x),
            TrialInput::Point(_) => None,
        }
    }
}

impl From<f64> for TrialInput {
    fn from(x: f64) -> Self {
        TrialInput::Scalar(x)
    }
}

impl From<MultiPoint> for TrialInput {
    fn from(p: MultiPoint) -> Self {
        TrialInput::Point(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub t: usize,
    pub x: TrialInput,
    pub yhat: f64,
    pub y: f64,
    pub e: f64,
}

/// Full record of one game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub params: LossParams,
    trials: Vec<Trial>,
}

impl Transcript {
    pub fn new(params: LossParams) -> Self {
        Transcript {
            params,
            trials: Vec::new(),
        }
    }

    pub fn push(&mut self, x: TrialInput, yhat: f64, y: f64) {
        let t = self.trials.len();
        self.trials.push(Trial {
            t,
            x,
            yhat,
            y,
            e: (yhat - y).abs(),
        });
    }

    pub fn trials(&self) -> &[Trial] {
        &self.trials
    }

    /// The scored trials, i.e. everything past trial 0.
    pub fn scored(&self) -> &[Trial] {
        if self.trials.is_empty() {
            &[]
        } else {
            &self.trials[1..]
        }
    }

    /// Total p-error `Σ_{t>=1} e_t^p`.
    pub fn total_loss(&self, p: f64) -> f64 {
        assert!(p > 0.0, "error exponent must be positive");
        self.scored().iter().map(|t| t.e.powf(p)).sum()
    }

    /// JSON object with params, trials, and the total under the transcript's
    /// own exponent: `{"params": …, "trials": […], "totals": {"p": v}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut totals = serde_json::Map::new();
        totals.insert(
            format!("{}", self.params.p),
            serde_json::json!(self.total_loss(self.params.p)),
        );
        serde_json::json!({
            "params": self.params,
            "trials": self.trials,
            "totals": serde_json::Value::Object(totals),
        })
    }
}

/// Shorthand for [`Transcript::total_loss`].
pub fn total_loss(tr: &Transcript, p: f64) -> f64 {
    tr.total_loss(p)
}

/// Nearest-previous-input diagnostics of a univariate transcript.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// `d_i = min_{j<i} |x_j - x_i|` for each scored trial.
    pub d_list: Vec<f64>,
    /// `Σ e_i^2 / d_i`.
    pub ratio_sum: f64,
    /// `Σ d_i^x` for each requested exponent `x`.
    pub power_sums: Vec<(f64, f64)>,
}

pub fn diagnostics(tr: &Transcript, exponents: &[f64]) -> Result<Diagnostics, ArenaError> {
    let mut xs: Vec<f64> = Vec::with_capacity(tr.trials().len());
    let mut d_list = Vec::new();
    let mut ratio_sum = 0.0;
    for trial in tr.trials() {
        let x = trial
            .x
            .as_scalar()
            .ok_or(ArenaError::MultivariateDiagnostics)?;
        if trial.t >= 1 {
            let d = xs
                .iter()
                .map(|&prev| (prev - x).abs())
                .fold(f64::INFINITY, f64::min);
            if d <= 0.0 {
                return Err(ArenaError::InvalidInputs("inputs must be distinct".into()));
            }
            d_list.push(d);
            ratio_sum += trial.e * trial.e / d;
        }
        xs.push(x);
    }
    let power_sums = exponents
        .iter()
        .map(|&x| {
            assert!(x > 1.0, "power-sum exponent must exceed 1");
            (x, d_list.iter().map(|d| d.powf(x)).sum())
        })
        .collect();
    Ok(Diagnostics {
        d_list,
        ratio_sum,
        power_sums,
    })
}

/// A fixed target the arena can play against: evaluation plus a class
/// membership check run before the game starts.
pub trait Target<X> {
    fn value(&self, x: &X) -> f64;
    fn in_declared_class(&self, cls: &SmoothnessClass) -> bool;
}

impl Target<f64> for PiecewiseLinear {
    fn value(&self, x: &f64) -> f64 {
        self.eval(*x).expect("inputs lie in [0,1]")
    }

    fn in_declared_class(&self, cls: &SmoothnessClass) -> bool {
        self.in_class(&SmoothnessClass::univariate(cls.q))
    }
}

impl Target<MultiPoint> for crate::adversaries::TensorSum {
    fn value(&self, x: &MultiPoint) -> f64 {
        crate::adversaries::TensorSum::value(self, x)
    }

    fn in_declared_class(&self, cls: &SmoothnessClass) -> bool {
        self.sections_in_class(cls.q)
    }
}

/// Plays a fixed-target game: the learner sees `inputs` in order and the
/// target supplies every revealed value. The target's class membership is
/// verified before the first trial.
pub fn play_fixed_target<X, T>(
    learner: &mut dyn Learner<X>,
    target: &T,
    inputs: &[X],
    params: &LossParams,
) -> Result<Transcript, ArenaError>
where
    X: Clone + PartialEq + Into<TrialInput>,
    T: Target<X>,
{
    if !target.in_declared_class(&params.class()) {
        return Err(ArenaError::ClassViolation(params.class()));
    }
    for (i, a) in inputs.iter().enumerate() {
        if inputs[..i].contains(a) {
            return Err(ArenaError::InvalidInputs("inputs must be distinct".into()));
        }
    }
    if let Some(m) = params.m {
        if inputs.len() > m + 1 {
            return Err(ArenaError::InvalidInputs(format!(
                "budget m={m} admits at most {} inputs, got {}",
                m + 1,
                inputs.len()
            )));
        }
    }
    let mut tr = Transcript::new(params.clone());
    for x in inputs {
        let yhat = learner.predict(x);
        let y = target.value(x);
        tr.push(x.clone().into(), yhat, y);
        learner
            .observe(x, y)
            .expect("inputs are distinct and targets are single-valued");
    }
    Ok(tr)
}

/// Plays a full adversary game and audits the outcome: the witness must
/// reproduce every revealed value and belong to the advertised class.
/// An inconsistent adversary is a bug, so the audit is a hard assertion.
pub fn play_adversary<X>(
    learner: &mut dyn Learner<X>,
    adversary: &dyn Adversary<X>,
    params: &LossParams,
) -> (Transcript, Witness) {
    let Play {
        transcript,
        witness,
        class,
    } = adversary.play(learner, params);
    if let Err(e) = witness.check_consistency(&transcript) {
        panic!("adversary emitted an inconsistent witness: {e}");
    }
    if let Err(e) = witness.check_class(&class) {
        panic!("adversary witness escaped its class: {e}");
    }
    (transcript, witness)
}

/// Least-squares slope of `ln(y)` against `ln(x)`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    assert!(points.len() >= 2);
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let var: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    cov / var
}
