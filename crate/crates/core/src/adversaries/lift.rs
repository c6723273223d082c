//! Tensor-sum lift of a single-variable adversary to `[0,1]^d`.
//!
//! The lifted adversary plays only diagonal inputs `x·(1,…,1)` and scales
//! every reveal by `d`. A learner facing it implicitly plays the inner game
//! at guesses `ŷ/d`, so its errors (and hence the guaranteed floor) pick
//! up a factor `d` per trial (`d^p` in total). The witness is the tensor
//! sum `γ(a_1,…,a_d) = Σ f(a_i)` of the inner witness, whose axis sections
//! inherit the inner class membership.

use serde::{Deserialize, Serialize};

use crate::arena::{LossParams, Transcript, TrialInput};
use crate::funcrep::{PiecewiseLinear, Smoothness, SmoothnessClass, CLASS_TOL};
use crate::learners::{Learner, LearnerError, MultiPoint};

use super::{Adversary, Play, Witness};

/// `γ(x) = scale · Σ_i f_i(x_i)` for univariate piecewise-linear components.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorSum {
    components: Vec<PiecewiseLinear>,
    scale: f64,
}

impl TensorSum {
    pub fn new(components: Vec<PiecewiseLinear>, scale: f64) -> Self {
        assert!(!components.is_empty());
        TensorSum { components, scale }
    }

    /// The same component on every axis, unscaled.
    pub fn uniform(f: PiecewiseLinear, d: usize) -> Self {
        TensorSum {
            components: vec![f; d],
            scale: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[PiecewiseLinear] {
        &self.components
    }

    pub fn value(&self, x: &MultiPoint) -> f64 {
        assert_eq!(x.dim(), self.components.len());
        self.scale
            * x.coords()
                .iter()
                .zip(&self.components)
                .map(|(&c, f)| f.eval(c).expect("coordinates lie in [0,1]"))
                .sum::<f64>()
    }

    /// Every axis section is the scaled component plus a constant, so the
    /// membership check reduces to the components themselves.
    pub fn sections_in_class(&self, q: Smoothness) -> bool {
        self.components.iter().all(|f| match q {
            Smoothness::Finite(q) => self.scale.abs().powf(q) * f.action(q) <= 1.0 + CLASS_TOL,
            Smoothness::Infinite => self.scale.abs() * f.max_slope() <= 1.0 + CLASS_TOL,
        })
    }
}

pub struct Lift<A> {
    inner: A,
    d: usize,
}

impl<A> Lift<A> {
    pub fn new(inner: A, d: usize) -> Self {
        assert!(d >= 1);
        Lift { inner, d }
    }
}

/// Presents the multivariate learner to the inner adversary as a
/// single-variable learner, recording the outer trials as they happen.
struct DiagonalBridge<'a> {
    outer: &'a mut dyn Learner<MultiPoint>,
    d: usize,
    pending: Option<(MultiPoint, f64)>,
    trials: Vec<(MultiPoint, f64, f64)>,
}

impl Learner<f64> for DiagonalBridge<'_> {
    fn predict(&mut self, x: &f64) -> f64 {
        let point = MultiPoint::diagonal(*x, self.d).expect("inner inputs lie in [0,1]");
        let yhat = self.outer.predict(&point);
        self.pending = Some((point, yhat));
        yhat / self.d as f64
    }

    fn observe(&mut self, x: &f64, w: f64) -> Result<(), LearnerError> {
        let (point, yhat) = self.pending.take().expect("observe follows predict");
        debug_assert_eq!(point.coords()[0], *x);
        let y = self.d as f64 * w;
        self.outer.observe(&point, y)?;
        self.trials.push((point, yhat, y));
        Ok(())
    }
}

impl<A: Adversary<f64>> Adversary<MultiPoint> for Lift<A> {
    fn play(&self, learner: &mut dyn Learner<MultiPoint>, params: &LossParams) -> Play {
        let inner_params = LossParams::new(params.p, params.q, 1, params.m);
        let mut bridge = DiagonalBridge {
            outer: learner,
            d: self.d,
            pending: None,
            trials: Vec::new(),
        };
        let inner_play = self.inner.play(&mut bridge, &inner_params);

        let mut tr = Transcript::new(params.clone());
        for (point, yhat, y) in bridge.trials {
            tr.push(TrialInput::Point(point), yhat, y);
        }

        let witness = match inner_play.witness {
            Witness::Interpolant { f } => Witness::TensorSum(TensorSum::uniform(f, self.d)),
            other => panic!(
                "lift requires an interpolant witness from the inner adversary, got {other:?}"
            ),
        };
        Play {
            transcript: tr,
            witness,
            class: SmoothnessClass::new(params.q, self.d),
        }
    }
}
