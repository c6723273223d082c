//! The two-trial adversary: reveal 0 at the origin, then ±1 at the far end,
//! whichever the learner's guess is farther from. Consistent with one of
//! `f(x) = x` or `f(x) = -x`, which lie in every smoothness class, and
//! forces a first scored error of at least 1.

use crate::arena::{LossParams, Transcript};
use crate::funcrep::{PiecewiseLinear, SmoothnessClass};
use crate::learners::Learner;

use super::{farther_from, scalar_input, scored_budget, Adversary, Play, Witness};

#[derive(Debug, Clone, Copy, Default)]
pub struct TwoPoint;

impl TwoPoint {
    pub fn new() -> Self {
        TwoPoint
    }

    /// Total p-error any learner concedes.
    pub fn guaranteed_floor(&self) -> f64 {
        1.0
    }
}

impl Adversary<f64> for TwoPoint {
    fn play(&self, learner: &mut dyn Learner<f64>, params: &LossParams) -> Play {
        let budget = scored_budget(params);
        let mut tr = Transcript::new(params.clone());

        let yhat0 = learner.predict(&0.0);
        tr.push(scalar_input(0.0), yhat0, 0.0);
        learner.observe(&0.0, 0.0).expect("fresh input");

        let mut slope = 1.0;
        if budget >= 1 {
            let yhat1 = learner.predict(&1.0);
            let revealed = farther_from(yhat1, -1.0, 1.0);
            slope = revealed;
            tr.push(scalar_input(1.0), yhat1, revealed);
            learner.observe(&1.0, revealed).expect("fresh input");
        }

        let witness =
            PiecewiseLinear::from_pairs([(0.0, 0.0), (1.0, slope)]).expect("distinct inputs");
        Play {
            transcript: tr,
            witness: Witness::Interpolant { f: witness },
            class: SmoothnessClass::univariate(params.q),
        }
    }
}
