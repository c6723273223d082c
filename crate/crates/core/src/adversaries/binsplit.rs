//! The binary-split adversary.
//!
//! After anchoring `f(0) = 0` and revealing `f(1) = ±b` against the guess,
//! it repeatedly queries the midpoint between the rightmost known zero and
//! the leftmost known `±b`, revealing whichever of the two levels is farther
//! from the guess. Each of the `k = ⌊-q log2(b) / (q-1)⌋` midpoint trials
//! costs the learner at least `b/2`, while the final interpolant keeps a
//! single sloped segment of width `2^-k` and action `2^{k(q-1)} b^q <= 1`.

use crate::arena::{LossParams, Transcript};
use crate::funcrep::{PiecewiseLinear, Smoothness, SmoothnessClass};
use crate::learners::Learner;

use super::{farther_from, scalar_input, scored_budget, Adversary, AdversaryError, Play, Witness};

#[derive(Debug, Clone, Copy)]
pub struct BinarySplitConfig {
    pub p: f64,
    pub q: f64,
    pub b: f64,
    pub k: usize,
}

impl BinarySplitConfig {
    /// Default offset `b = e^{-1/p}`, the optimizer of the guaranteed floor.
    pub fn new(p: f64, q: f64) -> Result<Self, AdversaryError> {
        Self::with_offset(p, q, (-1.0 / p).exp())
    }

    pub fn with_offset(p: f64, q: f64, b: f64) -> Result<Self, AdversaryError> {
        if !(p > 1.0) {
            return Err(AdversaryError::InvalidConfig(format!(
                "p must exceed 1, got {p}"
            )));
        }
        if !(q > 1.0 && q < 2.0) {
            return Err(AdversaryError::InvalidConfig(format!(
                "q must lie in (1,2), got {q}"
            )));
        }
        if !(b > 0.0 && b < 1.0) {
            return Err(AdversaryError::InvalidConfig(format!(
                "b must lie in (0,1), got {b}"
            )));
        }
        let k = (-q * b.log2() / (q - 1.0)).floor() as usize;
        let cfg = BinarySplitConfig { p, q, b, k };
        debug_assert!(cfg.witness_action() <= 1.0 + 1e-12);
        Ok(cfg)
    }

    /// Total p-error any learner concedes: `b^p + k (b/2)^p`.
    pub fn guaranteed_floor(&self) -> f64 {
        self.b.powf(self.p) + self.k as f64 * (self.b / 2.0).powf(self.p)
    }

    /// Action of the final interpolant: `2^{k(q-1)} b^q`.
    pub fn witness_action(&self) -> f64 {
        2.0f64.powf(self.k as f64 * (self.q - 1.0)) * self.b.powf(self.q)
    }

    /// The closed-form theorem constant at the default offset:
    /// `q / ((p 2^p e ln 2)(q - 1))`.
    pub fn theorem_constant(p: f64, q: f64) -> f64 {
        q / ((p * 2.0f64.powf(p) * std::f64::consts::E * std::f64::consts::LN_2) * (q - 1.0))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BinarySplit {
    cfg: BinarySplitConfig,
}

impl BinarySplit {
    pub fn new(cfg: BinarySplitConfig) -> Self {
        BinarySplit { cfg }
    }

    pub fn config(&self) -> &BinarySplitConfig {
        &self.cfg
    }
}

impl Adversary<f64> for BinarySplit {
    fn play(&self, learner: &mut dyn Learner<f64>, params: &LossParams) -> Play {
        let cfg = self.cfg;
        let budget = scored_budget(params);
        let mut tr = Transcript::new(params.clone());
        let mut revealed: Vec<(f64, f64)> = Vec::with_capacity(cfg.k + 2);

        let reveal = |learner: &mut dyn Learner<f64>,
                      tr: &mut Transcript,
                      revealed: &mut Vec<(f64, f64)>,
                      x: f64,
                      y: f64,
                      yhat: f64| {
            tr.push(scalar_input(x), yhat, y);
            learner.observe(&x, y).expect("fresh input");
            revealed.push((x, y));
        };

        let yhat0 = learner.predict(&0.0);
        reveal(learner, &mut tr, &mut revealed, 0.0, 0.0, yhat0);

        if budget >= 1 {
            // the level is +b or -b, whichever the learner's guess misses by b
            let yhat1 = learner.predict(&1.0);
            let level = farther_from(yhat1, -cfg.b, cfg.b);
            reveal(learner, &mut tr, &mut revealed, 1.0, level, yhat1);

            // rightmost input revealed at 0, leftmost revealed at the level
            let mut left = 0.0f64;
            let mut right = 1.0f64;
            for trial in 0..cfg.k {
                if trial + 2 > budget {
                    break;
                }
                let x = (left + right) / 2.0;
                let yhat = learner.predict(&x);
                let (lo, hi) = if level > 0.0 {
                    (0.0, level)
                } else {
                    (level, 0.0)
                };
                let y = farther_from(yhat, lo, hi);
                reveal(learner, &mut tr, &mut revealed, x, y, yhat);
                if y == 0.0 {
                    left = x;
                } else {
                    right = x;
                }
            }
        }

        let witness = PiecewiseLinear::from_pairs(revealed).expect("midpoints are fresh");
        Play {
            transcript: tr,
            witness: Witness::Interpolant { f: witness },
            class: SmoothnessClass::univariate(Smoothness::Finite(cfg.q)),
        }
    }
}
