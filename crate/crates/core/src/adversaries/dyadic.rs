//! The multi-stage dyadic adversary over the Lipschitz class.
//!
//! Stage `i` visits the odd multiples of `2^-i` left to right, proposing a
//! perturbation of `±a_i` around the current interpolant, where
//! `a_i = sqrt(ε) (1-ε)^{i/2} / 2^{i+1}`. A proposal is committed only when
//! it stays within `2^-i` of both neighboring values, which keeps every
//! committed function 1-Lipschitz; otherwise the adversary falls back to the
//! interpolant value and the learner learns nothing it can use. A quadratic
//! action budget on the stage's proposal interpolant limits how often the
//! fallback can fire, so at least half of every stage commits and each
//! committed trial costs at least `a_i`.

use crate::arena::{LossParams, Transcript};
use crate::funcrep::{PiecewiseLinear, Smoothness, SmoothnessClass};
use crate::learners::Learner;

use super::{farther_from, scalar_input, scored_budget, Adversary, AdversaryError, Play, Witness};

#[derive(Debug, Clone, Copy)]
pub struct DyadicConfig {
    pub epsilon: f64,
    pub stages: usize,
}

impl DyadicConfig {
    pub fn new(epsilon: f64, stages: usize) -> Result<Self, AdversaryError> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(AdversaryError::InvalidConfig(format!(
                "epsilon must lie in (0, 1/2), got {epsilon}"
            )));
        }
        if stages == 0 {
            return Err(AdversaryError::InvalidConfig(
                "stages must be positive".into(),
            ));
        }
        Ok(DyadicConfig { epsilon, stages })
    }

    /// Perturbation amplitude of stage `i`: `sqrt(ε) (1-ε)^{i/2} / 2^{i+1}`.
    pub fn amplitude(&self, stage: usize) -> f64 {
        let e = self.epsilon;
        e.sqrt() * (1.0 - e).powf(stage as f64 / 2.0) / 2.0f64.powi(stage as i32 + 1)
    }

    /// Quadratic-action budget for the proposal interpolant after `j` trials
    /// of stage `i`: `(ε/4) Σ_{k<i} (1-ε)^k + j ε (1-ε)^i / 2^{i+1}`.
    pub fn aux_action_bound(&self, stage: usize, j: usize) -> f64 {
        let e = self.epsilon;
        let geo: f64 = (0..stage).map(|k| (1.0 - e).powi(k as i32)).sum();
        e / 4.0 * geo + j as f64 * e * (1.0 - e).powi(stage as i32) / 2.0f64.powi(stage as i32 + 1)
    }
}

/// Per-trial audit record: the proposal interpolant's quadratic action and
/// the closed-form budget it must stay under.
#[derive(Debug, Clone, Copy)]
pub struct StageTrace {
    pub stage: usize,
    pub trial_in_stage: usize,
    pub aux_action: f64,
    pub aux_bound: f64,
}

#[derive(Debug, Clone)]
pub struct DyadicOutcome {
    pub play: Play,
    /// Committed-trial count per stage (1-indexed stages, entry 0 = stage 1).
    pub per_stage_commits: Vec<usize>,
    pub trace: Vec<StageTrace>,
}

#[derive(Debug, Clone, Copy)]
pub struct Dyadic {
    cfg: DyadicConfig,
}

impl Dyadic {
    pub fn new(cfg: DyadicConfig) -> Self {
        Dyadic { cfg }
    }

    pub fn config(&self) -> &DyadicConfig {
        &self.cfg
    }

    pub fn play_detailed(
        &self,
        learner: &mut dyn Learner<f64>,
        params: &LossParams,
    ) -> DyadicOutcome {
        let cfg = self.cfg;
        let budget = scored_budget(params);
        let mut tr = Transcript::new(params.clone());
        let mut commits = Vec::with_capacity(cfg.stages);
        let mut trace = Vec::new();

        // f_t: interpolant of {(0,0), (1,0)} plus all committed pairs
        let mut f = PiecewiseLinear::from_pairs([(0.0, 0.0), (1.0, 0.0)]).unwrap();

        let yhat0 = learner.predict(&1.0);
        tr.push(scalar_input(1.0), yhat0, 0.0);
        learner.observe(&1.0, 0.0).expect("fresh input");

        let mut scored = 0usize;
        'stages: for stage in 1..=cfg.stages {
            let amplitude = cfg.amplitude(stage);
            let tolerance = 2.0f64.powi(-(stage as i32));
            // proposal interpolant for this stage, seeded from the committed one
            let mut g = f.clone();
            let mut stage_commits = 0usize;
            let trials = 1usize << (stage - 1);
            for j in 0..trials {
                if scored >= budget {
                    commits.push(stage_commits);
                    break 'stages;
                }
                let x = (2 * j + 1) as f64 / (1u64 << stage) as f64;
                let yhat = learner.predict(&x);
                let fx = f.eval(x).expect("dyadic inputs lie in [0,1]");
                let proposal = farther_from(yhat, fx - amplitude, fx + amplitude);

                // nearest previously revealed inputs (plus the 0/1 anchors)
                let (left, right) = neighbors(&f, x);
                let committed = (proposal - f.eval(left).unwrap()).abs() <= tolerance
                    && (proposal - f.eval(right).unwrap()).abs() <= tolerance;
                let y = if committed {
                    stage_commits += 1;
                    proposal
                } else {
                    fx
                };

                tr.push(scalar_input(x), yhat, y);
                learner.observe(&x, y).expect("dyadic inputs are distinct");
                scored += 1;

                g = g.insert(x, proposal).expect("fresh input");
                f = f.insert(x, y).expect("fresh input");
                trace.push(StageTrace {
                    stage,
                    trial_in_stage: j + 1,
                    aux_action: g.action(2.0),
                    aux_bound: cfg.aux_action_bound(stage, j + 1),
                });
            }
            if commits.len() < stage {
                commits.push(stage_commits);
            }
        }

        DyadicOutcome {
            play: Play {
                transcript: tr,
                witness: Witness::Interpolant { f },
                class: SmoothnessClass::univariate(Smoothness::Infinite),
            },
            per_stage_commits: commits,
            trace,
        }
    }
}

/// Nearest base inputs strictly left and right of `x`; the `{0,1}` anchors
/// are part of the base so both always exist.
fn neighbors(f: &PiecewiseLinear, x: f64) -> (f64, f64) {
    let mut left = f64::NEG_INFINITY;
    let mut right = f64::INFINITY;
    for &(u, _) in f.base().points() {
        if u < x && u > left {
            left = u;
        }
        if u > x && u < right {
            right = u;
        }
    }
    (left, right)
}

impl Adversary<f64> for Dyadic {
    fn play(&self, learner: &mut dyn Learner<f64>, params: &LossParams) -> Play {
        self.play_detailed(learner, params).play
    }
}
