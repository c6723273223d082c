//! Named experiments, one per theorem-level empirical check.
//!
//! Every experiment produces one summary row per (parameter point,
//! replicate) carrying the measured loss next to the relevant closed-form
//! floor and/or ceiling, so downstream checks never recompute constants.
//! Floor/ceiling violations are collected rather than panicking; the CLI
//! turns them into a nonzero exit code.

use serde_json::Value;

use smoothlearn::adversaries::{
    Adversary, BinarySplit, BinarySplitConfig, Dyadic, DyadicConfig, ExpAdversaryConfig, ExpFamily,
    GridAdversary, GridConfig, Lift, TwoPoint, Witness,
};
use smoothlearn::arena::{gen, loglog_slope, play_adversary, play_fixed_target, LossParams};
use smoothlearn::bounds::{bound_value, dyadic_series_partial};
use smoothlearn::funcrep::Smoothness;
use smoothlearn::learners::{
    Constant, DiagonalLearner, Learner, LinInt, MultiPoint, NearestNeighbor, RandomGuess,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, ExperimentConfig};

/// One CSV summary row. `floor`/`ceiling` stay empty where the experiment's
/// theorem provides none.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub experiment: String,
    pub p: f64,
    pub q: Smoothness,
    pub d: usize,
    pub m: Option<usize>,
    pub seed: u64,
    pub measured_loss: f64,
    pub floor: Option<f64>,
    pub ceiling: Option<f64>,
}

#[derive(Debug, Default)]
pub struct RunOutput {
    pub rows: Vec<SummaryRow>,
    /// `(file stem, payload)` pairs written when transcripts are requested.
    pub transcripts: Vec<(String, Value)>,
    /// Floor/ceiling violations; nonempty means a failed run.
    pub failures: Vec<String>,
}

impl RunOutput {
    fn record_game(
        &mut self,
        cfg: &ExperimentConfig,
        row: SummaryRow,
        transcript: Option<Value>,
        witness: Option<&Witness>,
    ) {
        if cfg.transcripts {
            let stem = format!("{}_{:04}", row.experiment, self.rows.len());
            if let Some(t) = transcript {
                self.transcripts.push((stem.clone(), t));
            }
            if let Some(w) = witness {
                self.transcripts.push((
                    format!("{stem}.witness"),
                    serde_json::to_value(w).expect("witnesses serialize"),
                ));
            }
        }
        self.rows.push(row);
    }

    fn check_floor(&mut self, row: &SummaryRow, floor: f64, label: &str) {
        if row.measured_loss < floor - 1e-12 {
            self.failures.push(format!(
                "{label}: measured {} below floor {floor}",
                row.measured_loss
            ));
        }
    }

    fn check_ceiling(&mut self, row: &SummaryRow, ceiling: f64, label: &str) {
        if row.measured_loss > ceiling + 1e-9 {
            self.failures.push(format!(
                "{label}: measured {} above ceiling {ceiling}",
                row.measured_loss
            ));
        }
    }
}

fn require_q_in_unit(cfg: &ExperimentConfig, default: f64) -> Result<f64, ConfigError> {
    match cfg.q.unwrap_or(Smoothness::Finite(default)) {
        Smoothness::Finite(q) if q > 1.0 && q < 2.0 => Ok(q),
        other => Err(ConfigError::Invalid {
            field: "q",
            message: format!("this experiment needs finite q in (1,2), got {other}"),
        }),
    }
}

fn scalar_learner(name: &str, seed: u64) -> Result<Box<dyn Learner<f64>>, ConfigError> {
    match name {
        "linint" => Ok(Box::new(LinInt::new())),
        "zero" => Ok(Box::new(Constant::zero())),
        "random" => Ok(Box::new(RandomGuess::unit(seed))),
        other => Err(ConfigError::Invalid {
            field: "learner",
            message: format!("{other:?} is not a single-variable learner here"),
        }),
    }
}

fn multi_learner(name: &str, seed: u64) -> Result<Box<dyn Learner<MultiPoint>>, ConfigError> {
    match name {
        "nn" => Ok(Box::new(NearestNeighbor::new())),
        "linint" => Ok(Box::new(DiagonalLearner::new(LinInt::new()))),
        "zero" => Ok(Box::new(Constant::zero())),
        "random" => Ok(Box::new(RandomGuess::unit(seed))),
        other => Err(ConfigError::Invalid {
            field: "learner",
            message: format!("{other:?} is not a multivariate learner here"),
        }),
    }
}

/// Runs the named experiment, producing rows sorted by parameter point then
/// replicate index (the construction order).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput, ConfigError> {
    cfg.validate()?;
    let mut out = RunOutput::default();
    match cfg.experiment.as_str() {
        "twopoint" => run_twopoint(cfg, &mut out)?,
        "pqlow" => run_pqlow(cfg, &mut out)?,
        "sandwich2q" => run_sandwich2q(cfg, &mut out)?,
        "holder" => run_holder(cfg, &mut out)?,
        "pq_exact" => run_pq_exact(cfg, &mut out)?,
        "dyadic" => run_dyadic(cfg, &mut out)?,
        "grid" => run_grid(cfg, &mut out)?,
        "nnupper" => run_nnupper(cfg, &mut out)?,
        "boundedm" => run_boundedm(cfg, &mut out)?,
        "dlower" => run_dlower(cfg, &mut out)?,
        "exp" => run_exp(cfg, &mut out)?,
        other => return Err(ConfigError::UnknownExperiment(other.into())),
    }
    Ok(out)
}

fn run_twopoint(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), ConfigError> {
    let p = cfg.p.unwrap_or(2.0);
    let q = cfg.q.unwrap_or(Smoothness::Finite(2.0));
    let params = LossParams::new(p, q, 1, cfg.m);
    for r in 0..cfg.replicates {
        let seed = cfg.replicate_seed(r);
        let mut learner = scalar_learner(cfg.learner.as_deref().unwrap_or("linint"), seed)?;
        let (tr, witness) = play_adversary(learner.as_mut(), &TwoPoint::new(), &params);
        let row = SummaryRow {
            experiment: cfg.experiment.clone(),
            p,
            q,
            d: 1,
            m: cfg.m,
            seed,
            measured_loss: tr.total_loss(p),
            floor: Some(1.0),
            ceiling: None,
        };
        if cfg.m.is_none() {
            out.check_floor(&row, 1.0, "twopoint");
        }
        out.record_game(cfg, row, Some(tr.to_json()), Some(&witness));
    }
    Ok(())
}

fn run_pqlow(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), ConfigError> {
    let p = cfg.p.unwrap_or(2.0);
    let q = require_q_in_unit(cfg, 1.5)?;
    let split = BinarySplitConfig::new(p, q).map_err(|e| ConfigError::Invalid {
        field: "p",
        message: e.to_string(),
    })?;
    let adv = BinarySplit::new(split);
    let params = LossParams::new(p, Smoothness::Finite(q), 1, cfg.m);
    let floor = split.guaranteed_floor();
    for r in 0..cfg.replicates {
        let seed = cfg.replicate_seed(r);
        let mut learner = scalar_learner(cfg.learner.as_deref().unwrap_or("linint"), seed)?;
        let (tr, witness) = play_adversary(learner.as_mut(), &adv, &params);
        let row = SummaryRow {
            experiment: cfg.experiment.clone(),
            p,
            q: Smoothness::Finite(q),
            d: 1,
            m: cfg.m,
            seed,
            measured_loss: tr.total_loss(p),
            floor: Some(floor),
            ceiling: None,
        };
        if cfg.m.is_none() {
            out.check_floor(&row, floor, "pqlow");
        }
        out.record_game(cfg, row, Some(tr.to_json()), Some(&witness));
    }
    Ok(())
}

/// Random-target games of the interpolation learner, one row per replicate.
fn interpolation_games(
    cfg: &ExperimentConfig,
    out: &mut RunOutput,
    p: f64,
    q: f64,
    floor: Option<f64>,
    ceiling: f64,
    label: &str,
) -> Result<(), ConfigError> {
    let trials = cfg.m.unwrap_or(200);
    let params = LossParams::new(p, Smoothness::Finite(q), 1, cfg.m);
    for r in 0..cfg.replicates {
        let seed = cfg.replicate_seed(r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = gen::random_target(&mut rng, Smoothness::Finite(q), 12);
        let inputs = gen::uniform_inputs(&mut rng, trials);
        let mut learner = LinInt::new();
        let tr = play_fixed_target(&mut learner, &target, &inputs, &params)
            .expect("generated targets are class members with distinct inputs");
        let row = SummaryRow {
            experiment: cfg.experiment.clone(),
            p,
            q: Smoothness::Finite(q),
            d: 1,
            m: cfg.m,
            seed,
            measured_loss: tr.total_loss(p),
            floor,
            ceiling: Some(ceiling),
        };
        out.check_ceiling(&row, ceiling, label);
        out.record_game(cfg, row, Some(tr.to_json()), None);
    }
    Ok(())
}

fn run_sandwich2q(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), ConfigError> {
    let q = require_q_in_unit(cfg, 1.5)?;
    let pr = LossParams::new(2.0, Smoothness::Finite(q), 1, None);
    let floor = bound_value("2qlow", &pr)
        .expect("q in (1,2)")
        .value
        .as_finite();
    let ceiling = bound_value("2qup", &pr)
        .expect("q in (1,2)")
        .value
        .as_finite()
        .expect("finite ceiling");
    interpolation_games(cfg, out, 2.0, q, floor, ceiling, "sandwich2q")
}

fn run_holder(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), ConfigError> {
    let p = cfg.p.unwrap_or(1.5);
    if !(p > 1.0 && p < 2.0) {
        return Err(ConfigError::Invalid {
            field: "p",
            message: format!("holder needs p in (1,2), got {p}"),
        });
    }
    let pr = LossParams::new(p, Smoothness::Finite(2.0), 1, None);
    let ceiling = bound_value("holder", &pr)
        .expect("p in (1,2)")
        .value
        .as_finite()
        .expect("finite ceiling");
    interpolation_games(cfg, out, p, 2.0, None, ceiling, "holder")
}

fn run_pq_exact(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), ConfigError> {
    let q = require_q_in_unit(cfg, 1.5)?;
    let p = cfg.p.unwrap_or(2.0 + 1.0 / (q - 1.0));
    if p < 2.0 + 1.0 / (q - 1.0) - 1e-12 {
        return Err(ConfigError::Invalid {
            field: "p",
            message: format!(
                "pq_exact needs p >= 2 + 1/(q-1) = {}",
                2.0 + 1.0 / (q - 1.0)
            ),
        });
    }
    interpolation_games(cfg, out, p, q, Some(1.0), 1.0, "pq_exact")
}

fn run_dyadic(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), ConfigError> {
    let epsilon = cfg.epsilon.unwrap_or(0.25);
    let stages = cfg.stages.unwrap_or(10);
    let dyadic_cfg = DyadicConfig::new(epsilon, stages).map_err(|e| ConfigError::Invalid {
        field: "epsilon",
        message: e.to_string(),
    })?;
    let adv = Dyadic::new(dyadic_cfg);
    let p = 1.0 + epsilon;
    let params = LossParams::new(p, Smoothness::Infinite, 1, cfg.m);
    let floor = dyadic_series_partial(epsilon, stages);
    for r in 0..cfg.replicates {
        let seed = cfg.replicate_seed(r);
        let mut learner = scalar_learner(cfg.learner.as_deref().unwrap_or("linint"), seed)?;
        let detailed = adv.play_detailed(learner.as_mut(), &params);
        for (i, &commits) in detailed.per_stage_commits.iter().enumerate() {
            let stage = i + 1;
            if stage >= 2 && cfg.m.is_none() && commits < (1usize << (stage - 2)) {
                out.failures.push(format!(
                    "dyadic: stage {stage} committed only {commits} trials"
                ));
            }
        }
        for t in &detailed.trace {
            if t.aux_action > t.aux_bound + 1e-12 {
                out.failures.push(format!(
                    "dyadic: stage {} trial {} action {} over budget {}",
                    t.stage, t.trial_in_stage, t.aux_action, t.aux_bound
                ));
            }
        }
        let tr = &detailed.play.transcript;
        let row = SummaryRow {
            experiment: cfg.experiment.clone(),
            p,
            q: Smoothness::Infinite,
            d: 1,
            m: cfg.m,
            seed,
            measured_loss: tr.total_loss(p),
            floor: Some(floor),
            ceiling: None,
        };
        if cfg.m.is_none() {
            out.check_floor(&row, floor, "dyadic");
        }
        out.record_game(cfg, row, Some(tr.to_json()), Some(&detailed.play.witness));
    }
    Ok(())
}

fn run_grid(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), ConfigError> {
    let n = cfg.n.unwrap_or(8);
    let d = cfg.d.unwrap_or(2);
    let p = cfg.p.unwrap_or(1.0);
    let grid_cfg = GridConfig::new(n, d, p).map_err(|e| ConfigError::Invalid {
        field: "n",
        message: e.to_string(),
    })?;
    let adv = GridAdversary::new(grid_cfg);
    let params = LossParams::new(p, Smoothness::Infinite, d, cfg.m);
    let floor = grid_cfg.guaranteed_floor();
    for r in 0..cfg.replicates {
        let seed = cfg.replicate_seed(r);
        let mut learner = multi_learner(cfg.learner.as_deref().unwrap_or("nn"), seed)?;
        let (tr, witness) = play_adversary(learner.as_mut(), &adv, &params);
        let row = SummaryRow {
            experiment: cfg.experiment.clone(),
            p,
            q: Smoothness::Infinite,
            d,
            m: cfg.m,
            seed,
            measured_loss: tr.total_loss(p),
            floor: Some(floor),
            ceiling: None,
        };
        if cfg.m.is_none() {
            out.check_floor(&row, floor, "grid");
        }
        out.record_game(cfg, row, Some(tr.to_json()), Some(&witness));
    }
    Ok(())
}

fn run_nnupper(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), ConfigError> {
    let d = cfg.d.unwrap_or(2);
    let p = cfg.p.unwrap_or(3.0);
    let params = LossParams::new(p, Smoothness::Infinite, d, cfg.m);
    let ceiling = bound_value("nnupper", &params)
        .map_err(|e| ConfigError::Invalid {
            field: "p",
            message: e.to_string(),
        })?
        .value
        .as_finite()
        .expect("finite for p > d");
    let trials = cfg.m.unwrap_or(500);
    for r in 0..cfg.replicates {
        let seed = cfg.replicate_seed(r);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = gen::random_tensor_sum(&mut rng, d, 8);
        let inputs = gen::uniform_multipoints(&mut rng, trials, d);
        let mut learner = multi_learner(cfg.learner.as_deref().unwrap_or("nn"), seed)?;
        let tr = play_fixed_target(learner.as_mut(), &target, &inputs, &params)
            .expect("tensor-sum targets are class members");
        let row = SummaryRow {
            experiment: cfg.experiment.clone(),
            p,
            q: Smoothness::Infinite,
            d,
            m: cfg.m,
            seed,
            measured_loss: tr.total_loss(p),
            floor: None,
            ceiling: Some(ceiling),
        };
        if cfg.learner.as_deref().unwrap_or("nn") == "nn" {
            out.check_ceiling(&row, ceiling, "nnupper");
        }
        out.record_game(cfg, row, Some(tr.to_json()), None);
    }
    Ok(())
}

fn run_boundedm(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), ConfigError> {
    let d = cfg.d.unwrap_or(2);
    let p = cfg.p.unwrap_or(1.0);
    if !(p > 0.0 && p < d as f64) {
        return Err(ConfigError::Invalid {
            field: "p",
            message: format!("boundedm needs p in (0, d) = (0, {d})"),
        });
    }
    let budgets: Vec<usize> = match cfg.m {
        Some(m) => vec![m],
        None => vec![16, 64, 256, 1024, 4096],
    };
    let mut floors = Vec::new();
    let mut measured = Vec::new();
    for &m in &budgets {
        let params = LossParams::new(p, Smoothness::Infinite, d, Some(m));
        let floor = bound_value("gridlow", &params)
            .map_err(|e| ConfigError::Invalid {
                field: "m",
                message: e.to_string(),
            })?
            .value
            .as_finite()
            .expect("finite floor");
        let ceiling = bound_value("boundedm_upper", &params)
            .expect("p in (0,d)")
            .value
            .as_finite()
            .expect("finite ceiling");
        let n = smoothlearn::bounds::side_from_budget(m, d);
        let grid_cfg = GridConfig::new(n, d, p).map_err(|e| ConfigError::Invalid {
            field: "m",
            message: e.to_string(),
        })?;
        let adv = GridAdversary::new(grid_cfg);
        for r in 0..cfg.replicates {
            let seed = cfg.replicate_seed(r);
            let mut learner = multi_learner(cfg.learner.as_deref().unwrap_or("nn"), seed)?;
            let (tr, witness) = play_adversary(learner.as_mut(), &adv, &params);
            let row = SummaryRow {
                experiment: cfg.experiment.clone(),
                p,
                q: Smoothness::Infinite,
                d,
                m: Some(m),
                seed,
                measured_loss: tr.total_loss(p),
                floor: Some(floor),
                ceiling: Some(ceiling),
            };
            out.check_floor(&row, floor, "boundedm");
            if r == 0 {
                floors.push((m as f64, floor));
                measured.push((m as f64, row.measured_loss));
            }
            out.record_game(cfg, row, Some(tr.to_json()), Some(&witness));
        }
    }
    if budgets.len() >= 3 {
        let target = 1.0 - p / d as f64;
        let fs = loglog_slope(&floors);
        let ms = loglog_slope(&measured);
        if (fs - target).abs() > 0.1 {
            out.failures.push(format!(
                "boundedm: floor series slope {fs} outside {target} ± 0.1"
            ));
        }
        if (ms - target).abs() > 0.1 {
            out.failures.push(format!(
                "boundedm: measured slope {ms} outside {target} ± 0.1"
            ));
        }
    }
    Ok(())
}

fn run_dlower(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), ConfigError> {
    let d = cfg.d.unwrap_or(2);
    let p = cfg.p.unwrap_or(2.0);
    let adversary = cfg.adversary.as_deref().unwrap_or("lift:twopoint");
    let inner = adversary
        .strip_prefix("lift:")
        .ok_or(ConfigError::Invalid {
            field: "adversary",
            message: format!("dlower needs a lift:<inner> adversary, got {adversary:?}"),
        })?;
    // the advertised class must match the inner adversary's construction
    let (adv, inner_floor, q): (Box<dyn Adversary<MultiPoint>>, f64, Smoothness) = match inner {
        "twopoint" => (
            Box::new(Lift::new(TwoPoint::new(), d)),
            1.0,
            cfg.q.unwrap_or(Smoothness::Finite(2.0)),
        ),
        "binsplit" => {
            let qf = require_q_in_unit(cfg, 1.5)?;
            let split = BinarySplitConfig::new(p, qf).map_err(|e| ConfigError::Invalid {
                field: "p",
                message: e.to_string(),
            })?;
            (
                Box::new(Lift::new(BinarySplit::new(split), d)),
                split.guaranteed_floor(),
                Smoothness::Finite(qf),
            )
        }
        other => {
            return Err(ConfigError::Invalid {
                field: "adversary",
                message: format!("unsupported lift inner adversary {other:?}"),
            })
        }
    };
    let params = LossParams::new(p, q, d, cfg.m);
    let floor = (d as f64).powf(p) * inner_floor;
    for r in 0..cfg.replicates {
        let seed = cfg.replicate_seed(r);
        let mut learner = multi_learner(cfg.learner.as_deref().unwrap_or("linint"), seed)?;
        let (tr, witness) = play_adversary(learner.as_mut(), adv.as_ref(), &params);
        let row = SummaryRow {
            experiment: cfg.experiment.clone(),
            p,
            q,
            d,
            m: cfg.m,
            seed,
            measured_loss: tr.total_loss(p),
            floor: Some(floor),
            ceiling: None,
        };
        if cfg.m.is_none() {
            out.check_floor(&row, floor, "dlower");
        }
        out.record_game(cfg, row, Some(tr.to_json()), Some(&witness));
    }
    Ok(())
}

fn run_exp(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<(), ConfigError> {
    let epsilon = cfg.epsilon.unwrap_or(0.5);
    let p = cfg.p.unwrap_or(2.0);
    let exp_cfg = ExpAdversaryConfig::new(epsilon).map_err(|e| ConfigError::Invalid {
        field: "epsilon",
        message: e.to_string(),
    })?;
    let adv = ExpFamily::new(exp_cfg);
    let params = LossParams::new(p, cfg.q.unwrap_or(Smoothness::Finite(2.0)), 1, cfg.m);
    let floor = (exp_cfg.gap() / 2.0).powf(p);
    for r in 0..cfg.replicates {
        let seed = cfg.replicate_seed(r);
        let mut learner: Box<dyn Learner<f64>> = match cfg.learner.as_deref().unwrap_or("midpoint")
        {
            "midpoint" => Box::new(exp_cfg.midpoint_learner()),
            other => scalar_learner(other, seed)?,
        };
        let (tr, witness) = play_adversary(learner.as_mut(), &adv, &params);
        let row = SummaryRow {
            experiment: cfg.experiment.clone(),
            p,
            q: params.q,
            d: 1,
            m: cfg.m,
            seed,
            measured_loss: tr.total_loss(p),
            floor: Some(floor),
            ceiling: None,
        };
        if cfg.m.is_none() {
            out.check_floor(&row, floor, "exp");
        }
        out.record_game(cfg, row, Some(tr.to_json()), Some(&witness));
    }
    Ok(())
}
