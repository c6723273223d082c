//! Acceptance suite: one test per numbered criterion, each printing a
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines as they complete.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use smoothlearn::adversaries::{
    BinarySplit, BinarySplitConfig, Dyadic, DyadicConfig, ExpAdversaryConfig, ExpFamily,
    GridAdversary, GridConfig, Lift, TwoPoint, Witness,
};
use smoothlearn::arena::{
    self, diagnostics, gen, loglog_slope, play_adversary, play_fixed_target, LossParams,
};
use smoothlearn::bounds::{
    bound_value, dyadic_series_partial, lemma_residual_2qin, lemma_residual_2qout,
    lemma_residual_2qoutcor, lemma_residual_action_increment, lemma_residual_action_increment_p,
    lemma_residual_uv,
};
use smoothlearn::funcrep::{PiecewiseLinear, Smoothness};
use smoothlearn::learners::{
    Constant, DiagonalLearner, Learner, LinInt, NearestNeighbor, RandomGuess,
};

/// Runs a criterion body, prints its verdict line, and propagates failures.
fn criterion(number: usize, name: &str, body: impl FnOnce() -> Result<(), String>) {
    let outcome = body();
    match &outcome {
        Ok(()) => println!("[acceptance] criterion {number} ({name}): PASS"),
        Err(_) => println!("[acceptance] criterion {number} ({name}): FAIL"),
    }
    if let Err(msg) = outcome {
        panic!("criterion {number} ({name}) failed: {msg}");
    }
}

fn check(ok: bool, msg: impl Fn() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 1000 games of the interpolation learner against random boundary targets
/// in F_q over 200 fresh random inputs; yields each transcript.
fn linint_random_games(
    q: f64,
    games: usize,
    trials: usize,
    seed: u64,
    mut each: impl FnMut(&arena::Transcript) -> Result<(), String>,
) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = LossParams::new(2.0, Smoothness::Finite(q), 1, None);
    for _ in 0..games {
        let target = gen::random_target(&mut rng, Smoothness::Finite(q), 12);
        let inputs = gen::uniform_inputs(&mut rng, trials);
        let mut learner = LinInt::new();
        let tr = play_fixed_target(&mut learner, &target, &inputs, &params)
            .map_err(|e| format!("target rejected: {e}"))?;
        each(&tr)?;
    }
    Ok(())
}

#[test]
fn criterion_01_interpolation_ceiling() {
    criterion(1, "interpolation squared-error ceiling 1/(q-1)", || {
        for q in [1.1, 1.25, 1.5, 1.9] {
            let ceiling = 1.0 / (q - 1.0);
            linint_random_games(q, 1000, 200, 101, |tr| {
                let total = tr.total_loss(2.0);
                check(total <= ceiling + 1e-9, || {
                    format!("q={q}: total 2-error {total} exceeds ceiling {ceiling}")
                })
            })?;
        }
        Ok(())
    });
}

#[test]
fn criterion_02_exact_region_ceiling() {
    criterion(2, "exact-region ceiling 1 at p = 2 + 1/(q-1)", || {
        for q in [1.1, 1.25, 1.5, 1.9] {
            let p = 2.0 + 1.0 / (q - 1.0);
            linint_random_games(q, 1000, 200, 202, |tr| {
                let total = tr.total_loss(p);
                check(total <= 1.0 + 1e-9, || {
                    format!("q={q}, p={p}: total p-error {total} exceeds 1")
                })
            })?;
        }
        Ok(())
    });
}

#[test]
fn criterion_03_binary_split_floor() {
    criterion(3, "binary-split floor b^p + k(b/2)^p", || {
        for q in [1.1, 1.5, 1.9] {
            let cfg = BinarySplitConfig::new(2.0, q).map_err(|e| e.to_string())?;
            let adv = BinarySplit::new(cfg);
            let params = LossParams::new(2.0, Smoothness::Finite(q), 1, None);
            let floor = cfg.guaranteed_floor();
            let opponents: Vec<(&str, Box<dyn Learner<f64>>)> = vec![
                ("linint", Box::new(LinInt::new())),
                ("zero", Box::new(Constant::zero())),
            ];
            for (name, mut learner) in opponents {
                let (tr, witness) = play_adversary(learner.as_mut(), &adv, &params);
                let total = tr.total_loss(2.0);
                check(total >= floor - 1e-12, || {
                    format!("q={q} vs {name}: total {total} below floor {floor}")
                })?;
                let Witness::Interpolant { f } = &witness else {
                    return Err("expected an interpolant witness".into());
                };
                let action = f.action(q);
                check(action <= 1.0 + 1e-12, || {
                    format!("q={q} vs {name}: witness action {action} exceeds 1")
                })?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_04_dyadic_adversary() {
    criterion(
        4,
        "dyadic stages: commits, action budget, series floor",
        || {
            for epsilon in [0.1, 0.25, 0.4] {
                let stages = 10;
                let cfg = DyadicConfig::new(epsilon, stages).map_err(|e| e.to_string())?;
                let adv = Dyadic::new(cfg);
                let p = 1.0 + epsilon;
                let params = LossParams::new(p, Smoothness::Infinite, 1, None);
                let floor = dyadic_series_partial(epsilon, stages);
                let opponents: Vec<(&str, Box<dyn Learner<f64>>)> = vec![
                    ("linint", Box::new(LinInt::new())),
                    ("random", Box::new(RandomGuess::unit(404))),
                ];
                for (name, mut learner) in opponents {
                    let out = adv.play_detailed(learner.as_mut(), &params);
                    for (i, &commits) in out.per_stage_commits.iter().enumerate() {
                        let stage = i + 1;
                        if stage >= 2 {
                            let need = 1usize << (stage - 2);
                            check(commits >= need, || {
                                format!(
                                "eps={epsilon} vs {name}: stage {stage} committed {commits} < {need}"
                            )
                            })?;
                        }
                    }
                    for t in &out.trace {
                        check(t.aux_action <= 0.25, || {
                            format!(
                                "eps={epsilon} vs {name}: stage {} trial {} action {} breaches 1/4",
                                t.stage, t.trial_in_stage, t.aux_action
                            )
                        })?;
                        check(t.aux_action <= t.aux_bound + 1e-12, || {
                            format!(
                            "eps={epsilon} vs {name}: stage {} trial {} action {} over bound {}",
                            t.stage, t.trial_in_stage, t.aux_action, t.aux_bound
                        )
                        })?;
                    }
                    let total = out.play.transcript.total_loss(p);
                    check(total >= floor - 1e-12, || {
                        format!("eps={epsilon} vs {name}: total {total} below series floor {floor}")
                    })?;
                    out.play
                        .witness
                        .check_consistency(&out.play.transcript)
                        .map_err(|e| format!("eps={epsilon} vs {name}: {e}"))?;
                    out.play
                        .witness
                        .check_class(&out.play.class)
                        .map_err(|e| format!("eps={epsilon} vs {name}: {e}"))?;
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_05_holder_ceiling() {
    criterion(5, "Hölder chain over the q=2 class", || {
        for p in [1.1, 1.5] {
            let exponent = p / (2.0 - p);
            let d_bound = 1.0 + 1.0 / (2.0f64.powf(exponent) - 2.0);
            let ceiling = d_bound.powf(1.0 - p / 2.0);
            linint_random_games(2.0, 1000, 200, 505, |tr| {
                let diag = diagnostics(tr, &[exponent]).map_err(|e| e.to_string())?;
                check(diag.ratio_sum <= 1.0 + 1e-9, || {
                    format!("p={p}: error-square ratio sum {} exceeds 1", diag.ratio_sum)
                })?;
                let (_, dsum) = diag.power_sums[0];
                check(dsum <= d_bound + 1e-9, || {
                    format!("p={p}: distance power sum {dsum} exceeds {d_bound}")
                })?;
                let total = tr.total_loss(p);
                // the Hölder factorization itself, then the closed ceiling
                let holder = diag.ratio_sum.powf(p / 2.0) * dsum.powf(1.0 - p / 2.0);
                check(total <= holder + 1e-9, || {
                    format!("p={p}: total {total} escapes the Hölder factorization {holder}")
                })?;
                check(total <= ceiling + 1e-9, || {
                    format!("p={p}: total {total} exceeds ceiling {ceiling}")
                })
            })?;
        }
        Ok(())
    });
}

#[test]
fn criterion_06_grid_adversary() {
    criterion(6, "grid floor n^{d-p}/2^p with Lipschitz witness", || {
        for (n, d, p) in [(4usize, 2usize, 1.0f64), (8, 2, 1.0), (3, 3, 2.0)] {
            let cfg = GridConfig::new(n, d, p).map_err(|e| e.to_string())?;
            let adv = GridAdversary::new(cfg);
            let params = LossParams::new(p, Smoothness::Infinite, d, None);
            let mut learner = NearestNeighbor::new();
            let (tr, witness) = play_adversary(&mut learner, &adv, &params);
            let total = tr.total_loss(p);
            let floor = cfg.guaranteed_floor();
            check(total >= floor - 1e-12, || {
                format!("grid n={n} d={d} p={p}: total {total} below floor {floor}")
            })?;
            let Witness::SignGrid(g) = &witness else {
                return Err("expected a sign-grid witness".into());
            };
            let quot = g.max_sampled_axis_quotient(1000);
            check(quot <= 1.0 + 1e-9, || {
                format!("grid n={n} d={d}: sampled axis quotient {quot} exceeds 1")
            })?;
        }
        Ok(())
    });
}

#[test]
fn criterion_07_nearest_neighbor_ceiling() {
    criterion(
        7,
        "nearest-neighbor ceiling over tensor-sum targets",
        || {
            let d = 2usize;
            for p in [3.0, 4.0] {
                let params = LossParams::new(p, Smoothness::Infinite, d, None);
                let ceiling = bound_value("nnupper", &params)
                    .map_err(|e| e.to_string())?
                    .value
                    .as_finite()
                    .expect("nnupper is finite for p > d");
                if p == 3.0 {
                    assert_eq!(ceiling, 48.0);
                }
                let mut rng = ChaCha8Rng::seed_from_u64(707);
                for _ in 0..500 {
                    let target = gen::random_tensor_sum(&mut rng, d, 8);
                    let inputs = gen::uniform_multipoints(&mut rng, 500, d);
                    let mut learner = NearestNeighbor::new();
                    let tr = play_fixed_target(&mut learner, &target, &inputs, &params)
                        .map_err(|e| format!("target rejected: {e}"))?;
                    let total = tr.total_loss(p);
                    check(total <= ceiling + 1e-9, || {
                        format!("p={p}: total {total} exceeds ceiling {ceiling}")
                    })?;
                }
            }
            Ok(())
        },
    );
}

#[test]
fn criterion_08_bounded_trials_scaling() {
    criterion(8, "bounded-budget scaling exponent 1 - p/d = 1/2", || {
        let (d, p) = (2usize, 1.0f64);
        let budgets = [16usize, 64, 256, 1024, 4096];
        let mut floor_series = Vec::new();
        let mut measured_series = Vec::new();
        for &m in &budgets {
            let params = LossParams::new(p, Smoothness::Infinite, d, Some(m));
            let floor = bound_value("gridlow", &params)
                .map_err(|e| e.to_string())?
                .value
                .as_finite()
                .expect("gridlow is finite");
            floor_series.push((m as f64, floor));

            let n = (m as f64).sqrt().round() as usize;
            let cfg = GridConfig::new(n, d, p).map_err(|e| e.to_string())?;
            let adv = GridAdversary::new(cfg);
            let mut learner = NearestNeighbor::new();
            let (tr, _witness) = play_adversary(&mut learner, &adv, &params);
            let measured = tr.total_loss(p);
            check(measured >= floor - 1e-12, || {
                format!("m={m}: measured {measured} below floor {floor}")
            })?;
            measured_series.push((m as f64, measured));
        }
        let floor_slope = loglog_slope(&floor_series);
        let measured_slope = loglog_slope(&measured_series);
        check((floor_slope - 0.5).abs() <= 0.1, || {
            format!("floor series slope {floor_slope} outside 0.5 ± 0.1")
        })?;
        check((measured_slope - 0.5).abs() <= 0.1, || {
            format!("measured series slope {measured_slope} outside 0.5 ± 0.1")
        })
    });
}

#[test]
fn criterion_09_lift_scaling() {
    criterion(9, "diagonal lift scales the two-point floor by d^p", || {
        let p = 2.0;
        for d in [2usize, 3] {
            let adv = Lift::new(TwoPoint::new(), d);
            let params = LossParams::new(p, Smoothness::Finite(2.0), d, None);
            let floor = (d as f64).powf(p);
            let opponents: Vec<(&str, Box<dyn Learner<smoothlearn::MultiPoint>>)> = vec![
                (
                    "linint-diagonal",
                    Box::new(DiagonalLearner::new(LinInt::new())),
                ),
                ("zero", Box::new(Constant::zero())),
            ];
            for (name, mut learner) in opponents {
                let (tr, _witness) = play_adversary(learner.as_mut(), &adv, &params);
                let total = tr.total_loss(p);
                check(total >= floor - 1e-12, || {
                    format!("d={d} vs {name}: total {total} below {floor}")
                })?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_10_lemma_validators() {
    criterion(10, "inequality residuals at 10^5 samples per lemma", || {
        let samples = 100_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(1010);
        // log-uniform in q-1 to stress the singular end
        let draw_q = |rng: &mut ChaCha8Rng| 1.0 + 10f64.powf(rng.gen_range(-3.0..-0.005));

        for _ in 0..samples {
            let q = draw_q(&mut rng);
            let a = rng.gen_range(0.001..1.0);
            let b = rng.gen_range(0.001..1.0);
            let t = rng.gen_range(1e-6..1.0 - 1e-6);
            let x = -a + t * (a + b);
            let r = lemma_residual_2qin(a, b, q, x).map_err(|e| e.to_string())?;
            check(r >= -1e-12, || {
                format!("interior residual {r} at a={a} b={b} q={q} x={x}")
            })?;
        }

        for _ in 0..samples {
            let q = draw_q(&mut rng);
            let a = rng.gen_range(0.001..0.999);
            let b = rng.gen_range(0.001..0.999);
            let offset = rng.gen_range(0.0..3.0);
            let x = if rng.gen_bool(0.5) {
                b + offset
            } else {
                -a - offset
            };
            let r = lemma_residual_2qout(a, b, q, x).map_err(|e| e.to_string())?;
            check(r >= -1e-12, || {
                format!("exterior residual {r} at a={a} b={b} q={q} x={x}")
            })?;
            if a + b <= 1.0 {
                let rc = lemma_residual_2qoutcor(a, b, q, x).map_err(|e| e.to_string())?;
                check(rc >= -1e-12, || {
                    format!("corollary residual {rc} at a={a} b={b} q={q} x={x}")
                })?;
            }
        }

        // bounded away from the degenerate a limits, where strictness dies
        for _ in 0..samples {
            let q = draw_q(&mut rng);
            let a = rng.gen_range(0.05..0.95);
            let threshold = (q - 1.0).powf(q - 1.0) / (a * (1.0 - a));
            let sep = threshold * rng.gen_range(1.0..3.0);
            let u = rng.gen_range(-1.0..1.0) + sep / 2.0;
            let v = u - sep;
            let r = lemma_residual_uv(q, a, u, v).map_err(|e| e.to_string())?;
            // strict inequality away from the degenerate a limits
            check(r >= 1e-15, || {
                format!("separation residual {r} at q={q} a={a} u={u} v={v}")
            })?;
        }

        // refinement residuals need the refined action to stay within the
        // unit ball, so sample small shapes and retry rejected draws
        let mut accepted = 0usize;
        let mut attempts = 0usize;
        while accepted < samples {
            attempts += 1;
            if attempts > 50 * samples {
                return Err("refinement sampling stalled".into());
            }
            let q = 1.0 + 10f64.powf(rng.gen_range(-2.0..-0.005));
            let k = rng.gen_range(1..6);
            let mut pairs: Vec<(f64, f64)> = Vec::new();
            while pairs.len() < k {
                let u: f64 = rng.gen_range(0.0..=1.0);
                if !pairs.iter().any(|&(pu, _)| pu == u) {
                    pairs.push((u, rng.gen_range(-0.4..=0.4)));
                }
            }
            let f = PiecewiseLinear::from_pairs(pairs).expect("distinct inputs");
            let x: f64 = rng.gen_range(0.0..=1.0);
            if f.base().contains_input(x) {
                continue;
            }
            let y = f.eval(x).expect("in domain") + rng.gen_range(-0.3..0.3);
            let Ok(r) = lemma_residual_action_increment(&f, x, y, q) else {
                continue;
            };
            check(r >= -1e-12, || {
                format!("quadratic refinement residual {r} at q={q}")
            })?;
            let rp = lemma_residual_action_increment_p(&f, x, y, q).map_err(|e| e.to_string())?;
            check(rp >= -1e-12, || {
                format!("p-power refinement residual {rp} at q={q}")
            })?;
            accepted += 1;
        }

        // midpoint refinements obey the exact quadratic increment identity
        for _ in 0..10_000 {
            let k = rng.gen_range(2..8);
            let mut pairs: Vec<(f64, f64)> = Vec::new();
            while pairs.len() < k {
                let u: f64 = rng.gen_range(0.0..=1.0);
                if !pairs.iter().any(|&(pu, _)| pu == u) {
                    pairs.push((u, rng.gen_range(-1.0..=1.0)));
                }
            }
            pairs.sort_by(|l, r| l.0.partial_cmp(&r.0).unwrap());
            let i = rng.gen_range(0..k - 1);
            let gap = pairs[i + 1].0 - pairs[i].0;
            if gap < 1e-9 {
                continue;
            }
            let x = pairs[i].0 + gap / 2.0;
            let f = PiecewiseLinear::from_pairs(pairs).expect("distinct inputs");
            if f.base().contains_input(x) {
                continue;
            }
            let y = rng.gen_range(-1.0..=1.0);
            let (refined, _) = f.insert_with_increment(x, y, 2.0).expect("fresh input");
            let lhs = refined.action(2.0);
            let fx = f.eval(x).expect("in domain");
            let rhs = f.action(2.0) + 2.0 * (y - fx) * (y - fx) / (gap / 2.0);
            check((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0), || {
                format!("midpoint increment identity off: {lhs} vs {rhs}")
            })?;
        }
        Ok(())
    });
}

#[test]
fn criterion_11_exponential_adversary() {
    criterion(
        11,
        "exponential family: gap floor and derivative ranges",
        || {
            let mut previous_gap = 0.0f64;
            // decreasing epsilon must push the gap up toward 2
            for epsilon in [0.5, 0.1, 0.01] {
                let cfg = ExpAdversaryConfig::new(epsilon).map_err(|e| e.to_string())?;
                let gap = cfg.gap();
                check(gap > previous_gap && gap < 2.0, || {
                    format!("eps={epsilon}: gap {gap} fails the monotone approach to 2")
                })?;
                previous_gap = gap;

                let adv = ExpFamily::new(cfg);
                let params = LossParams::new(2.0, Smoothness::Finite(2.0), 1, None);
                let mut learner = cfg.midpoint_learner();
                let (tr, witness) = play_adversary(&mut learner, &adv, &params);
                let e1 = tr.trials()[1].e;
                check(e1 >= gap / 2.0 - 1e-12, || {
                    format!(
                        "eps={epsilon}: trial-1 error {e1} below gap/2 = {}",
                        gap / 2.0
                    )
                })?;
                let Witness::Exponential(w) = &witness else {
                    return Err("expected an exponential witness".into());
                };
                w.check_derivative_ranges(1000)?;
            }
            Ok(())
        },
    );
}
