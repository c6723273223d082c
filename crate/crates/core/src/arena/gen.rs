//! Seeded generators for targets and input sequences.
//!
//! Fixed-target experiments quantify over all targets and input orders, so
//! the suites draw from two reproducible sources: uniform random draws and
//! the dyadic low-discrepancy sequence, which stresses the repeated-halving
//! behavior the bounds care about.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::adversaries::TensorSum;
use crate::funcrep::{PiecewiseLinear, Smoothness};
use crate::learners::MultiPoint;

/// Distinct uniform draws from `[0,1]`.
pub fn uniform_inputs(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(len);
    while out.len() < len {
        let x: f64 = rng.gen_range(0.0..=1.0);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// The base-2 van der Corput sequence: 1/2, 1/4, 3/4, 1/8, 5/8, …
pub fn van_der_corput(len: usize) -> Vec<f64> {
    (1..=len)
        .map(|i| {
            let mut n = i;
            let mut value = 0.0;
            let mut place = 0.5;
            while n > 0 {
                if n & 1 == 1 {
                    value += place;
                }
                n >>= 1;
                place /= 2.0;
            }
            value
        })
        .collect()
}

/// Distinct uniform draws from `[0,1]^d`.
pub fn uniform_multipoints(rng: &mut ChaCha8Rng, len: usize, d: usize) -> Vec<MultiPoint> {
    let mut out: Vec<MultiPoint> = Vec::with_capacity(len);
    while out.len() < len {
        let p = MultiPoint::new((0..d).map(|_| rng.gen_range(0.0..=1.0)).collect())
            .expect("draws lie in [0,1]");
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Random piecewise-linear target normalized onto the class boundary:
/// action exactly 1 for finite `q`, max slope exactly 1 for the Lipschitz
/// class (flat draws are left as the zero-action function).
pub fn random_target(rng: &mut ChaCha8Rng, q: Smoothness, max_segments: usize) -> PiecewiseLinear {
    let k = rng.gen_range(2..=max_segments.max(2));
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(k);
    while pairs.len() < k {
        let u: f64 = rng.gen_range(0.0..=1.0);
        if !pairs.iter().any(|&(pu, _)| pu == u) {
            pairs.push((u, rng.gen_range(-1.0..=1.0)));
        }
    }
    let raw = PiecewiseLinear::from_pairs(pairs.iter().copied()).expect("distinct inputs");
    let scale = match q {
        Smoothness::Finite(q) => {
            let a = raw.action(q);
            if a > 0.0 {
                (1.0 / a).powf(1.0 / q)
            } else {
                1.0
            }
        }
        Smoothness::Infinite => {
            let s = raw.max_slope();
            if s > 0.0 {
                1.0 / s
            } else {
                1.0
            }
        }
    };
    PiecewiseLinear::from_pairs(pairs.into_iter().map(|(u, v)| (u, v * scale)))
        .expect("distinct inputs")
}

/// Random 1-Lipschitz piecewise-linear function built from bounded slopes.
pub fn random_lipschitz(rng: &mut ChaCha8Rng, max_segments: usize) -> PiecewiseLinear {
    let k = rng.gen_range(2..=max_segments.max(2));
    let mut us: Vec<f64> = Vec::with_capacity(k);
    while us.len() < k {
        let u: f64 = rng.gen_range(0.0..=1.0);
        if !us.contains(&u) {
            us.push(u);
        }
    }
    us.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut v = rng.gen_range(-0.5..=0.5);
    let mut pairs = Vec::with_capacity(k);
    pairs.push((us[0], v));
    for w in us.windows(2) {
        let slope: f64 = rng.gen_range(-1.0..=1.0);
        v += slope * (w[1] - w[0]);
        pairs.push((w[1], v));
    }
    PiecewiseLinear::from_pairs(pairs).expect("sorted distinct inputs")
}

/// Random tensor-sum target: one fresh 1-Lipschitz component per axis,
/// scaled by `1/d`, so every axis section stays within the Lipschitz class.
pub fn random_tensor_sum(rng: &mut ChaCha8Rng, d: usize, max_segments: usize) -> TensorSum {
    let components = (0..d)
        .map(|_| random_lipschitz(rng, max_segments))
        .collect();
    TensorSum::new(components, 1.0 / d as f64)
}
