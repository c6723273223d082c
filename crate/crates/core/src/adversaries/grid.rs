//! The d-dimensional grid adversary over the Lipschitz class.
//!
//! With `S` the n odd multiples of `1/(2n)` in `(0,1)`, the adversary
//! anchors the origin at 0 and then sweeps the `n^d` points of `S^d` in
//! lexicographic order, revealing `±1/(2n)` against the guess. Every scored
//! error is at least `1/(2n)`, for a total of at least `n^{d-p} / 2^p`. The
//! reveals are realized by a sawtooth witness whose sign is constant on each
//! of the `n^d` open grid cells.

use serde::{Deserialize, Serialize};

use crate::arena::{LossParams, Transcript};
use crate::funcrep::{Smoothness, SmoothnessClass};
use crate::learners::{Learner, MultiPoint};

use super::{point_input, scored_budget, Adversary, AdversaryError, Play, Witness};

#[derive(Debug, Clone, Copy)]
pub struct GridConfig {
    pub n: usize,
    pub d: usize,
    pub p: f64,
}

impl GridConfig {
    pub fn new(n: usize, d: usize, p: f64) -> Result<Self, AdversaryError> {
        if n == 0 || d == 0 {
            return Err(AdversaryError::InvalidConfig(
                "n and d must be positive".into(),
            ));
        }
        if !(p > 0.0 && p < d as f64) {
            return Err(AdversaryError::InvalidConfig(format!(
                "p must lie in (0, d) = (0, {d}), got {p}"
            )));
        }
        Ok(GridConfig { n, d, p })
    }

    /// Total p-error any learner concedes: `n^{d-p} / 2^p`.
    pub fn guaranteed_floor(&self) -> f64 {
        (self.n as f64).powf(self.d as f64 - self.p) / 2.0f64.powf(self.p)
    }

    /// The input set `S`: odd multiples of `1/(2n)`.
    pub fn axis_inputs(&self) -> Vec<f64> {
        (0..self.n)
            .map(|k| (2 * k + 1) as f64 / (2 * self.n) as f64)
            .collect()
    }

    /// All of `S^d` in lexicographic order.
    pub fn grid_inputs(&self) -> Vec<MultiPoint> {
        let axis = self.axis_inputs();
        let mut out = Vec::with_capacity(self.n.pow(self.d as u32));
        let mut idx = vec![0usize; self.d];
        loop {
            out.push(
                MultiPoint::new(idx.iter().map(|&k| axis[k]).collect())
                    .expect("grid points lie in (0,1)"),
            );
            // odometer, last coordinate fastest
            let mut pos = self.d;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < self.n {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }
}

/// Sawtooth witness `±(1/n) min_i dist(n x_i, Z)` with one sign per grid
/// cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignGrid {
    n: usize,
    d: usize,
    signs: Vec<i8>,
}

impl SignGrid {
    fn cell_of(&self, x: &MultiPoint) -> usize {
        let mut idx = 0usize;
        for &c in x.coords() {
            let mut k = (c * self.n as f64).floor() as usize;
            if k >= self.n {
                k = self.n - 1;
            }
            idx = idx * self.n + k;
        }
        idx
    }

    pub fn value(&self, x: &MultiPoint) -> f64 {
        assert_eq!(x.dim(), self.d);
        let tooth = x
            .coords()
            .iter()
            .map(|&c| {
                let y = c * self.n as f64;
                (y - y.round()).abs()
            })
            .fold(f64::INFINITY, f64::min);
        self.signs[self.cell_of(x)] as f64 * tooth / self.n as f64
    }

    /// Largest |difference quotient| along any axis, sampled on a uniform
    /// grid of `samples` cells per line, over lines through every cell
    /// center. The true witness has axis slopes in {-1, 0, +1}.
    pub fn max_sampled_axis_quotient(&self, samples: usize) -> f64 {
        let centers: Vec<f64> = (0..self.n)
            .map(|k| (2 * k + 1) as f64 / (2 * self.n) as f64)
            .collect();
        let mut worst: f64 = 0.0;
        let mut others = vec![0usize; self.d.saturating_sub(1)];
        loop {
            for axis in 0..self.d {
                let mut prev: Option<(f64, f64)> = None;
                for s in 0..=samples {
                    let t = s as f64 / samples as f64;
                    let mut coords = Vec::with_capacity(self.d);
                    let mut oi = 0;
                    for pos in 0..self.d {
                        if pos == axis {
                            coords.push(t);
                        } else {
                            coords.push(centers[others[oi]]);
                            oi += 1;
                        }
                    }
                    let v = self.value(&MultiPoint::new(coords).unwrap());
                    if let Some((pt, pv)) = prev {
                        worst = worst.max(((v - pv) / (t - pt)).abs());
                    }
                    prev = Some((t, v));
                }
            }
            // advance the other-coordinate odometer
            let mut pos = others.len();
            loop {
                if pos == 0 {
                    return worst;
                }
                pos -= 1;
                others[pos] += 1;
                if others[pos] < self.n {
                    break;
                }
                others[pos] = 0;
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GridAdversary {
    cfg: GridConfig,
}

impl GridAdversary {
    pub fn new(cfg: GridConfig) -> Self {
        GridAdversary { cfg }
    }

    pub fn config(&self) -> &GridConfig {
        &self.cfg
    }
}

impl Adversary<MultiPoint> for GridAdversary {
    fn play(&self, learner: &mut dyn Learner<MultiPoint>, params: &LossParams) -> Play {
        let cfg = self.cfg;
        let budget = scored_budget(params);
        let mut tr = Transcript::new(params.clone());
        let mut signs = vec![1i8; cfg.n.pow(cfg.d as u32)];

        let origin = MultiPoint::new(vec![0.0; cfg.d]).unwrap();
        let yhat0 = learner.predict(&origin);
        tr.push(point_input(&origin), yhat0, 0.0);
        learner.observe(&origin, 0.0).expect("fresh input");

        let half = 1.0 / (2 * cfg.n) as f64;
        for (cell, x) in cfg.grid_inputs().into_iter().enumerate() {
            if cell >= budget {
                break;
            }
            let yhat = learner.predict(&x);
            let y = super::farther_from(yhat, -half, half);
            signs[cell] = if y > 0.0 { 1 } else { -1 };
            tr.push(point_input(&x), yhat, y);
            learner.observe(&x, y).expect("grid points are distinct");
        }

        Play {
            transcript: tr,
            witness: Witness::SignGrid(SignGrid {
                n: cfg.n,
                d: cfg.d,
                signs,
            }),
            class: SmoothnessClass::new(Smoothness::Infinite, cfg.d),
        }
    }
}
