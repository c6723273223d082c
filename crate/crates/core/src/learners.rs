//! Online prediction algorithms and the interface the arena drives.
//!
//! Two algorithms from the problem domain live here: linear interpolation of
//! everything revealed so far (`LinInt`, univariate) and least-index
//! L1-nearest-neighbor prediction (`NearestNeighbor`, any dimension). A few
//! baseline opponents (constant, seeded random) round out the roster for
//! adversary experiments.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::funcrep::{FuncrepError, PiecewiseLinear, PointSet};

#[derive(Debug, Error, PartialEq)]
pub enum LearnerError {
    #[error("input already observed with a different value")]
    DuplicateInput,
    #[error("input outside [0,1]^d")]
    DomainError,
}

impl From<FuncrepError> for LearnerError {
    fn from(e: FuncrepError) -> Self {
        match e {
            FuncrepError::DuplicateInput { .. } => LearnerError::DuplicateInput,
            FuncrepError::DomainError { .. } => LearnerError::DomainError,
        }
    }
}

/// A point of `[0,1]^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct MultiPoint {
    coords: Vec<f64>,
}

impl TryFrom<Vec<f64>> for MultiPoint {
    type Error = LearnerError;

    fn try_from(coords: Vec<f64>) -> Result<Self, LearnerError> {
        MultiPoint::new(coords)
    }
}

impl From<MultiPoint> for Vec<f64> {
    fn from(p: MultiPoint) -> Vec<f64> {
        p.coords
    }
}

impl MultiPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, LearnerError> {
        if coords.is_empty() || coords.iter().any(|c| !(0.0..=1.0).contains(c)) {
            return Err(LearnerError::DomainError);
        }
        Ok(MultiPoint { coords })
    }

    /// The diagonal point `x·(1,…,1)`.
    pub fn diagonal(x: f64, d: usize) -> Result<Self, LearnerError> {
        Self::new(vec![x; d])
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn l1_distance(&self, other: &MultiPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

/// Immutable history of `(input, revealed value)` pairs, one per completed
/// trial, inputs pairwise distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerState<X: PartialEq> {
    history: Vec<(X, f64)>,
}

impl<X: PartialEq> Default for LearnerState<X> {
    fn default() -> Self {
        LearnerState {
            history: Vec::new(),
        }
    }
}

impl<X: PartialEq + Clone> LearnerState<X> {
    pub fn new() -> Self {
        LearnerState {
            history: Vec::new(),
        }
    }

    pub fn history(&self) -> &[(X, f64)] {
        &self.history
    }

    pub fn len(&self) -> usize {
        self.history.len()
    }

    pub fn is_empty(&self) -> bool {
        self.history.is_empty()
    }

    /// Returns the state extended by `(x, y)`. Re-observing a pair is a
    /// no-op; a conflicting value at a seen input is an error.
    pub fn updated(&self, x: X, y: f64) -> Result<Self, LearnerError> {
        if let Some((_, seen)) = self.history.iter().find(|(xi, _)| *xi == x) {
            return if *seen == y {
                Ok(self.clone())
            } else {
                Err(LearnerError::DuplicateInput)
            };
        }
        let mut history = self.history.clone();
        history.push((x, y));
        Ok(LearnerState { history })
    }
}

/// Prediction of the interpolation learner: zero before any feedback, then
/// the value of the interpolant through the whole history.
pub fn linint_predict(state: &LearnerState<f64>, x: f64) -> f64 {
    if state.is_empty() {
        return 0.0;
    }
    let f = PiecewiseLinear::from_pairs(state.history().iter().copied())
        .expect("history inputs are distinct");
    f.eval(x).expect("inputs stay in [0,1]")
}

/// Prediction of the nearest-neighbor learner: zero before any feedback,
/// then the revealed value at the least-index history input of minimal
/// L1 distance (ties go to the least index).
pub fn nn_predict(state: &LearnerState<MultiPoint>, x: &MultiPoint) -> f64 {
    let mut best: Option<(f64, f64)> = None;
    for (xi, yi) in state.history() {
        let dist = xi.l1_distance(x);
        match best {
            Some((d, _)) if dist >= d => {}
            _ => best = Some((dist, *yi)),
        }
    }
    best.map_or(0.0, |(_, y)| y)
}

/// One side of the online protocol: predict a value, then absorb the
/// revealed truth. One instance per game; games never share state.
pub trait Learner<X> {
    fn predict(&mut self, x: &X) -> f64;
    fn observe(&mut self, x: &X, y: f64) -> Result<(), LearnerError>;
}

/// The interpolation learner. Maintains its interpolant by sorted insertion
/// instead of rebuilding; observable behavior matches [`linint_predict`].
#[derive(Debug, Clone, Default)]
pub struct LinInt {
    interp: PiecewiseLinear,
}

impl LinInt {
    pub fn new() -> Self {
        LinInt {
            interp: PiecewiseLinear::empty(),
        }
    }

    pub fn revealed(&self) -> &PointSet {
        self.interp.base()
    }
}

impl Learner<f64> for LinInt {
    fn predict(&mut self, x: &f64) -> f64 {
        if self.interp.base().is_empty() {
            0.0
        } else {
            self.interp.eval(*x).expect("inputs stay in [0,1]")
        }
    }

    fn observe(&mut self, x: &f64, y: f64) -> Result<(), LearnerError> {
        self.interp = self.interp.insert(*x, y)?;
        Ok(())
    }
}

/// Least-index L1 nearest-neighbor learner.
#[derive(Debug, Clone, Default)]
pub struct NearestNeighbor {
    state: LearnerState<MultiPoint>,
}

impl NearestNeighbor {
    pub fn new() -> Self {
        NearestNeighbor {
            state: LearnerState::new(),
        }
    }
}

impl Learner<MultiPoint> for NearestNeighbor {
    fn predict(&mut self, x: &MultiPoint) -> f64 {
        nn_predict(&self.state, x)
    }

    fn observe(&mut self, x: &MultiPoint, y: f64) -> Result<(), LearnerError> {
        self.state = self.state.updated(x.clone(), y)?;
        Ok(())
    }
}

/// Predicts a fixed value forever. `Constant::zero()` is the standard
/// baseline opponent.
#[derive(Debug, Clone)]
pub struct Constant {
    value: f64,
}

impl Constant {
    pub fn new(value: f64) -> Self {
        Constant { value }
    }

    pub fn zero() -> Self {
        Constant { value: 0.0 }
    }
}

impl<X> Learner<X> for Constant {
    fn predict(&mut self, _x: &X) -> f64 {
        self.value
    }

    fn observe(&mut self, _x: &X, _y: f64) -> Result<(), LearnerError> {
        Ok(())
    }
}

/// Seeded uniform random guesses in `[lo, hi]`, ignoring feedback.
#[derive(Debug, Clone)]
pub struct RandomGuess {
    rng: ChaCha8Rng,
    lo: f64,
    hi: f64,
}

impl RandomGuess {
    pub fn new(seed: u64, lo: f64, hi: f64) -> Self {
        use rand::SeedableRng;
        assert!(lo < hi);
        RandomGuess {
            rng: ChaCha8Rng::seed_from_u64(seed),
            lo,
            hi,
        }
    }

    pub fn unit(seed: u64) -> Self {
        Self::new(seed, -1.0, 1.0)
    }
}

impl<X> Learner<X> for RandomGuess {
    fn predict(&mut self, _x: &X) -> f64 {
        self.rng.gen_range(self.lo..=self.hi)
    }

    fn observe(&mut self, _x: &X, _y: f64) -> Result<(), LearnerError> {
        Ok(())
    }
}

/// Adapts a univariate learner to diagonal multivariate inputs by reading
/// the first coordinate.
#[derive(Debug, Clone)]
pub struct DiagonalLearner<L> {
    inner: L,
}

impl<L> DiagonalLearner<L> {
    pub fn new(inner: L) -> Self {
        DiagonalLearner { inner }
    }
}

impl<L: Learner<f64>> Learner<MultiPoint> for DiagonalLearner<L> {
    fn predict(&mut self, x: &MultiPoint) -> f64 {
        self.inner.predict(&x.coords()[0])
    }

    fn observe(&mut self, x: &MultiPoint, y: f64) -> Result<(), LearnerError> {
        self.inner.observe(&x.coords()[0], y)
    }
}
