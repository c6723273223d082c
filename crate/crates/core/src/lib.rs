//! A learner-vs-adversary laboratory for online prediction of smooth
//! real-valued functions on `[0,1]^d`.
//!
//! The protocol: on each trial the learner sees an input, guesses the hidden
//! function's value, then learns the truth; the total loss is the sum of
//! p-th powers of the absolute errors over all trials past the first.
//! This crate provides the piecewise-linear machinery behind the
//! interpolation learner ([`funcrep`]), the learners themselves
//! ([`learners`]), the adversary constructions with auditable witnesses
//! ([`adversaries`]), the protocol driver and diagnostics ([`arena`]), and
//! closed-form bound values plus inequality validators ([`bounds`]).

pub mod adversaries;
pub mod arena;
pub mod bounds;
pub mod funcrep;
pub mod learners;

pub use adversaries::{
    Adversary, BinarySplit, BinarySplitConfig, Dyadic, DyadicConfig, DyadicOutcome,
    ExpAdversaryConfig, ExpFamily, GridAdversary, GridConfig, Lift, Play, SignGrid, TensorSum,
    TwoPoint, Witness,
};
pub use arena::{
    diagnostics, loglog_slope, play_adversary, play_fixed_target, total_loss, Diagnostics,
    LossParams, Target, Transcript, Trial, TrialInput,
};
pub use bounds::{bound_value, series_dyadic_lower, BoundKind, BoundReport, BoundValue};
pub use funcrep::{PiecewiseLinear, PointSet, Smoothness, SmoothnessClass};
pub use learners::{
    linint_predict, nn_predict, Constant, DiagonalLearner, Learner, LearnerState, LinInt,
    MultiPoint, NearestNeighbor, RandomGuess,
};
