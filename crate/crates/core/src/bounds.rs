//! Closed-form bound values and numerical validators for the inequality
//! lemmas.
//!
//! Each named bound evaluates one theorem constant over a [`LossParams`]
//! tuple, refusing parameters outside the theorem's hypotheses. Each lemma
//! validator returns the residual `left - right` of its inequality, which
//! must be nonnegative wherever the hypotheses hold.

use std::f64::consts::{E, LN_2};

use thiserror::Error;

use crate::arena::LossParams;
use crate::funcrep::{PiecewiseLinear, Smoothness};

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("bound {name}: hypothesis violated: {hypothesis}")]
    OutOfRegion { name: String, hypothesis: String },
    #[error("unknown bound name {0:?}")]
    UnknownName(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
    Exact,
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundKind::Lower => write!(f, "lower"),
            BoundKind::Upper => write!(f, "upper"),
            BoundKind::Exact => write!(f, "exact"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundValue {
    Finite(f64),
    Infinite,
    /// The theorem region leaves this value open.
    Unknown,
}

impl BoundValue {
    pub fn as_finite(&self) -> Option<f64> {
        match self {
            BoundValue::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

impl std::fmt::Display for BoundValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundValue::Finite(v) => write!(f, "{v}"),
            BoundValue::Infinite => write!(f, "inf"),
            BoundValue::Unknown => write!(f, "unknown"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub name: String,
    pub params: LossParams,
    pub value: BoundValue,
    pub kind: BoundKind,
}

pub const BOUND_NAMES: &[&str] = &[
    "2qup",
    "2qlow",
    "pqlow",
    "holder",
    "dyadic",
    "nnupper",
    "gridlow",
    "boundedm_upper",
    "pq_exact",
];

fn finite_q(name: &str, params: &LossParams) -> Result<f64, BoundsError> {
    match params.q {
        Smoothness::Finite(q) => Ok(q),
        Smoothness::Infinite => Err(BoundsError::OutOfRegion {
            name: name.into(),
            hypothesis: "requires a finite smoothness exponent q".into(),
        }),
    }
}

fn require(name: &str, ok: bool, hypothesis: &str) -> Result<(), BoundsError> {
    if ok {
        Ok(())
    } else {
        Err(BoundsError::OutOfRegion {
            name: name.into(),
            hypothesis: hypothesis.into(),
        })
    }
}

/// `n = ⌊m^{1/d}⌋`, guarding the floor against representation error at
/// perfect powers.
pub fn side_from_budget(m: usize, d: usize) -> usize {
    let x = (m as f64).powf(1.0 / d as f64);
    let rounded = x.round();
    if (x - rounded).abs() < 1e-9 {
        rounded as usize
    } else {
        x.floor() as usize
    }
}

/// Evaluates a named theorem constant at the given parameters.
pub fn bound_value(name: &str, params: &LossParams) -> Result<BoundReport, BoundsError> {
    let p = params.p;
    let d = params.d as f64;
    let report = |value, kind| BoundReport {
        name: name.into(),
        params: params.clone(),
        value,
        kind,
    };
    match name {
        // worst-case squared error of the interpolation learner: 1/(q-1)
        "2qup" => {
            let q = finite_q(name, params)?;
            require(name, q > 1.0 && q < 2.0, "q in (1,2)")?;
            Ok(report(
                BoundValue::Finite(1.0 / (q - 1.0)),
                BoundKind::Upper,
            ))
        }
        // binary-split floor at p = 2: q / ((8 e ln 2)(q-1))
        "2qlow" => {
            let q = finite_q(name, params)?;
            require(name, q > 1.0 && q < 2.0, "q in (1,2)")?;
            Ok(report(
                BoundValue::Finite(q / ((8.0 * E * LN_2) * (q - 1.0))),
                BoundKind::Lower,
            ))
        }
        // binary-split floor: q / ((p 2^p e ln 2)(q-1))
        "pqlow" => {
            let q = finite_q(name, params)?;
            require(name, q > 1.0 && q < 2.0, "q in (1,2)")?;
            require(name, p > 1.0, "p > 1")?;
            Ok(report(
                BoundValue::Finite(q / ((p * 2.0f64.powf(p) * E * LN_2) * (q - 1.0))),
                BoundKind::Lower,
            ))
        }
        // Hölder ceiling over the q=2 class: (1 + 1/(2^{p/(2-p)} - 2))^{1-p/2}
        "holder" => {
            require(name, p > 1.0 && p < 2.0, "p in (1,2)")?;
            let ex = p / (2.0 - p);
            Ok(report(
                BoundValue::Finite((1.0 + 1.0 / (2.0f64.powf(ex) - 2.0)).powf(1.0 - p / 2.0)),
                BoundKind::Upper,
            ))
        }
        // multi-stage floor over the Lipschitz class, summed in closed form
        "dyadic" => {
            let epsilon = p - 1.0;
            require(
                name,
                epsilon > 0.0 && epsilon < 0.5,
                "p = 1 + eps with eps in (0, 1/2)",
            )?;
            Ok(report(
                BoundValue::Finite(series_dyadic_lower(epsilon)?),
                BoundKind::Lower,
            ))
        }
        // nearest-neighbor ceiling: (2^d - 1) d^p / (1 - 2^d / 2^p)
        "nnupper" => {
            require(name, p > d, "p > d")?;
            let v = (2.0f64.powf(d) - 1.0) * d.powf(p) / (1.0 - 2.0f64.powf(d - p));
            Ok(report(BoundValue::Finite(v), BoundKind::Upper))
        }
        // grid floor at the budget-matched side length: n^{d-p} / 2^p
        "gridlow" => {
            require(name, p > 0.0 && p < d, "p in (0, d)")?;
            let m = params.m.ok_or_else(|| BoundsError::OutOfRegion {
                name: name.into(),
                hypothesis: "requires a trial budget m (n = floor(m^{1/d}))".into(),
            })?;
            let n = side_from_budget(m, params.d);
            require(name, n >= 1, "m must admit n = floor(m^{1/d}) >= 1")?;
            Ok(report(
                BoundValue::Finite((n as f64).powf(d - p) / 2.0f64.powf(p)),
                BoundKind::Lower,
            ))
        }
        // bounded-budget ceiling: d^p (2^d - 1) 2^{d-p} / (2^{d-p} - 1) m^{(d-p)/d}
        "boundedm_upper" => {
            require(name, p > 0.0 && p < d, "p in (0, d)")?;
            let m = params.m.ok_or_else(|| BoundsError::OutOfRegion {
                name: name.into(),
                hypothesis: "requires a trial budget m".into(),
            })? as f64;
            let coef = d.powf(p) * (2.0f64.powf(d) - 1.0) * 2.0f64.powf(d - p)
                / (2.0f64.powf(d - p) - 1.0);
            Ok(report(
                BoundValue::Finite(coef * m.powf((d - p) / d)),
                BoundKind::Upper,
            ))
        }
        // the exact region: value 1 where proven, infinite at p = 1 or
        // q = 1, open ("unknown") elsewhere
        "pq_exact" => {
            require(name, p >= 1.0, "p >= 1")?;
            let value = match params.q {
                Smoothness::Finite(q) => {
                    require(name, q >= 1.0, "q >= 1")?;
                    if p == 1.0 || q == 1.0 {
                        BoundValue::Infinite
                    } else if (q < 2.0 && p >= 2.0 + 1.0 / (q - 1.0)) || (q >= 2.0 && p >= 2.0) {
                        BoundValue::Finite(1.0)
                    } else {
                        BoundValue::Unknown
                    }
                }
                Smoothness::Infinite => {
                    if p == 1.0 {
                        BoundValue::Infinite
                    } else if p >= 2.0 {
                        BoundValue::Finite(1.0)
                    } else {
                        BoundValue::Unknown
                    }
                }
            };
            Ok(report(value, BoundKind::Exact))
        }
        other => Err(BoundsError::UnknownName(other.into())),
    }
}

/// Interior two-term convexity residual:
/// `a(1+x/a)^q + b(1-x/b)^q - (a+b) - 2q(q-1)x²/(a+b)` for `x ∈ (-a, b)`.
pub fn lemma_residual_2qin(a: f64, b: f64, q: f64, x: f64) -> Result<f64, BoundsError> {
    if !(a > 0.0 && b > 0.0) {
        return Err(BoundsError::InvalidParameter(format!(
            "need a, b > 0, got a={a}, b={b}"
        )));
    }
    if !(q > 1.0 && q < 2.0) {
        return Err(BoundsError::InvalidParameter(format!(
            "need q in (1,2), got {q}"
        )));
    }
    if !(x > -a && x < b) {
        return Err(BoundsError::InvalidParameter(format!(
            "need x in (-a, b) = ({}, {b}), got {x}",
            -a
        )));
    }
    let left = a * (1.0 + x / a).powf(q) + b * (1.0 - x / b).powf(q) - (a + b);
    let right = 2.0 * q * (q - 1.0) / (a + b) * x * x;
    Ok(left - right)
}

/// Exterior residual:
/// `a|x/a+1|^q + b|x/b-1|^q - (a+b) - (q-1)|x|^q/(a+b)^{q-1}` for `x ∉ (-a, b)`.
pub fn lemma_residual_2qout(a: f64, b: f64, q: f64, x: f64) -> Result<f64, BoundsError> {
    let left = exterior_left(a, b, q, x)?;
    let right = (q - 1.0) * x.abs().powf(q) / (a + b).powf(q - 1.0);
    Ok(left - right)
}

/// Exterior residual in corollary form (`a + b <= 1` sharpens the right
/// side to `(q-1)|x|^q`).
pub fn lemma_residual_2qoutcor(a: f64, b: f64, q: f64, x: f64) -> Result<f64, BoundsError> {
    if a + b > 1.0 {
        return Err(BoundsError::InvalidParameter(format!(
            "corollary form needs a + b <= 1, got {}",
            a + b
        )));
    }
    let left = exterior_left(a, b, q, x)?;
    let right = (q - 1.0) * x.abs().powf(q);
    Ok(left - right)
}

fn exterior_left(a: f64, b: f64, q: f64, x: f64) -> Result<f64, BoundsError> {
    if !(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0) {
        return Err(BoundsError::InvalidParameter(format!(
            "need a, b in (0,1), got a={a}, b={b}"
        )));
    }
    if !(q > 1.0 && q < 2.0) {
        return Err(BoundsError::InvalidParameter(format!(
            "need q in (1,2), got {q}"
        )));
    }
    if x > -a && x < b {
        return Err(BoundsError::InvalidParameter(format!(
            "need x outside (-a, b) = ({}, {b}), got {x}",
            -a
        )));
    }
    Ok(a * (x / a + 1.0).abs().powf(q) + b * (x / b - 1.0).abs().powf(q) - (a + b))
}

/// Separation residual: `a|u|^q + (1-a)|v|^q - 1`, strictly positive once
/// `|u - v| >= (q-1)^{q-1} / (a(1-a))`.
pub fn lemma_residual_uv(q: f64, a: f64, u: f64, v: f64) -> Result<f64, BoundsError> {
    if !(q > 1.0 && q < 2.0) {
        return Err(BoundsError::InvalidParameter(format!(
            "need q in (1,2), got {q}"
        )));
    }
    if !(a > 0.0 && a < 1.0) {
        return Err(BoundsError::InvalidParameter(format!(
            "need a in (0,1), got {a}"
        )));
    }
    let threshold = (q - 1.0).powf(q - 1.0) / (a * (1.0 - a));
    if (u - v).abs() < threshold {
        return Err(BoundsError::InvalidParameter(format!(
            "need |u - v| >= {threshold}, got {}",
            (u - v).abs()
        )));
    }
    Ok(a * u.abs().powf(q) + (1.0 - a) * v.abs().powf(q) - 1.0)
}

/// Refinement residual: action increment minus `(q-1)(y - f(x))²`, valid
/// while the refined interpolant keeps action at most 1.
pub fn lemma_residual_action_increment(
    f: &PiecewiseLinear,
    x: f64,
    y: f64,
    q: f64,
) -> Result<f64, BoundsError> {
    refinement_residual(f, x, y, q, |gap, q| (q - 1.0) * gap * gap)
}

/// Refinement residual in p-power form: action increment minus
/// `|y - f(x)|^p` with `p = 2 + 1/(q-1)`, same hypotheses.
pub fn lemma_residual_action_increment_p(
    f: &PiecewiseLinear,
    x: f64,
    y: f64,
    q: f64,
) -> Result<f64, BoundsError> {
    refinement_residual(f, x, y, q, |gap, q| gap.abs().powf(2.0 + 1.0 / (q - 1.0)))
}

fn refinement_residual(
    f: &PiecewiseLinear,
    x: f64,
    y: f64,
    q: f64,
    right: impl Fn(f64, f64) -> f64,
) -> Result<f64, BoundsError> {
    if !(q > 1.0 && q < 2.0) {
        return Err(BoundsError::InvalidParameter(format!(
            "need q in (1,2), got {q}"
        )));
    }
    if f.base().is_empty() {
        return Err(BoundsError::InvalidParameter(
            "base set must be nonempty".into(),
        ));
    }
    if f.base().contains_input(x) {
        return Err(BoundsError::InvalidParameter(format!(
            "x = {x} already in the base set"
        )));
    }
    let fx = f
        .eval(x)
        .map_err(|e| BoundsError::InvalidParameter(e.to_string()))?;
    let (refined, increment) = f
        .insert_with_increment(x, y, q)
        .map_err(|e| BoundsError::InvalidParameter(e.to_string()))?;
    if refined.action(q) > 1.0 + 1e-12 {
        return Err(BoundsError::InvalidParameter(
            "refined interpolant must keep action at most 1".into(),
        ));
    }
    Ok(increment - right(y - fx, q))
}

/// Closed form of the dyadic floor series
/// `Σ_{k>=1} 2^{k-2} (sqrt(ε)(1-ε)^{k/2}/2^{k+1})^{1+ε}`, cross-checked
/// against its partial sums on every call.
pub fn series_dyadic_lower(epsilon: f64) -> Result<f64, BoundsError> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(BoundsError::InvalidParameter(format!(
            "need epsilon in (0, 1/2), got {epsilon}"
        )));
    }
    let first = 0.5 * ((epsilon * (1.0 - epsilon)).sqrt() / 4.0).powf(1.0 + epsilon);
    let ratio = 2.0 * ((1.0 - epsilon).sqrt() / 2.0).powf(1.0 + epsilon);
    let closed = first / (1.0 - ratio);

    // geometric decay: sum terms until they stop mattering; the ratio
    // approaches 1 as epsilon shrinks, so small epsilon needs many terms
    let mut partial = 0.0;
    let mut k = 1usize;
    let converged = loop {
        let term = dyadic_series_term(epsilon, k);
        partial += term;
        if term < 1e-16 * partial {
            break true;
        }
        if k >= 50_000_000 {
            break false;
        }
        k += 1;
    };
    debug_assert!(
        !converged || (closed - partial).abs() <= 1e-10 * closed,
        "closed form {closed} and partial sum {partial} disagree"
    );
    Ok(closed)
}

pub fn dyadic_series_term(epsilon: f64, k: usize) -> f64 {
    // evaluated in log space: the 2^{k+1} factor overflows past k ~ 1000
    // while the term itself decays geometrically
    let k = k as f64;
    let ln_amplitude = 0.5 * epsilon.ln() + k / 2.0 * (1.0 - epsilon).ln() - (k + 1.0) * LN_2;
    ((k - 2.0) * LN_2 + (1.0 + epsilon) * ln_amplitude).exp()
}

/// Partial sum of the first `terms` entries of the dyadic floor series.
pub fn dyadic_series_partial(epsilon: f64, terms: usize) -> f64 {
    (1..=terms).map(|k| dyadic_series_term(epsilon, k)).sum()
}
