//! Piecewise-linear function representation on `[0,1]`.
//!
//! A [`PointSet`] is a sorted list of `(u, v)` samples with distinct inputs;
//! [`PiecewiseLinear`] is the interpolant through such a set, held constant
//! outside the hull of its inputs. The q-action `∫|f'|^q` of an interpolant
//! reduces to a finite sum over its segments, which is what [`PiecewiseLinear::action`]
//! computes. [`SmoothnessClass`] bundles the smoothness exponent and dimension
//! and drives the membership predicate [`PiecewiseLinear::in_class`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack applied to class-membership comparisons. Several adversary
/// constructions sit exactly on the `action = 1` boundary.
pub const CLASS_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum FuncrepError {
    #[error("input {x} outside [0,1]")]
    DomainError { x: f64 },
    #[error("input {u} already present with value {existing}, refusing value {new}")]
    DuplicateInput { u: f64, existing: f64, new: f64 },
}

/// Smoothness exponent: a finite `q` or the Lipschitz case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothness {
    Finite(f64),
    Infinite,
}

impl Smoothness {
    pub fn is_finite(&self) -> bool {
        matches!(self, Smoothness::Finite(_))
    }
}

impl std::fmt::Display for Smoothness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Smoothness::Finite(q) => write!(f, "{q}"),
            Smoothness::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Smoothness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Smoothness::Finite(q) => s.serialize_f64(*q),
            Smoothness::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Smoothness {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(q) => Ok(Smoothness::Finite(q)),
            Raw::Str(s) if s == "inf" => Ok(Smoothness::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

/// The function class parameters: smoothness exponent `q` and dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessClass {
    pub q: Smoothness,
    pub d: usize,
}

impl SmoothnessClass {
    /// `q >= 1` finite (q = 1 admitted for reporting only) or infinite; `d >= 1`.
    pub fn new(q: Smoothness, d: usize) -> Self {
        if let Smoothness::Finite(q) = q {
            assert!(q >= 1.0, "smoothness exponent must be >= 1, got {q}");
        }
        assert!(d >= 1, "dimension must be positive");
        SmoothnessClass { q, d }
    }

    pub fn univariate(q: Smoothness) -> Self {
        Self::new(q, 1)
    }
}

/// Sorted set of `(u, v)` pairs with distinct `u` in `[0,1]`.
///
/// Serializes as an array of `[u, v]` pairs in input order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct PointSet {
    points: Vec<(f64, f64)>,
}

impl TryFrom<Vec<(f64, f64)>> for PointSet {
    type Error = FuncrepError;

    fn try_from(pairs: Vec<(f64, f64)>) -> Result<Self, FuncrepError> {
        PointSet::from_pairs(pairs)
    }
}

impl From<PointSet> for Vec<(f64, f64)> {
    fn from(set: PointSet) -> Vec<(f64, f64)> {
        set.points
    }
}

impl PointSet {
    pub fn new() -> Self {
        PointSet { points: Vec::new() }
    }

    /// Builds a set from arbitrary-order pairs. Exact duplicates collapse;
    /// conflicting values at one input are an error.
    pub fn from_pairs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self, FuncrepError> {
        let mut set = PointSet::new();
        for (u, v) in pairs {
            set.insert(u, v)?;
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Position of `u` if present, else the insertion index.
    fn locate(&self, u: f64) -> Result<usize, usize> {
        self.points
            .binary_search_by(|(ui, _)| ui.partial_cmp(&u).expect("inputs are never NaN"))
    }

    pub fn contains_input(&self, u: f64) -> bool {
        self.locate(u).is_ok()
    }

    pub fn value_at_input(&self, u: f64) -> Option<f64> {
        self.locate(u).ok().map(|i| self.points[i].1)
    }

    /// Inserts `(u, v)`. Re-inserting an existing pair is a no-op; a different
    /// value at an existing input is rejected.
    pub fn insert(&mut self, u: f64, v: f64) -> Result<(), FuncrepError> {
        if !(0.0..=1.0).contains(&u) {
            return Err(FuncrepError::DomainError { x: u });
        }
        match self.locate(u) {
            Ok(i) => {
                let existing = self.points[i].1;
                if existing == v {
                    Ok(())
                } else {
                    Err(FuncrepError::DuplicateInput {
                        u,
                        existing,
                        new: v,
                    })
                }
            }
            Err(i) => {
                self.points.insert(i, (u, v));
                Ok(())
            }
        }
    }
}

/// The interpolant `f_S` through a point set: constant left of the first
/// input and right of the last, linear in between, identically zero when
/// the base is empty.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    base: PointSet,
}

impl PiecewiseLinear {
    pub fn new(base: PointSet) -> Self {
        PiecewiseLinear { base }
    }

    pub fn empty() -> Self {
        PiecewiseLinear {
            base: PointSet::new(),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> Result<Self, FuncrepError> {
        Ok(PiecewiseLinear::new(PointSet::from_pairs(pairs)?))
    }

    pub fn base(&self) -> &PointSet {
        &self.base
    }

    /// Evaluates the interpolant at `x in [0,1]`.
    ///
    /// Base inputs evaluate to their stored value exactly, so a learner that
    /// revisits a revealed input reproduces the revealed value bit-for-bit.
    pub fn eval(&self, x: f64) -> Result<f64, FuncrepError> {
        if !(0.0..=1.0).contains(&x) {
            return Err(FuncrepError::DomainError { x });
        }
        let pts = self.base.points();
        if pts.is_empty() {
            return Ok(0.0);
        }
        match self.base.locate(x) {
            Ok(i) => Ok(pts[i].1),
            Err(i) => {
                if i == 0 {
                    Ok(pts[0].1)
                } else if i == pts.len() {
                    Ok(pts[pts.len() - 1].1)
                } else {
                    let (u0, v0) = pts[i - 1];
                    let (u1, v1) = pts[i];
                    Ok(v0 + (x - u0) * (v1 - v0) / (u1 - u0))
                }
            }
        }
    }

    /// The q-action `∫_0^1 |f'|^q = Σ (u_{i+1}-u_i)|Δv/Δu|^q`.
    ///
    /// Zero-slope segments contribute nothing and are skipped.
    pub fn action(&self, q: f64) -> f64 {
        assert!(q >= 1.0, "action exponent must be >= 1, got {q}");
        let pts = self.base.points();
        let mut total = 0.0;
        for w in pts.windows(2) {
            let (u0, v0) = w[0];
            let (u1, v1) = w[1];
            if v1 != v0 {
                let width = u1 - u0;
                total += width * ((v1 - v0) / width).abs().powf(q);
            }
        }
        total
    }

    /// Largest absolute segment slope; zero for fewer than two points.
    pub fn max_slope(&self) -> f64 {
        let pts = self.base.points();
        let mut best: f64 = 0.0;
        for w in pts.windows(2) {
            let (u0, v0) = w[0];
            let (u1, v1) = w[1];
            best = best.max(((v1 - v0) / (u1 - u0)).abs());
        }
        best
    }

    /// Returns the refined interpolant through `base ∪ {(x, y)}`.
    pub fn insert(&self, x: f64, y: f64) -> Result<Self, FuncrepError> {
        let mut base = self.base.clone();
        base.insert(x, y)?;
        Ok(PiecewiseLinear::new(base))
    }

    /// Refines by `(x, y)` and reports the q-action increment, which is
    /// nonnegative for every refinement.
    ///
    /// The increment is computed from the segments the new point touches;
    /// untouched segments cancel from the global difference.
    pub fn insert_with_increment(
        &self,
        x: f64,
        y: f64,
        q: f64,
    ) -> Result<(Self, f64), FuncrepError> {
        assert!(q >= 1.0, "action exponent must be >= 1, got {q}");
        let refined = self.insert(x, y)?;
        if self.base.contains_input(x) {
            return Ok((refined, 0.0));
        }
        let seg = |u0: f64, v0: f64, u1: f64, v1: f64| -> f64 {
            if v1 == v0 {
                0.0
            } else {
                (u1 - u0) * ((v1 - v0) / (u1 - u0)).abs().powf(q)
            }
        };
        let pts = self.base.points();
        let increment = match self.base.locate(x) {
            Ok(_) => unreachable!("handled above"),
            Err(i) => {
                if pts.is_empty() {
                    0.0
                } else if i == 0 {
                    seg(x, y, pts[0].0, pts[0].1)
                } else if i == pts.len() {
                    let (um, vm) = pts[pts.len() - 1];
                    seg(um, vm, x, y)
                } else {
                    let (u0, v0) = pts[i - 1];
                    let (u1, v1) = pts[i];
                    seg(u0, v0, x, y) + seg(x, y, u1, v1) - seg(u0, v0, u1, v1)
                }
            }
        };
        // refinement never lowers the action; absorb rounding residue only
        let increment = if increment < 0.0 && increment > -1e-12 {
            0.0
        } else {
            increment
        };
        Ok((refined, increment))
    }

    /// Membership in the univariate class: `action(q) <= 1` for finite `q`,
    /// `max_slope <= 1` for the Lipschitz class, both with [`CLASS_TOL`] slack.
    pub fn in_class(&self, cls: &SmoothnessClass) -> bool {
        assert_eq!(cls.d, 1, "in_class applies to univariate classes");
        match cls.q {
            Smoothness::Finite(q) => self.action(q) <= 1.0 + CLASS_TOL,
            Smoothness::Infinite => self.max_slope() <= 1.0 + CLASS_TOL,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pl(pairs: &[(f64, f64)]) -> PiecewiseLinear {
        PiecewiseLinear::from_pairs(pairs.iter().copied()).unwrap()
    }

    /// Quadrature route for the action: integrate |f'|^q using only `eval`,
    /// with the integration grid refined at the base inputs so each cell has
    /// constant slope. Independent of the segment-sum path.
    pub(crate) fn action_by_quadrature(f: &PiecewiseLinear, q: f64, samples: usize) -> f64 {
        let mut grid: Vec<f64> = (0..=samples).map(|i| i as f64 / samples as f64).collect();
        grid.extend(f.base().points().iter().map(|&(u, _)| u));
        grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
        grid.dedup();
        let mut total = 0.0;
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b > a {
                let slope = (f.eval(b).unwrap() - f.eval(a).unwrap()) / (b - a);
                if slope != 0.0 {
                    total += (b - a) * slope.abs().powf(q);
                }
            }
        }
        total
    }

    #[test]
    fn eval_empty_base_is_zero() {
        assert_eq!(PiecewiseLinear::empty().eval(0.3).unwrap(), 0.0);
    }

    #[test]
    fn eval_interior_and_flat_extension() {
        let f = pl(&[(0.2, 1.0), (0.8, -1.0)]);
        assert!(f.eval(0.5).unwrap().abs() < 1e-15);
        assert_eq!(f.eval(0.1).unwrap(), 1.0);
        assert_eq!(f.eval(0.9).unwrap(), -1.0);
        // base inputs reproduce their stored values exactly
        assert_eq!(f.eval(0.2).unwrap(), 1.0);
    }

    #[test]
    fn eval_rejects_out_of_domain() {
        let f = pl(&[(0.2, 1.0)]);
        assert!(matches!(f.eval(1.5), Err(FuncrepError::DomainError { .. })));
        assert!(matches!(
            f.eval(-0.1),
            Err(FuncrepError::DomainError { .. })
        ));
    }

    #[test]
    fn action_of_single_point_is_zero() {
        assert_eq!(pl(&[(0.5, 0.3)]).action(2.0), 0.0);
        assert_eq!(PiecewiseLinear::empty().action(2.0), 0.0);
    }

    #[test]
    fn action_unit_slope() {
        assert_eq!(pl(&[(0.0, 0.0), (1.0, 1.0)]).action(3.0), 1.0);
    }

    #[test]
    fn action_skips_flat_segments() {
        let f = pl(&[(0.0, 0.0), (0.5, 0.0), (0.75, 0.5), (1.0, 0.5)]);
        assert!((f.action(2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn max_slope_examples() {
        assert_eq!(pl(&[(0.0, 0.0), (1.0, 1.0)]).max_slope(), 1.0);
        assert_eq!(PiecewiseLinear::empty().max_slope(), 0.0);
        assert_eq!(pl(&[(0.0, 0.0), (0.25, 0.5)]).max_slope(), 2.0);
    }

    #[test]
    fn insert_midpoint_increment_matches_hand_value() {
        let f = pl(&[(0.0, 0.0), (1.0, 0.0)]);
        let (g, inc) = f.insert_with_increment(0.5, 0.1, 2.0).unwrap();
        assert!((inc - 0.04).abs() < 1e-15, "inc = {inc}");
        assert!((g.action(2.0) - 0.04).abs() < 1e-15);
    }

    #[test]
    fn insert_on_segment_is_free() {
        let f = pl(&[(0.0, 0.0), (1.0, 1.0)]);
        let (_, inc) = f.insert_with_increment(0.5, 0.5, 2.0).unwrap();
        assert_eq!(inc, 0.0);
    }

    #[test]
    fn insert_extends_single_point() {
        let f = pl(&[(0.0, 0.0)]);
        let (g, inc) = f.insert_with_increment(1.0, 0.5, 1.5).unwrap();
        let expected = 0.5f64.powf(1.5);
        assert!((inc - expected).abs() < 1e-15);
        assert!((g.action(1.5) - expected).abs() < 1e-15);
        assert!((expected - 0.3535533905932738).abs() < 1e-16);
    }

    #[test]
    fn insert_duplicate_value_is_noop_conflict_is_error() {
        let f = pl(&[(0.5, 0.3)]);
        let (g, inc) = f.insert_with_increment(0.5, 0.3, 2.0).unwrap();
        assert_eq!(g, f);
        assert_eq!(inc, 0.0);
        assert!(matches!(
            f.insert(0.5, 0.4),
            Err(FuncrepError::DuplicateInput { .. })
        ));
    }

    #[test]
    fn in_class_examples() {
        let fq2 = SmoothnessClass::univariate(Smoothness::Finite(2.0));
        assert!(pl(&[(0.0, 0.0), (1.0, 1.0)]).in_class(&fq2));

        let finf = SmoothnessClass::univariate(Smoothness::Infinite);
        assert!(!pl(&[(0.0, 0.0), (0.25, 0.5)]).in_class(&finf));
    }

    #[test]
    fn in_class_binary_split_boundary_function() {
        // one segment of height b over width 2^{-k}, the shape the
        // binary-split adversary leaves behind; action 2^{k(q-1)} b^q <= 1
        let q = 1.5;
        let b = (-0.5f64).exp();
        let k = (-q * b.log2() / (q - 1.0)).floor() as i32;
        assert_eq!(k, 2);
        let w = 0.5f64.powi(k);
        let f = pl(&[(0.0, 0.0), (1.0 - w, 0.0), (1.0, b)]);
        assert!(f.in_class(&SmoothnessClass::univariate(Smoothness::Finite(q))));
        let expected = 2.0f64.powf(k as f64 * (q - 1.0)) * b.powf(q);
        assert!((f.action(q) - expected).abs() < 1e-14);
        assert!((expected - 0.9447331054820294).abs() < 1e-15);
    }

    #[test]
    fn pointset_serializes_as_pairs() {
        let s = PointSet::from_pairs([(0.5, 0.3), (0.0, 1.0)]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[[0.0,1.0],[0.5,0.3]]");
        let back: PointSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn smoothness_serde_roundtrip() {
        let q = Smoothness::Finite(1.5);
        assert_eq!(serde_json::to_string(&q).unwrap(), "1.5");
        let inf: Smoothness = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(inf, Smoothness::Infinite);
    }

    fn arb_pointset(max_pts: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
        proptest::collection::vec((0.0f64..=1.0, -1.0f64..=1.0), 1..=max_pts).prop_map(|mut v| {
            v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            v.dedup_by(|a, b| a.0 == b.0);
            v
        })
    }

    proptest! {
        // refining a point set never lowers the action
        #[test]
        fn action_monotone_under_insert(
            pts in arb_pointset(8),
            x in 0.0f64..=1.0,
            y in -1.0f64..=1.0,
            q in 1.01f64..2.5,
        ) {
            let f = PiecewiseLinear::from_pairs(pts.clone()).unwrap();
            if !f.base().contains_input(x) {
                let (g, inc) = f.insert_with_increment(x, y, q).unwrap();
                prop_assert!(inc >= 0.0);
                let global = g.action(q) - f.action(q);
                prop_assert!((global - inc).abs() <= 1e-9 * (1.0 + inc.abs()));
            }
        }

        // the interpolant is action-minimal: any piecewise-linear function
        // through a superset of S has at least the action of f_S
        #[test]
        fn interpolant_minimality(
            pts in arb_pointset(6),
            extra in proptest::collection::vec((0.0f64..=1.0, -1.0f64..=1.0), 1..5),
            q in 1.01f64..1.99,
        ) {
            let f = PiecewiseLinear::from_pairs(pts.clone()).unwrap();
            let mut sup = pts.clone();
            for (u, v) in extra {
                if !sup.iter().any(|&(su, _)| su == u) {
                    sup.push((u, v));
                }
            }
            let g = PiecewiseLinear::from_pairs(sup).unwrap();
            prop_assert!(g.action(q) >= f.action(q) - 1e-12);
        }

        // inserting at the midpoint of the two nearest inputs obeys the
        // equidistant q=2 increment identity 2(y - f(x))^2 / dist
        #[test]
        fn equidistant_increment_identity(
            pts in arb_pointset(8),
            pick in 0usize..7,
            y in -1.0f64..=1.0,
        ) {
            prop_assume!(pts.len() >= 2);
            let i = pick % (pts.len() - 1);
            let (u0, _) = pts[i];
            let (u1, _) = pts[i + 1];
            let x = u0 + (u1 - u0) / 2.0;
            // midpoint distance must also be the global minimum distance
            let dist = x - u0;
            let min_dist = pts
                .iter()
                .map(|&(u, _)| (u - x).abs())
                .fold(f64::INFINITY, f64::min);
            prop_assume!(dist <= min_dist + 1e-15 && dist > 1e-9);
            let f = PiecewiseLinear::from_pairs(pts.clone()).unwrap();
            prop_assume!(!f.base().contains_input(x));
            let (_, inc) = f.insert_with_increment(x, y, 2.0).unwrap();
            let expected = 2.0 * (y - f.eval(x).unwrap()).powi(2) / dist;
            prop_assert!((inc - expected).abs() <= 1e-12 * (1.0 + expected));
        }

        // segment-sum action agrees with the eval-only quadrature route
        #[test]
        fn action_matches_quadrature(pts in arb_pointset(8), q in 1.01f64..3.0) {
            let f = PiecewiseLinear::from_pairs(pts).unwrap();
            let direct = f.action(q);
            let quad = action_by_quadrature(&f, q, 100_000);
            prop_assert!((direct - quad).abs() <= 1e-8 * (1.0 + direct));
        }
    }
}
