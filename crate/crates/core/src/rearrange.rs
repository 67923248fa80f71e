//! Distribution functions, rearrangements and concentration curves.
//!
//! All rearrangements act on `|f|`. A field is treated as the finite
//! multiset of `(value, cell measure)` pairs, so the decreasing rearrangement
//! is an exact step function and its running integral is exactly piecewise
//! linear.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::Grid;

/// Relative slack used when comparing accumulated measures with `|Ω|/2`.
const MEASURE_EPS: f64 = 1e-12;

/// Measure of `{|f| > k}`.
pub fn distribution_function(field: &ScalarField, k: f64) -> f64 {
    field
        .values()
        .iter()
        .zip(field.grid().measures())
        .filter(|(v, _)| v.abs() > k)
        .map(|(_, m)| m)
        .sum()
}

/// The decreasing rearrangement `f*` of `|f|` as a step function on
/// `[0, total_measure]`. Step `i` covers `[breakpoints[i], breakpoints[i+1])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RearrangedProfile {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    widths: Vec<f64>,
    total_measure: f64,
}

impl RearrangedProfile {
    /// Rearranges arbitrary `(value, measure)` pairs. Ties keep input order.
    pub fn from_weighted(values: &[f64], measures: &[f64]) -> Result<RearrangedProfile> {
        if values.len() != measures.len() {
            return Err(Error::LengthMismatch {
                expected: measures.len(),
                got: values.len(),
            });
        }
        if let Some(m) = measures.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::param("measure", format!("cell measures must be positive, got {m}")));
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| {
            values[b]
                .abs()
                .partial_cmp(&values[a].abs())
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut breakpoints = Vec::with_capacity(values.len() + 1);
        let mut sorted = Vec::with_capacity(values.len());
        let mut widths = Vec::with_capacity(values.len());
        let mut s = 0.0;
        breakpoints.push(s);
        for &i in &order {
            s += measures[i];
            breakpoints.push(s);
            sorted.push(values[i].abs());
            widths.push(measures[i]);
        }
        Ok(RearrangedProfile {
            breakpoints,
            values: sorted,
            widths,
            total_measure: s,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    /// `f*(s)`, right-continuous, zero beyond the total measure.
    pub fn value_at(&self, s: f64) -> f64 {
        if s < 0.0 || s >= self.total_measure || self.values.is_empty() {
            return if s < 0.0 { self.values.first().copied().unwrap_or(0.0) } else { 0.0 };
        }
        let idx = self.breakpoints.partition_point(|&b| b <= s);
        self.values[(idx - 1).min(self.values.len() - 1)]
    }

    /// Measure of `{f* > k}`.
    pub fn distribution(&self, k: f64) -> f64 {
        self.values
            .iter()
            .zip(&self.widths)
            .filter(|(v, _)| **v > k)
            .map(|(_, w)| w)
            .sum()
    }

    pub fn norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.values.first().copied().unwrap_or(0.0);
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(&self.widths)
            .map(|(v, w)| v.powf(p) * w)
            .sum();
        sum.powf(1.0 / p)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,value\n");
        for (s, v) in self.breakpoints.iter().zip(&self.values) {
            let _ = writeln!(out, "{s},{v}");
        }
        out
    }
}

pub fn decreasing_rearrangement(field: &ScalarField) -> RearrangedProfile {
    RearrangedProfile::from_weighted(field.values(), field.grid().measures())
        .expect("grid measures are positive and match the field length")
}

/// `∫ f* g* ds` over the common support of two profiles.
pub fn rearranged_inner(a: &RearrangedProfile, b: &RearrangedProfile) -> f64 {
    let (mut i, mut j) = (0, 0);
    let mut s = 0.0;
    let mut acc = 0.0;
    while i < a.values.len() && j < b.values.len() {
        let end = a.breakpoints[i + 1].min(b.breakpoints[j + 1]);
        acc += a.values[i] * b.values[j] * (end - s);
        s = end;
        if a.breakpoints[i + 1] <= end {
            i += 1;
        }
        if b.breakpoints[j + 1] <= end {
            j += 1;
        }
    }
    acc
}

/// Schwarz rearrangement of `|f|` onto a radial ball grid.
///
/// Shell `i` spans the measure interval `[a_i, b_i]` counted from the
/// center; its value is the mean of `f*` over that interval, so integrals
/// of the rearranged field match those of `|f|` exactly.
pub fn schwarz_rearrangement(field: &ScalarField, ball: &Arc<Grid>) -> Result<ScalarField> {
    let support = field.map(f64::abs).support_measure();
    let slack = field.grid().max_cell_measure();
    if support > ball.total_measure() + slack {
        return Err(Error::SupportTooLarge {
            support,
            ball: ball.total_measure(),
        });
    }
    Ok(schwarz_truncated(field, ball))
}

/// Schwarz rearrangement that keeps only the largest `|B|` worth of `f*`
/// when the support of `f` does not fit in the ball.
pub fn schwarz_truncated(field: &ScalarField, ball: &Arc<Grid>) -> ScalarField {
    let curve = concentration(&decreasing_rearrangement(field));
    let mut values = Vec::with_capacity(ball.len());
    let mut inner = 0.0;
    for &m in ball.measures() {
        let outer = inner + m;
        values.push((curve.eval(outer) - curve.eval(inner)) / m);
        inner = outer;
    }
    ScalarField::new(ball.clone(), values).expect("one value per shell")
}

/// `inf{k : |{u > k}| <= |Ω|/2}` over the finite value set.
pub fn median(field: &ScalarField) -> f64 {
    let measures = field.grid().measures();
    let mut order: Vec<usize> = (0..field.len()).collect();
    let values = field.values();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));
    let total = field.grid().total_measure();
    let half = 0.5 * total * (1.0 + MEASURE_EPS);
    let mut below = 0.0;
    let mut idx = 0;
    while idx < order.len() {
        let v = values[order[idx]];
        while idx < order.len() && values[order[idx]] == v {
            below += measures[order[idx]];
            idx += 1;
        }
        if total - below <= half {
            return v;
        }
    }
    values[order[order.len() - 1]]
}

/// `((u - m(u))⁺, (u - m(u))⁻)`.
pub fn median_split(field: &ScalarField) -> (ScalarField, ScalarField) {
    let m = median(field);
    (field.map(|v| (v - m).max(0.0)), field.map(|v| (m - v).max(0.0)))
}

/// `s ↦ ∫₀ˢ f*`, stored at its breakpoints and linear in between.
/// Beyond the last breakpoint the curve stays at its final value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationCurve {
    s: Vec<f64>,
    values: Vec<f64>,
}

impl ConcentrationCurve {
    pub fn from_points(s: Vec<f64>, values: Vec<f64>) -> Result<ConcentrationCurve> {
        if s.len() != values.len() || s.is_empty() {
            return Err(Error::param("curve", "need matching, nonempty breakpoint lists"));
        }
        if s.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("curve", "breakpoints must be non-decreasing"));
        }
        Ok(ConcentrationCurve { s, values })
    }

    pub fn zero(total_measure: f64) -> ConcentrationCurve {
        ConcentrationCurve {
            s: vec![0.0, total_measure],
            values: vec![0.0, 0.0],
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.s
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total_measure(&self) -> f64 {
        *self.s.last().unwrap()
    }

    pub fn eval(&self, s: f64) -> f64 {
        if s <= self.s[0] {
            return self.values[0];
        }
        let last = self.s.len() - 1;
        if s >= self.s[last] {
            return self.values[last];
        }
        let idx = self.s.partition_point(|&b| b <= s);
        let (s0, s1) = (self.s[idx - 1], self.s[idx]);
        let (v0, v1) = (self.values[idx - 1], self.values[idx]);
        if s1 == s0 {
            return v1;
        }
        v0 + (v1 - v0) * (s - s0) / (s1 - s0)
    }

    /// Pointwise sum, exact on the union of both breakpoint sets.
    pub fn add(&self, other: &ConcentrationCurve) -> ConcentrationCurve {
        let s = merge_breakpoints(&self.s, &other.s, f64::INFINITY);
        let values = s.iter().map(|&x| self.eval(x) + other.eval(x)).collect();
        ConcentrationCurve { s, values }
    }

    pub fn scale(&self, factor: f64) -> ConcentrationCurve {
        ConcentrationCurve {
            s: self.s.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,value\n");
        for (s, v) in self.s.iter().zip(&self.values) {
            let _ = writeln!(out, "{s},{v}");
        }
        out
    }
}

pub fn concentration(profile: &RearrangedProfile) -> ConcentrationCurve {
    let mut values = Vec::with_capacity(profile.breakpoints.len());
    let mut acc = 0.0;
    values.push(acc);
    for (v, w) in profile.values.iter().zip(&profile.widths) {
        acc += v * w;
        values.push(acc);
    }
    ConcentrationCurve {
        s: profile.breakpoints.clone(),
        values,
    }
}

/// Concentration curve of `|f|` directly from a field.
pub fn field_concentration(field: &ScalarField) -> ConcentrationCurve {
    concentration(&decreasing_rearrangement(field))
}

fn merge_breakpoints(a: &[f64], b: &[f64], s_max: f64) -> Vec<f64> {
    let mut s: Vec<f64> = a
        .iter()
        .chain(b)
        .copied()
        .filter(|&x| x <= s_max)
        .collect();
    s.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    s.dedup();
    if s_max.is_finite() && s.last().is_none_or(|&last| last < s_max) {
        s.push(s_max);
    }
    s
}

/// Sampled difference between two concentration curves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveComparison {
    pub s: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub gap: Vec<f64>,
    pub worst_gap: f64,
    /// Location of the worst gap.
    pub worst_at: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Compares `lhs ≤ rhs` on `[0, s_max]`, sampling the union of both
/// breakpoint sets (both curves are linear in between).
pub fn compare_curves(
    lhs: &ConcentrationCurve,
    rhs: &ConcentrationCurve,
    s_max: f64,
    tolerance: f64,
) -> CurveComparison {
    let s = merge_breakpoints(&lhs.s, &rhs.s, s_max);
    let l: Vec<f64> = s.iter().map(|&x| lhs.eval(x)).collect();
    let r: Vec<f64> = s.iter().map(|&x| rhs.eval(x)).collect();
    let gap: Vec<f64> = l.iter().zip(&r).map(|(a, b)| a - b).collect();
    let (mut worst_gap, mut worst_at) = (f64::NEG_INFINITY, 0.0);
    for (g, &x) in gap.iter().zip(&s) {
        if *g > worst_gap {
            worst_gap = *g;
            worst_at = x;
        }
    }
    CurveComparison {
        holds: worst_gap <= tolerance,
        s,
        lhs: l,
        rhs: r,
        gap,
        worst_gap,
        worst_at,
        tolerance,
    }
}

/// Checks `f ≺ g` on the overlap of both measure ranges.
pub fn less_concentrated(
    f_curve: &ConcentrationCurve,
    g_curve: &ConcentrationCurve,
    tolerance: f64,
) -> CurveComparison {
    let s_max = f_curve.total_measure().min(g_curve.total_measure());
    compare_curves(f_curve, g_curve, s_max, tolerance)
}

/// Convex, nondecreasing `Φ` on `[0, ∞)` with `Φ(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "param")]
pub enum ConvexFunction {
    /// `t^p`, `p >= 1`.
    Power(f64),
    /// `(t - a)⁺`, `a >= 0`.
    Ramp(f64),
    ExpMinusOne,
}

impl ConvexFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            ConvexFunction::Power(p) => t.powf(p),
            ConvexFunction::Ramp(a) => (t - a).max(0.0),
            ConvexFunction::ExpMinusOne => t.exp_m1(),
        }
    }

    /// Powers 1, 2, 4, ramps at quarter fractions of `scale`, and `e^t - 1`.
    pub fn standard_family(scale: f64) -> Vec<ConvexFunction> {
        let mut family = vec![
            ConvexFunction::Power(1.0),
            ConvexFunction::Power(2.0),
            ConvexFunction::Power(4.0),
        ];
        family.extend([0.0, 0.25, 0.5, 0.75].iter().map(|q| ConvexFunction::Ramp(q * scale)));
        family.push(ConvexFunction::ExpMinusOne);
        family
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexCheck {
    pub phi: ConvexFunction,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `∫Φ(|f|) ≤ ∫Φ(|g|) + tol` for every member of the family.
pub fn convex_comparison_check(
    f: &ScalarField,
    g: &ScalarField,
    family: &[ConvexFunction],
    tolerance: f64,
) -> Vec<ConvexCheck> {
    family
        .iter()
        .map(|&phi| {
            let lhs = f.map(|v| phi.eval(v.abs())).integral();
            let rhs = g.map(|v| phi.eval(v.abs())).integral();
            ConvexCheck {
                phi,
                lhs,
                rhs,
                holds: lhs <= rhs + tolerance,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoundaryCondition;

    fn unit(n: usize) -> Arc<Grid> {
        Arc::new(Grid::interval(n, 1.0, BoundaryCondition::Neumann).unwrap())
    }

    fn ramp(n: usize) -> ScalarField {
        ScalarField::from_fn(unit(n), |x| x[0])
    }

    /// Field on a 10-cell unit interval with `a` on the first `k` cells, `b` elsewhere.
    fn two_valued(k: usize, a: f64, b: f64) -> ScalarField {
        let values = (0..10).map(|i| if i < k { a } else { b }).collect();
        ScalarField::new(unit(10), values).unwrap()
    }

    #[test]
    fn distribution_of_constant() {
        let f = ScalarField::constant(unit(8), 2.0);
        assert_eq!(distribution_function(&f, 1.0), 1.0);
        assert_eq!(distribution_function(&f, 2.0), 0.0);
    }

    #[test]
    fn distribution_of_ramp() {
        let n = 200;
        let mu = distribution_function(&ramp(n), 0.3);
        assert!((mu - 0.7).abs() <= 1.0 / n as f64);
    }

    #[test]
    fn rearrangement_of_ramp() {
        let n = 100;
        let p = decreasing_rearrangement(&ramp(n));
        let worst = (0..1000)
            .map(|i| {
                let s = i as f64 / 1000.0;
                (p.value_at(s) - (1.0 - s)).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst <= 1.0 / n as f64);
    }

    #[test]
    fn rearrangement_of_constant_and_two_valued() {
        let p = decreasing_rearrangement(&ScalarField::constant(unit(5), 1.5));
        assert!(p.values().iter().all(|&v| v == 1.5));
        let p = decreasing_rearrangement(&two_valued(6, 1.0, 3.0));
        assert_eq!(p.value_at(0.0), 3.0);
        assert_eq!(p.value_at(0.39), 3.0);
        assert_eq!(p.value_at(0.4), 1.0);
        assert_eq!(p.value_at(0.99), 1.0);
    }

    #[test]
    fn schwarz_of_indicator_is_centered_ball() {
        // 3 of 10 cells carry 1; ball of measure 1 in N=1 with 10 shells
        // (each shell measure 0.1).
        let f = two_valued(3, 1.0, 0.0);
        let ball = Arc::new(Grid::radial_ball(10, 1, 1.0).unwrap());
        let g = schwarz_rearrangement(&f, &ball).unwrap();
        for (i, v) in g.values().iter().enumerate() {
            let expected = if i < 3 { 1.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-12, "shell {i}: {v}");
        }
    }

    #[test]
    fn schwarz_of_constant_fills_ball() {
        let f = ScalarField::constant(unit(8), 0.7);
        let ball = Arc::new(Grid::radial_ball(5, 2, 1.0).unwrap());
        let g = schwarz_rearrangement(&f, &ball).unwrap();
        assert!(g.values().iter().all(|v| (v - 0.7).abs() < 1e-12));
    }

    #[test]
    fn schwarz_of_ramp_is_tent() {
        let n = 200;
        let ball = Arc::new(Grid::radial_ball(100, 1, 1.0).unwrap());
        let g = schwarz_rearrangement(&ramp(n), &ball).unwrap();
        for (c, v) in ball.centroids().iter().zip(g.values()) {
            assert!((v - (1.0 - 2.0 * c[0])).abs() <= 2.0 / n as f64);
        }
        assert!(g.values().windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn schwarz_rejects_oversized_support() {
        let f = ScalarField::constant(unit(10), 1.0);
        let ball = Arc::new(Grid::radial_ball(10, 1, 0.5).unwrap());
        assert!(matches!(
            schwarz_rearrangement(&f, &ball),
            Err(Error::SupportTooLarge { .. })
        ));
    }

    #[test]
    fn median_examples() {
        assert_eq!(median(&ScalarField::constant(unit(4), 3.0)), 3.0);
        // 0 on measure 0.6, 1 on measure 0.4.
        assert_eq!(median(&two_valued(6, 0.0, 1.0)), 0.0);
        let m = median(&ramp(100));
        assert!((m - 0.5).abs() <= 0.01);
    }

    #[test]
    fn median_split_uses_infimum() {
        // -1 on measure 0.5, +1 on measure 0.5: |{u > -1}| = 0.5 so m = -1.
        let f = two_valued(5, -1.0, 1.0);
        assert_eq!(median(&f), -1.0);
        let (u1, u2) = median_split(&f);
        for (i, v) in u1.values().iter().enumerate() {
            assert_eq!(*v, if i < 5 { 0.0 } else { 2.0 });
        }
        assert!(u2.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn median_split_of_constant_and_ramp() {
        let (u1, u2) = median_split(&ScalarField::constant(unit(6), 4.0));
        assert_eq!(u1.sup_norm(), 0.0);
        assert_eq!(u2.sup_norm(), 0.0);
        let n = 100;
        let f = ramp(n);
        let (u1, u2) = median_split(&f);
        for ((x, a), b) in f.values().iter().zip(u1.values()).zip(u2.values()) {
            assert!((a - (x - 0.5).max(0.0)).abs() <= 1.0 / n as f64);
            assert!((b - (0.5 - x).max(0.0)).abs() <= 1.0 / n as f64);
        }
    }

    #[test]
    fn concentration_examples() {
        let c = concentration(&decreasing_rearrangement(&ScalarField::constant(unit(4), 2.0)));
        assert!((c.eval(0.3) - 0.6).abs() < 1e-15);
        let c = concentration(&decreasing_rearrangement(&two_valued(6, 1.0, 3.0)));
        assert!((c.eval(0.5) - 1.3).abs() < 1e-14);
        let c = concentration(&decreasing_rearrangement(&ScalarField::zeros(unit(4))));
        assert!(c.values().iter().all(|&v| v == 0.0));
    }

    fn indicator_curve(height: f64, measure: f64) -> ConcentrationCurve {
        ConcentrationCurve::from_points(vec![0.0, measure, 1.0], vec![0.0, height * measure, height * measure])
            .unwrap()
    }

    #[test]
    fn less_concentrated_examples() {
        let f = indicator_curve(1.0, 1.0);
        let g = indicator_curve(2.0, 0.5);
        let same = less_concentrated(&f, &f, 0.0);
        assert!(same.holds);
        assert_eq!(same.worst_gap, 0.0);
        assert!(less_concentrated(&f, &g, 0.0).holds);
        let rev = less_concentrated(&g, &f, 0.0);
        assert!(!rev.holds);
        assert!((rev.worst_gap - 0.5).abs() < 1e-15);
        assert_eq!(rev.worst_at, 0.5);
    }

    #[test]
    fn convex_checks() {
        let f = ScalarField::constant(unit(10), 1.0);
        let g = two_valued(5, 2.0, 0.0);
        let eq = convex_comparison_check(&f, &f, &ConvexFunction::standard_family(1.0), 0.0);
        assert!(eq.iter().all(|c| c.holds && c.lhs == c.rhs));
        let checks = convex_comparison_check(&f, &g, &ConvexFunction::standard_family(2.0), 1e-12);
        assert!(checks.iter().all(|c| c.holds));
        let sq = &checks[1];
        assert!((sq.lhs - 1.0).abs() < 1e-12 && (sq.rhs - 2.0).abs() < 1e-12);
        let lin = &checks[0];
        assert!((lin.lhs - lin.rhs).abs() < 1e-12);
    }

    #[test]
    fn curve_sum_is_exact() {
        let a = indicator_curve(1.0, 0.3);
        let b = indicator_curve(2.0, 0.6);
        let c = a.add(&b);
        for s in [0.0, 0.1, 0.3, 0.45, 0.6, 0.9] {
            assert!((c.eval(s) - a.eval(s) - b.eval(s)).abs() < 1e-15);
        }
    }

    #[test]
    fn hardy_littlewood_simple() {
        let f = two_valued(3, 2.0, 1.0);
        let g = two_valued(7, 1.0, 5.0);
        let lhs = f.zip_with(&g, |a, b| (a * b).abs()).unwrap().integral();
        let rhs = rearranged_inner(&decreasing_rearrangement(&f), &decreasing_rearrangement(&g));
        assert!(lhs <= rhs + 1e-12);
        assert!((rhs - (2.0 * 5.0 * 0.3 + 1.0 * 1.0 * 0.7)).abs() < 1e-12);
    }
}
