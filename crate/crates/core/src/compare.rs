//! Concentration comparison between a Neumann problem on a domain and its
//! radially symmetric Dirichlet counterpart on a ball of half the measure.
//!
//! At every height `y` the extension `w(·, y)` of the Neumann solution is
//! split at its median into `w₁, w₂`, and the running integral of
//! `w₁* + w₂*` is compared with that of `ξ*`, where `ξ` extends the radial
//! solution. Both curves are exactly piecewise linear, so the comparison is
//! done on the union of their breakpoints.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{extend, ExtensionField};
use crate::field::ScalarField;
use crate::grid::{unit_ball_measure, BoundaryCondition, Grid, GridShape, GridSummary};
use crate::rearrange::{
    compare_curves, field_concentration, less_concentrated, median, median_split, schwarz_truncated,
    ConcentrationCurve,
};
use crate::spectral::SpectralOperator;

/// Default multiple of `h · ‖f‖₂` used as the comparison tolerance.
pub const DEFAULT_C_TOL: f64 = 10.0;

/// `1 / (N ω_N^{1/N} Q)²`.
pub fn gamma_constant(dimension: usize, q: f64) -> Result<f64> {
    if dimension == 0 {
        return Err(Error::param("dimension", "must be at least 1"));
    }
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::param("Q", format!("must be positive, got {q}")));
    }
    let n = dimension as f64;
    let denom = n * unit_ball_measure(dimension).powf(1.0 / n) * q;
    Ok(1.0 / (denom * denom))
}

/// Relative isoperimetric constant used when none is configured.
///
/// Intervals get `Q = 1`. Rectangles get the value realised by the
/// half-measure cut across the longer side, `sqrt(|Ω|/2) / min(lx, ly)`,
/// which is `1/√2` on the unit square. This is a conjecture for the best
/// constant, not a computed one.
pub fn default_q(grid: &Grid) -> f64 {
    match grid.shape() {
        GridShape::Interval { .. } => 1.0,
        GridShape::Rectangle { lx, ly, .. } => (0.5 * lx * ly).sqrt() / lx.min(ly),
        GridShape::RadialBall { .. } => 1.0,
    }
}

/// Radial ball with measure `|Ω|/2` in the dimension of `omega`.
pub fn half_ball(omega: &Grid, shells: usize) -> Result<Arc<Grid>> {
    Ok(Arc::new(Grid::radial_ball(
        shells,
        omega.dimension(),
        0.5 * omega.total_measure(),
    )?))
}

/// `C_tol · h · ‖f‖₂`.
pub fn tolerance_for(c_tol: f64, grid: &Grid, f: &ScalarField) -> f64 {
    c_tol * grid.spacing() * f.l2_norm()
}

/// How the datum is split before symmetrisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetrizationMode {
    /// `f⁺` and `f⁻`.
    ZeroMean,
    /// `(f - m(f))⁺` and `(f - m(f))⁻`.
    WithC,
}

impl SymmetrizationMode {
    pub fn for_c(c: f64) -> SymmetrizationMode {
        if c > 0.0 {
            SymmetrizationMode::WithC
        } else {
            SymmetrizationMode::ZeroMean
        }
    }
}

fn split_parts(f: &ScalarField, mode: SymmetrizationMode) -> (ScalarField, ScalarField) {
    match mode {
        SymmetrizationMode::ZeroMean => (f.positive_part(), f.negative_part()),
        SymmetrizationMode::WithC => median_split(f),
    }
}

fn check_half_measure(omega: &Grid, ball: &Grid) -> Result<()> {
    let half = 0.5 * omega.total_measure();
    if (ball.total_measure() - half).abs() > 1e-10 {
        return Err(Error::param(
            "ball",
            format!("measure {} differs from |Ω|/2 = {half}", ball.total_measure()),
        ));
    }
    Ok(())
}

/// `f₁# + f₂#` on the ball, with the parts chosen by `mode`.
///
/// A part whose support exceeds `|B|` keeps only the largest `|B|` worth of
/// its decreasing rearrangement; only that range enters the comparison.
pub fn symmetrized_data(f: &ScalarField, ball: &Arc<Grid>, mode: SymmetrizationMode) -> Result<ScalarField> {
    check_half_measure(f.grid(), ball)?;
    let (f1, f2) = split_parts(f, mode);
    schwarz_truncated(&f1, ball).add(&schwarz_truncated(&f2, ball))
}

/// `(h⁺)# + (h⁻)#` on the ball.
pub fn symmetrized_sign_parts(h: &ScalarField, ball: &Arc<Grid>) -> Result<ScalarField> {
    symmetrized_data(h, ball, SymmetrizationMode::ZeroMean)
}

/// Inputs shared by every elliptic comparison.
#[derive(Debug, Clone)]
pub struct EllipticProblem<'a> {
    /// Neumann operator on the domain.
    pub omega: &'a SpectralOperator,
    /// Dirichlet operator on the half-measure ball, built with diffusion `γ`.
    pub ball: &'a SpectralOperator,
    pub sigma: f64,
    pub c: f64,
    pub y_samples: Vec<f64>,
    pub tolerance: f64,
    /// Run separate comparisons for the two parts when the median curve is
    /// flat in `y`.
    pub split_mode: bool,
    /// Recorded in the report; the operator on the ball already carries `γ`.
    pub q: f64,
}

impl EllipticProblem<'_> {
    fn validate(&self) -> Result<()> {
        if self.omega.bc() != BoundaryCondition::Neumann {
            return Err(Error::param("omega", "domain operator must be Neumann"));
        }
        if self.ball.bc() != BoundaryCondition::Dirichlet {
            return Err(Error::param("ball", "ball operator must be Dirichlet"));
        }
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(Error::param("sigma", format!("must lie in (0, 1), got {}", self.sigma)));
        }
        if !(self.c.is_finite() && self.c >= 0.0) {
            return Err(Error::param("c", format!("must be nonnegative, got {}", self.c)));
        }
        if !(self.tolerance.is_finite() && self.tolerance >= 0.0) {
            return Err(Error::param("tolerance", format!("must be nonnegative, got {}", self.tolerance)));
        }
        check_half_measure(self.omega.grid(), self.ball.grid())
    }

    fn half_measure(&self) -> f64 {
        0.5 * self.omega.grid().total_measure()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
}

impl Verdict {
    pub fn from_gap(worst_gap: f64, tolerance: f64) -> Verdict {
        if worst_gap <= tolerance {
            Verdict::Holds
        } else {
            Verdict::Violated
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonParams {
    pub sigma: f64,
    pub c: f64,
    pub gamma: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    pub omega: GridSummary,
    pub ball: GridSummary,
    pub tolerance: f64,
    pub mode: SymmetrizationMode,
    pub split_mode: bool,
    /// `λ(y)`, the median of `w(·, y)` at every sampled height.
    pub median_curve: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YSlice {
    pub y: f64,
    pub s: Vec<f64>,
    #[serde(rename = "U")]
    pub u: Vec<f64>,
    #[serde(rename = "V")]
    pub v: Vec<f64>,
    pub chi: Vec<f64>,
}

/// Separate comparisons `wᵢ# ≺ ξᵢ` at one height.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitSlice {
    pub y: f64,
    pub worst_gap_1: f64,
    pub worst_gap_2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub params: ComparisonParams,
    pub per_y: Vec<YSlice>,
    pub worst_gap: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<Vec<SplitSlice>>,
}

impl ComparisonReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV rows `y,s,U,V,chi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,s,U,V,chi\n");
        for slice in &self.per_y {
            for i in 0..slice.s.len() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    slice.y, slice.s[i], slice.u[i], slice.v[i], slice.chi[i]
                );
            }
        }
        out
    }
}

/// A finished comparison with the two traces it was computed from.
#[derive(Debug, Clone)]
pub struct ComparisonOutcome {
    pub report: ComparisonReport,
    pub u: ScalarField,
    pub v: ScalarField,
}

/// Curve of `w₁* + w₂*` for the median split of `w`, and the median.
fn split_curve(w: &ScalarField) -> (ConcentrationCurve, f64) {
    let m = median(w);
    let (w1, w2) = median_split(w);
    (field_concentration(&w1).add(&field_concentration(&w2)), m)
}

/// One height: curve of the median split of `w` against the curve of `ξ`
/// on `[0, |Ω|/2]`. Returns the slice, the median of `w` and the worst gap.
pub fn slice_comparison(y: f64, w: &ScalarField, xi: &ScalarField) -> (YSlice, f64, f64) {
    let s_max = 0.5 * w.grid().total_measure();
    let (lhs, m) = split_curve(w);
    let rhs = field_concentration(xi);
    let cmp = compare_curves(&lhs, &rhs, s_max, 0.0);
    let slice = YSlice {
        y,
        s: cmp.s,
        u: cmp.lhs,
        v: cmp.rhs,
        chi: cmp.gap,
    };
    (slice, m, cmp.worst_gap)
}

fn compare_extensions(w: &ExtensionField, xi: &ExtensionField) -> (Vec<YSlice>, Vec<f64>, f64) {
    let mut per_y = Vec::with_capacity(w.y_samples.len());
    let mut medians = Vec::with_capacity(w.y_samples.len());
    let mut worst = f64::NEG_INFINITY;
    for (j, &y) in w.y_samples.iter().enumerate() {
        let (slice, m, gap) = slice_comparison(y, w.slice(j), xi.slice(j));
        worst = worst.max(gap);
        medians.push(m);
        per_y.push(slice);
    }
    (per_y, medians, worst)
}

fn with_y_zero(ys: &[f64]) -> Vec<f64> {
    let mut out = ys.to_vec();
    if !out.contains(&0.0) {
        out.insert(0, 0.0);
    }
    out
}

/// Solves both problems for the given data and compares them.
///
/// `f` is the datum on the domain, `g` the radial datum on the ball. Split
/// mode needs the two ball data separately, so it is passed as parts.
fn run(
    problem: &EllipticProblem,
    f: &ScalarField,
    g_parts: (&ScalarField, &ScalarField),
    mode: SymmetrizationMode,
) -> Result<ComparisonOutcome> {
    problem.validate()?;
    let ys = with_y_zero(&problem.y_samples);
    let u = problem.omega.solve_elliptic(problem.sigma, problem.c, f)?;
    let g = g_parts.0.add(g_parts.1)?;
    let v = problem.ball.solve_elliptic(problem.sigma, problem.c, &g)?;
    let w = extend(problem.omega, problem.sigma, &u, &ys)?;
    let xi = extend(problem.ball, problem.sigma, &v, &ys)?;
    let (per_y, medians, mut worst_gap) = compare_extensions(&w, &xi);

    let spread = medians.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - medians.iter().cloned().fold(f64::INFINITY, f64::min);
    let split = if problem.split_mode && spread <= problem.tolerance {
        let slices = split_comparison(problem, &w, g_parts, &ys)?;
        for s in &slices {
            worst_gap = worst_gap.max(s.worst_gap_1).max(s.worst_gap_2);
        }
        Some(slices)
    } else {
        None
    };

    if !worst_gap.is_finite() {
        return Err(Error::Numerical(format!("worst gap is {worst_gap}")));
    }
    let report = ComparisonReport {
        params: ComparisonParams {
            sigma: problem.sigma,
            c: problem.c,
            gamma: problem.ball.gamma(),
            q: problem.q,
            omega: problem.omega.grid().summary(),
            ball: problem.ball.grid().summary(),
            tolerance: problem.tolerance,
            mode,
            split_mode: problem.split_mode,
            median_curve: medians,
        },
        per_y,
        worst_gap,
        verdict: Verdict::from_gap(worst_gap, problem.tolerance),
        split,
    };
    Ok(ComparisonOutcome { report, u, v })
}

fn split_comparison(
    problem: &EllipticProblem,
    w: &ExtensionField,
    g_parts: (&ScalarField, &ScalarField),
    ys: &[f64],
) -> Result<Vec<SplitSlice>> {
    let s_max = problem.half_measure();
    let v1 = problem.ball.solve_elliptic(problem.sigma, problem.c, g_parts.0)?;
    let v2 = problem.ball.solve_elliptic(problem.sigma, problem.c, g_parts.1)?;
    let xi1 = extend(problem.ball, problem.sigma, &v1, ys)?;
    let xi2 = extend(problem.ball, problem.sigma, &v2, ys)?;
    let mut out = Vec::with_capacity(ys.len());
    for (j, &y) in ys.iter().enumerate() {
        let (w1, w2) = median_split(w.slice(j));
        let gap = |wi: &ScalarField, xi: &ScalarField| {
            compare_curves(&field_concentration(wi), &field_concentration(xi), s_max, problem.tolerance).worst_gap
        };
        out.push(SplitSlice {
            y,
            worst_gap_1: gap(&w1, xi1.slice(j)),
            worst_gap_2: gap(&w2, xi2.slice(j)),
        });
    }
    Ok(out)
}

/// Compares the solution for `f` with the solution for the symmetrised
/// datum `f₁# + f₂#`. The split convention follows `c`: sign parts of `f`
/// when `c = 0`, parts of `f - m(f)` when `c > 0`.
pub fn elliptic_compare(problem: &EllipticProblem, f: &ScalarField) -> Result<ComparisonOutcome> {
    let mode = SymmetrizationMode::for_c(problem.c);
    let ball = problem.ball.grid();
    check_half_measure(f.grid(), ball)?;
    let (f1, f2) = split_parts(f, mode);
    let g1 = schwarz_truncated(&f1, ball);
    let g2 = schwarz_truncated(&f2, ball);
    run(problem, f, (&g1, &g2), mode)
}

/// An extra source `h` on the domain with its own radial bound `g₂`.
#[derive(Debug, Clone, Copy)]
pub struct ExtraSource<'a> {
    pub h: &'a ScalarField,
    pub g2: &'a ScalarField,
}

fn check_radially_nonincreasing(g: &ScalarField, tolerance: f64) -> Result<()> {
    let worst = g
        .values()
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);
    if worst > tolerance {
        return Err(Error::param(
            "g",
            format!("radial datum increases outward by {worst:e}"),
        ));
    }
    Ok(())
}

/// Slack for comparing a domain curve with a shell-averaged radial curve:
/// averaging over a shell lowers the curve by at most the shell measure
/// times the sup of the datum.
fn dominance_tolerance(ball: &Grid, parts: (&ScalarField, &ScalarField)) -> f64 {
    let sup = parts.0.sup_norm() + parts.1.sup_norm();
    ball.max_cell_measure() * sup + 1e-12 * (1.0 + sup)
}

fn check_dominance(
    parts: (&ScalarField, &ScalarField),
    g: &ScalarField,
) -> Result<()> {
    let tolerance = dominance_tolerance(g.grid(), parts);
    let parts_sum = field_concentration(parts.0).add(&field_concentration(parts.1));
    let cmp = less_concentrated(&parts_sum, &field_concentration(g), tolerance);
    if !cmp.holds {
        return Err(Error::DominanceViolated {
            gap: cmp.worst_gap,
            tolerance,
        });
    }
    Ok(())
}

/// Comparison with a radial datum `g` that dominates `f₁# + f₂#` instead of
/// equalling it, optionally with an extra source `h` on the domain bounded
/// by `(h⁺)# + (h⁻)# ≺ g₂`. The ball problem is solved with `g + g₂`.
pub fn dominated_compare(
    problem: &EllipticProblem,
    f: &ScalarField,
    g: &ScalarField,
    extra: Option<ExtraSource>,
) -> Result<ComparisonOutcome> {
    let mode = SymmetrizationMode::for_c(problem.c);
    if !Arc::ptr_eq(g.grid(), problem.ball.grid()) && **g.grid() != **problem.ball.grid() {
        return Err(Error::GridMismatch);
    }
    check_radially_nonincreasing(g, problem.tolerance)?;
    let (f1, f2) = split_parts(f, mode);
    check_dominance((&f1, &f2), g)?;
    match extra {
        None => run(problem, f, (g, &ScalarField::zeros(g.grid().clone())), mode),
        Some(ExtraSource { h, g2 }) => {
            if !h.same_grid(f) {
                return Err(Error::GridMismatch);
            }
            if !g2.same_grid(g) {
                return Err(Error::GridMismatch);
            }
            check_radially_nonincreasing(g2, problem.tolerance)?;
            check_dominance((&h.positive_part(), &h.negative_part()), g2)?;
            let total = f.add(h)?;
            run(problem, &total, (g, g2), mode)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationCheck {
    pub oscillation: f64,
    pub sup_v: f64,
    /// `max v - (max u - min u)`.
    pub slack: f64,
    pub holds: bool,
}

/// `max v ≥ max u - min u`, up to `tolerance`.
pub fn oscillation_check(u: &ScalarField, v: &ScalarField, tolerance: f64) -> OscillationCheck {
    let oscillation = u.max() - u.min();
    let sup_v = v.max();
    let slack = sup_v - oscillation;
    OscillationCheck {
        oscillation,
        sup_v,
        slack,
        holds: slack >= -tolerance,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LpCheck {
    pub p: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `‖u - m(u)‖_p ≤ ‖v‖_p + tolerance` for every `p` (`∞` allowed).
pub fn lp_check(u: &ScalarField, v: &ScalarField, ps: &[f64], tolerance: f64) -> Result<Vec<LpCheck>> {
    if let Some(p) = ps.iter().find(|p| !(**p >= 1.0)) {
        return Err(Error::param("p", format!("must be at least 1, got {p}")));
    }
    let m = median(u);
    let centered = u.map(|x| x - m);
    Ok(ps
        .iter()
        .map(|&p| {
            let lhs = centered.norm(p);
            let rhs = v.norm(p);
            LpCheck {
                p,
                lhs,
                rhs,
                holds: lhs <= rhs + tolerance,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_square(n: usize) -> Arc<Grid> {
        Arc::new(Grid::rectangle(n, n, 1.0, 1.0, BoundaryCondition::Neumann).unwrap())
    }

    #[test]
    fn gamma_examples() {
        assert!((gamma_constant(2, 1.0 / (2.0 * PI.sqrt())).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_constant(1, 1.0).unwrap() - 0.25).abs() < 1e-15);
        let a = gamma_constant(2, 0.3).unwrap();
        let b = gamma_constant(2, 0.6).unwrap();
        assert!((a / b - 4.0).abs() < 1e-12);
        let square = gamma_constant(2, 1.0 / 2f64.sqrt()).unwrap();
        assert!((square - 1.0 / (2.0 * PI)).abs() < 1e-14);
        assert!(gamma_constant(2, 0.0).is_err());
        assert!(gamma_constant(2, -1.0).is_err());
    }

    #[test]
    fn default_q_values() {
        let g = Grid::interval(8, 1.0, BoundaryCondition::Neumann).unwrap();
        assert_eq!(default_q(&g), 1.0);
        let sq = unit_square(4);
        assert!((default_q(&sq) - 1.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn symmetrized_data_examples() {
        let omega = Arc::new(Grid::interval(8, 1.0, BoundaryCondition::Neumann).unwrap());
        let ball = half_ball(&omega, 8).unwrap();
        let zero = ScalarField::zeros(omega.clone());
        let g = symmetrized_data(&zero, &ball, SymmetrizationMode::ZeroMean).unwrap();
        assert!(g.values().iter().all(|&v| v == 0.0));

        let f = ScalarField::from_fn(omega.clone(), |x| if x[0] < 0.5 { 1.0 } else { -1.0 });
        let g = symmetrized_data(&f, &ball, SymmetrizationMode::ZeroMean).unwrap();
        assert!(g.values().iter().all(|&v| (v - 2.0).abs() < 1e-12));

        let f = ScalarField::from_fn(omega.clone(), |x| if x[0] < 0.25 { 3.0 - x[0] } else { 0.0 });
        let g = symmetrized_data(&f, &ball, SymmetrizationMode::ZeroMean).unwrap();
        let single = crate::rearrange::schwarz_rearrangement(&f, &ball).unwrap();
        assert_eq!(g, single);
        assert!(g.values().windows(2).all(|w| w[1] <= w[0] + 1e-12));

        let wrong = Arc::new(Grid::radial_ball(8, 1, 0.4).unwrap());
        assert!(symmetrized_data(&f, &wrong, SymmetrizationMode::ZeroMean).is_err());
    }

    fn problem<'a>(
        omega: &'a SpectralOperator,
        ball: &'a SpectralOperator,
        sigma: f64,
        c: f64,
        tolerance: f64,
    ) -> EllipticProblem<'a> {
        EllipticProblem {
            omega,
            ball,
            sigma,
            c,
            y_samples: vec![0.0, 0.1, 1.0],
            tolerance,
            split_mode: false,
            q: 1.0 / 2f64.sqrt(),
        }
    }

    fn square_pair(n: usize) -> (SpectralOperator, SpectralOperator) {
        let omega = unit_square(n);
        let ball = half_ball(&omega, n).unwrap();
        let gamma = gamma_constant(2, default_q(&omega)).unwrap();
        (
            SpectralOperator::build(&omega, 1.0).unwrap(),
            SpectralOperator::build(&ball, gamma).unwrap(),
        )
    }

    #[test]
    fn zero_source_has_zero_gap() {
        let (om, ball) = square_pair(8);
        let f = ScalarField::zeros(om.grid().clone());
        let out = elliptic_compare(&problem(&om, &ball, 0.5, 0.0, 0.0), &f).unwrap();
        assert_eq!(out.report.worst_gap, 0.0);
        assert!(out.report.holds());
        assert_eq!(out.report.per_y.len(), 3);
    }

    #[test]
    fn constant_source_with_c() {
        let (om, ball) = square_pair(8);
        let f = ScalarField::constant(om.grid().clone(), 1.0);
        let out = elliptic_compare(&problem(&om, &ball, 0.5, 1.0, 1e-12), &f).unwrap();
        assert!(out.u.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!(out.report.worst_gap <= 1e-12);
        assert!(out.report.holds());
    }

    #[test]
    fn first_mode_holds_and_refines() {
        let mut gaps = Vec::new();
        for n in [16, 32] {
            let (om, ball) = square_pair(n);
            let f = om.eigenvector(1).unwrap();
            let tol = tolerance_for(DEFAULT_C_TOL, om.grid(), &f);
            let out = elliptic_compare(&problem(&om, &ball, 0.5, 0.0, tol), &f).unwrap();
            assert!(out.report.holds(), "n = {n}: gap {} > {tol}", out.report.worst_gap);
            gaps.push(out.report.worst_gap);
        }
        assert!(gaps[1] <= gaps[0] + 1e-12, "{gaps:?}");
    }

    #[test]
    fn incompatible_source_is_rejected() {
        let (om, ball) = square_pair(8);
        let f = ScalarField::constant(om.grid().clone(), 1.0);
        let err = elliptic_compare(&problem(&om, &ball, 0.5, 0.0, 1.0), &f).unwrap_err();
        assert!(matches!(err, Error::IncompatibleData { .. }));
    }

    #[test]
    fn dominated_reflexive_matches_elliptic() {
        let (om, ball) = square_pair(16);
        let f = om.eigenvector(2).unwrap();
        let tol = tolerance_for(DEFAULT_C_TOL, om.grid(), &f);
        let p = problem(&om, &ball, 0.5, 0.0, tol);
        let g = symmetrized_data(&f, ball.grid(), SymmetrizationMode::ZeroMean).unwrap();
        let a = elliptic_compare(&p, &f).unwrap();
        let b = dominated_compare(&p, &f, &g, None).unwrap();
        assert!((a.report.worst_gap - b.report.worst_gap).abs() < 1e-12);
    }

    #[test]
    fn dominated_by_concentrated_datum_holds() {
        let (om, ball) = square_pair(16);
        let f = om.eigenvector(1).unwrap();
        let tol = tolerance_for(DEFAULT_C_TOL, om.grid(), &f);
        let p = problem(&om, &ball, 0.5, 0.0, tol);
        let half = 0.5 * ball.grid().total_measure();
        let height = (2.0 * f.sup_norm()).max(f.norm(1.0) / half);
        let mut inner = 0.0;
        let values = ball
            .grid()
            .measures()
            .iter()
            .map(|m| {
                inner += m;
                if inner <= half * (1.0 + 1e-12) { height } else { 0.0 }
            })
            .collect();
        let g = ScalarField::new(ball.grid().clone(), values).unwrap();
        let out = dominated_compare(&p, &f, &g, None).unwrap();
        assert!(out.report.holds());
    }

    #[test]
    fn weaker_datum_is_rejected() {
        let (om, ball) = square_pair(16);
        let f = om.eigenvector(1).unwrap();
        let tol = tolerance_for(DEFAULT_C_TOL, om.grid(), &f);
        let p = problem(&om, &ball, 0.5, 0.0, tol);
        let g = symmetrized_data(&f, ball.grid(), SymmetrizationMode::ZeroMean)
            .unwrap()
            .scale(0.5);
        let err = dominated_compare(&p, &f, &g, None).unwrap_err();
        assert!(matches!(err, Error::DominanceViolated { .. }));
    }

    #[test]
    fn consequences_on_first_mode() {
        let (om, ball) = square_pair(16);
        let f = om.eigenvector(1).unwrap();
        let tol = tolerance_for(DEFAULT_C_TOL, om.grid(), &f);
        let out = elliptic_compare(&problem(&om, &ball, 0.5, 0.0, tol), &f).unwrap();
        let osc = oscillation_check(&out.u, &out.v, tol);
        assert!(osc.holds, "{osc:?}");
        for check in lp_check(&out.u, &out.v, &[1.0, 2.0, 4.0, f64::INFINITY], tol).unwrap() {
            assert!(check.holds, "{check:?}");
        }
    }

    #[test]
    fn trivial_consequences() {
        let omega = unit_square(4);
        let zero = ScalarField::zeros(omega.clone());
        let ball = half_ball(&omega, 4).unwrap();
        let v = ScalarField::zeros(ball);
        assert!(oscillation_check(&zero, &v, 0.0).holds);
        let c = ScalarField::constant(omega, 3.0);
        assert_eq!(oscillation_check(&c, &v, 0.0).slack, 0.0);
        assert!(lp_check(&zero, &v, &[1.0, f64::INFINITY], 0.0).unwrap().iter().all(|c| c.holds));
        assert!(lp_check(&zero, &v, &[0.5], 0.0).is_err());
    }

    #[test]
    fn report_json_shape() {
        let (om, ball) = square_pair(4);
        let f = om.eigenvector(1).unwrap();
        let out = elliptic_compare(&problem(&om, &ball, 0.5, 0.0, 1.0), &f).unwrap();
        let json: serde_json::Value = serde_json::from_str(&out.report.to_json()).unwrap();
        for key in ["params", "per_y", "worst_gap", "verdict"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        let slice = &json["per_y"][0];
        for key in ["y", "s", "U", "V", "chi"] {
            assert!(slice.get(key).is_some(), "{key}");
        }
        assert_eq!(json["verdict"], "holds");
        assert!(out.report.to_csv().starts_with("y,s,U,V,chi\n"));
    }
}
