//! Implicit Euler time stepping for `u_t + (-Δ)^σ u = f` and the per-step
//! concentration comparison with the symmetrised Dirichlet problem on the
//! half-measure ball.
//!
//! Each step solves `h 𝒜 u_k + u_k = u_{k-1} + h f_k` spectrally, so one step
//! is exactly the elliptic problem with `c = 1/h`.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::compare::{
    slice_comparison, symmetrized_data, symmetrized_sign_parts, ComparisonParams, ComparisonReport,
    SymmetrizationMode, Verdict,
};
use crate::error::{Error, Result};
use crate::extension::extend;
use crate::field::ScalarField;
use crate::grid::{BoundaryCondition, Grid};
use crate::rearrange::median;
use crate::spectral::{check_sigma, frac_power, SpectralOperator};

/// Residual bound every step must meet.
pub const STEP_RESIDUAL_TOL: f64 = 1e-8;

/// Power of `γ` multiplying `(-Δ_D)^σ` on the ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaExponent {
    /// `γ^σ`, the spectral realisation of `(-γΔ)^σ`.
    Sigma,
    /// `γ^{1/2}`.
    Half,
}

impl GammaExponent {
    /// Factor applied to the eigenvalues `(γλ)^σ` of an operator built with
    /// diffusion `γ` so that the effective multiplier is `γ^e λ^σ`.
    pub fn scale(&self, gamma: f64, sigma: f64) -> f64 {
        match self {
            GammaExponent::Sigma => 1.0,
            GammaExponent::Half => gamma.powf(0.5 - sigma),
        }
    }
}

impl std::str::FromStr for GammaExponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<GammaExponent> {
        match s {
            "sigma" => Ok(GammaExponent::Sigma),
            "half" => Ok(GammaExponent::Half),
            _ => Err(Error::param("gamma-exponent", format!("expected `sigma` or `half`, got `{s}`"))),
        }
    }
}

/// How `f_k` is taken from `f` on `(t_{k-1}, t_k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    Midpoint,
    /// Three-point Gauss–Legendre average.
    Average,
}

impl std::str::FromStr for Sampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sampling> {
        match s {
            "midpoint" => Ok(Sampling::Midpoint),
            "average" => Ok(Sampling::Average),
            _ => Err(Error::param("sampling", format!("expected `midpoint` or `average`, got `{s}`"))),
        }
    }
}

fn check_step(h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::param("h", format!("must be positive, got {h}")));
    }
    Ok(())
}

/// `(I + h·scale·𝒜)⁻¹ (prev + h f_k)` with `𝒜` the fractional power of the
/// operator.
pub fn scaled_step(
    op: &SpectralOperator,
    sigma: f64,
    h: f64,
    scale: f64,
    prev: &ScalarField,
    f_k: &ScalarField,
) -> Result<ScalarField> {
    check_sigma(sigma)?;
    check_step(h)?;
    let rhs = prev.zip_with(f_k, |a, b| a + h * b)?;
    op.apply_multiplier(&rhs, |l| 1.0 / (1.0 + h * scale * frac_power(l, sigma)))
}

/// One implicit Euler step, `(I + h𝒜)⁻¹ (prev + h f_k)`.
pub fn implicit_step(
    op: &SpectralOperator,
    sigma: f64,
    h: f64,
    prev: &ScalarField,
    f_k: &ScalarField,
) -> Result<ScalarField> {
    scaled_step(op, sigma, h, 1.0, prev, f_k)
}

/// Piecewise-constant discrete solution `u_{h,k}` on `t_k = k h`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub h: f64,
    pub times: Vec<f64>,
    /// `states[0]` is the initial datum.
    pub states: Vec<ScalarField>,
    /// `sources[k - 1]` is `f_k`.
    pub sources: Vec<ScalarField>,
    /// Multiplier on the operator, `1` unless a `γ` exponent was changed.
    pub scale: f64,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.sources.len()
    }

    pub fn last(&self) -> &ScalarField {
        self.states.last().expect("trajectory holds the initial datum")
    }

    /// `‖h·scale·𝒜u_k + u_k − u_{k−1} − h f_k‖₂` for every step.
    pub fn residuals(&self, op: &SpectralOperator, sigma: f64) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.steps());
        for k in 1..self.states.len() {
            let au = op.apply_fractional(sigma, &self.states[k])?;
            let r = au
                .scale(self.h * self.scale)
                .add(&self.states[k])?
                .sub(&self.states[k - 1])?
                .sub(&self.sources[k - 1].scale(self.h))?;
            out.push(r.l2_norm());
        }
        Ok(out)
    }

    /// CSV rows `k,t_k,cell,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,t_k,cell,value\n");
        for (k, (t, u)) in self.times.iter().zip(&self.states).enumerate() {
            for (i, v) in u.values().iter().enumerate() {
                let _ = writeln!(out, "{k},{t},{i},{v}");
            }
        }
        out
    }
}

/// `f_k` for `k = 1..=n` with `h = t_end / n`.
pub fn sample_source(
    f: &dyn Fn(f64) -> Result<ScalarField>,
    t_end: f64,
    n: usize,
    sampling: Sampling,
) -> Result<Vec<ScalarField>> {
    check_horizon(t_end, n)?;
    let h = t_end / n as f64;
    const NODE: f64 = 0.774_596_669_241_483_4; // sqrt(3/5)
    (1..=n)
        .map(|k| {
            let mid = (k as f64 - 0.5) * h;
            match sampling {
                Sampling::Midpoint => f(mid),
                Sampling::Average => {
                    let lo = f(mid - 0.5 * h * NODE)?;
                    let hi = f(mid + 0.5 * h * NODE)?;
                    let c = f(mid)?;
                    c.scale(8.0 / 18.0).add(&lo.add(&hi)?.scale(5.0 / 18.0))
                }
            }
        })
        .collect()
}

fn check_horizon(t_end: f64, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n", "need at least one step"));
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::param("T", format!("must be positive, got {t_end}")));
    }
    Ok(())
}

fn march(
    op: &SpectralOperator,
    sigma: f64,
    scale: f64,
    u0: &ScalarField,
    sources: Vec<ScalarField>,
    t_end: f64,
) -> Result<Trajectory> {
    let n = sources.len();
    check_horizon(t_end, n)?;
    let h = t_end / n as f64;
    let mut states = Vec::with_capacity(n + 1);
    states.push(u0.clone());
    for f_k in &sources {
        let next = scaled_step(op, sigma, h, scale, states.last().unwrap(), f_k)?;
        states.push(next);
    }
    let traj = Trajectory {
        h,
        times: (0..=n).map(|k| k as f64 * h).collect(),
        states,
        sources,
        scale,
    };
    let worst = traj.residuals(op, sigma)?.into_iter().fold(0.0, f64::max);
    if !(worst <= STEP_RESIDUAL_TOL) {
        return Err(Error::Numerical(format!("step residual {worst:e} exceeds {STEP_RESIDUAL_TOL:e}")));
    }
    Ok(traj)
}

/// Iterates [`implicit_step`] with `h = t_end / n` and sampled sources.
pub fn mild_solve(
    op: &SpectralOperator,
    sigma: f64,
    u0: &ScalarField,
    f: &dyn Fn(f64) -> Result<ScalarField>,
    t_end: f64,
    n: usize,
    sampling: Sampling,
) -> Result<Trajectory> {
    let sources = sample_source(f, t_end, n, sampling)?;
    march(op, sigma, 1.0, u0, sources, t_end)
}

/// `v₀ = (u₀ − m(u₀))⁺# + (u₀ − m(u₀))⁻#` and `g_k = (f_k⁺)# + (f_k⁻)#`.
pub fn symmetrized_parabolic_problem(
    u0: &ScalarField,
    sources: &[ScalarField],
    ball: &Arc<Grid>,
) -> Result<(ScalarField, Vec<ScalarField>)> {
    let v0 = symmetrized_data(u0, ball, SymmetrizationMode::WithC)?;
    let g = sources
        .iter()
        .map(|f| symmetrized_sign_parts(f, ball))
        .collect::<Result<Vec<_>>>()?;
    Ok((v0, g))
}

/// `C_tol · h_grid · (‖u₀ − m(u₀)‖₂ + T max_k ‖f_k‖₂)`.
pub fn parabolic_tolerance(c_tol: f64, grid: &Grid, u0: &ScalarField, sources: &[ScalarField], t_end: f64) -> f64 {
    let m = median(u0);
    let f_max = sources.iter().map(|f| f.l2_norm()).fold(0.0, f64::max);
    c_tol * grid.spacing() * (u0.map(|v| v - m).l2_norm() + t_end * f_max)
}

#[derive(Debug, Clone)]
pub struct ParabolicProblem<'a> {
    pub omega: &'a SpectralOperator,
    /// Dirichlet operator on the half-measure ball built with diffusion `γ`.
    pub ball: &'a SpectralOperator,
    pub sigma: f64,
    pub t_end: f64,
    pub n: usize,
    pub sampling: Sampling,
    pub gamma_exponent: GammaExponent,
    pub tolerance: f64,
    pub q: f64,
    /// Heights above the trace at which extensions are also compared.
    pub extension_y: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub k: usize,
    pub t: f64,
    pub worst_gap: f64,
    pub verdict: Verdict,
    pub report: ComparisonReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParabolicReport {
    pub sigma: f64,
    pub t_end: f64,
    pub n: usize,
    pub gamma_exponent: GammaExponent,
    pub tolerance: f64,
    pub steps: Vec<StepReport>,
    pub worst_gap: f64,
    /// First step whose comparison fails, if any.
    pub first_violation: Option<usize>,
    pub verdict: Verdict,
}

impl ParabolicReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV rows `k,t,y,s,U,V,chi`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,t,y,s,U,V,chi\n");
        for step in &self.steps {
            for slice in &step.report.per_y {
                for i in 0..slice.s.len() {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        step.k, step.t, slice.y, slice.s[i], slice.u[i], slice.v[i], slice.chi[i]
                    );
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct ParabolicOutcome {
    pub report: ParabolicReport,
    pub omega: Trajectory,
    pub ball: Trajectory,
}

/// Runs both trajectories with the same `h` and compares the median split
/// of `u_{h,k}` with `v_{h,k}` at every step.
pub fn parabolic_compare(
    problem: &ParabolicProblem,
    u0: &ScalarField,
    f: &dyn Fn(f64) -> Result<ScalarField>,
) -> Result<ParabolicOutcome> {
    if problem.omega.bc() != BoundaryCondition::Neumann || problem.ball.bc() != BoundaryCondition::Dirichlet {
        return Err(Error::param("operators", "need a Neumann domain and a Dirichlet ball"));
    }
    if !(problem.sigma > 0.0 && problem.sigma < 1.0) {
        return Err(Error::param("sigma", format!("must lie in (0, 1), got {}", problem.sigma)));
    }
    let sources = sample_source(f, problem.t_end, problem.n, problem.sampling)?;
    let ball_grid = problem.ball.grid();
    let (v0, g) = symmetrized_parabolic_problem(u0, &sources, ball_grid)?;
    let omega = march(problem.omega, problem.sigma, 1.0, u0, sources, problem.t_end)?;
    let scale = problem.gamma_exponent.scale(problem.ball.gamma(), problem.sigma);
    let ball = march(problem.ball, problem.sigma, scale, &v0, g, problem.t_end)?;

    let mut ys = vec![0.0];
    ys.extend(problem.extension_y.iter().copied().filter(|&y| y > 0.0));
    let mut steps = Vec::with_capacity(problem.n);
    for k in 1..=problem.n {
        let report = step_report(problem, &ys, 1.0 / omega.h, &omega.states[k], &ball.states[k])?;
        steps.push(StepReport {
            k,
            t: omega.times[k],
            worst_gap: report.worst_gap,
            verdict: report.verdict,
            report,
        });
    }
    let worst_gap = steps.iter().map(|s| s.worst_gap).fold(f64::NEG_INFINITY, f64::max);
    let first_violation = steps.iter().find(|s| s.verdict == Verdict::Violated).map(|s| s.k);
    let report = ParabolicReport {
        sigma: problem.sigma,
        t_end: problem.t_end,
        n: problem.n,
        gamma_exponent: problem.gamma_exponent,
        tolerance: problem.tolerance,
        steps,
        worst_gap,
        first_violation,
        verdict: Verdict::from_gap(worst_gap, problem.tolerance),
    };
    Ok(ParabolicOutcome { report, omega, ball })
}

fn step_report(
    problem: &ParabolicProblem,
    ys: &[f64],
    c: f64,
    u: &ScalarField,
    v: &ScalarField,
) -> Result<ComparisonReport> {
    let (w, xi) = if ys.len() > 1 {
        (
            extend(problem.omega, problem.sigma, u, ys)?.slices,
            extend(problem.ball, problem.sigma, v, ys)?.slices,
        )
    } else {
        (vec![u.clone()], vec![v.clone()])
    };
    let mut per_y = Vec::with_capacity(ys.len());
    let mut medians = Vec::with_capacity(ys.len());
    let mut worst = f64::NEG_INFINITY;
    for ((&y, wj), xj) in ys.iter().zip(&w).zip(&xi) {
        let (slice, m, gap) = slice_comparison(y, wj, xj);
        worst = worst.max(gap);
        medians.push(m);
        per_y.push(slice);
    }
    if !worst.is_finite() {
        return Err(Error::Numerical(format!("worst gap is {worst}")));
    }
    Ok(ComparisonReport {
        params: ComparisonParams {
            sigma: problem.sigma,
            c,
            gamma: problem.ball.gamma(),
            q: problem.q,
            omega: problem.omega.grid().summary(),
            ball: problem.ball.grid().summary(),
            tolerance: problem.tolerance,
            mode: SymmetrizationMode::WithC,
            split_mode: false,
            median_curve: medians,
        },
        per_y,
        worst_gap: worst,
        verdict: Verdict::from_gap(worst, problem.tolerance),
        split: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compare::{dominated_compare, gamma_constant, half_ball, EllipticProblem, ExtraSource};

    fn interval(n: usize) -> SpectralOperator {
        let g = Arc::new(Grid::interval(n, 1.0, BoundaryCondition::Neumann).unwrap());
        SpectralOperator::build(&g, 1.0).unwrap()
    }

    fn zero_source(op: &SpectralOperator) -> impl Fn(f64) -> Result<ScalarField> + '_ {
        move |_| Ok(ScalarField::zeros(op.grid().clone()))
    }

    #[test]
    fn step_examples() {
        let op = interval(32);
        let (sigma, h) = (0.5, 0.1);
        let zero = ScalarField::zeros(op.grid().clone());
        for k in [1, 3] {
            let phi = op.eigenvector(k).unwrap();
            let factor = 1.0 / (1.0 + h * op.eigenvalues()[k].powf(sigma));
            let u = implicit_step(&op, sigma, h, &phi, &zero).unwrap();
            let want = phi.scale(factor);
            assert!(u.sub(&want).unwrap().sup_norm() < 1e-12);
            let u = implicit_step(&op, sigma, h, &zero, &phi).unwrap();
            assert!(u.sub(&want.scale(h)).unwrap().sup_norm() < 1e-12);
        }
        let c = ScalarField::constant(op.grid().clone(), 2.0);
        let u = implicit_step(&op, sigma, h, &c, &zero).unwrap();
        assert!(u.sub(&c).unwrap().sup_norm() < 1e-12);
        assert!(implicit_step(&op, sigma, 0.0, &c, &zero).is_err());
    }

    #[test]
    fn eigenmode_decay_is_first_order() {
        let op = interval(32);
        let sigma = 0.5;
        let phi = op.eigenvector(1).unwrap();
        let exact = phi.scale((-op.eigenvalues()[1].powf(sigma)).exp());
        let errors: Vec<f64> = [8, 16, 32]
            .iter()
            .map(|&n| {
                let traj = mild_solve(&op, sigma, &phi, &zero_source(&op), 1.0, n, Sampling::Midpoint).unwrap();
                traj.last().sub(&exact).unwrap().l2_norm()
            })
            .collect();
        for w in errors.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 0.9, "{errors:?}");
        }
    }

    #[test]
    fn constant_datum_stays_put() {
        let op = interval(16);
        let u0 = ScalarField::constant(op.grid().clone(), 1.5);
        let traj = mild_solve(&op, 0.3, &u0, &zero_source(&op), 2.0, 5, Sampling::Midpoint).unwrap();
        for u in &traj.states {
            assert!(u.sub(&u0).unwrap().sup_norm() < 1e-12);
        }
        assert_eq!(traj.times.len(), 6);
    }

    #[test]
    fn steady_limit() {
        let op = interval(16);
        let sigma = 0.6;
        let phi = op.eigenvector(2).unwrap();
        let zero = ScalarField::zeros(op.grid().clone());
        let f = |_: f64| Ok(phi.clone());
        let traj = mild_solve(&op, sigma, &zero, &f, 200.0, 400, Sampling::Midpoint).unwrap();
        let target = phi.scale(op.eigenvalues()[2].powf(-sigma));
        assert!(traj.last().sub(&target).unwrap().l2_norm() < 1e-8);
    }

    #[test]
    fn average_sampling_of_linear_source() {
        let op = interval(8);
        let phi = op.eigenvector(1).unwrap();
        let f = |t: f64| Ok(phi.scale(t));
        let s = sample_source(&f, 1.0, 4, Sampling::Average).unwrap();
        let m = sample_source(&f, 1.0, 4, Sampling::Midpoint).unwrap();
        for (a, b) in s.iter().zip(&m) {
            assert!(a.sub(b).unwrap().sup_norm() < 1e-14);
        }
        assert!(sample_source(&f, 1.0, 0, Sampling::Midpoint).is_err());
        assert!(sample_source(&f, -1.0, 2, Sampling::Midpoint).is_err());
    }

    #[test]
    fn contraction_and_mean() {
        let op = interval(32);
        let u0 = ScalarField::from_fn(op.grid().clone(), |x| (5.0 * x[0]).sin() + x[0]);
        let traj = mild_solve(&op, 0.4, &u0, &zero_source(&op), 1.0, 10, Sampling::Midpoint).unwrap();
        for w in traj.states.windows(2) {
            assert!(w[1].l2_norm() <= w[0].l2_norm() + 1e-14);
            assert!((w[1].mean() - w[0].mean()).abs() < 1e-10);
        }
    }

    fn square_pair(n: usize) -> (SpectralOperator, SpectralOperator) {
        let om = Arc::new(Grid::rectangle(n, n, 1.0, 1.0, BoundaryCondition::Neumann).unwrap());
        let ball = half_ball(&om, n).unwrap();
        let gamma = gamma_constant(2, 1.0 / 2f64.sqrt()).unwrap();
        (
            SpectralOperator::build(&om, 1.0).unwrap(),
            SpectralOperator::build(&ball, gamma).unwrap(),
        )
    }

    fn problem<'a>(om: &'a SpectralOperator, ball: &'a SpectralOperator, n: usize, tol: f64) -> ParabolicProblem<'a> {
        ParabolicProblem {
            omega: om,
            ball,
            sigma: 0.5,
            t_end: 1.0,
            n,
            sampling: Sampling::Midpoint,
            gamma_exponent: GammaExponent::Sigma,
            tolerance: tol,
            q: 1.0 / 2f64.sqrt(),
            extension_y: Vec::new(),
        }
    }

    #[test]
    fn symmetrized_initial_data() {
        let (om, ball) = square_pair(8);
        let zero = ScalarField::zeros(om.grid().clone());
        let (v0, g) = symmetrized_parabolic_problem(&zero, &[zero.clone()], ball.grid()).unwrap();
        assert!(v0.sup_norm() == 0.0 && g[0].sup_norm() == 0.0);
        let f = om.eigenvector(1).unwrap();
        let (_, g) = symmetrized_parabolic_problem(&zero, &[f.clone(), f.clone()], ball.grid()).unwrap();
        assert_eq!(g[0], g[1]);
    }

    #[test]
    fn constant_datum_compares_with_zero_gap() {
        let (om, ball) = square_pair(8);
        let u0 = ScalarField::constant(om.grid().clone(), 1.0);
        let out = parabolic_compare(&problem(&om, &ball, 4, 1e-12), &u0, &zero_source(&om)).unwrap();
        assert!(out.report.holds());
        assert!(out.report.worst_gap.abs() < 1e-12);
    }

    #[test]
    fn first_mode_holds_every_step() {
        let (om, ball) = square_pair(16);
        let u0 = om.eigenvector(1).unwrap();
        let tol = parabolic_tolerance(10.0, om.grid(), &u0, &[], 1.0);
        let out = parabolic_compare(&problem(&om, &ball, 16, tol), &u0, &zero_source(&om)).unwrap();
        assert!(out.report.holds(), "{}", out.report.worst_gap);
        assert_eq!(out.report.steps.len(), 16);
        assert_eq!(out.report.first_violation, None);
    }

    #[test]
    fn single_step_matches_elliptic_corollary() {
        let (om, ball) = square_pair(16);
        let u0 = om.eigenvector(2).unwrap().add(&om.eigenvector(4).unwrap().scale(0.5)).unwrap();
        let src = om.eigenvector(3).unwrap().scale(0.7);
        let f = |_: f64| Ok(src.clone());
        let h = 0.25;
        let mut p = problem(&om, &ball, 1, 1.0);
        p.t_end = h;
        let para = parabolic_compare(&p, &u0, &f).unwrap();

        let (v0, g) = symmetrized_parabolic_problem(&u0, &[src.clone()], ball.grid()).unwrap();
        let ep = EllipticProblem {
            omega: &om,
            ball: &ball,
            sigma: 0.5,
            c: 1.0 / h,
            y_samples: vec![0.0],
            tolerance: 1.0,
            split_mode: false,
            q: p.q,
        };
        let extra = ExtraSource { h: &src, g2: &g[0] };
        let ell = dominated_compare(&ep, &u0.scale(1.0 / h), &v0.scale(1.0 / h), Some(extra)).unwrap();
        let a = &para.report.steps[0].report.per_y[0];
        let b = &ell.report.per_y[0];
        assert_eq!(a.s.len(), b.s.len());
        for i in 0..a.s.len() {
            assert!((a.u[i] - b.u[i]).abs() < 1e-10);
            assert!((a.v[i] - b.v[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn half_exponent_changes_ball_side_only() {
        let (om, ball) = square_pair(8);
        let u0 = om.eigenvector(1).unwrap();
        let mut p = problem(&om, &ball, 4, 1.0);
        p.sigma = 0.3;
        let a = parabolic_compare(&p, &u0, &zero_source(&om)).unwrap();
        p.gamma_exponent = GammaExponent::Half;
        let b = parabolic_compare(&p, &u0, &zero_source(&om)).unwrap();
        assert_eq!(a.omega.last(), b.omega.last());
        assert_ne!(a.ball.last(), b.ball.last());
        assert!((GammaExponent::Half.scale(4.0, 0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trajectory_csv() {
        let op = interval(4);
        let u0 = ScalarField::constant(op.grid().clone(), 1.0);
        let traj = mild_solve(&op, 0.5, &u0, &zero_source(&op), 1.0, 2, Sampling::Midpoint).unwrap();
        let csv = traj.to_csv();
        assert!(csv.starts_with("k,t_k,cell,value\n"));
        assert_eq!(csv.lines().count(), 1 + 3 * 4);
    }
}
