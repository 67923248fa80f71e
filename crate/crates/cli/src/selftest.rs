//! Small suites that exercise each module end to end in a few seconds.

use std::f64::consts::PI;
use std::sync::Arc;

use fracsym::compare::{elliptic_compare, half_ball, lp_check, oscillation_check, tolerance_for, EllipticProblem};
use fracsym::extension::{dtn_residual, rho};
use fracsym::parabolic::{mild_solve, Sampling};
use fracsym::presets::Preset;
use fracsym::rearrange::{decreasing_rearrangement, distribution_function, rearranged_inner};
use fracsym::{BoundaryCondition, Grid, ScalarField, SpectralOperator};

use crate::commands::setup;
use crate::config::ExperimentConfig;
use crate::Failure;

type Check = Result<(bool, String), fracsym::Error>;

fn interval(n: usize, bc: BoundaryCondition) -> Result<SpectralOperator, fracsym::Error> {
    SpectralOperator::build(&Arc::new(Grid::interval(n, 1.0, bc)?), 1.0)
}

fn rearrangement() -> Check {
    let op = interval(32, BoundaryCondition::Neumann)?;
    let mut worst = 0f64;
    let mut hl_ok = true;
    for seed in 0..20 {
        let f = Preset::Random { seed }.build(&op, false)?;
        let g = Preset::Random { seed: seed + 100 }.build(&op, false)?;
        let (pf, pg) = (decreasing_rearrangement(&f), decreasing_rearrangement(&g));
        for p in [1.0, 2.0, f64::INFINITY] {
            worst = worst.max((pf.norm(p) - f.norm(p)).abs());
        }
        for k in [0.0, 0.1, 0.5] {
            worst = worst.max((pf.distribution(k) - distribution_function(&f, k)).abs());
        }
        let lhs = f.zip_with(&g, |a, b| (a * b).abs())?.integral();
        hl_ok &= lhs <= rearranged_inner(&pf, &pg) + 1e-12;
    }
    Ok((worst <= 1e-12 && hl_ok, format!("norm/distribution err {worst:.1e}, Hardy-Littlewood {hl_ok}")))
}

fn spectrum() -> Check {
    let n = 16;
    let op = interval(n, BoundaryCondition::Dirichlet)?;
    let mut worst = 0f64;
    for (k, &l) in op.eigenvalues().iter().enumerate() {
        let s = ((k + 1) as f64 * PI / (2.0 * n as f64)).sin();
        let exact = 4.0 * (n * n) as f64 * s * s;
        worst = worst.max((l - exact).abs() / exact);
    }
    let f = Preset::TwoBump.build(&interval(n, BoundaryCondition::Neumann)?, false);
    let round = match f {
        Ok(f) => {
            let op = SpectralOperator::build(f.grid(), 1.0)?;
            op.synthesize(&op.analyze(&f)?)?.sub(&f)?.sup_norm()
        }
        Err(e) => return Err(e),
    };
    Ok((
        worst <= 1e-10 && round <= 1e-12,
        format!("eigenvalue rel err {worst:.1e}, round trip {round:.1e}"),
    ))
}

fn extension() -> Check {
    let mut rho_err = 0f64;
    for i in 0..=50 {
        let t = 0.1 * i as f64;
        rho_err = rho_err.max((rho(0.5, t)? - (-t).exp()).abs());
    }
    let op = interval(32, BoundaryCondition::Neumann)?;
    let mut u = ScalarField::zeros(op.grid().clone());
    for k in 1..=3 {
        u = u.add(&op.eigenvector(k)?)?;
    }
    let norms = [1e-1, 1e-2, 1e-3]
        .iter()
        .map(|&y| dtn_residual(&op, 0.5, &u, y).map(|r| r.norm))
        .collect::<Result<Vec<_>, _>>()?;
    let monotone = norms.windows(2).all(|w| w[1] < w[0]);
    Ok((
        rho_err <= 1e-8 && monotone,
        format!("|rho - e^-t| {rho_err:.1e}, residual decreasing {monotone}"),
    ))
}

fn comparison(cfg: &ExperimentConfig) -> Result<(bool, String), Failure> {
    let mut small = cfg.clone();
    small.nx = small.nx.min(16);
    small.ny = small.ny.min(16);
    small.shells = small.shells.min(16);
    let s = setup(&small)?;
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut runs = 0;
    for c in [0.0, 1.0] {
        for source in [Preset::Eigenmode(1), Preset::Random { seed: cfg.seed }] {
            let f = source.build(&s.omega, c == 0.0)?;
            let tol = tolerance_for(cfg.c_tol, s.omega.grid(), &f);
            let problem = EllipticProblem {
                omega: &s.omega,
                ball: &s.ball,
                sigma: cfg.sigma,
                c,
                y_samples: vec![0.0, 0.1],
                tolerance: tol,
                split_mode: false,
                q: s.q,
            };
            let out = elliptic_compare(&problem, &f)?;
            runs += 1;
            worst = worst.max(out.report.worst_gap);
            let osc = oscillation_check(&out.u, &out.v, tol);
            let lp = lp_check(&out.u, &out.v, &cfg.lp, tol)?;
            if !out.report.holds() || !osc.holds || lp.iter().any(|l| !l.holds) {
                failures += 1;
            }
        }
    }
    Ok((failures == 0, format!("{runs} runs at sigma {}, {failures} failures, worst gap {worst:.1e}", cfg.sigma)))
}

fn time_stepping() -> Check {
    let op = interval(32, BoundaryCondition::Neumann)?;
    let sigma = 0.5;
    let phi = op.eigenvector(1)?;
    let decay = op.eigenvalues()[1].powf(sigma);
    let zero = |_: f64| Ok(ScalarField::zeros(op.grid().clone()));
    let err = |n: usize| -> Result<f64, fracsym::Error> {
        let traj = mild_solve(&op, sigma, &phi, &zero, 0.5, n, Sampling::Midpoint)?;
        Ok(traj.last().sub(&phi.scale((-decay * 0.5).exp()))?.sup_norm())
    };
    let (coarse, fine) = (err(16)?, err(32)?);
    let order = (coarse / fine).log2();
    Ok((order >= 0.9, format!("observed order {order:.3}")))
}

fn determinism(cfg: &ExperimentConfig) -> Result<(bool, String), Failure> {
    let grid = Arc::new(Grid::rectangle(8, 8, 1.0, 1.0, BoundaryCondition::Neumann)?);
    let once = || -> Result<String, Failure> {
        let omega = SpectralOperator::build(&grid, 1.0)?;
        let ball = SpectralOperator::build(&half_ball(&grid, 8)?, 0.2)?;
        let f = Preset::Random { seed: cfg.seed }.build(&omega, true)?;
        let problem = EllipticProblem {
            omega: &omega,
            ball: &ball,
            sigma: cfg.sigma,
            c: 0.0,
            y_samples: vec![0.0, 0.5],
            tolerance: 1e-3,
            split_mode: false,
            q: 1.0,
        };
        Ok(elliptic_compare(&problem, &f)?.report.to_json())
    };
    let same = once()? == once()?;
    Ok((same, format!("identical reports {same}")))
}

pub fn run(cfg: &ExperimentConfig) -> Result<bool, Failure> {
    let suites: Vec<(&str, Result<(bool, String), Failure>)> = vec![
        ("rearrangement", rearrangement().map_err(Failure::from)),
        ("spectrum", spectrum().map_err(Failure::from)),
        ("extension", extension().map_err(Failure::from)),
        ("comparison", comparison(cfg)),
        ("time stepping", time_stepping().map_err(Failure::from)),
        ("determinism", determinism(cfg)),
    ];
    let mut all = true;
    println!("{:<14} {:<6} detail", "suite", "result");
    for (name, outcome) in suites {
        let (pass, detail) = match outcome {
            Ok(r) => r,
            Err(Failure::Config(m)) => return Err(Failure::Config(m)),
            Err(e) => (false, e.to_string()),
        };
        all &= pass;
        println!("{name:<14} {:<6} {detail}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(all)
}
