use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde_json::json;

use fracsym::compare::{
    default_q, elliptic_compare, gamma_constant, half_ball, lp_check, oscillation_check, tolerance_for, EllipticProblem,
};
use fracsym::extension::{dtn_residual, extend, mode_flux_check};
use fracsym::parabolic::{parabolic_compare, parabolic_tolerance, sample_source, ParabolicProblem};
use fracsym::rearrange::{concentration, RearrangedProfile};
use fracsym::{BoundaryCondition, Grid, ScalarField, SpectralOperator};

use crate::config::{DomainKind, ExperimentConfig};
use crate::Failure;

/// Neumann operator on the domain and Dirichlet operator on the half-measure ball.
pub struct Setup {
    pub omega: SpectralOperator,
    pub ball: SpectralOperator,
    pub q: f64,
}

pub fn setup(cfg: &ExperimentConfig) -> Result<Setup, Failure> {
    let grid = Arc::new(match cfg.domain {
        DomainKind::Interval => Grid::interval(cfg.nx, cfg.lx, BoundaryCondition::Neumann)?,
        DomainKind::Rectangle => Grid::rectangle(cfg.nx, cfg.ny, cfg.lx, cfg.ly, BoundaryCondition::Neumann)?,
    });
    let q = cfg.q.unwrap_or_else(|| default_q(&grid));
    let gamma = match cfg.gamma {
        Some(g) => g,
        None => gamma_constant(grid.dimension(), q)?,
    };
    let ball = half_ball(&grid, cfg.shells)?;
    Ok(Setup {
        omega: SpectralOperator::build(&grid, 1.0)?,
        ball: SpectralOperator::build(&ball, gamma)?,
        q,
    })
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json values serialize")
}

/// `cell,value` rows.
fn field_csv(field: &ScalarField) -> String {
    let mut out = String::from("cell,value\n");
    for (i, v) in field.values().iter().enumerate() {
        out.push_str(&format!("{i},{v}\n"));
    }
    out
}

fn verdict_word(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "violated"
    }
}

pub fn elliptic(cfg: &ExperimentConfig) -> Result<bool, Failure> {
    let s = setup(cfg)?;
    let f = cfg.source.build(&s.omega, cfg.project_source())?;
    let tolerance = cfg
        .tolerance
        .unwrap_or_else(|| tolerance_for(cfg.c_tol, s.omega.grid(), &f));
    let problem = EllipticProblem {
        omega: &s.omega,
        ball: &s.ball,
        sigma: cfg.sigma,
        c: cfg.c,
        y_samples: cfg.y_samples.clone(),
        tolerance,
        split_mode: cfg.split_mode,
        q: s.q,
    };
    let out = elliptic_compare(&problem, &f)?;
    let consequences = json!({
        "oscillation": oscillation_check(&out.u, &out.v, tolerance),
        "lp": lp_check(&out.u, &out.v, &cfg.lp, tolerance)?,
    });
    write(&cfg.out, "report.json", &out.report.to_json())?;
    write(&cfg.out, "curves.csv", &out.report.to_csv())?;
    write(&cfg.out, "consequences.json", &pretty(&consequences))?;
    write(&cfg.out, "u.csv", &field_csv(&out.u))?;
    write(&cfg.out, "v.csv", &field_csv(&out.v))?;
    let holds = out.report.holds();
    println!(
        "elliptic comparison {}: worst gap {:e}, tolerance {:e} ({})",
        verdict_word(holds),
        out.report.worst_gap,
        tolerance,
        cfg.out.display()
    );
    Ok(holds)
}

pub fn parabolic(cfg: &ExperimentConfig) -> Result<bool, Failure> {
    let s = setup(cfg)?;
    let u0 = cfg.u0.build(&s.omega, false)?;
    let src = cfg.f.build(&s.omega, false)?;
    let f = |_: f64| Ok(src.clone());
    let sources = sample_source(&f, cfg.t_end, cfg.n, cfg.sampling)?;
    let tolerance = cfg
        .tolerance
        .unwrap_or_else(|| parabolic_tolerance(cfg.c_tol, s.omega.grid(), &u0, &sources, cfg.t_end));
    let problem = ParabolicProblem {
        omega: &s.omega,
        ball: &s.ball,
        sigma: cfg.sigma,
        t_end: cfg.t_end,
        n: cfg.n,
        sampling: cfg.sampling,
        gamma_exponent: cfg.gamma_exponent,
        tolerance,
        q: s.q,
        extension_y: cfg.extension_y.clone(),
    };
    let out = parabolic_compare(&problem, &u0, &f)?;
    write(&cfg.out, "report.json", &out.report.to_json())?;
    write(&cfg.out, "steps.csv", &out.report.to_csv())?;
    write(&cfg.out, "trajectory_omega.csv", &out.omega.to_csv())?;
    write(&cfg.out, "trajectory_ball.csv", &out.ball.to_csv())?;
    let holds = out.report.holds();
    match out.report.first_violation {
        Some(k) => println!(
            "parabolic comparison violated at step {k}: worst gap {:e}, tolerance {:e} ({})",
            out.report.worst_gap,
            tolerance,
            cfg.out.display()
        ),
        None => println!(
            "parabolic comparison holds over {} steps: worst gap {:e}, tolerance {:e} ({})",
            cfg.n,
            out.report.worst_gap,
            tolerance,
            cfg.out.display()
        ),
    }
    Ok(holds)
}

/// Residuals must shrink as `y` decreases.
pub fn extension(cfg: &ExperimentConfig) -> Result<bool, Failure> {
    let s = setup(cfg)?;
    let u = cfg.source.build(&s.omega, true)?;
    let scale = s.omega.apply_fractional(cfg.sigma, &u)?.l2_norm();
    let mut ys = cfg.dtn_y.clone();
    ys.sort_by(|a, b| b.total_cmp(a));
    let mut residuals = Vec::with_capacity(ys.len());
    for &y in &ys {
        let r = dtn_residual(&s.omega, cfg.sigma, &u, y)?;
        let relative = if scale > 0.0 { r.norm / scale } else { 0.0 };
        residuals.push(json!({ "y": y, "norm": r.norm, "relative": relative }));
    }
    let norms: Vec<f64> = residuals.iter().map(|r| r["norm"].as_f64().unwrap_or(f64::NAN)).collect();
    let monotone = norms.windows(2).all(|w| w[1] <= w[0]);
    let modes = cfg.modes.min(s.omega.len().saturating_sub(1));
    let mut flux = Vec::new();
    for &t in &ys {
        for k in 1..=modes {
            flux.push(mode_flux_check(&s.omega, cfg.sigma, k, t)?);
        }
    }
    let report = json!({
        "sigma": cfg.sigma,
        "grid": s.omega.grid().summary(),
        "source": cfg.source.to_string(),
        "dtn_residuals": residuals,
        "residual_monotone": monotone,
        "mode_flux": flux,
    });
    write(&cfg.out, "extension.json", &pretty(&report))?;
    if !cfg.extension_y.is_empty() {
        let field = extend(&s.omega, cfg.sigma, &u, &cfg.extension_y)?;
        write(&cfg.out, "extension.csv", &field.to_csv())?;
    }
    let worst = flux.iter().map(|c| c.relative_error).fold(0.0, f64::max);
    println!(
        "extension check: residual monotone {monotone}, worst mode flux relative error {worst:e} ({})",
        cfg.out.display()
    );
    Ok(monotone)
}

fn read_weighted(input: &Path) -> Result<(Vec<f64>, Vec<f64>), Failure> {
    let bad = |m: String| Failure::Config(format!("invalid value for `input`: {m}"));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(input)
        .map_err(|e| bad(format!("{}: {e}", input.display())))?;
    let (mut measures, mut values) = (Vec::new(), Vec::new());
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        if record.len() != 2 {
            return Err(bad(format!("row {}: expected `measure,value`", i + 1)));
        }
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(p) => {
                measures.push(p[0]);
                values.push(p[1]);
            }
            Err(_) if i == 0 => continue,
            Err(e) => return Err(bad(format!("row {}: {e}", i + 1))),
        }
    }
    if values.is_empty() {
        return Err(bad("no rows".into()));
    }
    Ok((measures, values))
}

pub fn rearrange(cfg: &ExperimentConfig, input: &Path) -> Result<bool, Failure> {
    let (measures, values) = read_weighted(input)?;
    let profile = RearrangedProfile::from_weighted(&values, &measures)?;
    let curve = concentration(&profile);
    let summary = json!({
        "cells": values.len(),
        "total_measure": profile.total_measure(),
        "l1": profile.norm(1.0),
        "l2": profile.norm(2.0),
        "sup": profile.norm(f64::INFINITY),
    });
    write(&cfg.out, "profile.csv", &profile.to_csv())?;
    write(&cfg.out, "concentration.csv", &curve.to_csv())?;
    write(&cfg.out, "summary.json", &pretty(&summary))?;
    println!("rearranged {} cells ({})", values.len(), cfg.out.display());
    Ok(true)
}
