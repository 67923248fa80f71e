//! Harmonic extension of a function on a grid into the half-cylinder
//! `grid × (0, ∞)`.
//!
//! Mode by mode the extension is `ρ(√λ_k y) ⟨u, φ_k⟩ φ_k`, where the profile
//! `ρ` solves `ρ'' + (1-2σ)/t ρ' = ρ` with `ρ(0) = 1` and
//! `-t^{1-2σ} ρ'(t) → κ_σ` as `t → 0`. In closed form
//! `ρ(t) = 2^{1-σ}/Γ(σ) t^σ K_σ(t)`; here it is evaluated from the
//! subordination integral
//!
//! ```text
//! ρ(t) = t^{2σ} / (4^σ Γ(σ)) ∫₀^∞ e^{-s - t²/(4s)} s^{-1-σ} ds
//! ```
//!
//! after the substitution `s = e^x`, which turns the integrand into a
//! smooth, log-concave bump handled by adaptive Gauss–Kronrod.

use std::fmt::Write as _;

use serde::Serialize;
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::BoundaryCondition;
use crate::quad;
use crate::spectral::{check_sigma, SpectralOperator};

fn check_open_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::param("sigma", format!("must lie in (0, 1), got {sigma}")));
    }
    Ok(())
}

/// `κ_σ = 2^{1-2σ} Γ(1-σ) / Γ(σ)`.
pub fn kappa(sigma: f64) -> Result<f64> {
    check_open_sigma(sigma)?;
    Ok(2f64.powf(1.0 - 2.0 * sigma) * gamma(1.0 - sigma) / gamma(sigma))
}

/// Exponent `(2σ - 1)/σ` of the degenerate weight after `z = (y/2σ)^{2σ}`.
pub fn nu(sigma: f64) -> Result<f64> {
    check_open_sigma(sigma)?;
    Ok((2.0 * sigma - 1.0) / sigma)
}

/// `β_σ = (2σ)^{2σ-1} κ_σ`.
pub fn beta(sigma: f64) -> Result<f64> {
    Ok((2.0 * sigma).powf(2.0 * sigma - 1.0) * kappa(sigma)?)
}

pub fn z_of_y(sigma: f64, y: f64) -> f64 {
    (y / (2.0 * sigma)).powf(2.0 * sigma)
}

pub fn y_of_z(sigma: f64, z: f64) -> f64 {
    2.0 * sigma * z.powf(1.0 / (2.0 * sigma))
}

/// `∫₀^∞ s^a e^{-s - t²/(4s)} ds` for `t > 0`, returned as `(log scale, rest)`
/// so that the value is `exp(log scale) * rest`.
fn subordination_integral(t: f64, a: f64) -> (f64, f64) {
    let b = a + 1.0;
    let q = 0.25 * t * t;
    // log-density in x = ln s is phi(x) = b x - e^x - q e^{-x}; its maximiser
    // solves e^{2x} - b e^x - q = 0
    let root = (b * b + t * t).sqrt();
    let peak = if b < 0.0 {
        (0.5 * t * t / (root - b)).ln()
    } else {
        (0.5 * (b + root)).ln()
    };
    let phi = |x: f64| b * x - x.exp() - q * (-x).exp();
    let top = phi(peak);
    let cutoff = top - 60.0;
    let mut lo = peak - 1.0;
    while phi(lo) > cutoff {
        lo -= 1.0;
    }
    let mut hi = peak + 1.0;
    while phi(hi) > cutoff {
        hi += 1.0;
    }
    let bump = |x: f64| (phi(x) - top).exp();
    // the bump peaks at 1 and has width at least of order one
    let rest = quad::integrate(bump, lo, peak, 1e-15) + quad::integrate(bump, peak, hi, 1e-15);
    (top, rest)
}

/// Extension profile `ρ_σ(t)`, `t ≥ 0`.
pub fn rho(sigma: f64, t: f64) -> Result<f64> {
    check_open_sigma(sigma)?;
    if !(t >= 0.0) {
        return Err(Error::param("t", format!("must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let (log_scale, rest) = subordination_integral(t, -1.0 - sigma);
    let log_prefactor = 2.0 * sigma * t.ln() - sigma * 4f64.ln() - ln_gamma(sigma);
    Ok((log_prefactor + log_scale).exp() * rest)
}

/// `ρ'_σ(t) = -(t / (2Γ(σ))) ∫₀^∞ e^{-s - t²/(4s)} s^{σ-2} ds`, which is
/// `-2^{1-σ}/Γ(σ) t^σ K_{1-σ}(t)`. At `t = 0` the limit is returned
/// (`-∞`, `-1` or `0` for `σ` below, at or above one half).
pub fn rho_derivative(sigma: f64, t: f64) -> Result<f64> {
    check_open_sigma(sigma)?;
    if !(t >= 0.0) {
        return Err(Error::param("t", format!("must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(if sigma < 0.5 {
            f64::NEG_INFINITY
        } else if sigma == 0.5 {
            -1.0
        } else {
            0.0
        });
    }
    let (log_scale, rest) = subordination_integral(t, sigma - 2.0);
    let log_prefactor = t.ln() - 2f64.ln() - ln_gamma(sigma);
    Ok(-(log_prefactor + log_scale).exp() * rest)
}

/// `-(1/κ_σ) y^{1-2σ} d/dy ρ(√λ y)`, which tends to `λ^σ` as `y → 0`.
pub fn mode_flux(sigma: f64, lambda: f64, y: f64) -> Result<f64> {
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let root = lambda.sqrt();
    let dy = rho_derivative(sigma, root * y)? * root;
    Ok(-y.powf(1.0 - 2.0 * sigma) * dy / kappa(sigma)?)
}

/// `{0} ∪ {y_min q^j : j < count}`.
pub fn default_y_samples(y_min: f64, ratio: f64, count: usize) -> Vec<f64> {
    std::iter::once(0.0)
        .chain((0..count).map(|j| y_min * ratio.powi(j as i32)))
        .collect()
}

/// The extension sampled at a list of heights `y`.
#[derive(Debug, Clone)]
pub struct ExtensionField {
    pub sigma: f64,
    pub y_samples: Vec<f64>,
    pub slices: Vec<ScalarField>,
    /// Mean of the datum, carried separately for Neumann grids.
    pub mean_offset: f64,
}

impl ExtensionField {
    pub fn slice(&self, j: usize) -> &ScalarField {
        &self.slices[j]
    }

    /// CSV rows `y,cell,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,cell,value\n");
        for (y, slice) in self.y_samples.iter().zip(&self.slices) {
            for (i, v) in slice.values().iter().enumerate() {
                let _ = writeln!(out, "{y},{i},{v}");
            }
        }
        out
    }
}

fn check_heights(ys: &[f64]) -> Result<()> {
    if let Some(y) = ys.iter().find(|y| !(y.is_finite() && **y >= 0.0)) {
        return Err(Error::param("y_samples", format!("heights must be finite and nonnegative, got {y}")));
    }
    Ok(())
}

/// Splits `u` into its mean (Neumann only) and the spectral coefficients of
/// the remainder.
fn centered_coefficients(specop: &SpectralOperator, u: &ScalarField) -> Result<(f64, Vec<f64>)> {
    let mut coeffs = specop.analyze(u)?;
    let neumann = specop.bc() == BoundaryCondition::Neumann;
    let offset = if neumann { u.mean() } else { 0.0 };
    if neumann {
        coeffs[0] = 0.0;
    }
    Ok((offset, coeffs))
}

pub fn extend(specop: &SpectralOperator, sigma: f64, u: &ScalarField, y_samples: &[f64]) -> Result<ExtensionField> {
    check_open_sigma(sigma)?;
    check_heights(y_samples)?;
    let (offset, coeffs) = centered_coefficients(specop, u)?;
    let roots: Vec<f64> = specop.eigenvalues().iter().map(|l| l.sqrt()).collect();
    let mut slices = Vec::with_capacity(y_samples.len());
    for &y in y_samples {
        if y == 0.0 {
            slices.push(u.clone());
            continue;
        }
        let mut c = coeffs.clone();
        for (ck, root) in c.iter_mut().zip(&roots) {
            if *ck != 0.0 {
                *ck *= rho(sigma, root * y)?;
            }
        }
        let slice = specop.synthesize(&c)?;
        slices.push(if offset != 0.0 { slice.map(|v| v + offset) } else { slice });
    }
    Ok(ExtensionField {
        sigma,
        y_samples: y_samples.to_vec(),
        slices,
        mean_offset: offset,
    })
}

/// Residual of the weighted normal derivative against the fractional
/// operator at height `y`.
#[derive(Debug, Clone)]
pub struct DtnResidual {
    pub y: f64,
    pub residual: ScalarField,
    pub norm: f64,
}

pub fn dtn_residual(specop: &SpectralOperator, sigma: f64, u: &ScalarField, y: f64) -> Result<DtnResidual> {
    check_open_sigma(sigma)?;
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::param("y", format!("must be positive, got {y}")));
    }
    let (_, coeffs) = centered_coefficients(specop, u)?;
    let mut r = Vec::with_capacity(coeffs.len());
    for (ck, &lambda) in coeffs.iter().zip(specop.eigenvalues()) {
        if lambda == 0.0 {
            r.push(0.0);
            continue;
        }
        r.push(ck * (mode_flux(sigma, lambda, y)? - lambda.powf(sigma)));
    }
    let residual = specop.synthesize(&r)?;
    Ok(DtnResidual {
        y,
        norm: residual.l2_norm(),
        residual,
    })
}

/// Trapezoid-in-`y` estimate of the weighted Dirichlet energy
/// `∫∫ y^{1-2σ} (|∇_x w|² + |∂_y w|²)` over the sampled heights. The exact
/// value over `(0, ∞)` is `κ_σ Σ λ_k^σ ⟨u, φ_k⟩²`.
pub fn energy_diagnostic(specop: &SpectralOperator, sigma: f64, u: &ScalarField, y_samples: &[f64]) -> Result<f64> {
    check_sigma(sigma)?;
    check_heights(y_samples)?;
    let (_, coeffs) = centered_coefficients(specop, u)?;
    let density = |y: f64| -> Result<f64> {
        let mut acc = 0.0;
        for (ck, &lambda) in coeffs.iter().zip(specop.eigenvalues()) {
            if lambda == 0.0 || *ck == 0.0 {
                continue;
            }
            let t = lambda.sqrt() * y;
            let value = rho(sigma, t)?;
            let slope = rho_derivative(sigma, t)?;
            acc += ck * ck * lambda * (value * value + slope * slope);
        }
        Ok(y.powf(1.0 - 2.0 * sigma) * acc)
    };
    let mut total = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for &y in y_samples.iter().filter(|y| **y > 0.0) {
        let d = density(y)?;
        if let Some((y0, d0)) = prev {
            total += 0.5 * (y - y0) * (d + d0);
        }
        prev = Some((y, d));
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeFluxCheck {
    pub sigma: f64,
    pub mode: usize,
    pub lambda: f64,
    pub y: f64,
    pub flux: f64,
    pub target: f64,
    pub relative_error: f64,
}

/// Flux of mode `k` at `y = scale / √λ_k`, compared with `λ_k^σ`.
pub fn mode_flux_check(specop: &SpectralOperator, sigma: f64, mode: usize, scale: f64) -> Result<ModeFluxCheck> {
    let lambda = *specop
        .eigenvalues()
        .get(mode)
        .ok_or_else(|| Error::param("mode", format!("index {mode} out of range")))?;
    if lambda == 0.0 {
        return Err(Error::param("mode", "kernel mode has no flux"));
    }
    let y = scale / lambda.sqrt();
    let flux = mode_flux(sigma, lambda, y)?;
    let target = lambda.powf(sigma);
    Ok(ModeFluxCheck {
        sigma,
        mode,
        lambda,
        y,
        flux,
        target,
        relative_error: (flux - target).abs() / target,
    })
}
