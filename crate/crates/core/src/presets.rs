//! Named source terms and initial data.
//!
//! Random fields are smooth and independent of resolution: a seeded
//! `ChaCha8` stream draws standard normal coefficients `a_k`, and the field is
//! `Σ a_k Π cos(k_d π x_d / L_d) / (1 + |k|²)` over `0 ≤ k_d ≤ 4`. The
//! coefficient order is `k_x` fastest, then `k_y`.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::GridShape;
use crate::spectral::SpectralOperator;

/// Highest cosine frequency per direction in random fields.
pub const RANDOM_MAX_FREQ: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    Zero,
    Constant(f64),
    /// `k`-th eigenvector of the operator, ascending order, `0` is the
    /// lowest.
    Eigenmode(usize),
    /// A positive bump near the low corner and a negative one near the high
    /// corner.
    TwoBump,
    Random { seed: u64 },
}

impl Preset {
    /// Samples the preset on the operator's grid. With `zero_mean` the
    /// discrete mean is subtracted afterwards.
    pub fn build(&self, op: &SpectralOperator, zero_mean: bool) -> Result<ScalarField> {
        let grid = op.grid().clone();
        let field = match *self {
            Preset::Zero => ScalarField::zeros(grid),
            Preset::Constant(c) => ScalarField::constant(grid, c),
            Preset::Eigenmode(k) => op.eigenvector(k)?,
            Preset::TwoBump => {
                let lengths = domain_lengths(&grid.shape())?;
                let width = 0.1 * lengths.iter().cloned().fold(f64::INFINITY, f64::min);
                ScalarField::from_fn(grid, |x| {
                    let bump = |frac: f64| {
                        let r2: f64 = x
                            .iter()
                            .zip(&lengths)
                            .map(|(xi, l)| (xi - frac * l).powi(2))
                            .sum();
                        (-r2 / (2.0 * width * width)).exp()
                    };
                    bump(0.25) - bump(0.75)
                })
            }
            Preset::Random { seed } => random_field(op, seed)?,
        };
        Ok(if zero_mean {
            let m = field.mean();
            field.map(|v| v - m)
        } else {
            field
        })
    }
}

fn domain_lengths(shape: &GridShape) -> Result<Vec<f64>> {
    match *shape {
        GridShape::Interval { length, .. } => Ok(vec![length]),
        GridShape::Rectangle { lx, ly, .. } => Ok(vec![lx, ly]),
        GridShape::RadialBall { .. } => Err(Error::param("preset", "only defined on intervals and rectangles")),
    }
}

fn random_field(op: &SpectralOperator, seed: u64) -> Result<ScalarField> {
    let lengths = domain_lengths(&op.grid().shape())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = RANDOM_MAX_FREQ + 1;
    let count = n.pow(lengths.len() as u32);
    let coeffs: Vec<f64> = (0..count).map(|_| StandardNormal.sample(&mut rng)).collect();
    Ok(ScalarField::from_fn(op.grid().clone(), |x| {
        let mut acc = 0.0;
        for (idx, a) in coeffs.iter().enumerate() {
            let (mut rest, mut prod, mut k2) = (idx, 1.0, 0.0);
            for (xi, l) in x.iter().zip(&lengths) {
                let k = (rest % n) as f64;
                rest /= n;
                prod *= (k * std::f64::consts::PI * xi / l).cos();
                k2 += k * k;
            }
            acc += a * prod / (1.0 + k2);
        }
        acc
    }))
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Zero => write!(f, "zero"),
            Preset::Constant(c) => write!(f, "constant:{c}"),
            Preset::Eigenmode(k) => write!(f, "eigenmode:{k}"),
            Preset::TwoBump => write!(f, "two-bump"),
            Preset::Random { seed } => write!(f, "random:{seed}"),
        }
    }
}

/// Accepts `zero`, `constant[:c]`, `eigenmode[:k]`, `two-bump` and
/// `random[:seed]`. A missing constant is `1`, a missing mode is `1`, a
/// missing seed is `0`.
impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Preset> {
        let (name, arg) = match s.split_once([':', '=']) {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let bad = |what: &str| Error::param("preset", format!("bad {what} in `{s}`"));
        Ok(match name {
            "zero" | "zero-source" => Preset::Zero,
            "constant" => Preset::Constant(arg.map_or(Ok(1.0), |a| a.parse().map_err(|_| bad("constant")))?),
            "eigenmode" => Preset::Eigenmode(arg.map_or(Ok(1), |a| a.parse().map_err(|_| bad("mode index")))?),
            "two-bump" => Preset::TwoBump,
            "random" => Preset::Random {
                seed: arg.map_or(Ok(0), |a| a.parse().map_err(|_| bad("seed")))?,
            },
            _ => return Err(Error::param("preset", format!("unknown preset `{s}`"))),
        })
    }
}
