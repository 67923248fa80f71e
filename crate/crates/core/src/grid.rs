//! Uniform desk-scale domains.
//!
//! Three kinds of grid are supported: a 1D interval and a 2D rectangle, both
//! standing in for a bounded domain with reflecting (Neumann) or absorbing
//! (Dirichlet) walls, and a radial ball discretised into concentric shells of
//! equal width, which is where radially symmetric functions live.

use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    Neumann,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Interval,
    Rectangle,
    RadialBall,
}

/// Construction parameters, kept so that a grid can be described and rebuilt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridShape {
    Interval { n: usize, length: f64 },
    Rectangle { nx: usize, ny: usize, lx: f64, ly: f64 },
    RadialBall { shells: usize, radius: f64 },
}

/// Lebesgue measure of the unit ball in `R^dim`.
pub fn unit_ball_measure(dim: usize) -> f64 {
    let half = dim as f64 / 2.0;
    std::f64::consts::PI.powf(half) / gamma(half + 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    shape: GridShape,
    dimension: usize,
    bc: BoundaryCondition,
    /// Cell centroids; for radial grids this is the shell midpoint radius.
    centroids: Vec<Vec<f64>>,
    measures: Vec<f64>,
    total_measure: f64,
}

impl Grid {
    pub fn interval(n: usize, length: f64, bc: BoundaryCondition) -> Result<Grid> {
        if n < 2 {
            return Err(Error::param("n", format!("need at least 2 cells, got {n}")));
        }
        check_length("length", length)?;
        let h = length / n as f64;
        let centroids = (0..n).map(|i| vec![(i as f64 + 0.5) * h]).collect();
        Ok(Grid::assemble(
            GridShape::Interval { n, length },
            1,
            bc,
            centroids,
            vec![h; n],
        ))
    }

    /// Tensor grid on `[0, lx] x [0, ly]`; cell `(i, j)` has index `i + nx * j`.
    pub fn rectangle(nx: usize, ny: usize, lx: f64, ly: f64, bc: BoundaryCondition) -> Result<Grid> {
        if nx < 2 || ny < 2 {
            return Err(Error::param(
                "nx/ny",
                format!("need at least 2 cells per side, got {nx}x{ny}"),
            ));
        }
        check_length("lx", lx)?;
        check_length("ly", ly)?;
        let (hx, hy) = (lx / nx as f64, ly / ny as f64);
        let mut centroids = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                centroids.push(vec![(i as f64 + 0.5) * hx, (j as f64 + 0.5) * hy]);
            }
        }
        Ok(Grid::assemble(
            GridShape::Rectangle { nx, ny, lx, ly },
            2,
            bc,
            centroids,
            vec![hx * hy; nx * ny],
        ))
    }

    /// Centered ball in `R^dim` of the given measure, split into `shells`
    /// shells of equal radial width. Always carries a Dirichlet condition on
    /// the outer sphere.
    pub fn radial_ball(shells: usize, dim: usize, target_measure: f64) -> Result<Grid> {
        if shells < 2 {
            return Err(Error::param(
                "shells",
                format!("need at least 2 shells, got {shells}"),
            ));
        }
        if dim == 0 {
            return Err(Error::param("dimension", "must be at least 1"));
        }
        check_length("target_measure", target_measure)?;
        let omega = unit_ball_measure(dim);
        let radius = (target_measure / omega).powf(1.0 / dim as f64);
        let dr = radius / shells as f64;
        let n = dim as i32;
        let mut centroids = Vec::with_capacity(shells);
        let mut measures = Vec::with_capacity(shells);
        for i in 0..shells {
            let (inner, outer) = (i as f64 * dr, (i + 1) as f64 * dr);
            centroids.push(vec![(i as f64 + 0.5) * dr]);
            measures.push(omega * (outer.powi(n) - inner.powi(n)));
        }
        Ok(Grid::assemble(
            GridShape::RadialBall { shells, radius },
            dim,
            BoundaryCondition::Dirichlet,
            centroids,
            measures,
        ))
    }

    fn assemble(
        shape: GridShape,
        dimension: usize,
        bc: BoundaryCondition,
        centroids: Vec<Vec<f64>>,
        measures: Vec<f64>,
    ) -> Grid {
        let total_measure = measures.iter().sum();
        Grid {
            shape,
            dimension,
            bc,
            centroids,
            measures,
            total_measure,
        }
    }

    pub fn kind(&self) -> GridKind {
        match self.shape {
            GridShape::Interval { .. } => GridKind::Interval,
            GridShape::Rectangle { .. } => GridKind::Rectangle,
            GridShape::RadialBall { .. } => GridKind::RadialBall,
        }
    }

    pub fn shape(&self) -> GridShape {
        self.shape
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn len(&self) -> usize {
        self.measures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measures.is_empty()
    }

    pub fn centroids(&self) -> &[Vec<f64>] {
        &self.centroids
    }

    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    pub fn total_measure(&self) -> f64 {
        self.total_measure
    }

    pub fn max_cell_measure(&self) -> f64 {
        self.measures.iter().cloned().fold(0.0, f64::max)
    }

    /// Largest linear cell size (grid spacing or shell width).
    pub fn spacing(&self) -> f64 {
        match self.shape {
            GridShape::Interval { n, length } => length / n as f64,
            GridShape::Rectangle { nx, ny, lx, ly } => (lx / nx as f64).max(ly / ny as f64),
            GridShape::RadialBall { shells, radius } => radius / shells as f64,
        }
    }

    /// Measure enclosed by the analytic domain the grid discretises.
    pub fn analytic_measure(&self) -> f64 {
        match self.shape {
            GridShape::Interval { length, .. } => length,
            GridShape::Rectangle { lx, ly, .. } => lx * ly,
            GridShape::RadialBall { radius, .. } => {
                unit_ball_measure(self.dimension) * radius.powi(self.dimension as i32)
            }
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match self.shape {
            GridShape::RadialBall { radius, .. } => Some(radius),
            _ => None,
        }
    }

    pub fn summary(&self) -> GridSummary {
        let (n, lengths, radius) = match self.shape {
            GridShape::Interval { n, length } => (vec![n], Some(vec![length]), None),
            GridShape::Rectangle { nx, ny, lx, ly } => (vec![nx, ny], Some(vec![lx, ly]), None),
            GridShape::RadialBall { shells, radius } => (vec![shells], None, Some(radius)),
        };
        GridSummary {
            kind: self.kind(),
            dimension: self.dimension,
            n,
            lengths,
            radius,
            total_measure: self.total_measure,
            bc: self.bc,
        }
    }
}

fn check_length(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::param(name, format!("must be positive and finite, got {value}")));
    }
    Ok(())
}

/// JSON description of a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSummary {
    pub kind: GridKind,
    #[serde(rename = "N")]
    pub dimension: usize,
    pub n: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    pub total_measure: f64,
    pub bc: BoundaryCondition,
}
