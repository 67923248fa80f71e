use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Real values attached to the cells of a grid. Integrals and norms use the
/// grid's cell measures.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<ScalarField> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(ScalarField { grid, values })
    }

    pub fn constant(grid: Arc<Grid>, value: f64) -> ScalarField {
        let values = vec![value; grid.len()];
        ScalarField { grid, values }
    }

    pub fn zeros(grid: Arc<Grid>) -> ScalarField {
        ScalarField::constant(grid, 0.0)
    }

    /// Samples `f` at every cell centroid.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(&[f64]) -> f64) -> ScalarField {
        let values = grid.centroids().iter().map(|c| f(c)).collect();
        ScalarField { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn same_grid(&self, other: &ScalarField) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<ScalarField> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        Ok(ScalarField {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: f64) -> ScalarField {
        self.map(|v| v * factor)
    }

    pub fn positive_part(&self) -> ScalarField {
        self.map(|v| v.max(0.0))
    }

    /// `max(-f, 0)`, so that `f = f⁺ - f⁻` with both parts nonnegative.
    pub fn negative_part(&self) -> ScalarField {
        self.map(|v| (-v).max(0.0))
    }

    pub fn integral(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.measures())
            .map(|(v, m)| v * m)
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.integral() / self.grid.total_measure()
    }

    /// Measure-weighted inner product.
    pub fn inner(&self, other: &ScalarField) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.grid.measures())
            .map(|((a, b), m)| a * b * m)
            .sum())
    }

    /// `L^p` norm for `p >= 1`; `p = f64::INFINITY` gives the max norm.
    pub fn norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.sup_norm();
        }
        let sum: f64 = self
            .values
            .iter()
            .zip(self.grid.measures())
            .map(|(v, m)| v.abs().powf(p) * m)
            .sum();
        sum.powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm(2.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Measure of the set where the field is strictly positive.
    pub fn support_measure(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.measures())
            .filter(|(v, _)| **v > 0.0)
            .map(|(_, m)| m)
            .sum()
    }
}
