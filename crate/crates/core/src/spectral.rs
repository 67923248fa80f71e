//! Discrete Laplacians and their spectral calculus.
//!
//! Every grid gets a cell-centered second-difference operator written in
//! flux form, `A = γ M⁻¹ K`, where `M` is the diagonal matrix of cell
//! measures and `K` is symmetric. `A` is therefore self-adjoint in the
//! measure-weighted inner product, and its eigenvectors are orthonormalised
//! in that inner product. Fractional powers, resolvents and heat semigroups
//! are all spectral multipliers on the resulting basis.
//!
//! Boundary handling:
//! - Neumann walls reflect (ghost value equals the boundary cell value);
//! - Dirichlet walls are antisymmetric ghosts, i.e. zero at the wall;
//! - radial grids use shell-interface areas `N ω_N r^{N-1}` as flux weights,
//!   zero flux at the center and a Dirichlet wall at the outer radius.
//!
//! Rectangles are diagonalised as tensor products of two 1D bases; the
//! dense path ([`eigendecompose`]) works for any grid and is what the
//! tensor path is validated against.

use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::grid::{unit_ball_measure, BoundaryCondition, Grid, GridShape};

const RESIDUAL_TOL: f64 = 1e-8;
const COMPATIBILITY_TOL: f64 = 1e-10;

/// Assembled operator `A = γ M⁻¹ K`.
#[derive(Debug, Clone)]
pub struct Laplacian {
    grid: Arc<Grid>,
    gamma: f64,
    /// Symmetric flux matrix `γ K`.
    stiffness: DMatrix<f64>,
}

impl Laplacian {
    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn stiffness(&self) -> &DMatrix<f64> {
        &self.stiffness
    }

    /// Dense `A = γ M⁻¹ K`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut a = self.stiffness.clone();
        for (i, m) in self.grid.measures().iter().enumerate() {
            a.row_mut(i).scale_mut(1.0 / m);
        }
        a
    }

    pub fn apply(&self, field: &ScalarField) -> Result<ScalarField> {
        if **field.grid() != *self.grid {
            return Err(Error::GridMismatch);
        }
        let u = DVector::from_column_slice(field.values());
        let ku = &self.stiffness * u;
        let values = ku
            .iter()
            .zip(self.grid.measures())
            .map(|(v, m)| v / m)
            .collect();
        ScalarField::new(field.grid().clone(), values)
    }
}

/// Flux matrix of the 1D cell-centered operator with spacing `h`, scaled so
/// that `K / h` is the usual second difference.
fn line_stiffness(n: usize, h: f64, bc: BoundaryCondition) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(n, n);
    let c = 1.0 / h;
    for i in 0..n - 1 {
        k[(i, i)] += c;
        k[(i + 1, i + 1)] += c;
        k[(i, i + 1)] -= c;
        k[(i + 1, i)] -= c;
    }
    if bc == BoundaryCondition::Dirichlet {
        // wall at half a cell from the end cells
        k[(0, 0)] += 2.0 * c;
        k[(n - 1, n - 1)] += 2.0 * c;
    }
    k
}

fn radial_stiffness(shells: usize, radius: f64, dim: usize) -> DMatrix<f64> {
    let dr = radius / shells as f64;
    let area = |r: f64| dim as f64 * unit_ball_measure(dim) * r.powi(dim as i32 - 1);
    let mut k = DMatrix::zeros(shells, shells);
    // interfaces between shells i and i+1 sit at r = (i+1) dr; none at r = 0
    for i in 0..shells - 1 {
        let w = area((i + 1) as f64 * dr) / dr;
        k[(i, i)] += w;
        k[(i + 1, i + 1)] += w;
        k[(i, i + 1)] -= w;
        k[(i + 1, i)] -= w;
    }
    k[(shells - 1, shells - 1)] += 2.0 * area(radius) / dr;
    k
}

pub fn assemble_laplacian(grid: &Arc<Grid>, gamma: f64) -> Result<Laplacian> {
    check_gamma(gamma)?;
    let stiffness = match grid.shape() {
        GridShape::Interval { n, length } => line_stiffness(n, length / n as f64, grid.bc()),
        GridShape::Rectangle { nx, ny, lx, ly } => {
            let (hx, hy) = (lx / nx as f64, ly / ny as f64);
            // K = hy Kx ⊗ I + hx I ⊗ Ky with x varying fastest
            let kx = line_stiffness(nx, hx, grid.bc());
            let ky = line_stiffness(ny, hy, grid.bc());
            let mut k = DMatrix::zeros(nx * ny, nx * ny);
            for j in 0..ny {
                for i in 0..nx {
                    let row = i + nx * j;
                    for i2 in 0..nx {
                        k[(row, i2 + nx * j)] += hy * kx[(i, i2)];
                    }
                    for j2 in 0..ny {
                        k[(row, i + nx * j2)] += hx * ky[(j, j2)];
                    }
                }
            }
            k
        }
        GridShape::RadialBall { shells, radius } => radial_stiffness(shells, radius, grid.dimension()),
    };
    Ok(Laplacian {
        grid: grid.clone(),
        gamma,
        stiffness: stiffness * gamma,
    })
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::param("gamma", format!("diffusion must be positive, got {gamma}")));
    }
    Ok(())
}

/// Accepts `σ ∈ [0, 1]`; the endpoints are degenerate but useful in tests.
pub fn check_sigma(sigma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::param("sigma", format!("must lie in (0, 1), got {sigma}")));
    }
    Ok(())
}

/// `λ^σ` with the kernel mapped to zero.
pub(crate) fn frac_power(lambda: f64, sigma: f64) -> f64 {
    if lambda == 0.0 {
        0.0
    } else {
        lambda.powf(sigma)
    }
}

/// Ascending eigenpairs of a symmetric matrix, with each eigenvector's
/// first significant component made positive.
fn sorted_eigen(s: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = s.nrows();
    let eig = SymmetricEigen::new(s);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(i).clone_owned();
        let cutoff = 1e-10 * v.amax();
        if let Some(first) = v.iter().find(|x| x.abs() > cutoff) {
            if *first < 0.0 {
                v.neg_mut();
            }
        }
        vectors.set_column(col, &v);
    }
    (values, vectors)
}

fn check_residuals(s: &DMatrix<f64>, values: &[f64], vectors: &DMatrix<f64>) -> Result<()> {
    let scale = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    for (k, &lambda) in values.iter().enumerate() {
        let v = vectors.column(k);
        let r = (s * v - v * lambda).norm();
        if r > RESIDUAL_TOL * scale {
            return Err(Error::Numerical(format!(
                "eigenpair {k} residual {r:e} exceeds {:e}",
                RESIDUAL_TOL * scale
            )));
        }
    }
    Ok(())
}

/// Pins the Neumann kernel: `λ_0 = 0` with a constant eigenvector.
fn snap_kernel(values: &mut [f64], vectors: &mut DMatrix<f64>) -> Result<()> {
    let scale = values.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
    if values[0].abs() > 1e-9 * scale {
        return Err(Error::Numerical(format!(
            "Neumann operator has no kernel: smallest eigenvalue {:e}",
            values[0]
        )));
    }
    values[0] = 0.0;
    let n = vectors.nrows();
    vectors.set_column(0, &DVector::from_element(n, 1.0 / (n as f64).sqrt()));
    for v in values.iter_mut().skip(1) {
        *v = v.max(0.0);
    }
    Ok(())
}

#[derive(Debug, Clone)]
enum Basis {
    /// Columns are `φ_k`, orthonormal in the weighted inner product.
    Dense(DMatrix<f64>),
    /// Columns of `ex`, `ey` are Euclidean-orthonormal 1D eigenvectors;
    /// `φ_(i,j) = ex_i ⊗ ey_j / sqrt(cell measure)`.
    Tensor {
        ex: DMatrix<f64>,
        ey: DMatrix<f64>,
        modes: Vec<(usize, usize)>,
        sqrt_cell: f64,
    },
}

/// Eigen-decomposed Laplacian on a grid: the engine behind every fractional
/// power, elliptic solve and semigroup in the crate. Immutable once built.
#[derive(Debug, Clone)]
pub struct SpectralOperator {
    grid: Arc<Grid>,
    gamma: f64,
    eigenvalues: Vec<f64>,
    basis: Basis,
}

/// Dense eigendecomposition of an assembled operator.
pub fn eigendecompose(op: &Laplacian) -> Result<SpectralOperator> {
    let grid = op.grid.clone();
    let inv_sqrt: Vec<f64> = grid.measures().iter().map(|m| 1.0 / m.sqrt()).collect();
    let n = grid.len();
    let mut s = op.stiffness.clone();
    for i in 0..n {
        for j in 0..n {
            s[(i, j)] *= inv_sqrt[i] * inv_sqrt[j];
        }
    }
    let (mut values, mut vectors) = sorted_eigen(s.clone());
    check_residuals(&s, &values, &vectors)?;
    if grid.bc() == BoundaryCondition::Neumann {
        // M^{1/2} 1 is constant only for uniform cells, which Neumann grids are
        snap_kernel(&mut values, &mut vectors)?;
    }
    for (i, w) in inv_sqrt.iter().enumerate() {
        vectors.row_mut(i).scale_mut(*w);
    }
    Ok(SpectralOperator {
        grid,
        gamma: op.gamma,
        eigenvalues: values,
        basis: Basis::Dense(vectors),
    })
}

fn line_eigen(n: usize, h: f64, bc: BoundaryCondition) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let a = line_stiffness(n, h, bc) / h;
    let (mut values, mut vectors) = sorted_eigen(a.clone());
    check_residuals(&a, &values, &vectors)?;
    if bc == BoundaryCondition::Neumann {
        snap_kernel(&mut values, &mut vectors)?;
    }
    Ok((values, vectors))
}

impl SpectralOperator {
    /// Builds the spectral operator for `γ Δ` on `grid`, using the tensor
    /// path for rectangles and a dense decomposition otherwise.
    pub fn build(grid: &Arc<Grid>, gamma: f64) -> Result<SpectralOperator> {
        check_gamma(gamma)?;
        match grid.shape() {
            GridShape::Rectangle { nx, ny, lx, ly } => {
                let (hx, hy) = (lx / nx as f64, ly / ny as f64);
                let (lam_x, ex) = line_eigen(nx, hx, grid.bc())?;
                let (lam_y, ey) = line_eigen(ny, hy, grid.bc())?;
                let mut modes: Vec<(usize, usize)> =
                    (0..nx).flat_map(|i| (0..ny).map(move |j| (i, j))).collect();
                let value = |&(i, j): &(usize, usize)| gamma * (lam_x[i] + lam_y[j]);
                modes.sort_by(|a, b| value(a).total_cmp(&value(b)).then(a.cmp(b)));
                let eigenvalues = modes.iter().map(value).collect();
                Ok(SpectralOperator {
                    grid: grid.clone(),
                    gamma,
                    eigenvalues,
                    basis: Basis::Tensor {
                        ex,
                        ey,
                        modes,
                        sqrt_cell: (hx * hy).sqrt(),
                    },
                })
            }
            _ => eigendecompose(&assemble_laplacian(grid, gamma)?),
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.grid.bc()
    }

    /// Ascending eigenvalues of `-γΔ`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    fn check_field(&self, field: &ScalarField) -> Result<()> {
        if Arc::ptr_eq(field.grid(), &self.grid) || **field.grid() == *self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Coefficients `⟨u, φ_k⟩` in ascending eigenvalue order.
    pub fn analyze(&self, field: &ScalarField) -> Result<Vec<f64>> {
        self.check_field(field)?;
        Ok(match &self.basis {
            Basis::Dense(phi) => {
                let weighted: Vec<f64> = field
                    .values()
                    .iter()
                    .zip(self.grid.measures())
                    .map(|(v, m)| v * m)
                    .collect();
                (phi.transpose() * DVector::from_vec(weighted)).as_slice().to_vec()
            }
            Basis::Tensor {
                ex,
                ey,
                modes,
                sqrt_cell,
            } => {
                let f = DMatrix::from_column_slice(ex.nrows(), ey.nrows(), field.values());
                let c = ex.transpose() * f * ey * *sqrt_cell;
                modes.iter().map(|&(i, j)| c[(i, j)]).collect()
            }
        })
    }

    /// `Σ c_k φ_k`.
    pub fn synthesize(&self, coefficients: &[f64]) -> Result<ScalarField> {
        if coefficients.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: coefficients.len(),
            });
        }
        let values = match &self.basis {
            Basis::Dense(phi) => (phi * DVector::from_column_slice(coefficients))
                .as_slice()
                .to_vec(),
            Basis::Tensor {
                ex,
                ey,
                modes,
                sqrt_cell,
            } => {
                let mut c = DMatrix::zeros(ex.ncols(), ey.ncols());
                for (&(i, j), &v) in modes.iter().zip(coefficients) {
                    c[(i, j)] = v;
                }
                let u = ex * c * ey.transpose() / *sqrt_cell;
                u.as_slice().to_vec()
            }
        };
        ScalarField::new(self.grid.clone(), values)
    }

    pub fn eigenvector(&self, k: usize) -> Result<ScalarField> {
        if k >= self.len() {
            return Err(Error::param("mode", format!("index {k} out of range 0..{}", self.len())));
        }
        let mut c = vec![0.0; self.len()];
        c[k] = 1.0;
        self.synthesize(&c)
    }

    /// Applies `m(λ_k)` to every spectral coefficient.
    pub fn apply_multiplier(&self, field: &ScalarField, m: impl Fn(f64) -> f64) -> Result<ScalarField> {
        let mut c = self.analyze(field)?;
        for (ck, &lambda) in c.iter_mut().zip(&self.eigenvalues) {
            *ck *= m(lambda);
        }
        self.synthesize(&c)
    }

    /// `(-γΔ)^σ u`.
    pub fn apply_fractional(&self, sigma: f64, field: &ScalarField) -> Result<ScalarField> {
        check_sigma(sigma)?;
        self.apply_multiplier(field, |l| frac_power(l, sigma))
    }

    /// Solves `(-γΔ)^σ u + c u = f`.
    ///
    /// For `c = 0` with Neumann walls the source must have zero mean and the
    /// zero-mean solution is returned.
    pub fn solve_elliptic(&self, sigma: f64, c: f64, f: &ScalarField) -> Result<ScalarField> {
        check_sigma(sigma)?;
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::param("c", format!("must be nonnegative, got {c}")));
        }
        let mut coeffs = self.analyze(f)?;
        let singular = c == 0.0 && self.eigenvalues[0] == 0.0;
        if singular {
            let tolerance = COMPATIBILITY_TOL * f.l2_norm();
            if coeffs[0].abs() > tolerance {
                return Err(Error::IncompatibleData {
                    component: coeffs[0],
                    tolerance,
                });
            }
        }
        for (ck, &lambda) in coeffs.iter_mut().zip(&self.eigenvalues) {
            let denom = frac_power(lambda, sigma) + c;
            *ck = if denom == 0.0 { 0.0 } else { *ck / denom };
        }
        self.synthesize(&coeffs)
    }

    /// `e^{tγΔ} u`.
    pub fn heat_semigroup(&self, t: f64, field: &ScalarField) -> Result<ScalarField> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::param("t", format!("must be nonnegative, got {t}")));
        }
        self.apply_multiplier(field, |l| (-l * t).exp())
    }

    /// Eigenvalues as CSV (`k,lambda`).
    pub fn spectrum_csv(&self) -> String {
        let mut out = String::from("k,lambda\n");
        for (k, l) in self.eigenvalues.iter().enumerate() {
            let _ = writeln!(out, "{k},{l}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn interval(n: usize, bc: BoundaryCondition) -> Arc<Grid> {
        Arc::new(Grid::interval(n, 1.0, bc).unwrap())
    }

    /// Closed-form eigenvalues of the cell-centered second difference.
    fn fd_eigenvalue(n: usize, k: usize) -> f64 {
        let s = (k as f64 * PI / (2.0 * n as f64)).sin();
        4.0 * (n * n) as f64 * s * s
    }

    #[test]
    fn neumann_rows_sum_to_zero() {
        for grid in [
            interval(7, BoundaryCondition::Neumann),
            Arc::new(Grid::rectangle(4, 3, 1.0, 2.0, BoundaryCondition::Neumann).unwrap()),
        ] {
            let a = assemble_laplacian(&grid, 1.0).unwrap().matrix();
            for row in a.row_iter() {
                assert!(row.sum().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn dirichlet_interval_matches_closed_form() {
        for n in [8, 32, 64] {
            let op = SpectralOperator::build(&interval(n, BoundaryCondition::Dirichlet), 1.0).unwrap();
            for k in 0..n {
                let exact = fd_eigenvalue(n, k + 1);
                assert!((op.eigenvalues()[k] - exact).abs() < 1e-9 * exact.max(1.0));
            }
        }
        let op = SpectralOperator::build(&interval(256, BoundaryCondition::Dirichlet), 1.0).unwrap();
        assert!((op.eigenvalues()[0] - PI * PI).abs() < 1e-3);
    }

    #[test]
    fn neumann_interval_matches_closed_form() {
        let n = 64;
        let op = SpectralOperator::build(&interval(n, BoundaryCondition::Neumann), 1.0).unwrap();
        assert_eq!(op.eigenvalues()[0], 0.0);
        for k in 1..n {
            let exact = fd_eigenvalue(n, k);
            assert!((op.eigenvalues()[k] - exact).abs() < 1e-9 * exact);
        }
        let phi0 = op.eigenvector(0).unwrap();
        assert!(phi0.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn gamma_scales_spectrum() {
        let g = interval(16, BoundaryCondition::Dirichlet);
        let a = SpectralOperator::build(&g, 1.0).unwrap();
        let b = SpectralOperator::build(&g, 2.0).unwrap();
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues()) {
            assert!((2.0 * x - y).abs() < 1e-9 * y);
        }
    }

    #[test]
    fn tensor_matches_dense_rectangle() {
        for bc in [BoundaryCondition::Neumann, BoundaryCondition::Dirichlet] {
            let g = Arc::new(Grid::rectangle(6, 5, 1.0, 1.5, bc).unwrap());
            let tensor = SpectralOperator::build(&g, 0.7).unwrap();
            let dense = eigendecompose(&assemble_laplacian(&g, 0.7).unwrap()).unwrap();
            for (a, b) in tensor.eigenvalues().iter().zip(dense.eigenvalues()) {
                assert!((a - b).abs() < 1e-9 * b.max(1.0), "{a} vs {b}");
            }
            let lap = assemble_laplacian(&g, 0.7).unwrap();
            let u = ScalarField::from_fn(g.clone(), |x| (3.0 * x[0]).sin() + x[1] * x[1]);
            let direct = lap.apply(&u).unwrap();
            let spectral = tensor.apply_fractional(1.0, &u).unwrap();
            let diff = direct.sub(&spectral).unwrap().sup_norm();
            assert!(diff < 1e-10 * direct.sup_norm().max(1.0));
        }
    }

    #[test]
    fn radial_one_dimensional_matches_full_interval() {
        // N = 1 radial Dirichlet on (-R, R) with n shells keeps the even
        // modes of the 2n-cell Cartesian operator.
        let n = 12;
        let ball = Arc::new(Grid::radial_ball(n, 1, 1.0).unwrap());
        let op = SpectralOperator::build(&ball, 1.0).unwrap();
        for (k, lambda) in op.eigenvalues().iter().enumerate() {
            let exact = fd_eigenvalue(2 * n, 2 * k + 1);
            assert!((lambda - exact).abs() < 1e-9 * exact);
        }
    }

    #[test]
    fn radial_disk_first_eigenvalue() {
        // -Δ on the unit disk: j_{0,1}^2
        let j01 = 2.404_825_557_695_773f64;
        let ball = Arc::new(Grid::radial_ball(200, 2, PI).unwrap());
        let op = SpectralOperator::build(&ball, 1.0).unwrap();
        assert!((op.eigenvalues()[0] - j01 * j01).abs() < 1e-3);
    }

    #[test]
    fn eigenvectors_are_weighted_orthonormal() {
        let ball = Arc::new(Grid::radial_ball(20, 3, 2.0).unwrap());
        let op = SpectralOperator::build(&ball, 1.3).unwrap();
        for j in 0..op.len() {
            let pj = op.eigenvector(j).unwrap();
            for k in j..op.len() {
                let pk = op.eigenvector(k).unwrap();
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((pj.inner(&pk).unwrap() - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn completeness() {
        let g = Arc::new(Grid::rectangle(7, 4, 1.0, 1.0, BoundaryCondition::Neumann).unwrap());
        let op = SpectralOperator::build(&g, 1.0).unwrap();
        let u = ScalarField::from_fn(g.clone(), |x| (x[0] * 5.0).cos() * x[1]);
        let back = op.synthesize(&op.analyze(&u).unwrap()).unwrap();
        assert!(back.sub(&u).unwrap().sup_norm() < 1e-10);
    }

    #[test]
    fn fractional_examples() {
        let g = interval(32, BoundaryCondition::Neumann);
        let op = SpectralOperator::build(&g, 1.0).unwrap();
        let zero = op.apply_fractional(0.4, &ScalarField::constant(g.clone(), 3.0)).unwrap();
        assert!(zero.sup_norm() < 1e-10);
        let phi = op.eigenvector(3).unwrap();
        let out = op.apply_fractional(0.4, &phi).unwrap();
        let expected = phi.scale(op.eigenvalues()[3].powf(0.4));
        assert!(out.sub(&expected).unwrap().sup_norm() < 1e-9);
    }

    #[test]
    fn elliptic_examples() {
        let g = interval(32, BoundaryCondition::Neumann);
        let op = SpectralOperator::build(&g, 1.0).unwrap();
        let phi = op.eigenvector(2).unwrap();
        let u = op.solve_elliptic(0.3, 0.0, &phi).unwrap();
        let expected = phi.scale(op.eigenvalues()[2].powf(-0.3));
        assert!(u.sub(&expected).unwrap().sup_norm() < 1e-12);
        let u = op.solve_elliptic(0.3, 2.0, &ScalarField::constant(g.clone(), 1.0)).unwrap();
        assert!(u.values().iter().all(|v| (v - 0.5).abs() < 1e-12));
        assert!(matches!(
            op.solve_elliptic(0.3, 0.0, &ScalarField::constant(g.clone(), 1.0)),
            Err(Error::IncompatibleData { .. })
        ));
        assert!(op.solve_elliptic(1.5, 0.0, &phi).is_err());
        assert!(op.solve_elliptic(0.5, -1.0, &phi).is_err());
    }

    #[test]
    fn heat_examples() {
        let g = interval(16, BoundaryCondition::Neumann);
        let op = SpectralOperator::build(&g, 1.0).unwrap();
        let u = ScalarField::from_fn(g.clone(), |x| x[0] * x[0]);
        assert!(op.heat_semigroup(0.0, &u).unwrap().sub(&u).unwrap().sup_norm() < 1e-12);
        let c = ScalarField::constant(g.clone(), 2.0);
        assert!(op.heat_semigroup(5.0, &c).unwrap().sub(&c).unwrap().sup_norm() < 1e-12);
        let phi = op.eigenvector(1).unwrap();
        let out = op.heat_semigroup(1.0, &phi).unwrap();
        let expected = phi.scale((-op.eigenvalues()[1]).exp());
        assert!(out.sub(&expected).unwrap().sup_norm() < 1e-12);
    }
}
