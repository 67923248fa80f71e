//! Spectral fractional Laplacians on small grids, their harmonic extensions,
//! and the rearrangement machinery needed to check mass-concentration
//! comparisons between a Neumann problem on a domain and a radially
//! symmetric Dirichlet problem on a ball of half its measure.
//!
//! The crate is organised bottom-up:
//!
//! - [`grid`]: intervals, rectangles and radial balls with per-cell measures
//! - [`field`]: scalar fields attached to a grid
//! - [`rearrange`]: distribution functions, decreasing and Schwarz
//!   rearrangements, medians and concentration curves
//! - [`spectral`]: discrete Laplacians, eigenbases and spectral multipliers
//! - [`extension`]: the Bessel-type profile and the harmonic extension
//! - [`compare`]: elliptic concentration comparisons and their consequences
//! - [`parabolic`]: implicit time stepping and the per-step comparison
//! - [`presets`]: seeded and analytic source terms used by the drivers

pub mod compare;
pub mod error;
pub mod extension;
pub mod field;
pub mod grid;
pub mod parabolic;
pub mod presets;
mod quad;
pub mod rearrange;
pub mod spectral;

pub use error::{Error, Result};
pub use field::ScalarField;
pub use grid::{BoundaryCondition, Grid, GridKind};
pub use spectral::SpectralOperator;
