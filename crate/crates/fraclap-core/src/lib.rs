//! fraclap: a desk-scale numerical toolkit for the fractional Laplacian.
//!
//! The operator `(-Delta)^{alpha/2}`, `0 < alpha < 2`, is realized two ways:
//! as the Fourier multiplier `|xi|^alpha` on periodic grids and as a
//! singular-integral quadrature with prescribed exterior data on truncated
//! grids. On top of it sit the Riesz potential inverse, a semi-implicit
//! Ginzburg-Landau gradient flow, an exterior-value Dirichlet solver with a
//! monotone ball exhaustion, and a battery of nodewise inequality checks
//! (Kato, carre du champ, Liouville) that exercise the maximum-principle
//! structure the discretization is built to preserve.

pub mod checks;
pub mod error;
pub mod exhaustion;
pub mod field;
pub mod ginzburg_landau;
pub mod grid;
pub mod io;
pub mod operator;
pub mod potential;
pub mod report;

pub use error::{FracError, Result};
pub use field::{tail_diagnostics, Field, TailDiagnostic};
pub use grid::{make_grid, Grid, Topology};
pub use operator::{
    apply_quadrature_at, apply_spectral, normalization_constant, riesz_constant, ExteriorData,
    FracParams, OperatorMatrix, SpectralOperator,
};
pub use report::PropertyReport;
