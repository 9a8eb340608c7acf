//! Discrete realizations of the fractional Laplacian: Fourier-multiplier form
//! on periodic grids, singular-integral quadrature form on truncated grids
//! with prescribed exterior data, and the normalization constants tying the
//! two together.

pub mod params;
pub mod quadrature;
pub mod spectral;

pub use params::{normalization_constant, riesz_constant, FracParams};
pub use quadrature::{apply_quadrature_at, ExteriorData, OperatorMatrix};
pub use spectral::{apply_spectral, SpectralOperator};
