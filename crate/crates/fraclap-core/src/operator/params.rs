//! Order parameter and normalization constants.
//!
//! `c_forward` is the constant in front of the singular integral that makes
//! the operator's Fourier symbol exactly `|xi|^alpha`:
//!
//! ```text
//! C_{n,alpha} = 2^alpha Gamma((n + alpha)/2) / (pi^{n/2} |Gamma(-alpha/2)|)
//! ```
//!
//! `c_inverse` is the Riesz kernel constant `C_{n,-alpha}` of the inverse,
//! defined only when `dim > alpha`:
//!
//! ```text
//! C_{n,-alpha} = Gamma((n - alpha)/2) / (pi^{n/2} 2^alpha Gamma(alpha/2))
//! ```
//!
//! Both are validated against a quadrature oracle in the test suite; the
//! closed forms are what the runtime uses.

use crate::error::{FracError, Result};
use statrs::function::gamma::gamma;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FracParams {
    alpha: f64,
    dim: usize,
    c_forward: f64,
    c_inverse: Option<f64>,
}

impl FracParams {
    pub fn new(dim: usize, alpha: f64) -> Result<Self> {
        let c_forward = normalization_constant(dim, alpha)?;
        let c_inverse = if (dim as f64) > alpha {
            Some(riesz_constant(dim, alpha)?)
        } else {
            None
        };
        Ok(FracParams { alpha, dim, c_forward, c_inverse })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn c_forward(&self) -> f64 {
        self.c_forward
    }

    /// `None` when `dim <= alpha`: the Riesz potential diverges there.
    pub fn c_inverse(&self) -> Option<f64> {
        self.c_inverse
    }

    pub fn require_inverse(&self) -> Result<f64> {
        self.c_inverse.ok_or(FracError::RieszDivergent { dim: self.dim, alpha: self.alpha })
    }
}

fn check_order(dim: usize, alpha: f64) -> Result<()> {
    if dim != 1 && dim != 2 {
        return Err(FracError::InvalidGrid(format!("dim must be 1 or 2, got {dim}")));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(FracError::InvalidAlpha(alpha));
    }
    Ok(())
}

/// The symbol-normalized constant `C_{n,alpha}` of the forward operator.
pub fn normalization_constant(dim: usize, alpha: f64) -> Result<f64> {
    check_order(dim, alpha)?;
    let n = dim as f64;
    let num = 2f64.powf(alpha) * gamma((n + alpha) / 2.0);
    let den = std::f64::consts::PI.powf(n / 2.0) * gamma(-alpha / 2.0).abs();
    Ok(num / den)
}

/// The Riesz kernel constant `C_{n,-alpha}`; requires `dim > alpha`.
pub fn riesz_constant(dim: usize, alpha: f64) -> Result<f64> {
    check_order(dim, alpha)?;
    let n = dim as f64;
    if !(n > alpha) {
        return Err(FracError::RieszDivergent { dim, alpha });
    }
    let num = gamma((n - alpha) / 2.0);
    let den = std::f64::consts::PI.powf(n / 2.0) * 2f64.powf(alpha) * gamma(alpha / 2.0);
    Ok(num / den)
}
