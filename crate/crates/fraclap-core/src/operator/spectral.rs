//! Fourier-multiplier form of the operator on periodic grids.
//!
//! On the discrete torus the operator acts mode by mode: coefficient `k`
//! picks up the factor `|xi_k|^alpha`, where `xi_k = pi m / half_extent` is
//! the physical wavenumber of the signed integer mode `m`. The zero mode maps
//! to zero, so constants are annihilated exactly.

use crate::error::{FracError, Result};
use crate::field::Field;
use crate::grid::{Grid, Topology};
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub struct SpectralOperator {
    grid: Grid,
    alpha: f64,
    /// `|xi|^alpha` per node slot in FFT layout (flattened in 2-D).
    symbol: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

/// Signed integer mode for FFT bin `k` of `n` (n even).
fn signed_mode(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

impl SpectralOperator {
    pub fn new(grid: &Grid, alpha: f64) -> Result<Self> {
        if grid.topology() != Topology::Periodic {
            return Err(FracError::TopologyMismatch {
                expected: Topology::Periodic,
                actual: grid.topology(),
            });
        }
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(FracError::InvalidAlpha(alpha));
        }
        let n = grid.points_per_axis();
        let base = std::f64::consts::PI / grid.half_extent();
        let mut symbol = Vec::with_capacity(grid.node_count());
        match grid.dim() {
            1 => {
                for k in 0..n {
                    let xi = base * signed_mode(k, n) as f64;
                    symbol.push(xi.abs().powf(alpha));
                }
            }
            _ => {
                for kx in 0..n {
                    let xx = base * signed_mode(kx, n) as f64;
                    for ky in 0..n {
                        let yy = base * signed_mode(ky, n) as f64;
                        symbol.push((xx * xx + yy * yy).sqrt().powf(alpha));
                    }
                }
            }
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        Ok(SpectralOperator { grid: grid.clone(), alpha, symbol, fwd, inv })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn symbol(&self) -> &[f64] {
        &self.symbol
    }

    /// Unnormalized forward transform of one scalar component.
    pub fn forward(&self, real: &[f64], out: &mut Vec<Complex<f64>>) {
        out.clear();
        out.extend(real.iter().map(|&v| Complex::new(v, 0.0)));
        self.transform(out, true);
    }

    /// Inverse transform; divides by the node count and drops the imaginary
    /// part (machine-size for real inputs).
    pub fn inverse(&self, buf: &mut [Complex<f64>], out: &mut [f64]) {
        self.transform_slice(buf, false);
        let scale = 1.0 / self.grid.node_count() as f64;
        for (o, c) in out.iter_mut().zip(buf.iter()) {
            *o = c.re * scale;
        }
    }

    fn transform(&self, buf: &mut Vec<Complex<f64>>, forward: bool) {
        self.transform_slice(buf.as_mut_slice(), forward);
    }

    fn transform_slice(&self, buf: &mut [Complex<f64>], forward: bool) {
        let n = self.grid.points_per_axis();
        let fft = if forward { &self.fwd } else { &self.inv };
        match self.grid.dim() {
            1 => fft.process(buf),
            _ => {
                // rows (contiguous), then columns via transpose
                fft.process(buf);
                transpose_square(buf, n);
                fft.process(buf);
                transpose_square(buf, n);
            }
        }
    }

    /// Apply the multiplier `|xi|^alpha`, componentwise on vector fields.
    pub fn apply(&self, u: &Field) -> Result<Field> {
        if u.grid() != &self.grid {
            return Err(FracError::GridMismatch);
        }
        let nodes = self.grid.node_count();
        let comps = u.components();
        let mut values = vec![0.0; nodes * comps];
        let mut buf = Vec::with_capacity(nodes);
        let mut scratch = vec![0.0; nodes];
        let mut lane = vec![0.0; nodes];
        for c in 0..comps {
            for node in 0..nodes {
                lane[node] = u.value(node, c);
            }
            self.forward(&lane, &mut buf);
            for (b, m) in buf.iter_mut().zip(&self.symbol) {
                *b *= m;
            }
            self.inverse(&mut buf, &mut scratch);
            for node in 0..nodes {
                values[node * comps + c] = scratch[node];
            }
        }
        Field::from_values(self.grid.clone(), comps, values)
    }
}

fn transpose_square(buf: &mut [Complex<f64>], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}

/// One-shot multiplier application; builds the plan and discards it.
pub fn apply_spectral(u: &Field, alpha: f64) -> Result<Field> {
    SpectralOperator::new(u.grid(), alpha)?.apply(u)
}
