//! Riesz potentials: the inverse kernel `g_alpha`, Poisson solves by
//! convolution, and the compactly supported test-function potential used by
//! the Liouville argument.
//!
//! `V = g_alpha * k` inverts the operator, `A V = k`, up to the scheme's
//! consistency error. The convolution is a midpoint sum with the diagonal
//! cell replaced by the exact radial integral of the kernel over one cell.
//! Sources must be nonnegative and vanish on the outer quarter of the box so
//! finiteness and the decay checks mean something on a truncated domain.

use crate::error::{FracError, Result};
use crate::field::{Field, KahanSum};
use crate::grid::Grid;
use crate::operator::params::FracParams;
use crate::operator::quadrature::ExteriorData;
use rayon::prelude::*;

/// The kernel `g_alpha(x, y) = C_{n,-alpha} |x - y|^{alpha - n}`; requires
/// `dim > alpha`.
#[derive(Clone, Copy, Debug)]
pub struct RieszKernel {
    c_inverse: f64,
    alpha: f64,
    dim: usize,
}

impl RieszKernel {
    pub fn new(params: &FracParams) -> Result<Self> {
        Ok(RieszKernel {
            c_inverse: params.require_inverse()?,
            alpha: params.alpha(),
            dim: params.dim(),
        })
    }

    pub fn eval_dist(&self, dist: f64) -> f64 {
        self.c_inverse * dist.powf(self.alpha - self.dim as f64)
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut d2 = 0.0;
        for (a, b) in x.iter().zip(y) {
            d2 += (a - b) * (a - b);
        }
        self.eval_dist(d2.sqrt())
    }

    /// Exact integral of the kernel over one grid cell centered at the
    /// singularity, replacing the divergent midpoint value.
    pub fn diagonal_cell_integral(&self, h: f64) -> f64 {
        match self.dim {
            1 => self.c_inverse * 2.0 * (0.5 * h).powf(self.alpha) / self.alpha,
            _ => {
                // int over the square cell of |z|^{alpha-2} via the corner arc
                let a = self.alpha;
                let ang = simpson(|t| t.cos().powf(-a), 0.0, std::f64::consts::FRAC_PI_4, 64);
                self.c_inverse * 8.0 * (0.5 * h).powf(a) / a * ang
            }
        }
    }
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = KahanSum::default();
    acc.add(f(a) + f(b));
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(w * f(a + i as f64 * h));
    }
    acc.value() * h / 3.0
}

/// Reject sources that are negative anywhere or supported on the outer
/// quarter of the box (max-norm beyond 3/4 of the half extent).
fn validate_source(k: &Field) -> Result<()> {
    let g = k.grid();
    let cutoff = 0.75 * g.half_extent();
    for node in 0..g.node_count() {
        let v = k.values()[node];
        if v < 0.0 {
            return Err(FracError::InvalidConfig(format!(
                "source must be nonnegative, node {node} holds {v}"
            )));
        }
        if v != 0.0 && g.node_radius_max(node) > cutoff {
            return Err(FracError::SourceNotCompact { node });
        }
    }
    Ok(())
}

/// Convolve a compactly supported nonnegative source with the Riesz kernel:
/// the minimal nonnegative solution of `A V = k` sampled on the grid.
pub fn riesz_convolve(k: &Field, params: &FracParams) -> Result<Field> {
    if k.components() != 1 {
        return Err(FracError::GridMismatch);
    }
    if k.grid().dim() != params.dim() {
        return Err(FracError::GridMismatch);
    }
    let kernel = RieszKernel::new(params)?;
    validate_source(k)?;
    let g = k.grid();
    let n = g.node_count();
    let h = g.spacing();
    let measure = g.cell_measure();
    let diag = kernel.diagonal_cell_integral(h);
    let coords: Vec<[f64; 2]> = (0..n).map(|i| g.node_coords(i)).collect();
    let kv = k.values();
    let support: Vec<usize> = (0..n).filter(|&j| kv[j] != 0.0).collect();
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = coords[i];
            let mut acc = KahanSum::default();
            for &j in &support {
                if j == i {
                    acc.add(diag * kv[j]);
                } else {
                    let yj = coords[j];
                    let dx = xi[0] - yj[0];
                    let dy = xi[1] - yj[1];
                    acc.add(kernel.eval_dist((dx * dx + dy * dy).sqrt()) * measure * kv[j]);
                }
            }
            acc.value()
        })
        .collect();
    Field::from_values(g.clone(), 1, values)
}

/// The discrete potential continued off the grid: the same kernel sum
/// evaluated at arbitrary points. This is the natural exterior data when the
/// quadrature operator is applied to `riesz_convolve(k)`.
pub fn riesz_exterior_closure(
    k: &Field,
    params: &FracParams,
) -> Result<impl Fn(&[f64]) -> f64 + Send + Sync + 'static> {
    let kernel = RieszKernel::new(params)?;
    validate_source(k)?;
    let g = k.grid();
    let measure = g.cell_measure();
    let kv = k.values();
    let sources: Vec<([f64; 2], f64)> = (0..g.node_count())
        .filter(|&j| kv[j] != 0.0)
        .map(|j| (g.node_coords(j), kv[j] * measure))
        .collect();
    let dim = g.dim();
    Ok(move |p: &[f64]| {
        let x = [p[0], if dim > 1 { p[1] } else { 0.0 }];
        let mut acc = KahanSum::default();
        for (y, mass) in &sources {
            let dx = x[0] - y[0];
            let dy = x[1] - y[1];
            acc.add(kernel.eval_dist((dx * dx + dy * dy).sqrt()) * mass);
        }
        acc.value()
    })
}

/// Radially nonincreasing C^{1,1} cutoff: 1 on the unit ball, 0 outside
/// radius 2, smoothstep in r^2 in between, rescaled by `R`.
#[derive(Clone, Copy, Debug)]
pub struct CutoffFamily {
    scale: f64,
}

impl CutoffFamily {
    pub fn new(scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(FracError::InvalidConfig(format!("cutoff scale must be positive, got {scale}")));
        }
        Ok(CutoffFamily { scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Base profile: `xi(r) = 1 - smoothstep((r^2 - 1)/3)`. Continuous first
    /// derivative everywhere (it vanishes at r = 1 and r = 2), bounded second
    /// derivative.
    pub fn profile(r: f64) -> f64 {
        let t = ((r * r - 1.0) / 3.0).clamp(0.0, 1.0);
        1.0 - t * t * (3.0 - 2.0 * t)
    }

    pub fn eval_radius(&self, r: f64) -> f64 {
        Self::profile(r / self.scale)
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        let r2: f64 = p.iter().map(|v| v * v).sum();
        self.eval_radius(r2.sqrt())
    }

    pub fn sample(&self, grid: &Grid) -> Result<Field> {
        Field::from_fn(grid.clone(), |p| self.eval(p))
    }
}

/// Outcome of [`cutoff_potential`]: the potential `phi = g_alpha * xi_R`, its
/// empirical bound, and the decay of `phi(x) |x|^{n-alpha}` across the outer
/// shell of the box.
#[derive(Clone, Debug)]
pub struct CutoffPotential {
    pub phi: Field,
    pub cutoff: Field,
    pub scale: f64,
    /// `sup phi`, the constant in `0 <= phi <= C`.
    pub bound: f64,
    pub shell_ratio_min: f64,
    pub shell_ratio_max: f64,
}

impl CutoffPotential {
    /// Spread of `phi |x|^{n-alpha}` over the outer shell, relative to its
    /// midrange value.
    pub fn shell_fluctuation(&self) -> f64 {
        let mid = 0.5 * (self.shell_ratio_max + self.shell_ratio_min);
        if mid == 0.0 {
            return 0.0;
        }
        (self.shell_ratio_max - self.shell_ratio_min) / mid
    }
}

/// Potential of the rescaled cutoff. Requires the support `B_{2R}` to fit in
/// the grid with margin at least `R` (half_extent >= 3R), so the decay shell
/// is kernel-dominated.
pub fn cutoff_potential(scale: f64, params: &FracParams, grid: &Grid) -> Result<CutoffPotential> {
    if grid.half_extent() < 3.0 * scale {
        return Err(FracError::InsufficientMargin {
            radius: scale,
            half_extent: grid.half_extent(),
        });
    }
    let family = CutoffFamily::new(scale)?;
    let xi = family.sample(grid)?;
    let phi = riesz_convolve(&xi, params)?;
    let bound = phi.values().iter().fold(0.0f64, |m, v| m.max(*v));
    let shell_lo = 0.85 * grid.half_extent();
    let power = grid.dim() as f64 - params.alpha();
    let mut rmin = f64::INFINITY;
    let mut rmax = f64::NEG_INFINITY;
    for node in 0..grid.node_count() {
        let r = grid.node_radius(node);
        if r >= shell_lo {
            let ratio = phi.values()[node] * r.powf(power);
            rmin = rmin.min(ratio);
            rmax = rmax.max(ratio);
        }
    }
    Ok(CutoffPotential {
        phi,
        cutoff: xi,
        scale,
        bound,
        shell_ratio_min: rmin,
        shell_ratio_max: rmax,
    })
}

/// Exterior data for checking `A phi = xi_R`: the potential's own kernel sum
/// continued off the grid, sampled on `cells_per_side` exterior cells.
pub fn potential_exterior(
    k: &Field,
    params: &FracParams,
    cells_per_side: usize,
) -> Result<ExteriorData> {
    let closure = riesz_exterior_closure(k, params)?;
    Ok(ExteriorData::function(closure, cells_per_side, 0.0))
}
