//! Sampled fields on a grid, with the norms and integral diagnostics the
//! solvers report.
//!
//! Values are stored contiguously in node order (lexicographic by axis),
//! component-major within a node: `values[node * components + c]`. Every
//! public constructor validates finiteness; a `Field` never holds NaN or
//! infinity.

use crate::error::{FracError, Result};
use crate::grid::Grid;

#[derive(Clone, PartialEq, Debug)]
pub struct Field {
    grid: Grid,
    components: usize,
    values: Vec<f64>,
}

/// Compensated (Kahan) summation. The quadrature operators accumulate
/// thousands of same-sign terms spanning several orders of magnitude;
/// plain summation costs digits the identity checks cannot spare.
#[derive(Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

pub fn kahan_sum(it: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = KahanSum::default();
    for x in it {
        acc.add(x);
    }
    acc.value()
}

impl Field {
    pub fn zeros(grid: Grid, components: usize) -> Result<Self> {
        if components == 0 {
            return Err(FracError::InvalidConfig("components must be >= 1".into()));
        }
        let n = grid.node_count() * components;
        Ok(Field { grid, components, values: vec![0.0; n] })
    }

    pub fn constant(grid: Grid, value: f64, components: usize) -> Result<Self> {
        let mut f = Field::zeros(grid, components)?;
        f.values.fill(value);
        f.validate()?;
        Ok(f)
    }

    /// Sample a scalar function of position.
    pub fn from_fn(grid: Grid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let mut out = Field::zeros(grid, 1)?;
        for node in 0..out.grid.node_count() {
            let p = out.grid.node_coords(node);
            out.values[node] = f(&p[..out.grid.dim()]);
        }
        out.validate()?;
        Ok(out)
    }

    /// Sample a vector-valued function; `f(position, component)`.
    pub fn from_fn_vec(
        grid: Grid,
        components: usize,
        f: impl Fn(&[f64], usize) -> f64,
    ) -> Result<Self> {
        let mut out = Field::zeros(grid, components)?;
        for node in 0..out.grid.node_count() {
            let p = out.grid.node_coords(node);
            for c in 0..components {
                out.values[node * components + c] = f(&p[..out.grid.dim()], c);
            }
        }
        out.validate()?;
        Ok(out)
    }

    pub fn from_values(grid: Grid, components: usize, values: Vec<f64>) -> Result<Self> {
        if components == 0 || values.len() != grid.node_count() * components {
            return Err(FracError::GridMismatch);
        }
        let f = Field { grid, components, values };
        f.validate()?;
        Ok(f)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, node: usize, component: usize) -> f64 {
        self.values[node * self.components + component]
    }

    /// One component as a standalone scalar field.
    pub fn component(&self, c: usize) -> Field {
        let n = self.grid.node_count();
        let mut values = Vec::with_capacity(n);
        for node in 0..n {
            values.push(self.values[node * self.components + c]);
        }
        Field { grid: self.grid.clone(), components: 1, values }
    }

    /// Euclidean norm across components at one node.
    pub fn node_norm(&self, node: usize) -> f64 {
        if self.components == 1 {
            return self.values[node].abs();
        }
        let mut s = 0.0;
        for c in 0..self.components {
            let v = self.values[node * self.components + c];
            s += v * v;
        }
        s.sqrt()
    }

    /// Rebuild with transformed values; the result is re-validated.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Field> {
        let values = self.values.iter().map(|&v| f(v)).collect();
        Field::from_values(self.grid.clone(), self.components, values)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, v) in self.values.iter().enumerate() {
            if !v.is_finite() {
                return Err(FracError::NonFinite { node: i / self.components, step: 0 });
            }
        }
        Ok(())
    }

    pub fn same_layout(&self, other: &Field) -> bool {
        self.grid == other.grid && self.components == other.components
    }

    /// Sup over nodes and components.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Discrete `L^q` norm with the grid measure weight:
    /// `h^{n/q} (sum |f_i|^q)^{1/q}`, the sum running over every value.
    pub fn lq_norm(&self, q: f64) -> Result<f64> {
        if !(q >= 1.0) {
            return Err(FracError::InvalidNormIndex(q));
        }
        let h = self.grid.spacing();
        let n = self.grid.dim() as f64;
        let s = kahan_sum(self.values.iter().map(|v| v.abs().powf(q)));
        Ok(h.powf(n / q) * s.powf(1.0 / q))
    }

    /// Plain L2 inner product with the cell measure, `h^n sum f_i g_i`.
    pub fn inner(&self, other: &Field) -> Result<f64> {
        if !self.same_layout(other) {
            return Err(FracError::GridMismatch);
        }
        let s = kahan_sum(self.values.iter().zip(&other.values).map(|(a, b)| a * b));
        Ok(self.grid.cell_measure() * s)
    }
}

/// Finite-grid stand-ins for the two membership integrals the theory needs:
/// the weighted tail integral that defines the operator's natural function
/// class, and the Ginzburg-Landau energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailDiagnostic {
    /// Midpoint value of `\int |u(x)| / (1 + |x|^{n+alpha}) dx` over the box.
    pub l_alpha_integral: f64,
    /// Midpoint value of `\int (1 - |u|^2)^2 dx` over the box.
    pub gl_energy: f64,
}

pub fn tail_diagnostics(u: &Field, alpha: f64) -> Result<TailDiagnostic> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(FracError::InvalidAlpha(alpha));
    }
    let g = u.grid();
    let n = g.dim() as f64;
    let mut l_alpha = KahanSum::default();
    let mut energy = KahanSum::default();
    for node in 0..g.node_count() {
        let r = g.node_radius(node);
        let mag = u.node_norm(node);
        l_alpha.add(mag / (1.0 + r.powf(n + alpha)));
        let q = 1.0 - mag * mag;
        energy.add(q * q);
    }
    let w = g.cell_measure();
    Ok(TailDiagnostic {
        l_alpha_integral: w * l_alpha.value(),
        gl_energy: w * energy.value(),
    })
}
