//! Singular-integral form of the operator on truncated grids.
//!
//! The action at a node splits into three pieces, all with nonnegative
//! weights so that the rows form an M-matrix and the discrete maximum
//! principle holds:
//!
//! * pair weights `w_ij = C h^n / |x_i - x_j|^{n+alpha}` from the midpoint
//!   rule over the other nodes' cells, symmetrized principal value over the
//!   singular self-cell folded into the nearest axis neighbors via a centered
//!   second difference (an `O(h^{2-alpha})` consistent scheme);
//! * exterior data cells, when the data is a sampled function: the same
//!   midpoint weights against prescribed values on the lattice continuation
//!   of the grid;
//! * the unsampled remainder, integrated exactly (1-D antiderivative of
//!   `r^{-1-alpha}`; 2-D radial reduction plus angular quadrature), never by
//!   naive truncation.
//!
//! Application is in difference form, `sum_j w_ij (u_i - u_j) + ...`, which
//! annihilates constants with matching exterior data identically and keeps
//! the carre-du-champ decomposition exact at the weight level.

use crate::error::{FracError, Result};
use crate::field::{Field, KahanSum};
use crate::grid::{Grid, Topology};
use crate::operator::params::normalization_constant;
use rayon::prelude::*;
use std::sync::Arc;

type ExtFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Prescribed data on the grid's exterior.
#[derive(Clone)]
pub enum ExteriorData {
    Zero,
    Constant(f64),
    /// Radially sampled profile, linearly interpolated; `far_value` beyond
    /// the sampled annulus. Samples must resolve the grid spacing.
    Radial {
        radii: Vec<f64>,
        values: Vec<f64>,
        cells_per_side: usize,
        far_value: f64,
    },
    /// Arbitrary function sampled on `cells_per_side` exterior lattice cells
    /// beyond each box face; treated as `far_value` past the sampled ring.
    Function {
        g: ExtFn,
        cells_per_side: usize,
        far_value: f64,
    },
}

impl ExteriorData {
    pub fn function(
        g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        cells_per_side: usize,
        far_value: f64,
    ) -> Self {
        ExteriorData::Function { g: Arc::new(g), cells_per_side, far_value }
    }
}

/// Axis-aligned box, the cell union of a lattice patch.
#[derive(Clone, Copy, Debug)]
struct BoxEdges {
    lo: [f64; 2],
    hi: [f64; 2],
}

impl BoxEdges {
    fn cell_union(grid: &Grid) -> Self {
        let (l, h) = (grid.half_extent(), grid.spacing());
        let lo = -l - 0.5 * h;
        let hi = l - 0.5 * h;
        BoxEdges { lo: [lo, lo], hi: [hi, hi] }
    }

    fn extended(grid: &Grid, cells_per_side: usize) -> Self {
        let (l, h) = (grid.half_extent(), grid.spacing());
        let m = cells_per_side as f64;
        let lo = -l - (m + 0.5) * h;
        let hi = l + (m - 0.5) * h;
        BoxEdges { lo: [lo, lo], hi: [hi, hi] }
    }
}

/// Exact integral of `C |x - y|^{-n-alpha}` over the complement of `edges`,
/// for `x` strictly inside.
fn complement_weight(dim: usize, c: f64, alpha: f64, x: [f64; 2], edges: BoxEdges) -> f64 {
    match dim {
        1 => {
            let right = (edges.hi[0] - x[0]).powf(-alpha);
            let left = (x[0] - edges.lo[0]).powf(-alpha);
            c * (right + left) / alpha
        }
        _ => {
            // radial reduction: (1/alpha) int rho(theta)^{-alpha} dtheta,
            // split at the corner directions where rho has kinks
            let rho = |theta: f64| -> f64 {
                let (s, co) = theta.sin_cos();
                let mut t = f64::INFINITY;
                if co > 0.0 {
                    t = t.min((edges.hi[0] - x[0]) / co);
                } else if co < 0.0 {
                    t = t.min((edges.lo[0] - x[0]) / co);
                }
                if s > 0.0 {
                    t = t.min((edges.hi[1] - x[1]) / s);
                } else if s < 0.0 {
                    t = t.min((edges.lo[1] - x[1]) / s);
                }
                t
            };
            let corners = [
                (edges.hi[0], edges.hi[1]),
                (edges.lo[0], edges.hi[1]),
                (edges.lo[0], edges.lo[1]),
                (edges.hi[0], edges.lo[1]),
            ];
            let mut angles: Vec<f64> =
                corners.iter().map(|&(cx, cy)| (cy - x[1]).atan2(cx - x[0])).collect();
            angles.sort_by(f64::total_cmp);
            let first = angles[0];
            angles.push(first + std::f64::consts::TAU);
            let mut total = KahanSum::default();
            for pair in angles.windows(2) {
                total.add(simpson(|t| rho(t).powf(-alpha), pair[0], pair[1], 256));
            }
            c * total.value() / alpha
        }
    }
}

/// Composite Simpson rule with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    debug_assert!(n % 2 == 0);
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / n as f64;
    let mut acc = KahanSum::default();
    acc.add(f(a) + f(b));
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc.add(w * f(a + i as f64 * h));
    }
    acc.value() * h / 3.0
}

/// Weight folding the singular self-cell onto the nearest axis neighbors.
fn selfcell_weight(dim: usize, c: f64, alpha: f64, h: f64) -> f64 {
    match dim {
        1 => c * (0.5 * h).powf(2.0 - alpha) / ((2.0 - alpha) * h * h),
        _ => {
            // int over the square cell of |z|^{-alpha}
            let ang = simpson(|t| t.cos().powf(alpha - 2.0), 0.0, std::f64::consts::FRAC_PI_4, 64);
            let cell = 8.0 * (0.5 * h).powf(2.0 - alpha) / (2.0 - alpha) * ang;
            c * cell / (4.0 * h * h)
        }
    }
}

#[derive(Debug)]
struct ExtGeometry {
    /// Midpoints of the sampled exterior cells.
    cells: Vec<[f64; 2]>,
    /// Prescribed values at those cells.
    cell_values: Vec<f64>,
    /// Box containing grid plus sampled cells; the remainder is integrated exactly.
    big_box: BoxEdges,
    far_value: f64,
    /// Per boundary node: prescribed value at the outside self-cell neighbor.
    selfcell_ext: Vec<(usize, f64)>,
}

fn build_ext_geometry(grid: &Grid, exterior: &ExteriorData) -> Result<ExtGeometry> {
    let n = grid.points_per_axis();
    let h = grid.spacing();
    let eval: Option<ExtFn> = match exterior {
        ExteriorData::Zero | ExteriorData::Constant(_) => None,
        ExteriorData::Function { g, .. } => Some(g.clone()),
        ExteriorData::Radial { radii, values, far_value, .. } => {
            if radii.len() < 2 || radii.len() != values.len() {
                return Err(FracError::InvalidConfig(
                    "radial exterior needs matching radii/values with >= 2 samples".into(),
                ));
            }
            let mut gap = radii[0].max(0.0);
            for w in radii.windows(2) {
                if w[1] <= w[0] {
                    return Err(FracError::InvalidConfig(
                        "radial exterior radii must be strictly increasing".into(),
                    ));
                }
                gap = gap.max(w[1] - w[0]);
            }
            if gap > h {
                return Err(FracError::ExteriorUndersampled { gap, spacing: h });
            }
            let (radii, values, far) = (radii.clone(), values.clone(), *far_value);
            Some(Arc::new(move |p: &[f64]| {
                let r = p.iter().map(|v| v * v).sum::<f64>().sqrt();
                match radii.binary_search_by(|probe| probe.total_cmp(&r)) {
                    Ok(i) => values[i],
                    Err(0) => values[0],
                    Err(i) if i == radii.len() => far,
                    Err(i) => {
                        let t = (r - radii[i - 1]) / (radii[i] - radii[i - 1]);
                        values[i - 1] * (1.0 - t) + values[i] * t
                    }
                }
            }))
        }
    };
    let (cells_per_side, far_value) = match exterior {
        ExteriorData::Zero => (0usize, 0.0),
        ExteriorData::Constant(c) => (0usize, *c),
        ExteriorData::Radial { cells_per_side, far_value, .. }
        | ExteriorData::Function { cells_per_side, far_value, .. } => {
            if *cells_per_side == 0 {
                return Err(FracError::InvalidConfig(
                    "sampled exterior data needs cells_per_side >= 1".into(),
                ));
            }
            (*cells_per_side, *far_value)
        }
    };

    let mut cells = Vec::new();
    let mut cell_values = Vec::new();
    let m = cells_per_side as i64;
    let nn = n as i64;
    let coord = |j: i64| -> f64 { -grid.half_extent() + j as f64 * h };
    if let Some(g) = &eval {
        match grid.dim() {
            1 => {
                for j in (-m..0).chain(nn..nn + m) {
                    let p = [coord(j), 0.0];
                    cells.push(p);
                    cell_values.push(g(&p[..1]));
                }
            }
            _ => {
                for jx in -m..nn + m {
                    for jy in -m..nn + m {
                        if (0..nn).contains(&jx) && (0..nn).contains(&jy) {
                            continue;
                        }
                        let p = [coord(jx), coord(jy)];
                        cells.push(p);
                        cell_values.push(g(&p));
                    }
                }
            }
        }
    }

    let big_box = if cells.is_empty() {
        BoxEdges::cell_union(grid)
    } else {
        BoxEdges::extended(grid, cells_per_side)
    };

    // outside neighbors used by the self-cell second difference
    let mut selfcell_ext = Vec::new();
    let eval_at = |p: [f64; 2]| -> f64 {
        match &eval {
            Some(g) => g(&p[..grid.dim()]),
            None => far_value,
        }
    };
    for node in 0..grid.node_count() {
        let ij = grid.node_axes(node);
        let p = grid.node_coords(node);
        for axis in 0..grid.dim() {
            if ij[axis] == 0 {
                let mut q = p;
                q[axis] -= h;
                selfcell_ext.push((node, eval_at(q)));
            }
            if ij[axis] == n - 1 {
                let mut q = p;
                q[axis] += h;
                selfcell_ext.push((node, eval_at(q)));
            }
        }
    }

    Ok(ExtGeometry { cells, cell_values, big_box, far_value, selfcell_ext })
}

#[derive(Debug)]
pub struct OperatorMatrix {
    grid: Grid,
    alpha: f64,
    c_forward: f64,
    selfcell: f64,
    /// Dense symmetric pair weights, zero diagonal, row-major.
    weights: Vec<f64>,
    /// Total exterior coefficient of `u_i` per node.
    tail: Vec<f64>,
    /// Far-region part of `tail` (equals `tail` without sampled cells).
    beyond: Vec<f64>,
    ext: ExtGeometry,
    zero_exterior: bool,
}

impl OperatorMatrix {
    /// Assemble the dense operator for a truncated grid with the given
    /// exterior data.
    pub fn build(grid: &Grid, alpha: f64, exterior: ExteriorData) -> Result<Self> {
        if grid.topology() != Topology::Truncated {
            return Err(FracError::TopologyMismatch {
                expected: Topology::Truncated,
                actual: grid.topology(),
            });
        }
        let c = normalization_constant(grid.dim(), alpha)?;
        let n = grid.node_count();
        let h = grid.spacing();
        let dim = grid.dim();
        let measure = grid.cell_measure();
        let exponent = -(dim as f64 + alpha);
        let s = selfcell_weight(dim, c, alpha, h);
        let zero_exterior = matches!(exterior, ExteriorData::Zero);

        let coords: Vec<[f64; 2]> = (0..n).map(|i| grid.node_coords(i)).collect();
        let axes: Vec<[usize; 2]> = (0..n).map(|i| grid.node_axes(i)).collect();

        let mut weights = vec![0.0; n * n];
        weights
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(i, row)| {
                let pi = coords[i];
                let ai = axes[i];
                for (j, w) in row.iter_mut().enumerate() {
                    if i == j {
                        continue;
                    }
                    let pj = coords[j];
                    let dx = pi[0] - pj[0];
                    let dy = pi[1] - pj[1];
                    let dist = (dx * dx + dy * dy).sqrt();
                    let mut val = c * measure * dist.powf(exponent);
                    let aj = axes[j];
                    let manhattan =
                        ai[0].abs_diff(aj[0]) + ai[1].abs_diff(aj[1]);
                    if manhattan == 1 {
                        val += s;
                    }
                    *w = val;
                }
            });

        let ext = build_ext_geometry(grid, &exterior)?;
        let cell_box = BoxEdges::cell_union(grid);
        let (tail, beyond): (Vec<f64>, Vec<f64>) = (0..n)
            .into_par_iter()
            .map(|i| {
                let x = coords[i];
                if ext.cells.is_empty() {
                    let t = complement_weight(dim, c, alpha, x, cell_box);
                    (t, t)
                } else {
                    let far = complement_weight(dim, c, alpha, x, ext.big_box);
                    let mut acc = KahanSum::default();
                    for cell in &ext.cells {
                        let dx = x[0] - cell[0];
                        let dy = x[1] - cell[1];
                        acc.add(c * measure * (dx * dx + dy * dy).sqrt().powf(exponent));
                    }
                    (acc.value() + far, far)
                }
            })
            .unzip();

        Ok(OperatorMatrix {
            grid: grid.clone(),
            alpha,
            c_forward: c,
            selfcell: s,
            weights,
            tail,
            beyond,
            ext,
            zero_exterior,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn c_forward(&self) -> f64 {
        self.c_forward
    }

    pub fn node_count(&self) -> usize {
        self.grid.node_count()
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.node_count() + j]
    }

    pub fn weights_row(&self, i: usize) -> &[f64] {
        let n = self.node_count();
        &self.weights[i * n..(i + 1) * n]
    }

    pub fn tail(&self) -> &[f64] {
        &self.tail
    }

    pub fn has_zero_exterior(&self) -> bool {
        self.zero_exterior
    }

    /// Diagonal `d_i = sum_j w_ij + tail_i` (plus boundary self-cell weights).
    pub fn diagonal(&self) -> Vec<f64> {
        let n = self.node_count();
        let mut d: Vec<f64> = (0..n)
            .map(|i| {
                let mut acc = KahanSum::default();
                for &w in self.weights_row(i) {
                    acc.add(w);
                }
                acc.add(self.tail[i]);
                acc.value()
            })
            .collect();
        for &(i, _) in &self.ext.selfcell_ext {
            d[i] += self.selfcell;
        }
        d
    }

    /// Affine exterior contribution `b_i(g)`, so `(Au)_i = d_i u_i - sum w_ij u_j - b_i`.
    pub fn exterior_load(&self) -> Vec<f64> {
        self.exterior_load_mapped(|v| v)
    }

    /// `b_i` with the exterior data passed through `map` (used to apply the
    /// operator to pointwise transforms such as `u^2` or `u_+`).
    pub fn exterior_load_mapped(&self, map: impl Fn(f64) -> f64 + Sync) -> Vec<f64> {
        let n = self.node_count();
        let dim = self.grid.dim();
        let c = self.c_forward;
        let alpha = self.alpha;
        let measure = self.grid.cell_measure();
        let exponent = -(dim as f64 + alpha);
        let far = map(self.ext.far_value);
        let mut load: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let x = self.grid.node_coords(i);
                let mut acc = KahanSum::default();
                for (cell, &gv) in self.ext.cells.iter().zip(&self.ext.cell_values) {
                    let dx = x[0] - cell[0];
                    let dy = x[1] - cell[1];
                    let w = c * measure * (dx * dx + dy * dy).sqrt().powf(exponent);
                    acc.add(w * map(gv));
                }
                acc.add(self.beyond[i] * far);
                acc.value()
            })
            .collect();
        for &(i, gv) in &self.ext.selfcell_ext {
            load[i] += self.selfcell * map(gv);
        }
        load
    }

    /// Apply in difference form to raw scalar values, mapping the exterior
    /// data through `map`.
    pub fn apply_values(&self, v: &[f64], map: impl Fn(f64) -> f64 + Sync) -> Vec<f64> {
        let n = self.node_count();
        assert_eq!(v.len(), n, "value slice does not match the grid");
        let dim = self.grid.dim();
        let c = self.c_forward;
        let alpha = self.alpha;
        let measure = self.grid.cell_measure();
        let exponent = -(dim as f64 + alpha);
        let far = map(self.ext.far_value);
        let mut out: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let vi = v[i];
                let mut acc = KahanSum::default();
                for (j, &w) in self.weights_row(i).iter().enumerate() {
                    if w != 0.0 {
                        acc.add(w * (vi - v[j]));
                    }
                }
                let x = self.grid.node_coords(i);
                for (cell, &gv) in self.ext.cells.iter().zip(&self.ext.cell_values) {
                    let dx = x[0] - cell[0];
                    let dy = x[1] - cell[1];
                    let w = c * measure * (dx * dx + dy * dy).sqrt().powf(exponent);
                    acc.add(w * (vi - map(gv)));
                }
                acc.add(self.beyond[i] * (vi - far));
                acc.value()
            })
            .collect();
        for &(i, gv) in &self.ext.selfcell_ext {
            out[i] += self.selfcell * (v[i] - map(gv));
        }
        out
    }

    /// Apply to a field, componentwise on vector fields (the exterior data is
    /// shared across components).
    pub fn apply(&self, u: &Field) -> Result<Field> {
        if u.grid() != &self.grid {
            return Err(FracError::GridMismatch);
        }
        let comps = u.components();
        if comps == 1 {
            let out = self.apply_values(u.values(), |v| v);
            return Field::from_values(self.grid.clone(), 1, out);
        }
        let n = self.node_count();
        let mut values = vec![0.0; n * comps];
        for c in 0..comps {
            let lane: Vec<f64> = (0..n).map(|node| u.value(node, c)).collect();
            let out = self.apply_values(&lane, |v| v);
            for node in 0..n {
                values[node * comps + c] = out[node];
            }
        }
        Field::from_values(self.grid.clone(), comps, values)
    }

    /// Carre du champ `Gamma(u)_i = sum_j w_ij (u_i - u_j)^2` plus the
    /// matching exterior terms; nonnegative at every node by construction,
    /// and exactly the defect in `A(u^2) = 2 u A(u) - Gamma(u)`.
    pub fn carre_du_champ(&self, u: &Field) -> Result<Field> {
        if u.grid() != &self.grid || u.components() != 1 {
            return Err(FracError::GridMismatch);
        }
        let v = u.values();
        let n = self.node_count();
        let dim = self.grid.dim();
        let c = self.c_forward;
        let alpha = self.alpha;
        let measure = self.grid.cell_measure();
        let exponent = -(dim as f64 + alpha);
        let far = self.ext.far_value;
        let mut out: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let vi = v[i];
                let mut acc = KahanSum::default();
                for (j, &w) in self.weights_row(i).iter().enumerate() {
                    if w != 0.0 {
                        let d = vi - v[j];
                        acc.add(w * d * d);
                    }
                }
                let x = self.grid.node_coords(i);
                for (cell, &gv) in self.ext.cells.iter().zip(&self.ext.cell_values) {
                    let dx = x[0] - cell[0];
                    let dy = x[1] - cell[1];
                    let w = c * measure * (dx * dx + dy * dy).sqrt().powf(exponent);
                    let d = vi - gv;
                    acc.add(w * d * d);
                }
                let d = vi - far;
                acc.add(self.beyond[i] * d * d);
                acc.value()
            })
            .collect();
        for &(i, gv) in &self.ext.selfcell_ext {
            let d = v[i] - gv;
            out[i] += self.selfcell * d * d;
        }
        Field::from_values(self.grid.clone(), 1, out)
    }

    /// Debug dump: magic, dim, points_per_axis, alpha, half_extent, then
    /// weights row-major, tail, diagonal, all little-endian f64.
    pub fn dump(&self, mut w: impl std::io::Write) -> Result<()> {
        w.write_all(crate::io::MATRIX_MAGIC)?;
        w.write_all(&(self.grid.dim() as u32).to_le_bytes())?;
        w.write_all(&(self.grid.points_per_axis() as u32).to_le_bytes())?;
        w.write_all(&self.alpha.to_le_bytes())?;
        w.write_all(&self.grid.half_extent().to_le_bytes())?;
        for v in &self.weights {
            w.write_all(&v.to_le_bytes())?;
        }
        for v in &self.tail {
            w.write_all(&v.to_le_bytes())?;
        }
        for v in self.diagonal() {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }
}

/// Single-row action of the quadrature operator, without assembling the
/// matrix. Same weights as [`OperatorMatrix::build`]; intended for large
/// grids where only a few nodes matter.
pub fn apply_quadrature_at(
    grid: &Grid,
    alpha: f64,
    exterior: &ExteriorData,
    u: &Field,
    node: usize,
) -> Result<f64> {
    if grid.topology() != Topology::Truncated {
        return Err(FracError::TopologyMismatch {
            expected: Topology::Truncated,
            actual: grid.topology(),
        });
    }
    if u.grid() != grid || u.components() != 1 {
        return Err(FracError::GridMismatch);
    }
    let c = normalization_constant(grid.dim(), alpha)?;
    let dim = grid.dim();
    let h = grid.spacing();
    let n = grid.points_per_axis();
    let measure = grid.cell_measure();
    let exponent = -(dim as f64 + alpha);
    let s = selfcell_weight(dim, c, alpha, h);
    let v = u.values();
    let vi = v[node];
    let pi = grid.node_coords(node);
    let ai = grid.node_axes(node);

    let chunk = 1usize.max(grid.node_count() / rayon::current_num_threads().max(1) / 4);
    let pair_sum: f64 = (0..grid.node_count())
        .into_par_iter()
        .with_min_len(chunk)
        .fold(KahanSum::default, |mut acc, j| {
            if j != node {
                let pj = grid.node_coords(j);
                let dx = pi[0] - pj[0];
                let dy = pi[1] - pj[1];
                let mut w = c * measure * (dx * dx + dy * dy).sqrt().powf(exponent);
                let aj = grid.node_axes(j);
                if ai[0].abs_diff(aj[0]) + ai[1].abs_diff(aj[1]) == 1 {
                    w += s;
                }
                acc.add(w * (vi - v[j]));
            }
            acc
        })
        .map(|acc| acc.value())
        .sum();

    let ext = build_ext_geometry(grid, exterior)?;
    let mut acc = KahanSum::default();
    acc.add(pair_sum);
    for (cell, &gv) in ext.cells.iter().zip(&ext.cell_values) {
        let dx = pi[0] - cell[0];
        let dy = pi[1] - cell[1];
        let w = c * measure * (dx * dx + dy * dy).sqrt().powf(exponent);
        acc.add(w * (vi - gv));
    }
    let big_box = if ext.cells.is_empty() { BoxEdges::cell_union(grid) } else { ext.big_box };
    acc.add(complement_weight(dim, c, alpha, pi, big_box) * (vi - ext.far_value));
    for &(i, gv) in &ext.selfcell_ext {
        if i == node {
            acc.add(s * (vi - gv));
        }
    }
    // boundary self-cell neighbors of `node` that lie inside the grid are
    // already in the pair sum; nothing else to add
    let _ = n;
    Ok(acc.value())
}
