//! Exterior-value Dirichlet solves on balls and the monotone exhaustion
//! limit for the linear equation `A u + k u = 0`.
//!
//! Nodes strictly inside `B_R(0)` are unknowns; every other node, grid or
//! exterior, carries the prescribed exterior value. The reduced system
//! `(diag(d) + diag(k) - W) u = b` inherits the M-matrix structure, so the
//! solves obey the maximum principle, shrink pointwise as the radius grows,
//! and the limit compares against the Riesz potential of `k`.

use crate::error::{FracError, Result};
use crate::field::Field;
use crate::grid::{Grid, Topology};
use crate::operator::params::FracParams;
use crate::operator::quadrature::{ExteriorData, OperatorMatrix};
use crate::potential::riesz_convolve;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use std::io::Write;

pub const MONOTONICITY_TOLERANCE: f64 = 1e-10;
pub const COMPARISON_TOLERANCE: f64 = 1e-8;
pub const BOUNDS_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct ExhaustionConfig {
    /// Strictly increasing ball radii; `2 R_last` must fit in the box.
    pub radii: Vec<f64>,
    /// Nonnegative, nontrivial, compactly supported absorption coefficient.
    pub k: Field,
    pub params: FracParams,
    /// Relative residual bound for each direct solve.
    pub solve_tolerance: f64,
}

impl ExhaustionConfig {
    pub fn new(radii: Vec<f64>, k: Field, params: FracParams) -> Self {
        ExhaustionConfig { radii, k, params, solve_tolerance: 1e-12 }
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.k.grid();
        if grid.topology() != Topology::Truncated {
            return Err(FracError::TopologyMismatch {
                expected: Topology::Truncated,
                actual: grid.topology(),
            });
        }
        if self.radii.is_empty() {
            return Err(FracError::InvalidConfig("need at least one radius".into()));
        }
        for w in self.radii.windows(2) {
            if w[1] <= w[0] {
                return Err(FracError::InvalidConfig(format!(
                    "radii must increase strictly, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let last = *self.radii.last().unwrap();
        if 2.0 * last > grid.half_extent() {
            return Err(FracError::BadRadius {
                radius: last,
                reason: format!(
                    "2 R must fit inside the box (half_extent {})",
                    grid.half_extent()
                ),
            });
        }
        for &r in &self.radii {
            check_radius(grid, r)?;
        }
        let kv = self.k.values();
        if kv.iter().any(|v| *v < 0.0) {
            return Err(FracError::InvalidConfig("k must be nonnegative".into()));
        }
        // k identically zero is degenerate (every solve returns the exterior
        // value) but well defined, so it is allowed through
        if !(self.solve_tolerance > 0.0) {
            return Err(FracError::InvalidConfig("solve_tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Generic radii must not hit node distances exactly: membership in the ball
/// is a strict inequality and ties would make it arbitrary.
fn check_radius(grid: &Grid, radius: f64) -> Result<()> {
    if !(radius > 0.0) || radius >= grid.half_extent() {
        return Err(FracError::BadRadius {
            radius,
            reason: format!("must lie in (0, half_extent = {})", grid.half_extent()),
        });
    }
    let tie = 1e-9 * grid.spacing();
    for node in 0..grid.node_count() {
        if (grid.node_radius(node) - radius).abs() < tie {
            return Err(FracError::BadRadius {
                radius,
                reason: format!("node {node} sits on the sphere (within {tie:.1e})"),
            });
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ExhaustionResult {
    pub radii: Vec<f64>,
    pub solutions: Vec<Field>,
    /// Final iterate, standing in for the monotone limit.
    pub limit: Field,
    /// `max |u_J - u_{J-1}|`, the one-sided error bound on the limit.
    pub cauchy_gap: f64,
    pub potential: Field,
    /// Worst positive part of `u_{j+1} - u_j` over nodes and consecutive solves.
    pub monotonicity_residual: f64,
    /// Worst positive part of `1 - U - V`.
    pub comparison_residual: f64,
    /// `sup U`; positive means the limit is nontrivial.
    pub nontriviality: f64,
    pub solve_residuals: Vec<f64>,
    /// Per-radius worst increase against the previous solve (0 for the first).
    pub monotonicity_gaps: Vec<f64>,
}

impl ExhaustionResult {
    /// Column-text report: one row per radius, then the two summary lines.
    pub fn write_report(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "# R sup_u monotonicity_gap solve_residual")?;
        for (j, r) in self.radii.iter().enumerate() {
            writeln!(
                w,
                "{:e} {:e} {:e} {:e}",
                r,
                self.solutions[j].sup_norm(),
                self.monotonicity_gaps[j],
                self.solve_residuals[j],
            )?;
        }
        writeln!(w, "comparison_residual {:e}", self.comparison_residual)?;
        writeln!(w, "sup_U {:e}", self.nontriviality)?;
        Ok(())
    }
}

/// Solve `A u + k u = 0` in `B_R` with `u = exterior_value` everywhere else.
/// Builds the operator matrix internally; use [`run_exhaustion`] to share one
/// matrix across radii.
pub fn solve_dirichlet_ball(
    k: &Field,
    radius: f64,
    params: &FracParams,
    exterior_value: f64,
) -> Result<Field> {
    let grid = k.grid().clone();
    check_radius(&grid, radius)?;
    let a = OperatorMatrix::build(&grid, params.alpha(), ExteriorData::Constant(exterior_value))?;
    let (u, _residual) = solve_ball_reduced(&a, k, radius, exterior_value, 1e-12)?;
    Ok(u)
}

/// The reduced dense solve against an already assembled matrix whose exterior
/// data is the constant `exterior_value`.
pub fn solve_ball_reduced(
    a: &OperatorMatrix,
    k: &Field,
    radius: f64,
    exterior_value: f64,
    tolerance: f64,
) -> Result<(Field, f64)> {
    if k.grid() != a.grid() || k.components() != 1 {
        return Err(FracError::GridMismatch);
    }
    if !(exterior_value >= 0.0) {
        return Err(FracError::InvalidConfig(format!(
            "exterior value must be nonnegative, got {exterior_value}"
        )));
    }
    let grid = a.grid();
    let n = grid.node_count();
    let inside: Vec<bool> = (0..n).map(|i| grid.node_radius(i) < radius).collect();
    let unknowns: Vec<usize> = (0..n).filter(|&i| inside[i]).collect();
    if unknowns.is_empty() {
        return Err(FracError::BadRadius {
            radius,
            reason: "ball contains no grid nodes".into(),
        });
    }
    let m = unknowns.len();
    let diag = a.diagonal();
    let load = a.exterior_load();
    let kv = k.values();

    let mut mat = DMatrix::zeros(m, m);
    let mut rhs = DVector::zeros(m);
    for (p, &i) in unknowns.iter().enumerate() {
        let row = a.weights_row(i);
        for (q, &j) in unknowns.iter().enumerate() {
            mat[(p, q)] = if p == q { diag[i] + kv[i] } else { -row[j] };
        }
        // known grid nodes outside the ball carry the exterior value
        let outside: f64 =
            row.iter().enumerate().filter(|(j, _)| !inside[*j]).map(|(_, &w)| w).sum();
        rhs[p] = load[i] + outside * exterior_value;
    }

    let lu = mat.clone().lu();
    let sol = lu.solve(&rhs).ok_or(FracError::SingularSystem)?;

    let residual_vec = &mat * &sol - &rhs;
    let scale = rhs.amax().max(1e-300);
    let residual = residual_vec.amax() / scale;
    if residual > tolerance {
        return Err(FracError::SolveResidual { residual, tolerance });
    }

    let mut values = vec![exterior_value; n];
    for (p, &i) in unknowns.iter().enumerate() {
        values[i] = sol[p];
    }

    // maximum principle: the solve must stay inside [0, exterior_value]
    let hi = exterior_value;
    for v in &values {
        if *v < -BOUNDS_TOLERANCE || *v > hi + BOUNDS_TOLERANCE {
            let excess = (-*v).max(*v - hi);
            return Err(FracError::SolutionOutOfBounds { lo: 0.0, hi, excess });
        }
    }

    Ok((Field::from_values(grid.clone(), 1, values)?, residual))
}

/// Run the full ball exhaustion: solve at every radius, verify monotone
/// non-increase, compare the limit against the Riesz potential of `k`, and
/// report nontriviality.
pub fn run_exhaustion(cfg: &ExhaustionConfig) -> Result<ExhaustionResult> {
    cfg.validate()?;
    let grid = cfg.k.grid().clone();
    let a = OperatorMatrix::build(&grid, cfg.params.alpha(), ExteriorData::Constant(1.0))?;

    let solves: Vec<Result<(Field, f64)>> = cfg
        .radii
        .par_iter()
        .map(|&r| solve_ball_reduced(&a, &cfg.k, r, 1.0, cfg.solve_tolerance))
        .collect();
    let mut solutions = Vec::with_capacity(cfg.radii.len());
    let mut solve_residuals = Vec::with_capacity(cfg.radii.len());
    for s in solves {
        let (u, res) = s?;
        solutions.push(u);
        solve_residuals.push(res);
    }

    let mut monotonicity_gaps = vec![0.0];
    let mut monotonicity_residual = 0.0f64;
    for j in 1..solutions.len() {
        let prev = solutions[j - 1].values();
        let next = solutions[j].values();
        let gap = prev
            .iter()
            .zip(next)
            .fold(0.0f64, |m, (p, q)| m.max(q - p));
        monotonicity_gaps.push(gap.max(0.0));
        monotonicity_residual = monotonicity_residual.max(gap);
    }
    monotonicity_residual = monotonicity_residual.max(0.0);
    if monotonicity_residual > MONOTONICITY_TOLERANCE {
        return Err(FracError::MonotonicityViolation {
            residual: monotonicity_residual,
            tolerance: MONOTONICITY_TOLERANCE,
        });
    }

    let limit = solutions.last().unwrap().clone();
    let cauchy_gap = if solutions.len() >= 2 {
        let prev = solutions[solutions.len() - 2].values();
        limit
            .values()
            .iter()
            .zip(prev)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    } else {
        f64::NAN
    };

    let potential = riesz_convolve(&cfg.k, &cfg.params)?;
    let comparison_residual = limit
        .values()
        .iter()
        .zip(potential.values())
        .fold(0.0f64, |m, (u, v)| m.max(1.0 - u - v));
    let comparison_residual = comparison_residual.max(0.0);
    if comparison_residual > COMPARISON_TOLERANCE {
        return Err(FracError::ComparisonViolation {
            residual: comparison_residual,
            tolerance: COMPARISON_TOLERANCE,
        });
    }

    let nontriviality = limit.sup_norm();

    Ok(ExhaustionResult {
        radii: cfg.radii.clone(),
        solutions,
        limit,
        cauchy_gap,
        potential,
        monotonicity_residual,
        comparison_residual,
        nontriviality,
        solve_residuals,
        monotonicity_gaps,
    })
}
