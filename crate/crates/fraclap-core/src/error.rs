use crate::grid::Topology;
use thiserror::Error;

/// Errors produced by grid construction, operator assembly and the solvers.
#[derive(Debug, Error)]
pub enum FracError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("alpha must lie strictly inside (0, 2), got {0}")]
    InvalidAlpha(f64),

    #[error("operation requires a {expected:?} grid, got {actual:?}")]
    TopologyMismatch { expected: Topology, actual: Topology },

    #[error("fields live on different grids or component counts differ")]
    GridMismatch,

    #[error("non-finite value encountered at node {node} (step {step})")]
    NonFinite { node: usize, step: usize },

    #[error("norm index q must be >= 1, got {0}")]
    InvalidNormIndex(f64),

    #[error("Riesz potential diverges unless dim > alpha (dim = {dim}, alpha = {alpha})")]
    RieszDivergent { dim: usize, alpha: f64 },

    #[error("source must vanish on the outer quarter of the box, node {node} is nonzero")]
    SourceNotCompact { node: usize },

    #[error("cutoff scale {radius} does not fit: need half_extent >= 3 R, have {half_extent}")]
    InsufficientMargin { radius: f64, half_extent: f64 },

    #[error("ball radius {radius} unusable on this grid: {reason}")]
    BadRadius { radius: f64, reason: String },

    #[error("exterior data sampled too coarsely: gap {gap} exceeds grid spacing {spacing}")]
    ExteriorUndersampled { gap: f64, spacing: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("linear system is singular; the operator lost its M-matrix structure")]
    SingularSystem,

    #[error("linear solve residual {residual} exceeds tolerance {tolerance}")]
    SolveResidual { residual: f64, tolerance: f64 },

    #[error("monotonicity violated by {residual} (> {tolerance}); the discrete maximum principle is broken")]
    MonotonicityViolation { residual: f64, tolerance: f64 },

    #[error("solution leaves [{lo}, {hi}] by {excess}; the maximum principle is broken")]
    SolutionOutOfBounds { lo: f64, hi: f64, excess: f64 },

    #[error("comparison bound violated by {residual} (> {tolerance})")]
    ComparisonViolation { residual: f64, tolerance: f64 },

    #[error("field is not a certified steady state (residual {residual})")]
    NotSteady { residual: f64 },

    #[error("file format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FracError>;
