//! Shared input builders for the operator benchmarks.

use fraclap_core::{Field, Grid, Topology};

pub fn periodic_grid(n: usize) -> Grid {
    Grid::new(1, 10.0, n, Topology::Periodic).expect("valid benchmark grid")
}

pub fn truncated_grid(n: usize) -> Grid {
    Grid::new(1, 10.0, n, Topology::Truncated).expect("valid benchmark grid")
}

pub fn smooth_field(grid: &Grid) -> Field {
    Field::from_fn(grid.clone(), |p| (0.9 * p[0]).sin() + 0.3 * (2.2 * p[0]).cos())
        .expect("finite samples")
}
