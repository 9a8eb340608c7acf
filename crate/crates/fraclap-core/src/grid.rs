//! Uniform lattices on a centered box in one or two dimensions.
//!
//! The box is `[-half_extent, half_extent]^dim`, discretized by `points_per_axis`
//! nodes per axis at `x_i = -half_extent + i * spacing`. Node order is
//! lexicographic by axis (axis 0 slowest), and every node owns the cell of side
//! `spacing` centered on it, so the cell union tiles a box of measure
//! `(2 half_extent)^dim` shifted by half a cell.

use crate::error::{FracError, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Topology {
    /// Wraps around; the operator acts through its Fourier symbol.
    Periodic,
    /// Finite box; the operator needs prescribed exterior data.
    Truncated,
}

#[derive(Clone, PartialEq, Debug)]
pub struct Grid {
    dim: usize,
    half_extent: f64,
    points_per_axis: usize,
    topology: Topology,
}

impl Grid {
    /// Build a validated grid. `points_per_axis` must be even and at least 4
    /// (spectral symmetry needs an even count), `dim` must be 1 or 2.
    pub fn new(
        dim: usize,
        half_extent: f64,
        points_per_axis: usize,
        topology: Topology,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(FracError::InvalidGrid(format!("dim must be 1 or 2, got {dim}")));
        }
        if !(half_extent > 0.0) || !half_extent.is_finite() {
            return Err(FracError::InvalidGrid(format!(
                "half_extent must be positive and finite, got {half_extent}"
            )));
        }
        if points_per_axis < 4 || points_per_axis % 2 != 0 {
            return Err(FracError::InvalidGrid(format!(
                "points_per_axis must be even and >= 4, got {points_per_axis}"
            )));
        }
        Ok(Grid { dim, half_extent, points_per_axis, topology })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_extent(&self) -> f64 {
        self.half_extent
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    /// Derived, never stored: `spacing * points_per_axis = 2 * half_extent`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_extent / self.points_per_axis as f64
    }

    pub fn node_count(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    /// Cell measure `spacing^dim`, the weight of the midpoint rule.
    pub fn cell_measure(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn axis_coord(&self, i: usize) -> f64 {
        -self.half_extent + i as f64 * self.spacing()
    }

    /// Coordinates of a flat node index. The second entry is 0 in 1-D.
    pub fn node_coords(&self, node: usize) -> [f64; 2] {
        match self.dim {
            1 => [self.axis_coord(node), 0.0],
            _ => {
                let n = self.points_per_axis;
                [self.axis_coord(node / n), self.axis_coord(node % n)]
            }
        }
    }

    pub fn node_index(&self, ij: [usize; 2]) -> usize {
        match self.dim {
            1 => ij[0],
            _ => ij[0] * self.points_per_axis + ij[1],
        }
    }

    pub fn node_axes(&self, node: usize) -> [usize; 2] {
        match self.dim {
            1 => [node, 0],
            _ => [node / self.points_per_axis, node % self.points_per_axis],
        }
    }

    /// Euclidean norm of a node's position.
    pub fn node_radius(&self, node: usize) -> f64 {
        let p = self.node_coords(node);
        (p[0] * p[0] + p[1] * p[1]).sqrt()
    }

    /// Max-norm of a node's position, used for support checks.
    pub fn node_radius_max(&self, node: usize) -> f64 {
        let p = self.node_coords(node);
        p[0].abs().max(p[1].abs())
    }

    /// The node mirrored through the origin, when all its mirrored axis
    /// indices exist (index 0 has no mirror on this lattice).
    pub fn mirror_node(&self, node: usize) -> Option<usize> {
        let ij = self.node_axes(node);
        let n = self.points_per_axis;
        let mut out = [0usize; 2];
        for a in 0..self.dim {
            if ij[a] == 0 {
                return None;
            }
            out[a] = n - ij[a];
        }
        Some(self.node_index(out))
    }

    /// Grids that agree in everything but topology are interchangeable for
    /// sampling purposes; this returns the truncated twin.
    pub fn truncated_twin(&self) -> Grid {
        Grid { topology: Topology::Truncated, ..self.clone() }
    }
}

/// Convenience constructor mirroring the validated path.
pub fn make_grid(
    dim: usize,
    half_extent: f64,
    points_per_axis: usize,
    topology: Topology,
) -> Result<Grid> {
    Grid::new(dim, half_extent, points_per_axis, topology)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_is_derived() {
        let g = Grid::new(1, 10.0, 256, Topology::Periodic).unwrap();
        assert_eq!(g.spacing(), 0.078125);
        assert_eq!(g.spacing() * g.points_per_axis() as f64, 2.0 * g.half_extent());
    }

    #[test]
    fn node_count_2d() {
        let g = Grid::new(2, 5.0, 64, Topology::Truncated).unwrap();
        assert_eq!(g.node_count(), 4096);
    }

    #[test]
    fn odd_count_rejected() {
        assert!(Grid::new(1, 10.0, 7, Topology::Periodic).is_err());
        assert!(Grid::new(1, 10.0, 2, Topology::Periodic).is_err());
        assert!(Grid::new(3, 10.0, 8, Topology::Periodic).is_err());
    }

    #[test]
    fn node_coords_lexicographic() {
        let g = Grid::new(2, 1.0, 4, Topology::Truncated).unwrap();
        assert_eq!(g.node_coords(0), [-1.0, -1.0]);
        assert_eq!(g.node_coords(1), [-1.0, -0.5]);
        assert_eq!(g.node_coords(4), [-0.5, -1.0]);
        assert_eq!(g.node_index([1, 0]), 4);
        assert_eq!(g.node_axes(6), [1, 2]);
    }

    #[test]
    fn mirror_pairs() {
        let g = Grid::new(1, 1.0, 8, Topology::Truncated).unwrap();
        assert_eq!(g.mirror_node(0), None);
        assert_eq!(g.mirror_node(3), Some(5));
        let x3 = g.node_coords(3)[0];
        let x5 = g.node_coords(5)[0];
        assert_eq!(x3, -x5);
    }
}
