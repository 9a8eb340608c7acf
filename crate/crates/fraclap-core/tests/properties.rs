//! Property tests for the structural invariants: serialization, norms,
//! operator symmetry, the maximum principle, and kernel positivity.

mod common;

use fraclap_core::checks::{kato_check, positive_part_check};
use fraclap_core::io::{read_field, write_field};
use fraclap_core::potential::riesz_convolve;
use fraclap_core::{
    apply_spectral, tail_diagnostics, ExteriorData, Field, FracParams, Grid, OperatorMatrix,
    Topology,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn finite_values(n: usize, range: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-range..range, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Field files survive a write/read/write cycle bit for bit.
    #[test]
    fn serialization_round_trip(
        dim in 1usize..=2,
        points in prop::sample::select(vec![4usize, 6, 8]),
        components in 1usize..=3,
        half in 0.5f64..20.0,
        seed in any::<u64>(),
    ) {
        let topology = if seed % 2 == 0 { Topology::Periodic } else { Topology::Truncated };
        let grid = Grid::new(dim, half, points, topology).unwrap();
        let n = grid.node_count() * components;
        let values: Vec<f64> = (0..n)
            .map(|i| ((seed.wrapping_add(i as u64 * 2654435761)) as f64 / u64::MAX as f64 - 0.5) * 1e3)
            .collect();
        let f = Field::from_values(grid, components, values).unwrap();
        let mut bytes = Vec::new();
        write_field(&f, &mut bytes).unwrap();
        let g = read_field(bytes.as_slice()).unwrap();
        let mut bytes2 = Vec::new();
        write_field(&g, &mut bytes2).unwrap();
        prop_assert_eq!(bytes, bytes2);
        prop_assert_eq!(f, g);
    }

    /// Dominated fields have dominated norms.
    #[test]
    fn norm_monotonicity(values in finite_values(24, 10.0), scale in 1.0f64..3.0) {
        let grid = Grid::new(1, 2.0, 24, Topology::Truncated).unwrap();
        let f = Field::from_values(grid.clone(), 1, values.clone()).unwrap();
        let g = Field::from_values(grid, 1, values.iter().map(|v| v * scale).collect()).unwrap();
        prop_assert!(f.sup_norm() <= g.sup_norm());
        for q in [1.0, 2.0, 4.0] {
            prop_assert!(f.lq_norm(q).unwrap() <= g.lq_norm(q).unwrap() + 1e-12);
        }
    }

    /// The Ginzburg-Landau energy vanishes exactly when the modulus is
    /// saturated at every node.
    #[test]
    fn gl_energy_zero_iff_saturated(values in finite_values(16, 2.0)) {
        let grid = Grid::new(1, 2.0, 16, Topology::Truncated).unwrap();
        let f = Field::from_values(grid.clone(), 1, values.clone()).unwrap();
        let d = tail_diagnostics(&f, 1.0).unwrap();
        let saturated = values.iter().all(|v| (v * v - 1.0).abs() <= 1e-15);
        prop_assert_eq!(d.gl_energy == 0.0, saturated);
    }

    /// Multiplier application is linear to machine precision.
    #[test]
    fn spectral_linearity(a in -3.0f64..3.0, b in -3.0f64..3.0, seed in any::<u64>()) {
        let grid = Grid::new(1, 5.0, 32, Topology::Periodic).unwrap();
        let f = Field::from_fn(grid.clone(), |p| ((seed % 7) as f64 * 0.3 * p[0]).sin()).unwrap();
        let g = Field::from_fn(grid.clone(), |p| (0.9 * p[0]).cos() - 0.2).unwrap();
        let combo = Field::from_values(
            grid.clone(),
            1,
            f.values().iter().zip(g.values()).map(|(x, y)| a * x + b * y).collect(),
        ).unwrap();
        let lhs = apply_spectral(&combo, 1.1).unwrap();
        let af = apply_spectral(&f, 1.1).unwrap();
        let ag = apply_spectral(&g, 1.1).unwrap();
        for i in 0..32 {
            let rhs = a * af.values()[i] + b * ag.values()[i];
            prop_assert!((lhs.values()[i] - rhs).abs() < 1e-11);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Zero exterior data makes the operator self-adjoint with a nonnegative
    /// quadratic form.
    #[test]
    fn operator_symmetry_and_positivity(
        uvals in finite_values(20, 4.0),
        vvals in finite_values(20, 4.0),
        alpha in prop::sample::select(vec![0.4, 0.9, 1.6]),
    ) {
        let grid = Grid::new(1, 3.0, 20, Topology::Truncated).unwrap();
        let a = OperatorMatrix::build(&grid, alpha, ExteriorData::Zero).unwrap();
        let u = Field::from_values(grid.clone(), 1, uvals).unwrap();
        let v = Field::from_values(grid, 1, vvals).unwrap();
        let au = a.apply(&u).unwrap();
        let av = a.apply(&v).unwrap();
        let lhs = au.inner(&v).unwrap();
        let rhs = u.inner(&av).unwrap();
        let scale = lhs.abs().max(rhs.abs()).max(1e-12);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        prop_assert!(au.inner(&u).unwrap() >= -1e-12 * u.inner(&u).unwrap().max(1e-12));
    }

    /// Solutions of `A u = 0` with exterior data inside `[lo, hi]` stay
    /// inside `[lo, hi]`: the discrete maximum principle.
    #[test]
    fn maximum_principle_interval(
        lo in -2.0f64..0.5,
        span in 0.1f64..2.0,
        decay in 0.2f64..2.0,
        alpha in prop::sample::select(vec![0.5, 1.0, 1.5]),
    ) {
        let hi = lo + span;
        let grid = Grid::new(1, 2.0, 16, Topology::Truncated).unwrap();
        let ext = ExteriorData::function(
            move |p: &[f64]| lo + span * (-decay * (p[0].abs() - 2.0)).exp().min(1.0),
            64,
            lo,
        );
        let a = OperatorMatrix::build(&grid, alpha, ext).unwrap();
        let n = grid.node_count();
        let diag = a.diagonal();
        let load = a.exterior_load();
        let mut mat = DMatrix::<f64>::zeros(n, n);
        let mut rhs = DVector::<f64>::zeros(n);
        for i in 0..n {
            for j in 0..n {
                mat[(i, j)] = if i == j { diag[i] } else { -a.weight(i, j) };
            }
            rhs[i] = load[i];
        }
        let sol = mat.lu().solve(&rhs).expect("M-matrix system is solvable");
        for i in 0..n {
            prop_assert!(sol[i] >= lo - 1e-10, "node {i}: {} < {lo}", sol[i]);
            prop_assert!(sol[i] <= hi + 1e-10, "node {i}: {} > {hi}", sol[i]);
        }
    }

    /// Riesz potentials preserve ordering of sources.
    #[test]
    fn riesz_monotone_in_source(
        amp1 in 0.1f64..2.0,
        extra in 0.0f64..2.0,
        alpha in prop::sample::select(vec![0.25, 0.5, 0.75]),
    ) {
        let grid = Grid::new(1, 4.0, 24, Topology::Truncated).unwrap();
        let params = FracParams::new(1, alpha).unwrap();
        let k1 = Field::from_fn(grid.clone(), |p| {
            if p[0].abs() < 1.5 { amp1 * (1.5 - p[0].abs()) } else { 0.0 }
        }).unwrap();
        let k2 = k1.map(|v| v + if v > 0.0 { extra } else { 0.0 }).unwrap();
        let v1 = riesz_convolve(&k1, &params).unwrap();
        let v2 = riesz_convolve(&k2, &params).unwrap();
        for (a, b) in v1.values().iter().zip(v2.values()) {
            prop_assert!(a <= b);
            prop_assert!(*a > 0.0);
        }
    }

    /// Kato and its positive-part variant hold for arbitrary sign patterns.
    #[test]
    fn kato_and_positive_part(values in finite_values(16, 3.0)) {
        let grid = Grid::new(1, 2.0, 16, Topology::Truncated).unwrap();
        let a = OperatorMatrix::build(&grid, 0.8, ExteriorData::Zero).unwrap();
        let f = Field::from_values(grid, 1, values).unwrap();
        let r = kato_check(&f, &a).unwrap();
        prop_assert!(r.passed, "{}", r);
        let r = positive_part_check(&f, &a).unwrap();
        prop_assert!(r.passed, "{}", r);
    }

    /// Vector application agrees with per-component scalar application
    /// exactly.
    #[test]
    fn vector_componentwise_action(values in finite_values(24, 2.0)) {
        let grid = Grid::new(1, 2.0, 12, Topology::Truncated).unwrap();
        let a = OperatorMatrix::build(&grid, 1.2, ExteriorData::Zero).unwrap();
        let vec_field = Field::from_values(grid.clone(), 2, values.clone()).unwrap();
        let av = a.apply(&vec_field).unwrap();
        for c in 0..2 {
            let lane = vec_field.component(c);
            let al = a.apply(&lane).unwrap();
            for node in 0..12 {
                prop_assert_eq!(av.value(node, c), al.values()[node]);
            }
        }
    }
}
