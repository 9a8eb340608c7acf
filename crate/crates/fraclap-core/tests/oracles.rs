//! Oracle tests: every value asserted here is produced by an independent
//! route (adaptive quadrature, direct summation, separate assembly and
//! factorization, mesh refinement) and then compared against the library.

mod common;

use common::*;
use fraclap_core::checks::theorem1_pipeline;
use fraclap_core::exhaustion::solve_dirichlet_ball;
use fraclap_core::ginzburg_landau::{solve_steady, GLConfig};
use fraclap_core::potential::{potential_exterior, riesz_convolve};
use fraclap_core::{
    apply_quadrature_at, normalization_constant, tail_diagnostics, ExteriorData, Field,
    FracParams, Grid, OperatorMatrix, Topology,
};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tgrid(half: f64, n: usize) -> Grid {
    Grid::new(1, half, n, Topology::Truncated).unwrap()
}

/// The normalization constant is what makes the singular integral act like
/// the multiplier `|xi|^alpha`; the two Gaussian quadratures pin it without
/// any Gamma function.
#[test]
fn normalization_constant_gaussian_symbol_oracle_1d() {
    for &alpha in &[0.5, 1.0, 1.5] {
        let fourier = gaussian_fourier_value_1d(alpha);
        let singular = gaussian_singular_integral_1d(alpha);
        let c_oracle = fourier / singular;
        let c = normalization_constant(1, alpha).unwrap();
        let rel = (c - c_oracle).abs() / c_oracle;
        assert!(rel < 1e-6, "alpha={alpha}: closed form {c} vs oracle {c_oracle} (rel {rel:e})");
    }
}

#[test]
fn normalization_constant_gaussian_symbol_oracle_2d() {
    for &alpha in &[0.5, 1.0] {
        let fourier = gaussian_fourier_value_2d(alpha);
        let singular = gaussian_singular_integral_2d(alpha);
        let c_oracle = fourier / singular;
        let c = normalization_constant(2, alpha).unwrap();
        let rel = (c - c_oracle).abs() / c_oracle;
        assert!(rel < 1e-6, "alpha={alpha}: closed form {c} vs oracle {c_oracle} (rel {rel:e})");
    }
}

/// Frozen values, cross-checked against independently computed Gamma values
/// through the reflection formula.
#[test]
fn normalization_constant_frozen_values() {
    let cases = [
        (1, 1.0, 1.0 / std::f64::consts::PI),
        (2, 1.0, 0.5 / std::f64::consts::PI),
        (1, 0.5, 0.199471140200716),
    ];
    for (dim, alpha, expect) in cases {
        let c = normalization_constant(dim, alpha).unwrap();
        assert!((c - expect).abs() < 1e-12, "C({dim},{alpha}) = {c}, expected {expect}");
    }
}

/// Norms against a direct-summation oracle on random fields.
#[test]
fn field_norms_direct_summation_oracle() {
    let grid = tgrid(3.0, 32);
    let h = grid.spacing();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let values: Vec<f64> = (0..32).map(|_| rng.random_range(-5.0..5.0)).collect();
        let f = Field::from_values(grid.clone(), 1, values.clone()).unwrap();
        for &q in &[1.0, 2.0, 3.5] {
            let direct = h.powf(1.0 / q)
                * values.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q);
            let lib = f.lq_norm(q).unwrap();
            assert!((lib - direct).abs() <= 1e-14 * direct.max(1.0));
        }
        let direct_sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert_eq!(f.sup_norm(), direct_sup);
    }
}

/// Tail diagnostics of a sampled Gaussian against a refined midpoint rule
/// evaluated straight from the function.
#[test]
fn tail_diagnostics_refined_midpoint_oracle() {
    let half = 8.0;
    let n = 16_000;
    let alpha = 0.75;
    let grid = Grid::new(1, half, n, Topology::Truncated).unwrap();
    let u = Field::from_fn(grid.clone(), |p| (-p[0] * p[0] / 2.0).exp()).unwrap();
    let d = tail_diagnostics(&u, alpha).unwrap();

    // 10x refinement, midpoint on the same box
    let refine = 10 * n;
    let h = 2.0 * half / refine as f64;
    let mut l_alpha = 0.0;
    let mut energy = 0.0;
    for i in 0..refine {
        let x = -half + i as f64 * h;
        let g = (-x * x / 2.0f64).exp();
        l_alpha += g / (1.0 + x.abs().powf(1.0 + alpha));
        let q: f64 = 1.0 - g * g;
        energy += q * q;
    }
    l_alpha *= h;
    energy *= h;
    assert!((d.l_alpha_integral - l_alpha).abs() < 1e-6, "tail integral off: {} vs {l_alpha}", d.l_alpha_integral);
    assert!((d.gl_energy - energy).abs() < 1e-6, "energy off: {} vs {energy}", d.gl_energy);
}

/// Center-node action on a zero-extended Gaussian against brute-force
/// adaptive quadrature of the defining integral over the exact cell union.
#[test]
fn quadrature_center_node_brute_force_oracle() {
    let half = 8.0;
    let n = 1024;
    let grid = tgrid(half, n);
    let h = grid.spacing();
    let u = Field::from_fn(grid.clone(), |p| (-p[0] * p[0] / 2.0).exp()).unwrap();
    let center = n / 2;
    assert_eq!(grid.node_coords(center)[0], 0.0);

    for &alpha in &[0.5, 1.0] {
        let got = apply_quadrature_at(&grid, alpha, &ExteriorData::Zero, &u, center).unwrap();

        // oracle: C [ int_box (1 - e^{-y^2/2}) |y|^{-1-a} dy + int_ext |y|^{-1-a} dy ]
        let c = normalization_constant(1, alpha).unwrap();
        let e_l = half + 0.5 * h; // box is [-L - h/2, L - h/2]
        let e_r = half - 0.5 * h;
        let g = |y: f64| -> f64 { -(-y * y / 2.0).exp_m1() * y.powf(-1.0 - alpha) };
        let near = |t: f64| -> f64 {
            if t < 1e-3 {
                t.powf(3.0 - 2.0 * alpha)
            } else {
                -(-t.powi(4) / 2.0).exp_m1() * 2.0 * t.powf(-1.0 - 2.0 * alpha)
            }
        };
        let side = |edge: f64| -> f64 {
            adaptive_simpson(&near, 0.0, 1.0, 1e-13)
                + integrate_pieces(&g, &[1.0, 2.0, 4.0, edge], 1e-13)
        };
        let tail = (e_l.powf(-alpha) + e_r.powf(-alpha)) / alpha;
        let oracle = c * (side(e_l) + side(e_r) + tail);

        let rel = (got - oracle).abs() / oracle.abs();
        assert!(rel < 1e-3, "alpha={alpha}: {got} vs oracle {oracle} (rel {rel:e})");
    }
}

/// Ball solve against a fully independent assembly (its own weight loops,
/// its own tail antiderivative) and a different factorization.
#[test]
fn dirichlet_ball_independent_assembly_oracle() {
    let half = 13.0;
    let n = 256;
    let alpha = 0.5;
    let radius = 4.0;
    let grid = tgrid(half, n);
    let k = Field::from_fn(grid.clone(), |p| bump(p[0], 1.0, 10.0)).unwrap();
    let params = FracParams::new(1, alpha).unwrap();
    let u = solve_dirichlet_ball(&k, radius, &params, 1.0).unwrap();

    // independent path
    let h = grid.spacing();
    let c = normalization_constant(1, alpha).unwrap();
    let s = c * (0.5 * h).powf(2.0 - alpha) / ((2.0 - alpha) * h * h);
    let xs: Vec<f64> = (0..n).map(|i| grid.node_coords(i)[0]).collect();
    let inside: Vec<bool> = xs.iter().map(|x| x.abs() < radius).collect();
    let idx: Vec<usize> = (0..n).filter(|&i| inside[i]).collect();
    let m = idx.len();
    let mut mat = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    let e_l = -half - 0.5 * h;
    let e_r = half - 0.5 * h;
    for (p, &i) in idx.iter().enumerate() {
        let mut diag = 0.0;
        let mut outside_weight = 0.0;
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut w = c * h * (xs[i] - xs[j]).abs().powf(-1.0 - alpha);
            if i.abs_diff(j) == 1 {
                w += s;
            }
            diag += w;
            if inside[j] {
                let q = idx.iter().position(|&jj| jj == j).unwrap();
                mat[(p, q)] = -w;
            } else {
                outside_weight += w;
            }
        }
        let tail = c * ((e_r - xs[i]).powf(-alpha) + (xs[i] - e_l).powf(-alpha)) / alpha;
        diag += tail;
        if i == 0 || i == n - 1 {
            diag += s;
            outside_weight += s;
        }
        mat[(p, p)] = diag + k.values()[i];
        rhs[p] = (outside_weight + tail) * 1.0;
    }
    let sol = mat.full_piv_lu().solve(&rhs).expect("oracle system is nonsingular");

    let center = n / 2;
    let pos = idx.iter().position(|&i| i == center).unwrap();
    let diff = (u.values()[center] - sol[pos]).abs();
    assert!(diff < 1e-10, "center value {} vs oracle {} (diff {diff:e})", u.values()[center], sol[pos]);
}

/// `A(riesz_convolve(k)) = k` with the potential's own kernel-sum exterior;
/// the error must sit inside the frozen tolerance at 256 nodes and shrink
/// under refinement.
#[test]
fn riesz_inversion_mesh_refinement_oracle() {
    let half = 10.0;
    let alpha = 0.5;
    let params = FracParams::new(1, alpha).unwrap();
    let mut errors = Vec::new();
    for &n in &[128usize, 256, 512] {
        let grid = tgrid(half, n);
        let k = Field::from_fn(grid.clone(), |p| bump(p[0], 1.0, 1.0)).unwrap();
        let v = riesz_convolve(&k, &params).unwrap();
        let ext = potential_exterior(&k, &params, 15 * n).unwrap();
        let a = OperatorMatrix::build(&grid, alpha, ext).unwrap();
        let av = a.apply(&v).unwrap();
        let diff = Field::from_values(
            grid.clone(),
            1,
            av.values().iter().zip(k.values()).map(|(a, b)| a - b).collect(),
        )
        .unwrap();
        let rel = diff.lq_norm(2.0).unwrap() / k.lq_norm(2.0).unwrap();
        errors.push(rel);
    }
    assert!(errors[1] < 2e-2, "rel L2 at 256 nodes: {:e}", errors[1]);
    assert!(errors[2] < errors[1] && errors[1] < errors[0], "no refinement: {errors:?}");
}

/// Flow trace shape for a supercritical cosine, with the halved-time-step
/// rerun as the oracle: the converged tail of the trace must agree.
#[test]
fn gl_trace_halved_time_step_oracle() {
    let grid = Grid::new(1, 40.0, 512, Topology::Periodic).unwrap();
    let u0 = Field::from_fn(grid.clone(), |p| {
        1.5 * (std::f64::consts::PI * p[0] / 40.0).cos()
    })
    .unwrap();
    let mut cfg = GLConfig::new(1.0);
    let (star, trace) = solve_steady(&u0, &cfg).unwrap();
    assert!(trace.is_steady(), "residual {}", trace.residual);

    // sup |u| decreases through 1
    let sups: Vec<f64> = trace.records.iter().map(|r| r.sup).collect();
    assert!(sups[0] > 1.0);
    assert!(sups.iter().any(|s| *s < 1.0));
    // gl energy decreases monotonically after the initial transient
    let energies: Vec<f64> = trace.records.iter().map(|r| r.gl_energy).collect();
    let transient = 20.min(energies.len() / 4);
    for w in energies[transient..].windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "energy rose late in the flow: {} -> {}", w[0], w[1]);
    }

    cfg.time_step = 0.05;
    let (star_half, trace_half) = solve_steady(&u0, &cfg).unwrap();
    assert!(trace_half.is_steady());
    let sup_diff = (star.sup_norm() - star_half.sup_norm()).abs();
    let e1 = trace.records.last().unwrap().gl_energy;
    let e2 = trace_half.records.last().unwrap().gl_energy;
    assert!(sup_diff < 1e-4, "steady sup differs across time steps: {sup_diff:e}");
    assert!((e1 - e2).abs() < 1e-4, "steady energy differs: {:e}", (e1 - e2).abs());
}

/// End-to-end pipeline examples: the saturated constant passes trivially, a
/// random field passes after the flow, and the adversarial spike agrees with
/// its half-time-step rerun.
#[test]
fn theorem1_pipeline_examples() {
    let grid = Grid::new(1, 12.0, 128, Topology::Periodic).unwrap();
    let cfg = GLConfig::new(0.5);

    let ones = Field::constant(grid.clone(), 1.0, 1).unwrap();
    let rep = theorem1_pipeline(&ones, &cfg, 3.0, 4).unwrap();
    assert!(rep.passed, "{rep}");

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let random = Field::from_values(
        grid.clone(),
        1,
        (0..128).map(|_| rng.random_range(-3.0..3.0)).collect(),
    )
    .unwrap();
    let rep = theorem1_pipeline(&random, &cfg, 3.0, 4).unwrap();
    assert!(rep.passed, "{rep}");
    assert!(rep.worst_violation <= 1e-6, "sup Q_+ = {:e}", rep.worst_violation);

    let mut spike_vals = vec![0.0; 128];
    spike_vals[40] = 3.0;
    let spike = Field::from_values(grid.clone(), 1, spike_vals).unwrap();
    let rep_a = theorem1_pipeline(&spike, &cfg, 3.0, 4).unwrap();
    let mut cfg_half = cfg;
    cfg_half.time_step = 0.05;
    let rep_b = theorem1_pipeline(&spike, &cfg_half, 3.0, 4).unwrap();
    assert!(rep_a.passed && rep_b.passed, "{rep_a} / {rep_b}");
    assert!((rep_a.worst_violation - rep_b.worst_violation).abs() <= 1e-6);
}
