use super::{bump, write_text};
use crate::config::{load_config, write_manifest, ConfigDoc};
use crate::{numerical_failure, CliError, CommonArgs};
use fraclap_core::checks::{
    feasibility_search, kato_check, positive_part_check, q_chain_quantities, random_field_sweep,
    theorem1_pipeline, FeasibilitySearch,
};
use fraclap_core::exhaustion::{run_exhaustion, ExhaustionConfig};
use fraclap_core::ginzburg_landau::{solve_steady, verify_bound, GLConfig};
use fraclap_core::potential::{cutoff_potential, potential_exterior, CutoffFamily};
use fraclap_core::{
    ExteriorData, Field, FracParams, Grid, OperatorMatrix, PropertyReport, Topology,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run(common: CommonArgs, restarts: Option<usize>) -> Result<(), CliError> {
    let doc = load_config(common.config.as_deref()).map_err(CliError::Validation)?;
    let mut section = doc.verify.unwrap_or_default();
    if let Some(v) = common.seed {
        section.seed = v;
    }
    if let Some(v) = restarts {
        section.search_restarts = v;
    }
    if let Some(v) = common.alpha {
        section.gl_alpha = v;
    }
    if let Some(v) = common.grid_n {
        section.gl_grid_n = v;
    }
    if let Some(v) = common.half_extent {
        section.gl_half_extent = v;
    }

    let manifest = ConfigDoc {
        command: Some("verify".into()),
        verify: Some(section.clone()),
        ..Default::default()
    };
    write_manifest(&common.out, &manifest).map_err(CliError::Validation)?;

    let mut reports: Vec<PropertyReport> = Vec::new();

    // inequality sweeps on a small truncated grid
    let sweep_grid = Grid::new(1, 5.0, 64, Topology::Truncated)?;
    let a_zero = OperatorMatrix::build(&sweep_grid, 1.0, ExteriorData::Zero)?;
    let kato = random_field_sweep(&a_zero, section.kato_fields, section.seed, kato_check)?;
    reports.push(fold_sweep("kato_sweep", kato));
    let plus =
        random_field_sweep(&a_zero, section.kato_fields, section.seed ^ 0x5a5a, positive_part_check)?;
    reports.push(fold_sweep("positive_part_sweep", plus));

    // constants sit in the operator kernel when the exterior matches
    {
        let g = Grid::new(1, 5.0, 64, Topology::Truncated)?;
        let a = OperatorMatrix::build(&g, 1.0, ExteriorData::Constant(1.0))?;
        let u = Field::constant(g, 1.0, 1)?;
        let au = a.apply(&u)?;
        reports.push(PropertyReport::new(
            "constant_annihilation",
            au.sup_norm(),
            None,
            1e-12,
            "u = 1, exterior = 1",
        ));
    }

    // flow sweep and the chain on every steady state
    let grid = Grid::new(1, section.gl_half_extent, section.gl_grid_n, Topology::Periodic)?;
    let mut worst_margin = f64::NEG_INFINITY;
    let mut worst_identity = 0.0f64;
    let mut worst_plus_excess = f64::NEG_INFINITY;
    let mut all_steady = true;
    let mut states = Vec::new();
    for run in 0..(section.gl_scalar_runs as u64) {
        states.push((1usize, run));
    }
    for run in 0..(section.gl_vector_runs as u64) {
        states.push((2usize, 1000 + run));
    }
    for (components, stream) in states {
        let mut rng = ChaCha8Rng::seed_from_u64(section.seed);
        rng.set_stream(stream);
        let n = grid.node_count() * components;
        let u0 = Field::from_values(
            grid.clone(),
            components,
            (0..n).map(|_| rng.random_range(-3.0..3.0)).collect(),
        )?;
        let cfg = GLConfig::new(section.gl_alpha).with_components(components);
        let (star, trace) = solve_steady(&u0, &cfg)?;
        all_steady &= trace.is_steady();
        let bound = verify_bound(&star, 1e-6);
        worst_margin = worst_margin.max(bound.worst_violation);
        let q = q_chain_quantities(&star, section.gl_alpha, 4)?;
        worst_identity = worst_identity.max(q.identity_worst);
        worst_plus_excess = worst_plus_excess.max(q.plus_worst - 10.0 * trace.residual);
    }
    reports.push(PropertyReport::new(
        "gl_bound_sweep",
        worst_margin,
        None,
        1e-6,
        format!(
            "{} scalar + {} vector runs, all steady: {all_steady}",
            section.gl_scalar_runs, section.gl_vector_runs
        ),
    ));
    reports.push(PropertyReport::new(
        "q_chain_identity_sweep",
        worst_identity,
        None,
        1e-12,
        "A(u^2) - 2u Au + Gamma(u) across all steady states",
    ));
    reports.push(PropertyReport::new(
        "q_chain_plus_sweep",
        worst_plus_excess,
        None,
        0.0,
        "A(Q+) + 2Q+^2 - 10 rho across all steady states",
    ));
    if !all_steady {
        reports.push(PropertyReport::new(
            "gl_steadiness",
            1.0,
            None,
            0.0,
            "at least one flow failed to converge",
        ));
    }

    // exhaustion
    {
        let g = Grid::new(1, 13.0, 512, Topology::Truncated)?;
        let k = Field::from_fn(g, |p| bump(p[0], 1.0, 2.0))?;
        let params = FracParams::new(1, 0.5)?;
        let cfg = ExhaustionConfig::new(vec![2.0, 3.0, 4.0, 5.0, 6.0], k, params);
        match run_exhaustion(&cfg) {
            Ok(out) => {
                reports.push(PropertyReport::new(
                    "exhaustion_monotonicity",
                    out.monotonicity_residual,
                    None,
                    1e-10,
                    format!("radii {:?}", cfg.radii),
                ));
                reports.push(PropertyReport::new(
                    "exhaustion_comparison",
                    out.comparison_residual,
                    None,
                    1e-8,
                    format!("sup U = {:e}", out.nontriviality),
                ));
            }
            Err(e) => {
                reports.push(PropertyReport::new(
                    "exhaustion",
                    f64::INFINITY,
                    None,
                    0.0,
                    format!("hard failure: {e}"),
                ));
            }
        }
    }

    // Liouville feasibility search
    {
        let g = Grid::new(1, 4.0, 64, Topology::Truncated)?;
        let a = OperatorMatrix::build(&g, 0.5, ExteriorData::Zero)?;
        let search = FeasibilitySearch {
            restarts: section.search_restarts,
            ascent_attempts: 20,
            exponent: 2.0,
            seed: section.seed ^ 0x11003311,
        };
        let out = feasibility_search(&a, &search)?;
        let cert_ok = out.all_positive_certified_infeasible();
        reports.push(PropertyReport::new(
            "liouville_search",
            out.best_feasible_sup,
            None,
            1e-8,
            format!(
                "{} restarts, {} positive candidates, certificates complete: {cert_ok}",
                out.candidates, out.positive_total
            ),
        ));
        if !cert_ok {
            reports.push(PropertyReport::new(
                "liouville_certificates",
                1.0,
                None,
                0.0,
                "a positive candidate slipped through without a violating node",
            ));
        }
    }

    // cutoff potential
    {
        let g = Grid::new(1, 12.0, 512, Topology::Truncated)?;
        let params = FracParams::new(1, 0.5)?;
        let pot = cutoff_potential(3.0, &params, &g)?;
        reports.push(PropertyReport::new(
            "cutoff_shell_decay",
            pot.shell_fluctuation(),
            None,
            0.25,
            format!("sup phi = {:e}", pot.bound),
        ));
        let family = CutoffFamily::new(3.0)?;
        let xi = family.sample(&g)?;
        let ext = potential_exterior(&xi, &params, 15 * 512)?;
        let a = OperatorMatrix::build(&g, 0.5, ext)?;
        let aphi = a.apply(&pot.phi)?;
        let diff = Field::from_values(
            g.clone(),
            1,
            aphi.values().iter().zip(xi.values()).map(|(x, y)| x - y).collect(),
        )?;
        let rel = diff.lq_norm(2.0)? / xi.lq_norm(2.0)?;
        reports.push(PropertyReport::new(
            "cutoff_inversion",
            rel,
            None,
            2e-2,
            "A(phi) vs xi_R, relative L2",
        ));
    }

    // end-to-end pipeline at an order where the potential exists
    {
        let g = Grid::new(1, 12.0, 128, Topology::Periodic)?;
        let mut rng = ChaCha8Rng::seed_from_u64(section.seed ^ 0x7eef);
        let u0 = Field::from_values(
            g.clone(),
            1,
            (0..128).map(|_| rng.random_range(-3.0..3.0)).collect(),
        )?;
        let cfg = GLConfig::new(0.5);
        reports.push(theorem1_pipeline(&u0, &cfg, 3.0, 4)?);
    }

    let mut text = String::new();
    for r in &reports {
        text.push_str(&r.to_string());
        text.push('\n');
    }
    write_text(&common.out, "reports.txt", &text)?;

    let failures: Vec<&PropertyReport> = reports.iter().filter(|r| !r.passed).collect();
    for r in &reports {
        println!("{r}");
    }
    if !failures.is_empty() {
        return Err(numerical_failure(format!("{} checks failed", failures.len())));
    }
    Ok(())
}

fn fold_sweep(name: &str, reports: Vec<PropertyReport>) -> PropertyReport {
    let mut worst = f64::NEG_INFINITY;
    let mut node = None;
    let mut tol = 0.0;
    for r in &reports {
        if r.worst_violation > worst {
            worst = r.worst_violation;
            node = r.violation_node;
        }
        tol = r.tolerance;
    }
    PropertyReport::new(name, worst, node, tol, format!("{} random fields", reports.len()))
}
