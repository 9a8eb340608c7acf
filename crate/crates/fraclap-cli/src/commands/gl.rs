use super::{write_field_atomic, write_text};
use crate::config::{load_config, write_manifest, ConfigDoc};
use crate::{numerical_failure, CliError, CommonArgs};
use anyhow::Context;
use fraclap_core::ginzburg_landau::{solve_steady, GLConfig};
use fraclap_core::{Field, Grid, Topology};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

pub fn run(
    common: CommonArgs,
    components: Option<usize>,
    time_step: Option<f64>,
    init_field: Option<PathBuf>,
) -> Result<(), CliError> {
    let doc = load_config(common.config.as_deref()).map_err(CliError::Validation)?;
    let mut section = doc.gl.unwrap_or_default();
    if let Some(v) = common.alpha {
        section.alpha = v;
    }
    if let Some(v) = common.grid_n {
        section.grid_n = v;
    }
    if let Some(v) = common.half_extent {
        section.half_extent = v;
    }
    if let Some(v) = common.seed {
        section.seed = v;
    }
    if let Some(v) = components {
        section.components = v;
    }
    if let Some(v) = time_step {
        section.time_step = v;
    }
    if let Some(v) = init_field {
        section.init_field = Some(v);
    }

    let grid = Grid::new(1, section.half_extent, section.grid_n, Topology::Periodic)?;
    let mut cfg = GLConfig::new(section.alpha).with_components(section.components);
    cfg.time_step = section.time_step;
    cfg.max_steps = section.max_steps;
    cfg.steady_tolerance = section.steady_tolerance;
    cfg.validate()?;

    let u0 = match &section.init_field {
        Some(path) => {
            let f = fraclap_core::io::read_field_file(path)
                .with_context(|| format!("read initial field {}", path.display()))
                .map_err(CliError::Validation)?;
            if f.grid() != &grid || f.components() != section.components {
                return Err(CliError::Validation(anyhow::anyhow!(
                    "initial field does not match the configured grid/components"
                )));
            }
            f
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(section.seed);
            let n = grid.node_count() * section.components;
            let amp = section.init_amplitude;
            Field::from_values(
                grid.clone(),
                section.components,
                (0..n).map(|_| rng.random_range(-amp..amp)).collect(),
            )?
        }
    };

    let manifest = ConfigDoc {
        command: Some("gl".into()),
        gl: Some(section.clone()),
        ..Default::default()
    };
    write_manifest(&common.out, &manifest).map_err(CliError::Validation)?;

    let (star, trace) = solve_steady(&u0, &cfg)?;

    let mut trace_text = Vec::new();
    trace.write_trace(&mut trace_text)?;
    write_text(
        &common.out,
        "trace.txt",
        std::str::from_utf8(&trace_text).expect("trace is ascii"),
    )?;
    write_field_atomic(&common.out, "steady.fld", &star)?;

    if !trace.is_steady() {
        return Err(numerical_failure(format!(
            "flow did not reach a steady state in {} steps (residual {:e}, bound {:e})",
            trace.steps, trace.residual, trace.residual_bound
        )));
    }
    println!(
        "gl: steady after {} steps, residual {:e}, sup |u| = {:e}",
        trace.steps,
        trace.residual,
        star.sup_norm()
    );
    Ok(())
}
