use super::{bump, write_field_atomic, write_text};
use crate::config::{load_config, write_manifest, ConfigDoc};
use crate::{CliError, CommonArgs};
use fraclap_core::exhaustion::{run_exhaustion, ExhaustionConfig};
use fraclap_core::{Field, FracParams, Grid, Topology};

pub fn run(
    common: CommonArgs,
    radii: Option<Vec<f64>>,
    bump_height: Option<f64>,
) -> Result<(), CliError> {
    let doc = load_config(common.config.as_deref()).map_err(CliError::Validation)?;
    let mut section = doc.exhaust.unwrap_or_default();
    if let Some(v) = common.alpha {
        section.alpha = v;
    }
    if let Some(v) = common.grid_n {
        section.grid_n = v;
    }
    if let Some(v) = common.half_extent {
        section.half_extent = v;
    }
    if let Some(v) = radii {
        section.radii = v;
    }
    if let Some(v) = bump_height {
        section.bump_height = v;
    }

    let grid = Grid::new(1, section.half_extent, section.grid_n, Topology::Truncated)?;
    let params = FracParams::new(1, section.alpha)?;
    let width = section.bump_width;
    let height = section.bump_height;
    let k = Field::from_fn(grid, |p| bump(p[0], width, height))?;
    let mut cfg = ExhaustionConfig::new(section.radii.clone(), k, params);
    cfg.solve_tolerance = section.solve_tolerance;

    let manifest = ConfigDoc {
        command: Some("exhaust".into()),
        exhaust: Some(section.clone()),
        ..Default::default()
    };
    write_manifest(&common.out, &manifest).map_err(CliError::Validation)?;

    let out = run_exhaustion(&cfg)?;

    let mut report = Vec::new();
    out.write_report(&mut report)?;
    write_text(
        &common.out,
        "exhaust_report.txt",
        std::str::from_utf8(&report).expect("report is ascii"),
    )?;
    write_field_atomic(&common.out, "limit.fld", &out.limit)?;
    write_field_atomic(&common.out, "potential.fld", &out.potential)?;

    println!(
        "exhaust: {} radii, monotonicity {:e}, comparison {:e}, sup U {:e}",
        out.radii.len(),
        out.monotonicity_residual,
        out.comparison_residual,
        out.nontriviality
    );
    Ok(())
}
