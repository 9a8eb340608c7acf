use super::{write_field_atomic, write_text};
use crate::config::{load_config, write_manifest, ApplySection, ConfigDoc};
use crate::{CliError, CommonArgs};
use anyhow::{anyhow, Context};
use fraclap_core::{
    apply_spectral, ExteriorData, Field, FracError, Grid, OperatorMatrix, Topology,
};
use std::fmt::Write as _;
use std::path::PathBuf;

fn parse_exterior(spec: &str) -> Result<ExteriorData, CliError> {
    if spec == "zero" {
        return Ok(ExteriorData::Zero);
    }
    if let Some(v) = spec.strip_prefix("constant:") {
        let value: f64 = v
            .parse()
            .map_err(|_| CliError::Validation(anyhow!("bad exterior constant {v:?}")))?;
        return Ok(ExteriorData::Constant(value));
    }
    Err(CliError::Validation(anyhow!(
        "exterior must be \"zero\" or \"constant:<value>\", got {spec:?}"
    )))
}

pub fn run(
    common: CommonArgs,
    field: Option<PathBuf>,
    exterior: Option<String>,
    study: bool,
) -> Result<(), CliError> {
    let doc = load_config(common.config.as_deref()).map_err(CliError::Validation)?;
    let mut section = doc.apply.unwrap_or_default();
    if let Some(v) = common.alpha {
        section.alpha = v;
    }
    if let Some(f) = field {
        section.field = Some(f);
    }
    if let Some(e) = exterior {
        section.exterior = e;
    }
    if study {
        section.study = true;
    }

    if !(section.alpha > 0.0 && section.alpha < 2.0) {
        return Err(CliError::from(FracError::InvalidAlpha(section.alpha)));
    }

    if section.study {
        return run_study(&common, &section);
    }

    let path = section
        .field
        .clone()
        .ok_or_else(|| CliError::Validation(anyhow!("apply needs --field <file>")))?;
    let input = fraclap_core::io::read_field_file(&path)
        .with_context(|| format!("read field {}", path.display()))
        .map_err(CliError::Validation)?;

    let manifest = ConfigDoc {
        command: Some("apply".into()),
        apply: Some(section.clone()),
        ..Default::default()
    };
    write_manifest(&common.out, &manifest).map_err(CliError::Validation)?;

    match input.grid().topology() {
        Topology::Periodic => {
            let out = apply_spectral(&input, section.alpha)?;
            write_field_atomic(&common.out, "applied.fld", &out)?;
            // quadrature cross-check with the periodic extension as exterior
            if input.components() == 1 && input.grid().node_count() <= 1024 {
                let consistency = periodic_consistency(&input, section.alpha, &out)?;
                write_text(&common.out, "consistency.txt", &consistency)?;
            }
            println!("apply: spectral path, sup |Au| = {:e}", out.sup_norm());
        }
        Topology::Truncated => {
            let ext = parse_exterior(&section.exterior)?;
            let a = OperatorMatrix::build(input.grid(), section.alpha, ext)?;
            let out = a.apply(&input)?;
            write_field_atomic(&common.out, "applied.fld", &out)?;
            println!("apply: quadrature path, sup |Au| = {:e}", out.sup_norm());
        }
    }
    Ok(())
}

fn periodic_consistency(
    input: &Field,
    alpha: f64,
    spectral_out: &Field,
) -> Result<String, CliError> {
    let tgrid = input.grid().truncated_twin();
    let half = input.grid().half_extent();
    let n = input.grid().points_per_axis();
    let values = input.values().to_vec();
    let h = input.grid().spacing();
    let closure = move |p: &[f64]| -> f64 {
        let j = (((p[0] + half) / h).round() as i64).rem_euclid(n as i64);
        values[j as usize]
    };
    let mean = input.values().iter().sum::<f64>() / input.values().len() as f64;
    let ext = ExteriorData::function(closure, 8 * n, mean);
    let a = OperatorMatrix::build(&tgrid, alpha, ext)?;
    let moved = Field::from_values(tgrid.clone(), 1, input.values().to_vec())?;
    let quad = a.apply(&moved)?;
    let diff = Field::from_values(
        tgrid.clone(),
        1,
        quad.values().iter().zip(spectral_out.values()).map(|(a, b)| a - b).collect(),
    )?;
    let denom = spectral_out.lq_norm(2.0)?.max(1e-300);
    let mut text = String::from("# spectral vs quadrature consistency\n");
    let _ = writeln!(text, "rel_l2_discrepancy {:e}", diff.lq_norm(2.0)? / denom);
    let _ = writeln!(text, "sup_discrepancy {:e}", diff.sup_norm());
    Ok(text)
}

/// Three-size refinement study of the spectral/quadrature discrepancy on a
/// fixed smooth field.
fn run_study(common: &CommonArgs, section: &ApplySection) -> Result<(), CliError> {
    let manifest = ConfigDoc {
        command: Some("apply".into()),
        apply: Some(section.clone()),
        ..Default::default()
    };
    write_manifest(&common.out, &manifest).map_err(CliError::Validation)?;

    let half = std::f64::consts::PI;
    let smooth = |x: f64| (2.0 * x).cos() + 0.5 * (5.0 * x).sin();
    let mut text = String::from("# n h rel_l2_discrepancy\n");
    let mut last = f64::INFINITY;
    let mut decreasing = true;
    for &n in &[128usize, 256, 512] {
        let pgrid = Grid::new(1, half, n, Topology::Periodic)?;
        let tgrid = pgrid.truncated_twin();
        let u = Field::from_fn(tgrid.clone(), |p| smooth(p[0]))?;
        let up = Field::from_fn(pgrid.clone(), |p| smooth(p[0]))?;
        let ext = ExteriorData::function(
            move |p: &[f64]| smooth((p[0] + half).rem_euclid(2.0 * half) - half),
            31 * n,
            0.0,
        );
        let a = OperatorMatrix::build(&tgrid, section.alpha, ext)?;
        let aq = a.apply(&u)?;
        let asp = apply_spectral(&up, section.alpha)?;
        let diff = Field::from_values(
            tgrid.clone(),
            1,
            aq.values().iter().zip(asp.values()).map(|(x, y)| x - y).collect(),
        )?;
        let asp_t = Field::from_values(tgrid.clone(), 1, asp.values().to_vec())?;
        let rel = diff.lq_norm(2.0)? / asp_t.lq_norm(2.0)?;
        let _ = writeln!(text, "{} {:e} {:e}", n, tgrid.spacing(), rel);
        decreasing &= rel < last;
        last = rel;
    }
    let _ = writeln!(text, "# discrepancy decreasing: {decreasing}");
    write_text(&common.out, "study.txt", &text)?;
    println!("apply: study written, final discrepancy {last:e}");
    Ok(())
}
