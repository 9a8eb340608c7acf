use super::write_text;
use crate::config::{load_config, write_manifest, ConfigDoc};
use crate::{CliError, CommonArgs};
use fraclap_core::{ExteriorData, Field, Grid, OperatorMatrix, SpectralOperator, Topology};
use std::fmt::Write as _;
use std::time::Instant;

/// Median wall time of `reps` runs of `f`.
fn median_time(reps: usize, mut f: impl FnMut()) -> f64 {
    let mut samples: Vec<f64> = (0..reps.max(1))
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_secs_f64()
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    samples[samples.len() / 2]
}

pub fn run(common: CommonArgs, sizes: Option<Vec<usize>>) -> Result<(), CliError> {
    let doc = load_config(common.config.as_deref()).map_err(CliError::Validation)?;
    let mut section = doc.bench.unwrap_or_default();
    if let Some(v) = common.alpha {
        section.alpha = v;
    }
    if let Some(v) = common.half_extent {
        section.half_extent = v;
    }
    if let Some(v) = sizes {
        section.sizes = v;
    }

    let manifest = ConfigDoc {
        command: Some("bench".into()),
        bench: Some(section.clone()),
        ..Default::default()
    };
    write_manifest(&common.out, &manifest).map_err(CliError::Validation)?;

    let mut text = String::from("# n assemble_s quad_apply_s spectral_apply_s\n");
    let mut quad_times = Vec::new();
    for &n in &section.sizes {
        let tgrid = Grid::new(1, section.half_extent, n, Topology::Truncated)?;
        let pgrid = Grid::new(1, section.half_extent, n, Topology::Periodic)?;
        let ut = Field::from_fn(tgrid.clone(), |p| (0.7 * p[0]).sin())?;
        let up = Field::from_fn(pgrid.clone(), |p| (0.7 * p[0]).sin())?;

        let t_assemble = median_time(3, || {
            let _ = OperatorMatrix::build(&tgrid, section.alpha, ExteriorData::Zero).unwrap();
        });
        let a = OperatorMatrix::build(&tgrid, section.alpha, ExteriorData::Zero)?;
        let t_quad = median_time(section.reps, || {
            let _ = a.apply(&ut).unwrap();
        });
        let sop = SpectralOperator::new(&pgrid, section.alpha)?;
        let t_spec = median_time(section.reps, || {
            let _ = sop.apply(&up).unwrap();
        });
        let _ = writeln!(text, "{n} {t_assemble:e} {t_quad:e} {t_spec:e}");
        quad_times.push((n, t_quad));
        println!("bench n={n}: assemble {t_assemble:.3e}s quad {t_quad:.3e}s spectral {t_spec:.3e}s");
    }
    for w in quad_times.windows(2) {
        let ratio = w[1].1 / w[0].1;
        let _ = writeln!(text, "# quad_time_ratio {}/{} = {:.3}", w[1].0, w[0].0, ratio);
    }
    write_text(&common.out, "bench.txt", &text)?;
    Ok(())
}
