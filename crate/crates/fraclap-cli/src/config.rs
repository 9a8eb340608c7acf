//! Structured run configurations with explicit defaults.
//!
//! Every run resolves its config (file section, then command-line overrides)
//! and echoes the result to `manifest.toml` in the output directory, so any
//! result can be reproduced from the manifest alone.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(default, deny_unknown_fields)]
pub struct ApplySection {
    pub alpha: f64,
    /// Input field file; required.
    pub field: Option<PathBuf>,
    /// Exterior data for truncated grids: "zero" or "constant:<value>".
    pub exterior: String,
    /// Run the built-in three-size spectral/quadrature study instead of a
    /// single application.
    pub study: bool,
}

impl Default for ApplySection {
    fn default() -> Self {
        ApplySection { alpha: 1.0, field: None, exterior: "zero".into(), study: false }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(default, deny_unknown_fields)]
pub struct GlSection {
    pub alpha: f64,
    pub half_extent: f64,
    pub grid_n: usize,
    pub components: usize,
    pub time_step: f64,
    pub max_steps: usize,
    pub steady_tolerance: f64,
    pub seed: u64,
    /// Amplitude of the uniform random initial data.
    pub init_amplitude: f64,
    /// Optional initial field file overriding the random initialization.
    pub init_field: Option<PathBuf>,
}

impl Default for GlSection {
    fn default() -> Self {
        GlSection {
            alpha: 1.0,
            half_extent: 10.0,
            grid_n: 256,
            components: 1,
            time_step: 0.1,
            max_steps: 100_000,
            steady_tolerance: 1e-10,
            seed: 0,
            init_amplitude: 3.0,
            init_field: None,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(default, deny_unknown_fields)]
pub struct ExhaustSection {
    pub alpha: f64,
    pub half_extent: f64,
    pub grid_n: usize,
    pub radii: Vec<f64>,
    pub bump_height: f64,
    pub bump_width: f64,
    pub solve_tolerance: f64,
}

impl Default for ExhaustSection {
    fn default() -> Self {
        ExhaustSection {
            alpha: 0.5,
            half_extent: 13.0,
            grid_n: 512,
            radii: vec![2.0, 3.0, 4.0, 5.0, 6.0],
            bump_height: 2.0,
            bump_width: 1.0,
            solve_tolerance: 1e-12,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub seed: u64,
    pub kato_fields: usize,
    pub gl_scalar_runs: usize,
    pub gl_vector_runs: usize,
    pub search_restarts: usize,
    pub gl_alpha: f64,
    pub gl_grid_n: usize,
    pub gl_half_extent: f64,
}

impl Default for VerifySection {
    fn default() -> Self {
        VerifySection {
            seed: 0x6C_4672_6163,
            kato_fields: 1000,
            gl_scalar_runs: 50,
            gl_vector_runs: 10,
            search_restarts: 10_000,
            gl_alpha: 1.0,
            gl_grid_n: 256,
            gl_half_extent: 10.0,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(default, deny_unknown_fields)]
pub struct BenchSection {
    pub alpha: f64,
    pub half_extent: f64,
    pub sizes: Vec<usize>,
    /// Repetitions per timing; the median is reported.
    pub reps: usize,
}

impl Default for BenchSection {
    fn default() -> Self {
        BenchSection { alpha: 1.0, half_extent: 10.0, sizes: vec![256, 512, 1024], reps: 15 }
    }
}

/// The full configuration document; exactly one section is populated per run,
/// and `command` records which.
#[derive(Serialize, Deserialize, Clone, Debug, Default)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigDoc {
    pub command: Option<String>,
    pub apply: Option<ApplySection>,
    pub gl: Option<GlSection>,
    pub exhaust: Option<ExhaustSection>,
    pub verify: Option<VerifySection>,
    pub bench: Option<BenchSection>,
}

pub fn load_config(path: Option<&Path>) -> Result<ConfigDoc> {
    match path {
        None => Ok(ConfigDoc::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("cannot read config {}", p.display()))?;
            let doc: ConfigDoc =
                toml::from_str(&text).with_context(|| format!("bad config {}", p.display()))?;
            Ok(doc)
        }
    }
}

/// Write a file atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().context("output path has no parent")?;
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".tmp-{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
    ));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_manifest(out_dir: &Path, doc: &ConfigDoc) -> Result<()> {
    if doc.command.is_none() {
        bail!("manifest must record the command");
    }
    let text = toml::to_string_pretty(doc).context("serialize manifest")?;
    write_atomic(&out_dir.join("manifest.toml"), text.as_bytes())
}
