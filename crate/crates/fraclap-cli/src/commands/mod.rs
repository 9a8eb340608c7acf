pub mod apply;
pub mod bench;
pub mod exhaust;
pub mod gl;
pub mod verify;

use crate::CliError;
use anyhow::Context;
use fraclap_core::Field;
use std::path::Path;

/// Column-text writer that goes through the atomic path.
pub fn write_text(out_dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    crate::config::write_atomic(&out_dir.join(name), text.as_bytes()).map_err(CliError::from)
}

pub fn write_field_atomic(out_dir: &Path, name: &str, field: &Field) -> Result<(), CliError> {
    let mut bytes = Vec::new();
    fraclap_core::io::write_field(field, &mut bytes)
        .with_context(|| format!("serialize {name}"))?;
    crate::config::write_atomic(&out_dir.join(name), &bytes).map_err(CliError::from)
}

/// Smooth compactly supported bump used by the absorption defaults.
pub fn bump(x: f64, width: f64, height: f64) -> f64 {
    let t = x / width;
    if t.abs() < 1.0 {
        height * (1.0 - 1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}
