//! Bit-exact binary field files.
//!
//! Layout: 8-byte magic `FRACFLD1`, then little-endian `dim: u32`,
//! `points_per_axis: u32`, `components: u32`, `topology: u8` (0 periodic,
//! 1 truncated), `half_extent: f64`, followed by `node_count * components`
//! f64 values in node order, component-major within a node. Matrices use the
//! same conventions under the `FRACMAT1` magic.

use crate::error::{FracError, Result};
use crate::field::Field;
use crate::grid::{Grid, Topology};
use std::io::{Read, Write};
use std::path::Path;

pub const FIELD_MAGIC: &[u8; 8] = b"FRACFLD1";
pub const MATRIX_MAGIC: &[u8; 8] = b"FRACMAT1";

pub fn write_field(field: &Field, mut w: impl Write) -> Result<()> {
    w.write_all(FIELD_MAGIC)?;
    let g = field.grid();
    w.write_all(&(g.dim() as u32).to_le_bytes())?;
    w.write_all(&(g.points_per_axis() as u32).to_le_bytes())?;
    w.write_all(&(field.components() as u32).to_le_bytes())?;
    let topo: u8 = match g.topology() {
        Topology::Periodic => 0,
        Topology::Truncated => 1,
    };
    w.write_all(&[topo])?;
    w.write_all(&g.half_extent().to_le_bytes())?;
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_field(mut r: impl Read) -> Result<Field> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != FIELD_MAGIC {
        return Err(FracError::Format(format!(
            "bad magic {:?}, expected FRACFLD1",
            String::from_utf8_lossy(&magic)
        )));
    }
    let dim = read_u32(&mut r)? as usize;
    let points = read_u32(&mut r)? as usize;
    let components = read_u32(&mut r)? as usize;
    let mut topo = [0u8; 1];
    r.read_exact(&mut topo)?;
    let topology = match topo[0] {
        0 => Topology::Periodic,
        1 => Topology::Truncated,
        t => return Err(FracError::Format(format!("unknown topology tag {t}"))),
    };
    let half_extent = read_f64(&mut r)?;
    let grid = Grid::new(dim, half_extent, points, topology)?;
    let count = grid
        .node_count()
        .checked_mul(components)
        .ok_or_else(|| FracError::Format("value count overflow".into()))?;
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        values.push(read_f64(&mut r)?);
    }
    Field::from_values(grid, components, values)
}

pub fn write_field_file(field: &Field, path: impl AsRef<Path>) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut buf = std::io::BufWriter::new(f);
    write_field(field, &mut buf)?;
    buf.flush()?;
    Ok(())
}

pub fn read_field_file(path: impl AsRef<Path>) -> Result<Field> {
    let f = std::fs::File::open(path)?;
    read_field(std::io::BufReader::new(f))
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}
