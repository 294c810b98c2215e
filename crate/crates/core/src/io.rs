//! Field serialization.
//!
//! * CSV: one grid row per line, `n_x` comma-separated values, row-major.
//! * Binary: 16-byte header (`b"RDF1"`, `u32` n_x, `u32` component count,
//!   `u32` reserved = 0), then every component as row-major little-endian
//!   `f64`, components back to back.

use std::io::{BufRead, Read, Write};

use crate::error::{Error, Result};
use crate::grid::{Field, GridSpec, SystemField};

pub const MAGIC: &[u8; 4] = b"RDF1";
pub const HEADER_LEN: usize = 16;

pub fn write_field_csv<W: Write>(field: &Field, mut out: W) -> Result<()> {
    let n = field.spec().n_x();
    let mut line = String::new();
    for row in field.as_slice().chunks(n) {
        line.clear();
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&v.to_string());
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn read_field_csv<R: BufRead>(spec: GridSpec, input: R) -> Result<Field> {
    let n = spec.n_x();
    let mut data = Vec::with_capacity(spec.len());
    for (row, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let before = data.len();
        for tok in line.split(',') {
            let v: f64 = tok
                .trim()
                .parse()
                .map_err(|e| Error::Format(format!("row {row}: {e}")))?;
            data.push(v);
        }
        if data.len() - before != n {
            return Err(Error::Format(format!(
                "row {row} has {} columns, expected {n}",
                data.len() - before
            )));
        }
    }
    Field::from_vec(spec, data)
}

pub fn write_system_binary<W: Write>(field: &SystemField, mut out: W) -> Result<()> {
    let n = field.spec().n_x() as u32;
    let mut header = [0u8; HEADER_LEN];
    header[..4].copy_from_slice(MAGIC);
    header[4..8].copy_from_slice(&n.to_le_bytes());
    header[8..12].copy_from_slice(&(field.n_components() as u32).to_le_bytes());
    out.write_all(&header)?;
    let mut buf = Vec::with_capacity(field.spec().len() * 8);
    for c in field.components() {
        buf.clear();
        for v in c.as_slice() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        out.write_all(&buf)?;
    }
    Ok(())
}

/// Reads a binary snapshot. The header carries only `n_x`, so the caller
/// supplies the grid geometry; its `n_x` must match.
pub fn read_system_binary<R: Read>(spec: GridSpec, mut input: R) -> Result<SystemField> {
    let mut header = [0u8; HEADER_LEN];
    input.read_exact(&mut header)?;
    if &header[..4] != MAGIC {
        return Err(Error::Format("bad magic, expected RDF1".into()));
    }
    let word = |k: usize| u32::from_le_bytes(header[k..k + 4].try_into().unwrap()) as usize;
    let (n, n_comp) = (word(4), word(8));
    if n != spec.n_x() {
        return Err(Error::Format(format!(
            "file has n_x = {n}, grid has n_x = {}",
            spec.n_x()
        )));
    }
    if n_comp == 0 {
        return Err(Error::Format("zero components".into()));
    }
    let mut bytes = vec![0u8; spec.len() * 8];
    let mut comps = Vec::with_capacity(n_comp);
    for _ in 0..n_comp {
        input.read_exact(&mut bytes)?;
        let data = bytes
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
            .collect();
        comps.push(Field::from_vec(spec, data)?);
    }
    SystemField::new(comps)
}
