//! Binary field snapshots.
//!
//! Layout, all little-endian: a 64-byte header
//!
//! | bytes  | content                       |
//! |--------|-------------------------------|
//! | 0..4   | magic `SGW5`                  |
//! | 4..6   | version (u16)                 |
//! | 6..8   | dimension `d` (u16, 1..=4)    |
//! | 8..24  | extents, 4 x u32 (0 if unused) |
//! | 24..56 | spacings, 4 x f64 (0 if unused) |
//! | 56..64 | reserved                      |
//!
//! followed by the point values as f64 in row-major order.

use std::fs;
use std::path::Path;

use crate::grid::GridField;
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"SGW5";
pub const VERSION: u16 = 1;
pub const HEADER_BYTES: usize = 64;
const MAX_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct Dump {
    pub extents: Vec<usize>,
    pub spacings: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn encode(field: &GridField) -> Result<Vec<u8>> {
    let g = field.geometry();
    let d = g.dim();
    if d > MAX_DIM {
        return Err(Error::InvalidArgument(format!("dumps hold at most {MAX_DIM} dimensions, got {d}")));
    }
    let mut buf = Vec::with_capacity(HEADER_BYTES + 8 * field.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(d as u16).to_le_bytes());
    for k in 0..MAX_DIM {
        let n = if k < d { g.points(k) as u32 } else { 0 };
        buf.extend_from_slice(&n.to_le_bytes());
    }
    for k in 0..MAX_DIM {
        let h = if k < d { g.spacing(k) } else { 0.0 };
        buf.extend_from_slice(&h.to_le_bytes());
    }
    buf.extend_from_slice(&[0u8; 8]);
    debug_assert_eq!(buf.len(), HEADER_BYTES);
    for v in field.as_slice() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    Ok(buf)
}

pub fn decode(bytes: &[u8], path: &str) -> Result<Dump> {
    let fail = |reason: String| Error::Format {
        path: path.to_string(),
        reason,
    };
    if bytes.len() < HEADER_BYTES || &bytes[0..4] != MAGIC {
        return Err(fail("missing SGW5 header".into()));
    }
    let u16_at = |i: usize| u16::from_le_bytes([bytes[i], bytes[i + 1]]);
    let version = u16_at(4);
    if version != VERSION {
        return Err(fail(format!("unsupported version {version}")));
    }
    let d = u16_at(6) as usize;
    if d == 0 || d > MAX_DIM {
        return Err(fail(format!("dimension {d}")));
    }
    let mut extents = Vec::with_capacity(d);
    let mut spacings = Vec::with_capacity(d);
    for k in 0..d {
        let i = 8 + 4 * k;
        extents.push(u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes")) as usize);
        let j = 24 + 8 * k;
        spacings.push(f64::from_le_bytes(bytes[j..j + 8].try_into().expect("8 bytes")));
    }
    let n: usize = extents.iter().product();
    let body = &bytes[HEADER_BYTES..];
    if body.len() != 8 * n {
        return Err(fail(format!("expected {n} values, found {} bytes", body.len())));
    }
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Ok(Dump {
        extents,
        spacings,
        values,
    })
}

pub fn write_dump(path: &Path, field: &GridField) -> Result<()> {
    fs::write(path, encode(field)?)?;
    Ok(())
}

pub fn read_dump(path: &Path) -> Result<Dump> {
    decode(&fs::read(path)?, &path.display().to_string())
}
