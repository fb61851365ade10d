//! Binary field snapshots: a 64-byte header followed by N³ little-endian f64 in x-fastest order.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{LandauError, Result};
use crate::grid::{build_grid, Field};

pub const MAGIC: [u8; 4] = *b"LCLF";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 64;

/// Header fields of a snapshot.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnapshotHeader {
    pub version: u32,
    pub n: u32,
    pub l: f64,
    /// Simulation time of the field.
    pub timestamp: f64,
}

pub fn encode_snapshot(f: &Field, timestamp: f64) -> Vec<u8> {
    let g = f.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * g.len());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.points_per_axis() as u32).to_le_bytes());
    out.extend_from_slice(&g.extent().to_le_bytes());
    out.extend_from_slice(&timestamp.to_le_bytes());
    out.resize(HEADER_LEN, 0);
    for v in f.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<(Field, SnapshotHeader)> {
    if bytes.len() < HEADER_LEN {
        return Err(LandauError::Format(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if bytes[..4] != MAGIC {
        return Err(LandauError::Format("bad magic, expected LCLF".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let header = SnapshotHeader { version: u32_at(4), n: u32_at(8), l: f64_at(12), timestamp: f64_at(20) };
    if header.version != VERSION {
        return Err(LandauError::Format(format!("unsupported version {}", header.version)));
    }
    let n = header.n as usize;
    let len = n
        .checked_mul(n)
        .and_then(|x| x.checked_mul(n))
        .ok_or_else(|| LandauError::Format(format!("N = {n} overflows")))?;
    if bytes.len() != HEADER_LEN + 8 * len {
        return Err(LandauError::Format(format!(
            "expected {} bytes for N = {n}, found {}",
            HEADER_LEN + 8 * len,
            bytes.len()
        )));
    }
    let grid = build_grid(header.l, n).map_err(|e| LandauError::Format(e.to_string()))?;
    let values = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((Field::new(grid, values)?, header))
}

pub fn write_snapshot(path: &Path, f: &Field, timestamp: f64) -> Result<()> {
    let mut file = fs::File::create(path)?;
    file.write_all(&encode_snapshot(f, timestamp))?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<(Field, SnapshotHeader)> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_snapshot(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::reference_maxwellian;

    #[test]
    fn roundtrip() {
        let g = build_grid(6.0, 8).unwrap();
        let f = reference_maxwellian(&g);
        let bytes = encode_snapshot(&f, 0.25);
        assert_eq!(bytes.len(), 64 + 8 * 512);
        assert_eq!(&bytes[..4], b"LCLF");
        let (back, h) = decode_snapshot(&bytes).unwrap();
        assert_eq!(back.values(), f.values());
        assert_eq!(h, SnapshotHeader { version: 1, n: 8, l: 6.0, timestamp: 0.25 });
    }

    #[test]
    fn malformed() {
        let g = build_grid(6.0, 8).unwrap();
        let mut bytes = encode_snapshot(&Field::zeros(g), 0.0);
        assert!(decode_snapshot(&bytes[..40]).is_err());
        assert!(decode_snapshot(&bytes[..bytes.len() - 8]).is_err());
        bytes[0] = b'X';
        assert!(matches!(decode_snapshot(&bytes), Err(LandauError::Format(_))));
    }
}
