//! Raw sample files: magic "SATK", version, N and sample count, then the
//! sorted configurations as little-endian f64 rows.

use std::io::{Read, Write};

use crate::error::{config, Result};

const MAGIC: &[u8; 4] = b"SATK";
pub const FORMAT_VERSION: u32 = 1;

pub fn write_samples<W: Write>(mut w: W, n: usize, rows: &[Vec<f64>]) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(n as u64).to_le_bytes())?;
    w.write_all(&(rows.len() as u64).to_le_bytes())?;
    for row in rows {
        if row.len() != n {
            return config(format!("sample of length {} in a file of width {n}", row.len()));
        }
        for x in row {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_samples<R: Read>(mut r: R) -> Result<(usize, Vec<Vec<f64>>)> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return config("not a SATK sample file");
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    let version = u32::from_le_bytes(b4);
    if version != FORMAT_VERSION {
        return config(format!("unsupported sample file version {version}"));
    }
    let mut b8 = [0u8; 8];
    r.read_exact(&mut b8)?;
    let n = u64::from_le_bytes(b8) as usize;
    r.read_exact(&mut b8)?;
    let count = u64::from_le_bytes(b8) as usize;
    let mut rows = Vec::with_capacity(count);
    for _ in 0..count {
        let mut row = Vec::with_capacity(n);
        for _ in 0..n {
            r.read_exact(&mut b8)?;
            row.push(f64::from_le_bytes(b8));
        }
        rows.push(row);
    }
    Ok((n, rows))
}
