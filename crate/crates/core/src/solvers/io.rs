//! CSV rows `x_1, …, x_n, t, u, method, error_estimate` and the binary grid
//! layout: magic `WAVE`, then little-endian `u32` version, `u32` n,
//! `u32` points per axis, `f64` half-width, `f64` t, and the values.

use std::io::{Read, Write};

use super::point::SolutionSample;
use super::spectral::{PeriodicGrid, SolutionGrid};
use crate::error::{Result, WaveError};
use crate::geometry::Dimension;

pub const MAGIC: &[u8; 4] = b"WAVE";
pub const FORMAT_VERSION: u32 = 1;

pub fn csv_header(n: usize) -> String {
    let mut cols: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    cols.extend(["t", "u", "method", "error_estimate"].map(String::from));
    cols.join(",")
}

pub fn csv_row(s: &SolutionSample) -> String {
    let mut cols: Vec<String> = s.x.iter().map(|v| format!("{v:.17e}")).collect();
    cols.push(format!("{:.17e}", s.t));
    cols.push(format!("{:.17e}", s.u));
    cols.push(s.method.name().to_string());
    cols.push(format!("{:.6e}", s.error_estimate));
    cols.join(",")
}

pub fn write_samples_csv<W: Write>(mut w: W, samples: &[SolutionSample]) -> Result<()> {
    let n = samples.first().map_or(0, |s| s.x.len());
    writeln!(w, "{}", csv_header(n))?;
    for s in samples {
        if s.x.len() != n {
            return Err(WaveError::Usage("samples of mixed dimension".into()));
        }
        writeln!(w, "{}", csv_row(s))?;
    }
    Ok(())
}

pub fn write_grid_binary<W: Write>(mut w: W, g: &SolutionGrid) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&FORMAT_VERSION.to_le_bytes())?;
    w.write_all(&(g.grid.dim.n() as u32).to_le_bytes())?;
    w.write_all(&(g.grid.points as u32).to_le_bytes())?;
    w.write_all(&g.grid.half_width.to_le_bytes())?;
    w.write_all(&g.t.to_le_bytes())?;
    for v in &g.values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

/// Inverse of [`write_grid_binary`]; the error estimate is not stored.
pub fn read_grid_binary<R: Read>(mut r: R) -> Result<SolutionGrid> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(WaveError::Io("not a WAVE grid file".into()));
    }
    let version = read_u32(&mut r)?;
    if version != FORMAT_VERSION {
        return Err(WaveError::Io(format!("unsupported grid format version {version}")));
    }
    let n = read_u32(&mut r)? as usize;
    let points = read_u32(&mut r)? as usize;
    let half_width = read_f64(&mut r)?;
    let t = read_f64(&mut r)?;
    let grid = PeriodicGrid::new(Dimension::new(n)?, points, half_width)?;
    let values = (0..grid.len()).map(|_| read_f64(&mut r)).collect::<Result<Vec<_>>>()?;
    Ok(SolutionGrid {
        grid,
        t,
        values,
        error_estimate: 0.0,
    })
}
