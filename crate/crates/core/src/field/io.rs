//! Sample files: CSV (one row per y, one column per x, no header) and a
//! little-endian binary layout with a self-describing header
//! (u64 nx, u64 ny, f64 ly, u64 model tag, then ny * nx f64 values, y-major).

use crate::error::{Error, Result};
use ndarray::Array2;
use std::io::{Read, Write};

/// Model tags of the binary header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelTag {
    Boussinesq = 0,
    FullEuler = 1,
    NoShear = 2,
}

impl ModelTag {
    fn from_u64(v: u64) -> Result<Self> {
        match v {
            0 => Ok(ModelTag::Boussinesq),
            1 => Ok(ModelTag::FullEuler),
            2 => Ok(ModelTag::NoShear),
            other => Err(Error::Format(format!("unknown model tag {other}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryHeader {
    pub nx: usize,
    pub ny: usize,
    pub ly: f64,
    pub tag: ModelTag,
}

pub fn write_csv<W: Write>(w: W, values: &Array2<f64>) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for row in values.rows() {
        // Display for f64 is the shortest exact representation
        out.write_record(row.iter().map(|v| v.to_string())).map_err(|e| Error::Io(e.to_string()))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> Result<Array2<f64>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(r);
    let mut data = Vec::new();
    let mut width = None;
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Format(e.to_string()))?;
        if *width.get_or_insert(rec.len()) != rec.len() {
            return Err(Error::Format(format!("row {line} has {} columns, expected {}", rec.len(), width.unwrap())));
        }
        for field in rec.iter() {
            data.push(field.parse::<f64>().map_err(|e| Error::Format(format!("row {line}: {field:?}: {e}")))?);
        }
    }
    let nx = width.unwrap_or(0);
    let ny = if nx == 0 { 0 } else { data.len() / nx };
    Array2::from_shape_vec((ny, nx), data).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_binary<W: Write>(mut w: W, header: &BinaryHeader, values: &Array2<f64>) -> Result<()> {
    if values.dim() != (header.ny, header.nx) {
        return Err(Error::Format(format!(
            "values are {:?} but the header says (ny, nx) = ({}, {})",
            values.dim(),
            header.ny,
            header.nx
        )));
    }
    w.write_all(&(header.nx as u64).to_le_bytes())?;
    w.write_all(&(header.ny as u64).to_le_bytes())?;
    w.write_all(&header.ly.to_le_bytes())?;
    w.write_all(&(header.tag as u64).to_le_bytes())?;
    for v in values.iter() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<(BinaryHeader, Array2<f64>)> {
    let mut word = [0u8; 8];
    let mut next = |r: &mut R| -> Result<[u8; 8]> {
        r.read_exact(&mut word).map_err(|e| Error::Format(format!("truncated file: {e}")))?;
        Ok(word)
    };
    let nx = u64::from_le_bytes(next(&mut r)?) as usize;
    let ny = u64::from_le_bytes(next(&mut r)?) as usize;
    let ly = f64::from_le_bytes(next(&mut r)?);
    let tag = ModelTag::from_u64(u64::from_le_bytes(next(&mut r)?))?;
    let count = nx.checked_mul(ny).filter(|&c| c <= 1 << 32).ok_or_else(|| Error::Format("grid too large".into()))?;
    let mut bytes = vec![0u8; count * 8];
    r.read_exact(&mut bytes).map_err(|e| Error::Format(format!("expected {count} values: {e}")))?;
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(Error::Format("trailing bytes after the sample block".into()));
    }
    let data = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    let values = Array2::from_shape_vec((ny, nx), data).map_err(|e| Error::Format(e.to_string()))?;
    Ok((BinaryHeader { nx, ny, ly, tag }, values))
}
