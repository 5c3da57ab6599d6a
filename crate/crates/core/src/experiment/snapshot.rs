//! Binary vorticity snapshots.
//!
//! Layout, all little-endian: magic `SVF1`, format version `u16`, `N` as
//! `u32`, time `f64`, then `N_G * N_G` grid values of the vorticity as `f64`
//! in row-major order (`x1` index outer), `N_G = 2N`.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::{self, GridSpec, PhysicalField, SpectralField};

pub const MAGIC: &[u8; 4] = b"SVF1";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 4 + 2 + 4 + 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub vorticity: PhysicalField,
}

impl Snapshot {
    pub fn from_spectral(omega: &SpectralField, time: f64) -> Self {
        Snapshot {
            time,
            vorticity: spectral::to_physical(omega),
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.vorticity.grid()
    }

    /// Spectral vorticity with the mean mode removed; `u` follows by
    /// Biot–Savart.
    pub fn to_spectral(&self) -> SpectralField {
        let mut w = spectral::to_spectral(&self.vorticity);
        w.set(0, 0, Default::default());
        w
    }

    pub fn encode(&self) -> Vec<u8> {
        let values = self.vorticity.values();
        let mut out = Vec::with_capacity(HEADER_LEN + 8 * values.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.grid().n_modes() as u32).to_le_bytes());
        out.extend_from_slice(&self.time.to_le_bytes());
        for v in values {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    /// Decodes a snapshot; `path` only labels errors.
    pub fn decode(bytes: &[u8], path: &Path) -> Result<Self> {
        let corrupt = |reason: String| Error::CorruptSnapshot {
            path: path.to_path_buf(),
            reason,
        };
        if bytes.len() < HEADER_LEN {
            return Err(corrupt(format!("{} bytes is shorter than the header", bytes.len())));
        }
        if &bytes[..4] != MAGIC {
            return Err(corrupt("bad magic".into()));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != VERSION {
            return Err(corrupt(format!("unsupported version {version}")));
        }
        let n = u32::from_le_bytes(bytes[6..10].try_into().expect("4 bytes")) as usize;
        let time = f64::from_le_bytes(bytes[10..18].try_into().expect("8 bytes"));
        let grid = GridSpec::new(n).map_err(|e| corrupt(e.to_string()))?;
        let m = grid.n_grid();
        let expected = 8 * m * m;
        let payload = &bytes[HEADER_LEN..];
        if payload.len() != expected {
            return Err(corrupt(format!(
                "payload is {} bytes, expected {expected} for N = {n}",
                payload.len()
            )));
        }
        if !time.is_finite() {
            return Err(corrupt("non-finite time".into()));
        }
        let values = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        let vorticity = PhysicalField::new(grid, values).map_err(|e| corrupt(e.to_string()))?;
        Ok(Snapshot { time, vorticity })
    }

    /// Writes to a temporary sibling and renames it into place.
    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.encode())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::decode(&bytes, path)
    }
}

/// Writes `bytes` to `path` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("not a file path: {}", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}
