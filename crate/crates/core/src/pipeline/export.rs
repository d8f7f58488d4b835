//! CSV rows written by the pipeline. Column layouts are documented in
//! `docs/csv_schema.md`; floats use the shortest representation that
//! parses back to the same value.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitalRow {
    pub l: usize,
    pub n: usize,
    pub energy: f64,
    pub exact_energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub block: String,
    pub state: usize,
    pub energy: f64,
    pub configurations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRow {
    pub block: String,
    pub state: usize,
    pub energy: f64,
    pub diagonal: String,
    #[serde(rename = "K")]
    pub k: Option<i32>,
    #[serde(rename = "T")]
    pub t: Option<u32>,
    #[serde(rename = "A")]
    pub a: Option<i32>,
    pub n1: Option<u32>,
    pub n2: Option<u32>,
    pub label_energy: Option<f64>,
    pub ambiguous: bool,
    pub off_position: bool,
    pub a_consistent: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub block: String,
    pub state: usize,
    pub energy: f64,
    pub pair_normalization: f64,
    pub one_particle_normalization: f64,
    pub rho_nucleus: f64,
    pub diagonal: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialRow {
    pub r: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRow {
    pub block: String,
    pub state: usize,
    pub energy: f64,
    pub shannon: f64,
    pub fisher: f64,
    #[serde(rename = "K")]
    pub k: Option<i32>,
    #[serde(rename = "T")]
    pub t: Option<u32>,
    #[serde(rename = "A")]
    pub a: Option<i32>,
    pub n2: Option<u32>,
    pub fisher_dropped_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementRow {
    pub block: String,
    pub state: usize,
    pub energy: f64,
    #[serde(rename = "S_L")]
    pub linear_entropy: f64,
    #[serde(rename = "S_VN")]
    pub von_neumann_entropy: f64,
    pub slater_rank: usize,
    #[serde(rename = "K")]
    pub k: Option<i32>,
    #[serde(rename = "T")]
    pub t: Option<u32>,
    #[serde(rename = "A")]
    pub a: Option<i32>,
    pub n2: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub k: f64,
    pub transmission: f64,
    pub reflection: f64,
    pub t_re: f64,
    pub t_im: f64,
}

/// Metadata written next to a pair-density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSidecar {
    pub block: String,
    pub state: usize,
    pub energy: f64,
    /// Radii of the matrix rows.
    pub r1: Vec<f64>,
    /// Radii of the matrix columns.
    pub r2: Vec<f64>,
    pub diagonal: String,
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

pub fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| csv_error(path, e))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    r.deserialize().map(|row| row.map_err(|e| csv_error(path, e))).collect()
}

/// Row-major matrix, one CSV line per row, no header.
pub fn write_matrix(path: &Path, cols: usize, values: &[f64]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    for row in values.chunks(cols.max(1)) {
        w.serialize(row).map_err(|e| csv_error(path, e))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    r.deserialize().map(|row| row.map_err(|e| csv_error(path, e))).collect()
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    fs::write(path, text + "\n")?;
    Ok(())
}
