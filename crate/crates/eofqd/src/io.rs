//! Density-matrix JSON files and atomic output.
//!
//! ```json
//! {"m": 2, "n": 2, "re": [[0.5, 0, 0, 0.5], ...], "im": [[0, 0, 0, 0], ...], "label": "bell"}
//! ```
//!
//! Rows are row-major with the A index major (`i = a n + b`). `im` may be
//! omitted for real matrices; `label` is optional.

use std::fs;
use std::io::Write;
use std::path::Path;

use eofqd_core::linalg::CMatrix;
use eofqd_core::state::BipartiteDensityMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityFile {
    pub m: usize,
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub im: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl DensityFile {
    pub fn from_state(rho: &BipartiteDensityMatrix) -> Self {
        let (m, n) = rho.dims();
        let d = m * n;
        let mat = rho.matrix();
        let part =
            |f: fn(&Complex64) -> f64| (0..d).map(|i| mat.row(i).iter().map(f).collect()).collect();
        Self {
            m,
            n,
            re: part(|z| z.re),
            im: part(|z| z.im),
            label: rho.label().map(str::to_owned),
        }
    }

    /// Validates shape and every density-matrix invariant.
    pub fn into_state(self) -> Result<BipartiteDensityMatrix> {
        let d = self
            .m
            .checked_mul(self.n)
            .ok_or_else(|| CliError::Validation("dimensions overflow".into()))?;
        let square = |rows: &[Vec<f64>], name: &str| -> Result<()> {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(CliError::Validation(format!(
                    "`{name}` must be a {d}x{d} array"
                )));
            }
            Ok(())
        };
        square(&self.re, "re")?;
        if !self.im.is_empty() {
            square(&self.im, "im")?;
        }
        let data = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| Complex64::new(self.re[i][j], self.im.get(i).map_or(0.0, |r| r[j])))
            .collect();
        let rho = BipartiteDensityMatrix::new(CMatrix::from_row_major(data)?, self.m, self.n)?;
        Ok(match self.label {
            Some(label) => rho.with_label(label),
            None => rho,
        })
    }
}

pub fn parse_state(text: &str) -> Result<BipartiteDensityMatrix> {
    let file: DensityFile = serde_json::from_str(text)
        .map_err(|e| CliError::Validation(format!("malformed state file: {e}")))?;
    file.into_state()
}

pub fn read_state(path: impl AsRef<Path>) -> Result<BipartiteDensityMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_state(&text)
}

pub fn state_json(rho: &BipartiteDensityMatrix) -> String {
    serde_json::to_string_pretty(&DensityFile::from_state(rho)).expect("density file serializes")
}

pub fn write_state(path: impl AsRef<Path>, rho: &BipartiteDensityMatrix) -> Result<()> {
    let mut text = state_json(rho);
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// Writes to a temporary file in the target directory, then renames it into place.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
