//! JSON system descriptions.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sets::{SetError, SetSpec};
use crate::spectral::{decompose, DeclaredBlock, SpectralDecomposition, SpectralError};
use crate::system::{LinearSystem, SystemError};

pub const DEFAULT_K_MAX: usize = 15;
pub const DEFAULT_ALPHA_TOL: f64 = 1e-4;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{name}: {msg}")]
    Matrix { name: &'static str, msg: String },
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_hi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackParams {
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defender: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
}

fn default_k_max() -> usize {
    DEFAULT_K_MAX
}

fn default_alpha_tol() -> f64 {
    DEFAULT_ALPHA_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Rows of `A`.
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    /// Rows of `B`.
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    #[serde(rename = "X")]
    pub x: SetSpec,
    #[serde(rename = "U")]
    pub u: SetSpec,
    #[serde(rename = "Wbar")]
    pub wbar: SetSpec,
    /// Declared Jordan structure, needed for defective matrices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jordan: Option<Vec<DeclaredBlock>>,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_alpha_tol")]
    pub alpha_tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<AttackParams>,
}

fn matrix(name: &'static str, rows: &[Vec<f64>]) -> Result<DMatrix<f64>, ConfigError> {
    let err = |msg: String| ConfigError::Matrix { name, msg };
    let r = rows.len();
    if r == 0 {
        return Err(err("no rows".into()));
    }
    let c = rows[0].len();
    if c == 0 {
        return Err(err("empty row".into()));
    }
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
        return Err(err(format!("row {i} has {} entries, row 0 has {c}", row.len())));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

impl AnalysisConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Validated system. Dimensions must agree and `(A, B)` be reachable.
    pub fn system(&self) -> Result<LinearSystem, ConfigError> {
        let a = matrix("A", &self.a)?;
        let b = matrix("B", &self.b)?;
        if !a.is_square() {
            return Err(ConfigError::Matrix { name: "A", msg: format!("must be square, got {}x{}", a.nrows(), a.ncols()) });
        }
        if b.nrows() != a.nrows() {
            return Err(ConfigError::Matrix { name: "B", msg: format!("has {} rows, A has {}", b.nrows(), a.nrows()) });
        }
        Ok(LinearSystem::new(a, b, self.x.build()?, self.u.build()?, self.wbar.build()?)?)
    }

    pub fn spectral(&self, sys: &LinearSystem) -> Result<SpectralDecomposition, ConfigError> {
        Ok(decompose(&sys.a, self.jordan.as_deref())?)
    }
}
