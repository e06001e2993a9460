//! JSON codecs for state, Hamiltonian and circuit files.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major lists of
//! rows. Pure states use the `vector` key, density states and Hamiltonians
//! the `matrix` key:
//!
//! ```json
//! {"dim": 2, "vector": [[1.0, 0.0], [0.0, 0.0]]}
//! {"dim": 2, "matrix": [[[0.5, 0.0], [0.5, 0.0]], [[0.5, 0.0], [0.5, 0.0]]]}
//! ```

use std::fs;
use std::path::Path;

use geoquant::gates::builtin_generating;
use geoquant::projective::pure_projector;
use geoquant::realified::to_real;
use geoquant::{BuiltinGate, CMatrix, CVector, DensityState, GeneratingFunction, HermitianOperator, C64};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

/// Decoded payload of a [`StateFile`].
#[derive(Debug, Clone, PartialEq)]
pub enum StateData {
    Vector(CVector),
    Matrix(CMatrix),
}

fn pair(z: &C64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(p: &[f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

impl StateFile {
    pub fn from_vector(v: &CVector) -> Self {
        Self {
            dim: v.len(),
            vector: Some(v.iter().map(pair).collect()),
            matrix: None,
        }
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            dim: m.nrows(),
            vector: None,
            matrix: Some(
                (0..m.nrows())
                    .map(|r| (0..m.ncols()).map(|c| pair(&m[(r, c)])).collect())
                    .collect(),
            ),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Domain(format!("malformed state file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state files always serialize")
    }

    /// Checks shape consistency and returns the decoded vector or matrix.
    pub fn data(&self) -> Result<StateData, CliError> {
        let n = self.dim;
        if n == 0 {
            return Err(CliError::Domain("dimension must be at least 1".into()));
        }
        let non_finite = || CliError::Domain("entries must be finite".into());
        match (&self.vector, &self.matrix) {
            (Some(v), None) => {
                if v.len() != n {
                    return Err(CliError::Domain(format!(
                        "vector has {} entries, dim is {n}",
                        v.len()
                    )));
                }
                if v.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(non_finite());
                }
                Ok(StateData::Vector(CVector::from_iterator(
                    n,
                    v.iter().map(complex),
                )))
            }
            (None, Some(m)) => {
                if m.len() != n || m.iter().any(|row| row.len() != n) {
                    return Err(CliError::Domain(format!("matrix is not {n}x{n}")));
                }
                if m.iter().flatten().flatten().any(|x| !x.is_finite()) {
                    return Err(non_finite());
                }
                Ok(StateData::Matrix(CMatrix::from_fn(n, n, |r, c| {
                    complex(&m[r][c])
                })))
            }
            _ => Err(CliError::Domain(
                "state file needs exactly one of \"vector\" or \"matrix\"".into(),
            )),
        }
    }

    /// Density state described by the file; pure states are normalized.
    pub fn density(&self) -> Result<DensityState, CliError> {
        match self.data()? {
            StateData::Vector(v) => Ok(pure_projector(&to_real(&v))?),
            StateData::Matrix(m) => Ok(DensityState::new(m)?),
        }
    }

    /// Hermitian operator stored under `matrix`.
    pub fn hermitian(&self) -> Result<HermitianOperator, CliError> {
        match self.data()? {
            StateData::Matrix(m) => Ok(HermitianOperator::new(m)?),
            StateData::Vector(_) => Err(CliError::Domain("operator file needs a \"matrix\" entry".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitEntry {
    pub gate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
}

pub fn parse_circuit(text: &str) -> Result<Vec<GeneratingFunction>, CliError> {
    let entries: Vec<CircuitEntry> =
        serde_json::from_str(text).map_err(|e| CliError::Domain(format!("malformed circuit file: {e}")))?;
    entries
        .iter()
        .map(|e| Ok(builtin_generating(BuiltinGate::from_name(&e.gate, e.theta)?)))
        .collect()
}

pub fn load_circuit(path: &Path) -> Result<Vec<GeneratingFunction>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_circuit(&text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}
