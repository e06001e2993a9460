//! `evolve`, `bloch` and `gate`.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use geoquant::composite::pauli_decompose;
use geoquant::density::{casimir, von_neumann_flow};
use geoquant::gates::circuit_unitary;
use geoquant::projective::bloch_map;
use geoquant::realified::to_real;
use geoquant::{CMatrix, DensityState, FlowMethod, C64};
use serde::Serialize;
use serde_json::json;

use crate::io::{load_circuit, StateData, StateFile};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CasimirEntry {
    pub order: u32,
    pub value: f64,
}

/// What `evolve` prints after writing the trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolveSummary {
    pub samples: usize,
    pub final_purity: f64,
    pub casimirs: Vec<CasimirEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_bloch: Option<[f64; 3]>,
}

pub struct EvolveArgs<'a> {
    pub state: &'a Path,
    pub hamiltonian: &'a Path,
    pub t_final: f64,
    pub dt: f64,
    pub method: FlowMethod,
    pub out: &'a Path,
}

pub fn evolve(args: &EvolveArgs<'_>) -> Result<EvolveSummary, CliError> {
    let rho = StateFile::load(args.state)?.density()?;
    let h = StateFile::load(args.hamiltonian)?.hermitian()?;
    let trajectory = von_neumann_flow(&rho, &h, args.t_final, args.dt, args.method)?;

    let file = File::create(args.out).map_err(|e| CliError::io(args.out, e))?;
    trajectory
        .write_csv(BufWriter::new(file))
        .map_err(|e| CliError::io(args.out, e))?;

    let last = trajectory.final_state();
    let last = DensityState::new((last + last.adjoint()) * C64::new(0.5, 0.0))
        .map_err(|e| CliError::Domain(format!("final state drifted out of the density body: {e}")))?;
    let casimirs = (2..=4)
        .map(|k| {
            casimir(&last, k).map(|c| CasimirEntry {
                order: c.order,
                value: c.value,
            })
        })
        .collect::<geoquant::Result<Vec<_>>>()?;
    let (zeta, final_bloch) = if last.dim() == 2 {
        let x = last.bloch_vector()?;
        (Some(x.norm_squared()), Some(x.to_array()))
    } else {
        (None, None)
    };
    Ok(EvolveSummary {
        samples: trajectory.len(),
        final_purity: last.purity(),
        casimirs,
        zeta,
        final_bloch,
    })
}

/// Bloch vector for one qubit, Pauli coefficients for two.
pub fn bloch(state: &Path) -> Result<serde_json::Value, CliError> {
    let file = StateFile::load(state)?;
    match (file.dim, file.data()?) {
        (2, StateData::Vector(v)) => Ok(json!({ "x": bloch_map(&to_real(&v))?.to_array() })),
        (2, StateData::Matrix(_)) => Ok(json!({ "x": file.density()?.bloch_vector()?.to_array() })),
        (4, _) => {
            let d = pauli_decompose(&file.density()?)?;
            let rows: Vec<[f64; 3]> = (0..3).map(|j| [d.r[(j, 0)], d.r[(j, 1)], d.r[(j, 2)]]).collect();
            Ok(json!({ "p": [d.p.x, d.p.y, d.p.z], "q": [d.q.x, d.q.y, d.q.z], "r": rows }))
        }
        (n, _) => Err(CliError::Domain(format!(
            "unsupported dimension {n}: bloch needs a qubit (2) or a two-qubit (4) state"
        ))),
    }
}

/// Applies a circuit to a pure state (`Uψ`) or a density state (`UρU†`).
pub fn gate(circuit: &Path, state: &Path) -> Result<StateFile, CliError> {
    let gates = load_circuit(circuit)?;
    let file = StateFile::load(state)?;
    let u: CMatrix = circuit_unitary(file.dim, &gates)?;
    match file.data()? {
        StateData::Vector(v) => Ok(StateFile::from_vector(&(&u * v))),
        StateData::Matrix(m) => {
            let rho = DensityState::new(m)?;
            Ok(StateFile::from_matrix(&(&u * rho.matrix() * u.adjoint())))
        }
    }
}
