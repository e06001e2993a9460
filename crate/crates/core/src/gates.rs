//! Linear canonical transformations written as generating functions.
//!
//! A unitary `U` mapping old amplitudes `ψ` to new amplitudes `φ = Uψ` is
//! encoded by the quadratic generating function `S(φ*, ψ) = i φ†Uψ`. The
//! canonical relations `∂S/∂ψ^k = i ψ*_k` and `∂S/∂φ*_k = i φ_k` hold exactly
//! on the graph of the transformation. Circuits compose by multiplying the
//! extracted unitaries.

use std::str::FromStr;

use crate::linalg::{self, CMatrix, CVector, C64, I};
use crate::{Error, Result};

/// `S(φ*, ψ) = i φ†Uψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingFunction {
    unitary: CMatrix,
}

impl GeneratingFunction {
    pub fn new(unitary: CMatrix) -> Result<Self> {
        linalg::ensure_square(&unitary)?;
        Ok(Self { unitary })
    }

    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    /// The extracted linear map `U`.
    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    /// `‖U†U − 1‖_max`
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim();
        linalg::max_abs(&(self.unitary.adjoint() * &self.unitary - CMatrix::identity(n, n)))
    }

    fn check(&self, v: &CVector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// `S(φ*, ψ)`
    pub fn evaluate(&self, phi: &CVector, psi: &CVector) -> Result<C64> {
        self.check(phi)?;
        self.check(psi)?;
        Ok(phi.dotc(&(&self.unitary * psi)) * I)
    }

    /// `∂S/∂ψ^j = i Σ_k φ*_k U^k_j`
    pub fn d_psi(&self, phi: &CVector) -> Result<CVector> {
        self.check(phi)?;
        let phi_conj = phi.map(|z| z.conj());
        Ok((self.unitary.transpose() * phi_conj) * I)
    }

    /// `∂S/∂φ*_k = i Σ_j U^k_j ψ^j`
    pub fn d_phi_conj(&self, psi: &CVector) -> Result<CVector> {
        self.check(psi)?;
        Ok((&self.unitary * psi) * I)
    }

    /// `φ = Uψ`
    pub fn apply(&self, psi: &CVector) -> Result<CVector> {
        self.check(psi)?;
        Ok(&self.unitary * psi)
    }
}

/// Gates with a closed-form generating function on ℂ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuiltinGate {
    Hadamard,
    Phase,
    PhaseShift(f64),
}

impl BuiltinGate {
    /// Resolves a gate name; `theta` is required for, and only for,
    /// `phase_shift`.
    pub fn from_name(name: &str, theta: Option<f64>) -> Result<Self> {
        match (name, theta) {
            ("hadamard", None) => Ok(Self::Hadamard),
            ("phase", None) => Ok(Self::Phase),
            ("phase_shift", Some(t)) => Ok(Self::PhaseShift(t)),
            ("phase_shift", None) => Err(Error::InvalidArgument("phase_shift requires theta".into())),
            ("hadamard" | "phase", Some(_)) => Err(Error::InvalidArgument(format!("{name} takes no theta"))),
            (other, _) => Err(Error::InvalidArgument(format!("unknown gate '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Hadamard => "hadamard",
            Self::Phase => "phase",
            Self::PhaseShift(_) => "phase_shift",
        }
    }
}

impl FromStr for BuiltinGate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_name(s, None)
    }
}

/// Unitary read off the gate's generating function:
/// hadamard `(1/√2)[[1,1],[1,−1]]`, phase `diag(1,−1)`, phase shift `diag(1, e^{iθ})`.
pub fn builtin_generating(gate: BuiltinGate) -> GeneratingFunction {
    let o = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    let entries = match gate {
        BuiltinGate::Hadamard => {
            let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            [s, s, s, -s]
        }
        BuiltinGate::Phase => [o, z, z, -o],
        BuiltinGate::PhaseShift(theta) => [o, z, z, C64::from_polar(1.0, theta)],
    };
    GeneratingFunction {
        unitary: CMatrix::from_row_slice(2, 2, &entries),
    }
}

/// Norm of the residuals of both canonical relations at `(ψ, φ)`.
///
/// Zero iff `U†φ = ψ` and `Uψ = φ`, i.e. `φ = Uψ` for unitary `U`.
pub fn canonical_residual(s: &GeneratingFunction, psi: &CVector, phi: &CVector) -> Result<f64> {
    let r_psi = s.d_psi(phi)? - psi.map(|z| z.conj()) * I;
    let r_phi = s.d_phi_conj(psi)? - phi * I;
    Ok((r_psi.norm_squared() + r_phi.norm_squared()).sqrt())
}

/// `U_k ⋯ U₂ U₁ ψ₀` for gates listed in application order.
pub fn apply_circuit(psi0: &CVector, gates: &[GeneratingFunction]) -> Result<CVector> {
    gates.iter().try_fold(psi0.clone(), |psi, g| g.apply(&psi))
}

/// Product `U_k ⋯ U₁` of a circuit, or the identity for an empty one.
pub fn circuit_unitary(dim: usize, gates: &[GeneratingFunction]) -> Result<CMatrix> {
    gates.iter().try_fold(CMatrix::identity(dim, dim), |acc, g| {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: g.dim(),
            });
        }
        Ok(g.unitary() * acc)
    })
}
