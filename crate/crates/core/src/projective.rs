//! From vectors to rays: momentum map, connection one-form, horizontal
//! splitting, Fubini–Study tensor and the two-level Bloch map.

use std::ops::Index;

use nalgebra::Vector3;

use crate::density::DensityState;
use crate::linalg::{self, CMatrix, C64, I};
use crate::realified::{to_real, RealifiedVector};
use crate::{Error, Result};

/// Element of u*(n) identified with an anti-Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiHermitianMoment {
    matrix: CMatrix,
}

impl AntiHermitianMoment {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        linalg::ensure_square(&matrix)?;
        let dev = linalg::anti_hermiticity_deviation(&matrix);
        if dev > 1e-12 {
            return Err(Error::NotAntiHermitian(dev));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Coadjoint action `U F U†`.
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        Self {
            matrix: u * &self.matrix * u.adjoint(),
        }
    }
}

/// Point of the Bloch ball, `ρ = (σ₀ + x·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(Vector3<f64>);

impl BlochVector {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self(Vector3::new(x1, x2, x3))
    }

    pub fn from_vector(v: Vector3<f64>) -> Self {
        Self(v)
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.norm_squared()
    }
}

impl Index<usize> for BlochVector {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

fn nonzero(psi: &RealifiedVector) -> Result<f64> {
    let n2 = psi.norm_squared();
    if n2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(n2)
}

/// `F̂(ψ) = −i |ψ⟩⟨ψ|`, unnormalized.
pub fn momentum_map(psi: &RealifiedVector) -> AntiHermitianMoment {
    let z = psi.to_complex();
    AntiHermitianMoment {
        matrix: linalg::outer(&z, &z) * (-I),
    }
}

/// `ρ_ψ = |ψ⟩⟨ψ| / ⟨ψ|ψ⟩`
pub fn pure_projector(psi: &RealifiedVector) -> Result<DensityState> {
    let n2 = nonzero(psi)?;
    let z = psi.to_complex();
    Ok(DensityState::new_unchecked(
        linalg::outer(&z, &z) / C64::new(n2, 0.0),
    ))
}

/// `θ(v) = ⟨ψ|v⟩ / ⟨ψ|ψ⟩`
pub fn connection_form(psi: &RealifiedVector, v: &RealifiedVector) -> Result<C64> {
    psi.check_same_dim(v)?;
    let n2 = nonzero(psi)?;
    Ok(psi.to_complex().dotc(&v.to_complex()) / n2)
}

/// Removes the component of `v` along `span_ℝ{ψ, Jψ}`: `v − θ(v) ψ`.
pub fn horizontal_projection(psi: &RealifiedVector, v: &RealifiedVector) -> Result<RealifiedVector> {
    let theta = connection_form(psi, v)?;
    let z = psi.to_complex();
    Ok(to_real(&(v.to_complex() - z * theta)))
}

/// Fubini–Study Hermitian tensor at `ψ`:
/// `⟨v|w⟩/⟨ψ|ψ⟩ − ⟨v|ψ⟩⟨ψ|w⟩/⟨ψ|ψ⟩²`.
///
/// The real part is `g_FS(v, w)`, the imaginary part `ω_FS(v, w)`.
pub fn fubini_study(psi: &RealifiedVector, v: &RealifiedVector, w: &RealifiedVector) -> Result<C64> {
    psi.check_same_dim(v)?;
    psi.check_same_dim(w)?;
    let n2 = nonzero(psi)?;
    let (z, zv, zw) = (psi.to_complex(), v.to_complex(), w.to_complex());
    Ok(zv.dotc(&zw) / n2 - zv.dotc(&z) * z.dotc(&zw) / (n2 * n2))
}

/// Two-level Bloch map
///
/// ```text
/// x₁ = (z₁z₂* + z₁*z₂)/‖z‖²,  x₂ = i(z₁z₂* − z₁*z₂)/‖z‖²,  x₃ = (|z₁|² − |z₂|²)/‖z‖²
/// ```
///
/// With this orientation `|ψ⟩⟨ψ|/‖ψ‖² = (σ₀ + x·σ)/2`, e.g. `(1, i)/√2 ↦ (0, 1, 0)`.
pub fn bloch_map(psi: &RealifiedVector) -> Result<BlochVector> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: psi.dim(),
        });
    }
    let n2 = nonzero(psi)?;
    let z = psi.to_complex();
    let (z1, z2) = (z[0], z[1]);
    let x1 = (z1 * z2.conj() + z1.conj() * z2).re / n2;
    let x2 = (I * (z1 * z2.conj() - z1.conj() * z2)).re / n2;
    let x3 = (z1.norm_sqr() - z2.norm_sqr()) / n2;
    Ok(BlochVector::new(x1, x2, x3))
}
