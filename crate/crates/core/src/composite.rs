//! Two-qubit composite systems.
//!
//! Subsystem A is always the left Kronecker factor, so amplitudes are ordered
//! `(z₁w₁, z₁w₂, z₂w₁, z₂w₂)`.

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};

use crate::density::{bloch_matrix, DensityState};
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::projective::BlochVector;
use crate::realified::TensorTriple;
use crate::{Error, Result};

/// `z ⊗ w`
pub fn tensor_state(z: &CVector, w: &CVector) -> Result<CVector> {
    for v in [z, w] {
        if v.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: v.len(),
            });
        }
    }
    Ok(z.kronecker(w))
}

fn check_unit(v: &Vector3<f64>) -> Result<()> {
    let n = v.norm();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnit(n));
    }
    Ok(())
}

/// `ρ_A(n) ⊗ ρ_B(m)` for unit Bloch vectors.
pub fn separable_pure(n: &Vector3<f64>, m: &Vector3<f64>) -> Result<DensityState> {
    check_unit(n)?;
    check_unit(m)?;
    let a = bloch_matrix(&BlochVector::from_vector(*n));
    let b = bloch_matrix(&BlochVector::from_vector(*m));
    Ok(DensityState::new_unchecked(linalg::kron(&a, &b)))
}

/// Coefficients of `ρ` in the two-qubit Pauli basis:
///
/// ```text
/// ρ = ¼ (1 + p_j σ^j⊗1 + q_k 1⊗σ^k + r_jk σ^j⊗σ^k)
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliDecomposition {
    pub p: Vector3<f64>,
    pub q: Vector3<f64>,
    pub r: Matrix3<f64>,
}

impl PauliDecomposition {
    /// The Hermitian, unit-trace matrix with these coefficients. Positivity
    /// is not implied; pass the result through [`DensityState::new`].
    pub fn reconstruct(&self) -> CMatrix {
        let id = linalg::pauli(0);
        let mut m = linalg::kron(&id, &id);
        for j in 0..3 {
            let sj = linalg::pauli(j + 1);
            m += linalg::kron(&sj, &id) * C64::new(self.p[j], 0.0);
            m += linalg::kron(&id, &sj) * C64::new(self.q[j], 0.0);
            for k in 0..3 {
                m += linalg::kron(&sj, &linalg::pauli(k + 1)) * C64::new(self.r[(j, k)], 0.0);
            }
        }
        m * C64::new(0.25, 0.0)
    }

    /// `Σp² + Σq² + Σr²`; equals `4 Tr ρ² − 1`.
    pub fn squared_norm(&self) -> f64 {
        self.p.norm_squared() + self.q.norm_squared() + self.r.norm_squared()
    }
}

fn check_two_qubit(rho: &DensityState) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: rho.dim(),
        });
    }
    Ok(())
}

/// `p_j = Tr ρ σ^j⊗1`, `q_k = Tr ρ 1⊗σ^k`, `r_jk = Tr ρ σ^j⊗σ^k`.
pub fn pauli_decompose(rho: &DensityState) -> Result<PauliDecomposition> {
    check_two_qubit(rho)?;
    let m = rho.matrix();
    let id = linalg::pauli(0);
    let proj = |op: CMatrix| (m * op).trace().re;
    let p = Vector3::from_fn(|j, _| proj(linalg::kron(&linalg::pauli(j + 1), &id)));
    let q = Vector3::from_fn(|k, _| proj(linalg::kron(&id, &linalg::pauli(k + 1))));
    let r = Matrix3::from_fn(|j, k| proj(linalg::kron(&linalg::pauli(j + 1), &linalg::pauli(k + 1))));
    Ok(PauliDecomposition { p, q, r })
}

/// Diagonals of the Cartan basis `λ₀ = 1⊗1, λ₁ = σ₃⊗1, λ₂ = 1⊗σ₃, λ₃ = σ₃⊗σ₃`.
pub const CARTAN_DIAGONALS: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0, -1.0],
    [1.0, -1.0, 1.0, -1.0],
    [1.0, -1.0, -1.0, 1.0],
];

/// `ρ = U · ¼(λ₀ + p₁λ₁ + p₂λ₂ + p₃λ₃) · U†`
#[derive(Debug, Clone, PartialEq)]
pub struct CartanForm {
    pub unitary: CMatrix,
    pub p: Vector3<f64>,
}

impl CartanForm {
    /// Diagonal entries of `¼(λ₀ + p·λ)`.
    pub fn diagonal(&self) -> [f64; 4] {
        let mut d = [0.0; 4];
        for (k, dk) in d.iter_mut().enumerate() {
            *dk = (CARTAN_DIAGONALS[0][k]
                + (0..3)
                    .map(|i| self.p[i] * CARTAN_DIAGONALS[i + 1][k])
                    .sum::<f64>())
                / 4.0;
        }
        d
    }

    pub fn reconstruct(&self) -> CMatrix {
        let d = CVector::from_iterator(4, self.diagonal().iter().map(|&x| C64::new(x, 0.0)));
        &self.unitary * CMatrix::from_diagonal(&d) * self.unitary.adjoint()
    }
}

/// Spectral decomposition of `ρ` rewritten in the Cartan basis.
///
/// Eigenvalues are taken in descending order; see
/// [`linalg::hermitian_eigen`] for how `U` is made deterministic.
pub fn cartan_canonical_form(rho: &DensityState) -> Result<CartanForm> {
    check_two_qubit(rho)?;
    let (vals, unitary) = linalg::hermitian_eigen(rho.matrix());
    // 4 d_k = Σ_i c_i λ_i[k]
    let system = Matrix4::from_fn(|k, i| CARTAN_DIAGONALS[i][k]);
    let rhs = Vector4::from_fn(|k, _| 4.0 * vals[k]);
    let coeffs = system
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidArgument("Cartan system is singular".into()))?;
    Ok(CartanForm {
        unitary,
        p: Vector3::new(coeffs[1], coeffs[2], coeffs[3]),
    })
}

/// Factor `u_m` of a monomial `u_m v_n` on ℂ²⊕ℂ²: a coordinate `z_m` of the
/// first factor (or its conjugate) times a coordinate `w_n` of the second.
/// Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monomial {
    pub z_index: usize,
    pub z_conj: bool,
    pub w_index: usize,
    pub w_conj: bool,
}

impl Monomial {
    pub fn new(z_index: usize, w_index: usize) -> Self {
        Self {
            z_index,
            z_conj: false,
            w_index,
            w_conj: false,
        }
    }

    pub fn conj_z(mut self) -> Self {
        self.z_conj = !self.z_conj;
        self
    }

    pub fn conj_w(mut self) -> Self {
        self.w_conj = !self.w_conj;
        self
    }

    fn validate(&self) -> Result<()> {
        for idx in [self.z_index, self.w_index] {
            if !(1..=2).contains(&idx) {
                return Err(Error::InvalidArgument(format!("index {idx} out of range 1..=2")));
            }
        }
        Ok(())
    }
}

/// Both sides of the product rule
/// `{z_m w_n, z_r w_s} = {z_m, z_r} w_n w_s + z_m z_r {w_n, w_s}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductPoisson {
    /// Full Poisson tensor on the 8 real coordinates of ℂ²⊕ℂ².
    pub lhs: C64,
    /// Factor brackets combined by the product rule.
    pub rhs: C64,
}

impl ProductPoisson {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

fn coordinate(v: &CVector, index: usize, conj: bool) -> C64 {
    let c = v[index - 1];
    if conj {
        c.conj()
    } else {
        c
    }
}

/// Complex gradient of `z_a` (or `z̄_a`) in the realified chart of a space of
/// complex dimension `n`, with the coordinate sitting at complex slot `slot`.
fn coordinate_gradient(n: usize, slot: usize, conj: bool) -> CVector {
    let mut g = CVector::zeros(2 * n);
    g[slot] = C64::new(1.0, 0.0);
    g[n + slot] = C64::new(0.0, if conj { -1.0 } else { 1.0 });
    g
}

fn complex_bracket(triple: &TensorTriple, df: &CVector, dg: &CVector) -> C64 {
    let lam = triple.poisson_matrix().map(|x| C64::new(x, 0.0));
    (df.transpose() * lam * dg)[(0, 0)]
}

/// Evaluates the Poisson bracket of two monomials at `(z, w)` and returns
/// the full-tensor value together with the product-rule value.
pub fn product_poisson(left: Monomial, right: Monomial, z: &CVector, w: &CVector) -> Result<ProductPoisson> {
    left.validate()?;
    right.validate()?;
    tensor_state(z, w)?;

    // Complex slots of ℂ²⊕ℂ²: z₁, z₂, w₁, w₂.
    let full = TensorTriple::new(4);
    let grad = |m: &Monomial| {
        let u = coordinate(z, m.z_index, m.z_conj);
        let v = coordinate(w, m.w_index, m.w_conj);
        coordinate_gradient(4, m.z_index - 1, m.z_conj) * v
            + coordinate_gradient(4, 1 + m.w_index, m.w_conj) * u
    };
    let lhs = complex_bracket(&full, &grad(&left), &grad(&right));

    let factor = TensorTriple::new(2);
    let zz = complex_bracket(
        &factor,
        &coordinate_gradient(2, left.z_index - 1, left.z_conj),
        &coordinate_gradient(2, right.z_index - 1, right.z_conj),
    );
    let ww = complex_bracket(
        &factor,
        &coordinate_gradient(2, left.w_index - 1, left.w_conj),
        &coordinate_gradient(2, right.w_index - 1, right.w_conj),
    );
    let rhs = zz * coordinate(w, left.w_index, left.w_conj) * coordinate(w, right.w_index, right.w_conj)
        + coordinate(z, left.z_index, left.z_conj) * coordinate(z, right.z_index, right.z_conj) * ww;
    Ok(ProductPoisson { lhs, rhs })
}
