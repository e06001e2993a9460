//! Realification of ℂⁿ and the tensor triple `(g, ω, J)`.
//!
//! A point of ℂⁿ with amplitudes `z_a = q_a + i p_a` is stored as the real
//! vector `(q₁, …, qₙ, p₁, …, pₙ)`. In this chart `g` is the identity,
//! `ω(x, y) = Σ_a (q_a p'_a − p_a q'_a)` and `J` is the block matrix
//! `[[0, −I], [I, 0]]`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use crate::linalg::{CVector, C64};
use crate::{Error, Result};

/// A point (or tangent vector) of the real 2n-manifold underlying ℂⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct RealifiedVector {
    coords: DVector<f64>,
}

impl RealifiedVector {
    /// Wraps raw coordinates; the length must be even.
    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        if !coords.len().is_multiple_of(2) {
            return Err(Error::OddLength(coords.len()));
        }
        Ok(Self {
            coords: DVector::from_vec(coords),
        })
    }

    pub(crate) fn from_dvector(coords: DVector<f64>) -> Self {
        debug_assert!(coords.len().is_multiple_of(2));
        Self { coords }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            coords: DVector::zeros(2 * n),
        }
    }

    /// Unit vector along coordinate `k` of ℝ²ⁿ.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut coords = DVector::zeros(2 * n);
        coords[k] = 1.0;
        Self { coords }
    }

    /// Complex dimension n.
    pub fn dim(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn coords(&self) -> &[f64] {
        self.coords.as_slice()
    }

    pub fn as_dvector(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn q(&self) -> &[f64] {
        &self.coords.as_slice()[..self.dim()]
    }

    pub fn p(&self) -> &[f64] {
        &self.coords.as_slice()[self.dim()..]
    }

    pub fn to_complex(&self) -> CVector {
        let n = self.dim();
        CVector::from_fn(n, |a, _| C64::new(self.coords[a], self.coords[n + a]))
    }

    /// Euclidean norm, equal to `‖ψ‖` of the complex vector.
    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn norm_squared(&self) -> f64 {
        self.coords.norm_squared()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coords.dot(&other.coords)
    }

    pub(crate) fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.coords.len() != other.coords.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coords.len(),
                got: other.coords.len(),
            });
        }
        Ok(())
    }
}

impl Add for &RealifiedVector {
    type Output = RealifiedVector;
    fn add(self, rhs: Self) -> RealifiedVector {
        RealifiedVector::from_dvector(&self.coords + &rhs.coords)
    }
}

impl Sub for &RealifiedVector {
    type Output = RealifiedVector;
    fn sub(self, rhs: Self) -> RealifiedVector {
        RealifiedVector::from_dvector(&self.coords - &rhs.coords)
    }
}

impl Mul<f64> for &RealifiedVector {
    type Output = RealifiedVector;
    fn mul(self, rhs: f64) -> RealifiedVector {
        RealifiedVector::from_dvector(&self.coords * rhs)
    }
}

impl Neg for &RealifiedVector {
    type Output = RealifiedVector;
    fn neg(self) -> RealifiedVector {
        RealifiedVector::from_dvector(-&self.coords)
    }
}

/// `(Re z₁, …, Re zₙ, Im z₁, …, Im zₙ)`
pub fn to_real(z: &CVector) -> RealifiedVector {
    let n = z.len();
    let coords = DVector::from_fn(2 * n, |k, _| if k < n { z[k].re } else { z[k - n].im });
    RealifiedVector { coords }
}

/// Inverse of [`to_real`] on raw coordinates.
pub fn to_complex(coords: &[f64]) -> Result<CVector> {
    Ok(RealifiedVector::from_coords(coords.to_vec())?.to_complex())
}

/// `J x`, i.e. multiplication by `i` seen on real coordinates.
pub fn apply_complex_structure(x: &RealifiedVector) -> RealifiedVector {
    let n = x.dim();
    let coords = DVector::from_fn(
        2 * n,
        |k, _| {
            if k < n {
                -x.coords[n + k]
            } else {
                x.coords[k - n]
            }
        },
    );
    RealifiedVector { coords }
}

/// Real and imaginary parts of the Hermitian product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianParts {
    pub g: f64,
    pub omega: f64,
    pub h: C64,
}

/// `h(x, y) = ⟨x|y⟩ = g(x, y) + i ω(x, y)`.
pub fn hermitian_parts(x: &RealifiedVector, y: &RealifiedVector) -> Result<HermitianParts> {
    x.check_same_dim(y)?;
    let h = x.to_complex().dotc(&y.to_complex());
    Ok(HermitianParts {
        g: h.re,
        omega: h.im,
        h,
    })
}

/// Values of the dilation field `Δ` and of `Γ = J(Δ)` at `x`.
pub fn canonical_fields(x: &RealifiedVector) -> (RealifiedVector, RealifiedVector) {
    (x.clone(), apply_complex_structure(x))
}

/// Default relative step for [`homogeneity_degree`].
pub const HOMOGENEITY_STEP: f64 = 1e-5;

/// Estimates `k` in `Δ·f = k f` at `x` by a central difference along `Δ`.
///
/// Since `Δ(x) = x`, moving along `Δ` is a dilation `x ↦ (1 + t) x`, so the
/// step is automatically relative to `‖x‖`.
pub fn homogeneity_degree<F>(f: F, x: &RealifiedVector, step: f64) -> Result<f64>
where
    F: Fn(&RealifiedVector) -> f64,
{
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {step}"
        )));
    }
    let fx = f(x);
    if !fx.is_finite() {
        return Err(Error::InvalidArgument("function is not finite at x".into()));
    }
    if fx == 0.0 {
        return Err(Error::UndefinedDegree);
    }
    let forward = f(&(x * (1.0 + step)));
    let backward = f(&(x * (1.0 - step)));
    Ok((forward - backward) / (2.0 * step) / fx)
}

/// The tensor triple `(g, ω, J)` on ℝ²ⁿ induced by the standard Hermitian
/// product.
///
/// All tensors are applied implicitly. The explicit matrices exist for tests
/// and for the bracket constructions. Matrix conventions: `g(x, y) = xᵀ g y`,
/// `ω(x, y) = xᵀ Ω y`, and [`TensorTriple::poisson_matrix`] is the inverse of
/// the flat map `v ↦ ω(v, ·)`, so that `ω(Λ α, ·) = α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorTriple {
    dim: usize,
}

impl TensorTriple {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check(&self, x: &RealifiedVector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.dim,
                got: x.coords().len(),
            });
        }
        Ok(())
    }

    pub fn g(&self, x: &RealifiedVector, y: &RealifiedVector) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.dot(y))
    }

    pub fn omega(&self, x: &RealifiedVector, y: &RealifiedVector) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        let n = self.dim;
        Ok((0..n)
            .map(|a| x.coords[a] * y.coords[n + a] - x.coords[n + a] * y.coords[a])
            .sum())
    }

    pub fn j(&self, x: &RealifiedVector) -> Result<RealifiedVector> {
        self.check(x)?;
        Ok(apply_complex_structure(x))
    }

    pub fn g_matrix(&self) -> DMatrix<f64> {
        DMatrix::identity(2 * self.dim, 2 * self.dim)
    }

    pub fn omega_matrix(&self) -> DMatrix<f64> {
        let n = self.dim;
        DMatrix::from_fn(2 * n, 2 * n, |r, c| {
            if r < n && c == r + n {
                1.0
            } else if r >= n && c + n == r {
                -1.0
            } else {
                0.0
            }
        })
    }

    pub fn j_matrix(&self) -> DMatrix<f64> {
        let n = self.dim;
        DMatrix::from_fn(2 * n, 2 * n, |r, c| {
            if r < n && c == r + n {
                -1.0
            } else if r >= n && c + n == r {
                1.0
            } else {
                0.0
            }
        })
    }

    /// `G = g⁻¹`.
    pub fn inverse_metric_matrix(&self) -> DMatrix<f64> {
        self.g_matrix()
            .try_inverse()
            .expect("Euclidean metric is invertible")
    }

    /// `Λ`, the inverse of `ω♭ : v ↦ ω(v, ·)` (matrix `Ωᵀ`).
    pub fn poisson_matrix(&self) -> DMatrix<f64> {
        self.omega_matrix()
            .transpose()
            .try_inverse()
            .expect("symplectic form is nondegenerate")
    }
}
