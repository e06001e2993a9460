//! Random draws used by the property suites.
//!
//! Everything is parameterised over a caller-supplied [`Rng`], so trials are
//! reproducible from a seed.

use nalgebra::Vector3;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::density::DensityState;
use crate::linalg::{self, CMatrix, CVector, C64};
use crate::observables::HermitianOperator;
use crate::realified::{to_real, RealifiedVector};

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(normal(rng), normal(rng))
}

/// Gaussian vector in ℂⁿ (entries with independent N(0,1) parts).
pub fn complex_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| complex_normal(rng))
}

/// Unit-norm Gaussian vector in ℂⁿ.
pub fn unit_complex_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    let v = complex_vector(rng, n);
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

pub fn realified_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RealifiedVector {
    to_real(&complex_vector(rng, n))
}

pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex_normal(rng))
}

/// Hermitian part of a Ginibre matrix.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianOperator {
    HermitianOperator::hermitian_part(&complex_matrix(rng, n)).expect("square by construction")
}

/// Hermitian operator rescaled to spectral norm `norm`.
pub fn hermitian_with_norm<R: Rng + ?Sized>(rng: &mut R, n: usize, norm: f64) -> HermitianOperator {
    let h = hermitian(rng, n);
    let s = h.spectral_norm();
    if s == 0.0 {
        return h;
    }
    HermitianOperator::new(h.into_matrix() * C64::new(norm / s, 0.0)).expect("scaling keeps hermiticity")
}

/// Unitary `exp(−iH)` for a random Hermitian `H` with spectral norm π.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let h = hermitian_with_norm(rng, n, std::f64::consts::PI);
    linalg::unitary_propagator(h.matrix(), 1.0)
}

/// `AA† / Tr(AA†)` for a Ginibre `A` (full rank almost surely).
pub fn density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityState {
    let a = complex_matrix(rng, n);
    let m = &a * a.adjoint();
    let tr = m.trace();
    let mut m = m / tr;
    // Remove rounding asymmetry so the state passes the strict gate.
    m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    DensityState::new(m).expect("Wishart draws are valid density states")
}

/// Density state of rank at most `rank`.
pub fn density_of_rank<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> DensityState {
    let a = CMatrix::from_fn(n, rank, |_, _| complex_normal(rng));
    let m = &a * a.adjoint();
    let tr = m.trace();
    let m = m / tr;
    DensityState::new((&m + m.adjoint()) * C64::new(0.5, 0.0)).expect("valid by construction")
}

/// Uniform point on the unit sphere S².
pub fn unit_vector3<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    let v = Vector3::new(normal(rng), normal(rng), normal(rng));
    v / v.norm()
}

/// Point of the open unit ball with radius drawn uniformly in `(0, 1)`.
pub fn ball_vector3<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    unit_vector3(rng) * rng.random_range(0.05..0.95)
}

/// Unit vector orthogonal to `x`.
pub fn tangent_vector3<R: Rng + ?Sized>(rng: &mut R, x: &Vector3<f64>) -> Vector3<f64> {
    let u = x / x.norm();
    let v = Vector3::new(normal(rng), normal(rng), normal(rng));
    let t = v - u * u.dot(&v);
    t / t.norm()
}
