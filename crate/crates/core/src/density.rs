//! Density states as a convex body inside u*(n).
//!
//! Functions on density states are `f_A(ρ) = Tr ρA`-type affine maps. Their
//! brackets are obtained by extending the pure-state brackets linearly
//! through convex decompositions, which is well defined because both sides
//! only depend on `ρ`. For two-level systems the ball of Bloch vectors gets
//! the Lie–Poisson tensor of su*(2), a flat metric, a partial complex
//! structure on the spheres `‖x‖ = const`, and a two-form that is a left
//! inverse of the Poisson tensor but is not closed.

use std::io::{self, Write};

use nalgebra::{Matrix3, Vector3};

use crate::linalg::{self, CMatrix, C64, I};
use crate::observables::{jordan_bracket, poisson_bracket, Brackets, HermitianOperator};
use crate::projective::{pure_projector, BlochVector};
use crate::realified::RealifiedVector;
use crate::{Error, Result};

/// Hermiticity and unit-trace tolerance for density states.
pub const STATE_TOL: f64 = 1e-12;
/// Eigenvalues below `-PSD_TOL` are a positivity violation.
pub const PSD_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semi-definite n×n matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    matrix: CMatrix,
}

impl DensityState {
    /// Validating constructor.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        make_density(matrix)
    }

    pub(crate) fn new_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: CMatrix::identity(n, n) / C64::new(n as f64, 0.0),
        }
    }

    /// `(σ₀ + x·σ)/2`
    pub fn from_bloch(x: &BlochVector) -> Result<Self> {
        let r = x.norm();
        if r > 1.0 + STATE_TOL {
            return Err(Error::OutsideBall(r));
        }
        Ok(Self {
            matrix: bloch_matrix(x),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Descending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.matrix).0
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `x_k = Tr(ρ σ_k)`; only for n = 2.
    pub fn bloch_vector(&self) -> Result<BlochVector> {
        bloch_of_matrix(&self.matrix)
    }
}

pub(crate) fn bloch_matrix(x: &BlochVector) -> CMatrix {
    let mut m = linalg::pauli(0);
    for k in 0..3 {
        m += linalg::pauli(k + 1) * C64::new(x[k], 0.0);
    }
    m * C64::new(0.5, 0.0)
}

/// `x_k = Re Tr(M σ_k)` for a 2×2 matrix.
pub fn bloch_of_matrix(m: &CMatrix) -> Result<BlochVector> {
    if m.nrows() != 2 || m.ncols() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: m.nrows(),
        });
    }
    let comp = |k: usize| (m * linalg::pauli(k)).trace().re;
    Ok(BlochVector::new(comp(1), comp(2), comp(3)))
}

/// Validation gate for density states.
pub fn make_density(matrix: CMatrix) -> Result<DensityState> {
    linalg::ensure_square(&matrix)?;
    let dev = linalg::hermiticity_deviation(&matrix);
    if dev > STATE_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let tr = matrix.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
        return Err(Error::InvalidTrace(tr.re));
    }
    let (vals, _) = linalg::hermitian_eigen(&matrix);
    if let Some(&min) = vals.last() {
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
    }
    Ok(DensityState { matrix })
}

/// Convex decomposition `ρ = Σ_k p_k ρ_{ψ_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureDecomposition {
    weights: Vec<f64>,
    states: Vec<RealifiedVector>,
}

impl MixtureDecomposition {
    pub fn new(weights: Vec<f64>, states: Vec<RealifiedVector>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("empty decomposition".into()));
        }
        if weights.len() != states.len() {
            return Err(Error::InvalidWeights(format!(
                "{} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| w.is_nan() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!("negative weight {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        let n = states[0].dim();
        for s in &states {
            if s.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: s.dim(),
                });
            }
            if s.norm_squared() == 0.0 {
                return Err(Error::ZeroVector);
            }
        }
        Ok(Self { weights, states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[RealifiedVector] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    fn normalized(&self) -> impl Iterator<Item = (f64, RealifiedVector)> + '_ {
        self.weights
            .iter()
            .zip(&self.states)
            .map(|(&p, s)| (p, s * (1.0 / s.norm())))
    }
}

/// `ρ = Σ p_k |ψ_k⟩⟨ψ_k| / ⟨ψ_k|ψ_k⟩`
pub fn mix(d: &MixtureDecomposition) -> Result<DensityState> {
    let n = d.dim();
    let mut rho = CMatrix::zeros(n, n);
    for (p, psi) in d.weights.iter().zip(&d.states) {
        rho += pure_projector(psi)?.into_matrix() * C64::new(*p, 0.0);
    }
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > 1e-12 {
        rho /= C64::new(tr, 0.0);
    }
    Ok(DensityState::new_unchecked(rho))
}

/// `Tr ρA`
pub fn expectation_density(rho: &DensityState, a: &HermitianOperator) -> Result<f64> {
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: a.dim(),
        });
    }
    Ok((rho.matrix() * a.matrix()).trace().re)
}

/// Poisson and Jordan brackets extended to density states by averaging the
/// pure-state brackets over a convex decomposition.
///
/// The result equals `(−i Tr ρ[A,B] / 2, Tr ρ(AB+BA) / 2)` and therefore
/// does not depend on the chosen decomposition.
pub fn extended_brackets(
    d: &MixtureDecomposition,
    a: &HermitianOperator,
    b: &HermitianOperator,
) -> Result<Brackets> {
    let mut out = Brackets {
        poisson: 0.0,
        jordan: 0.0,
    };
    for (p, psi) in d.normalized() {
        out.poisson += p * poisson_bracket(a, b, &psi)?;
        out.jordan += p * jordan_bracket(a, b, &psi)?;
    }
    Ok(out)
}

/// `Tr ρᵏ`, with `ζ = ‖x‖²` attached for two-level states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirValue {
    pub order: u32,
    pub value: f64,
    pub zeta: Option<f64>,
}

pub fn casimir(rho: &DensityState, k: u32) -> Result<CasimirValue> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "Casimir order must be >= 2, got {k}"
        )));
    }
    let value = linalg::matrix_power(rho.matrix(), k).trace().re;
    let zeta = if rho.dim() == 2 {
        Some(rho.bloch_vector()?.norm_squared())
    } else {
        None
    };
    Ok(CasimirValue {
        order: k,
        value,
        zeta,
    })
}

fn check_in_ball(x: &BlochVector) -> Result<()> {
    let r = x.norm();
    if r > 1.0 + STATE_TOL {
        return Err(Error::OutsideBall(r));
    }
    Ok(())
}

fn check_qubit_operator(a: &HermitianOperator) -> Result<()> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: a.dim(),
        });
    }
    Ok(())
}

/// Lie–Poisson bracket of `x ↦ Tr ρ(x)A` and `x ↦ Tr ρ(x)B` on the Bloch
/// ball: `−i Tr(ρ(x)[A,B])`.
pub fn lie_poisson_bloch(x: &BlochVector, a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    check_in_ball(x)?;
    check_qubit_operator(a)?;
    check_qubit_operator(b)?;
    let rho = bloch_matrix(x);
    Ok((rho * linalg::commutator(a.matrix(), b.matrix()) * (-I))
        .trace()
        .re)
}

/// `Λ̃_ij = −i Tr(ρ(x)[σ_i, σ_j]) = 2 ε_ijk x_k`.
pub fn lie_poisson_tensor(x: &BlochVector) -> Matrix3<f64> {
    let rho = bloch_matrix(x);
    Matrix3::from_fn(|i, j| {
        let c = linalg::commutator(&linalg::pauli(i + 1), &linalg::pauli(j + 1));
        (&rho * c * (-I)).trace().re
    })
}

/// `G̃_ij = Tr(ρ(x){σ_i, σ_j}) = 2 δ_ij`.
pub fn bloch_metric_tensor(x: &BlochVector) -> Matrix3<f64> {
    let rho = bloch_matrix(x);
    Matrix3::from_fn(|i, j| {
        let c = linalg::anticommutator(&linalg::pauli(i + 1), &linalg::pauli(j + 1));
        (&rho * c).trace().re
    })
}

/// Gradient of `x ↦ Tr ρ(x)A`, i.e. `(Tr σ_k A)/2`.
pub fn bloch_differential(a: &HermitianOperator) -> Result<Vector3<f64>> {
    check_qubit_operator(a)?;
    Ok(Vector3::from_fn(|k, _| {
        (linalg::pauli(k + 1) * a.matrix()).trace().re / 2.0
    }))
}

/// Hamiltonian vector field `ẋ_i = {x_i, Tr ρA}` of `A` on the Bloch ball.
///
/// This is the velocity of the von Neumann flow generated by `A`.
pub fn bloch_hamiltonian_field(x: &BlochVector, a: &HermitianOperator) -> Result<Vector3<f64>> {
    check_in_ball(x)?;
    Ok(lie_poisson_tensor(x) * bloch_differential(a)?)
}

/// `J̃ v = (x / ‖x‖) × v` for `v` tangent to the sphere through `x`.
pub fn partial_complex_structure(x: &BlochVector, v: &Vector3<f64>) -> Result<Vector3<f64>> {
    let r = x.norm();
    if r == 0.0 {
        return Err(Error::Singular);
    }
    let xv = x.as_vector();
    let along = xv.dot(v);
    if along.abs() > 1e-10 * r.max(1.0) * v.norm().max(1.0) {
        return Err(Error::NotTangent(along));
    }
    Ok((xv / r).cross(v))
}

/// `ω = (x₁ dx₂∧dx₃ + x₂ dx₃∧dx₁ + x₃ dx₁∧dx₂) / ‖x‖²` evaluated on `(v, w)`.
pub fn ball_two_form(x: &BlochVector, v: &Vector3<f64>, w: &Vector3<f64>) -> Result<f64> {
    let r2 = x.norm_squared();
    if r2 == 0.0 {
        return Err(Error::Singular);
    }
    Ok(x.as_vector().dot(&v.cross(w)) / r2)
}

/// Kirillov–Kostant–Souriau form on the orbit through `ρ`:
/// `ω_ρ(ξ₁, ξ₂) = i Tr(ρ [ξ₁, ξ₂])` for anti-Hermitian `ξ₁`, `ξ₂`.
pub fn orbit_symplectic_form(rho: &DensityState, xi1: &CMatrix, xi2: &CMatrix) -> Result<f64> {
    for xi in [xi1, xi2] {
        linalg::ensure_square(xi)?;
        if xi.nrows() != rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho.dim(),
                got: xi.nrows(),
            });
        }
        let dev = linalg::anti_hermiticity_deviation(xi);
        if dev > STATE_TOL {
            return Err(Error::NotAntiHermitian(dev));
        }
    }
    Ok((rho.matrix() * linalg::commutator(xi1, xi2) * I).trace().re)
}

/// Integration scheme for [`von_neumann_flow`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowMethod {
    /// `ρ(t) = e^{−iHt} ρ₀ e^{iHt}`
    Exact,
    /// Classical fourth-order Runge–Kutta on `ρ̇ = −i[H, ρ]`.
    Rk4,
}

impl std::str::FromStr for FlowMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "rk4" => Ok(Self::Rk4),
            other => Err(Error::InvalidArgument(format!("unknown flow method '{other}'"))),
        }
    }
}

pub const DEFAULT_DT: f64 = 1e-3;

/// Sampled density-state trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CMatrix>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &CMatrix {
        self.states
            .last()
            .expect("trajectory has at least the initial sample")
    }

    /// CSV with columns `t`, then `re_r_c,im_r_c` for each entry in row-major
    /// order, then `x1,x2,x3` when n = 2.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.states.first().map_or(0, |m| m.nrows());
        let mut header = vec!["t".to_string()];
        for r in 0..n {
            for c in 0..n {
                header.push(format!("re_{r}_{c}"));
                header.push(format!("im_{r}_{c}"));
            }
        }
        if n == 2 {
            header.extend(["x1", "x2", "x3"].map(String::from));
        }
        writeln!(out, "{}", header.join(","))?;
        for (t, m) in self.times.iter().zip(&self.states) {
            let mut row = vec![t.to_string()];
            for r in 0..n {
                for c in 0..n {
                    row.push(m[(r, c)].re.to_string());
                    row.push(m[(r, c)].im.to_string());
                }
            }
            if n == 2 {
                let x = bloch_of_matrix(m).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
                row.extend((0..3).map(|k| x[k].to_string()));
            }
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn von_neumann_rhs(h: &CMatrix, rho: &CMatrix) -> CMatrix {
    linalg::commutator(h, rho) * (-I)
}

/// Evolves `ρ₀` under `ρ̇ = −i[H, ρ]` up to `t_final`.
///
/// The step count is `⌈t_final/dt⌉` with uniform step `t_final/steps ≤ dt`;
/// samples are taken every `max(1, round(0.01/dt))` steps plus the final time.
pub fn von_neumann_flow(
    rho0: &DensityState,
    h: &HermitianOperator,
    t_final: f64,
    dt: f64,
    method: FlowMethod,
) -> Result<Trajectory> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if !t_final.is_finite() || t_final < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "t_final must be non-negative, got {t_final}"
        )));
    }
    if h.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho0.dim(),
            got: h.dim(),
        });
    }
    let steps = ((t_final / dt) - 1e-9).ceil().max(0.0) as usize;
    let step = if steps == 0 { 0.0 } else { t_final / steps as f64 };
    let every = ((0.01 / dt).round() as usize).max(1);

    let mut times = vec![0.0];
    let mut states = vec![rho0.matrix().clone()];
    let hm = h.matrix();
    let mut rho = rho0.matrix().clone();
    let half = C64::new(step / 2.0, 0.0);
    let full = C64::new(step, 0.0);
    let sixth = C64::new(step / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);
    for k in 1..=steps {
        let t = if k == steps { t_final } else { k as f64 * step };
        match method {
            FlowMethod::Exact => {
                if k % every == 0 || k == steps {
                    let u = linalg::unitary_propagator(hm, t);
                    rho = &u * rho0.matrix() * u.adjoint();
                }
            }
            FlowMethod::Rk4 => {
                let k1 = von_neumann_rhs(hm, &rho);
                let k2 = von_neumann_rhs(hm, &(&rho + &k1 * half));
                let k3 = von_neumann_rhs(hm, &(&rho + &k2 * half));
                let k4 = von_neumann_rhs(hm, &(&rho + &k3 * full));
                rho += (k1 + k2 * two + k3 * two + k4) * sixth;
            }
        }
        if k % every == 0 || k == steps {
            times.push(t);
            states.push(rho.clone());
        }
    }
    Ok(Trajectory { times, states })
}

/// Deviation between the spectra of two Hermitian matrices (sorted).
pub fn spectrum_deviation(a: &CMatrix, b: &CMatrix) -> f64 {
    let (va, _) = linalg::hermitian_eigen(a);
    let (vb, _) = linalg::hermitian_eigen(b);
    va.iter().zip(&vb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use crate::realified::to_real;
    use crate::CVector;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn ket(a: C64, b: C64) -> RealifiedVector {
        to_real(&CVector::from_vec(vec![a, b]))
    }

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn make_density_examples() {
        assert!(make_density(CMatrix::identity(3, 3) / re(3.0)).is_ok());
        let bad = CMatrix::from_diagonal(&CVector::from_vec(vec![re(1.2), re(-0.2)]));
        let err = make_density(bad).unwrap_err();
        assert!(matches!(err, Error::NotPositive(_)));
        assert!(err.to_string().contains("positivity violated"));
        let rho = make_density((pauli(0) + pauli(1) * re(0.5)) / re(2.0)).unwrap();
        assert!((rho.purity() - 0.625).abs() < 1e-15);
        assert!(matches!(make_density(pauli(0)), Err(Error::InvalidTrace(_))));
        assert!(matches!(
            make_density(pauli(2) + pauli(0) / re(2.0) + pauli(1) * I),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn mix_examples() {
        let e1 = ket(re(1.0), re(0.0));
        let e2 = ket(re(0.0), re(1.0));
        let d = MixtureDecomposition::new(vec![0.5, 0.5], vec![e1.clone(), e2]).unwrap();
        assert!(linalg::max_abs(&(mix(&d).unwrap().into_matrix() - pauli(0) / re(2.0))) < 1e-15);

        let plus = ket(re(FRAC_1_SQRT_2), re(FRAC_1_SQRT_2));
        let minus = ket(re(FRAC_1_SQRT_2), re(-FRAC_1_SQRT_2));
        let d = MixtureDecomposition::new(vec![0.5, 0.5], vec![plus.clone(), minus]).unwrap();
        assert!(linalg::max_abs(&(mix(&d).unwrap().into_matrix() - pauli(0) / re(2.0))) < 1e-15);

        let single = MixtureDecomposition::new(vec![1.0], vec![plus.clone()]).unwrap();
        let expected = pure_projector(&plus).unwrap();
        assert!(linalg::max_abs(&(mix(&single).unwrap().into_matrix() - expected.into_matrix())) < 1e-15);
    }

    #[test]
    fn mixture_validation() {
        let e1 = ket(re(1.0), re(0.0));
        assert!(MixtureDecomposition::new(vec![1.2, -0.2], vec![e1.clone(), e1.clone()]).is_err());
        assert!(MixtureDecomposition::new(vec![0.5, 0.4], vec![e1.clone(), e1.clone()]).is_err());
        assert!(MixtureDecomposition::new(vec![1.0], vec![]).is_err());
        assert!(MixtureDecomposition::new(vec![], vec![]).is_err());
        assert_eq!(
            MixtureDecomposition::new(vec![1.0], vec![RealifiedVector::zeros(2)]),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn expectation_density_examples() {
        let s3 = HermitianOperator::pauli(3);
        let mixed = DensityState::maximally_mixed(2);
        assert_eq!(expectation_density(&mixed, &s3).unwrap(), 0.0);
        let up = make_density(CMatrix::from_diagonal(&CVector::from_vec(vec![re(1.0), re(0.0)]))).unwrap();
        assert_eq!(expectation_density(&up, &s3).unwrap(), 1.0);
        assert!(expectation_density(&up, &HermitianOperator::identity(3)).is_err());
    }

    #[test]
    fn extended_bracket_examples() {
        let s1 = HermitianOperator::pauli(1);
        let s2 = HermitianOperator::pauli(2);
        let e1 = ket(re(1.0), re(0.0));
        let e2 = ket(re(0.0), re(1.0));
        let mixed = MixtureDecomposition::new(vec![0.5, 0.5], vec![e1.clone(), e2]).unwrap();
        assert!(extended_brackets(&mixed, &s1, &s2).unwrap().poisson.abs() < 1e-15);
        let pure = MixtureDecomposition::new(vec![1.0], vec![e1]).unwrap();
        assert!((extended_brackets(&pure, &s1, &s2).unwrap().poisson - 1.0).abs() < 1e-15);
        assert!((extended_brackets(&pure, &s1, &s1).unwrap().jordan - 1.0).abs() < 1e-15);
    }

    #[test]
    fn casimir_examples() {
        let up = DensityState::from_bloch(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        for k in 2..6 {
            assert!((casimir(&up, k).unwrap().value - 1.0).abs() < 1e-15);
        }
        assert_eq!(casimir(&DensityState::maximally_mixed(2), 2).unwrap().value, 0.5);
        let rho = DensityState::from_bloch(&BlochVector::new(0.0, 0.0, 0.6)).unwrap();
        let c = casimir(&rho, 2).unwrap();
        assert!((c.value - 0.68).abs() < 1e-15);
        assert!((c.value - (1.0 + c.zeta.unwrap()) / 2.0).abs() < 1e-15);
        assert!(casimir(&rho, 1).is_err());
    }

    #[test]
    fn lie_poisson_bloch_examples() {
        let s1 = HermitianOperator::pauli(1);
        let s2 = HermitianOperator::pauli(2);
        let north = BlochVector::new(0.0, 0.0, 1.0);
        assert!((lie_poisson_bloch(&north, &s1, &s2).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(lie_poisson_bloch(&north, &s1, &s1).unwrap(), 0.0);
        assert_eq!(
            lie_poisson_bloch(&BlochVector::new(0.0, 0.0, 0.0), &s1, &s2).unwrap(),
            0.0
        );
        assert!(matches!(
            lie_poisson_bloch(&BlochVector::new(0.0, 0.0, 1.5), &s1, &s2),
            Err(Error::OutsideBall(_))
        ));
    }

    #[test]
    fn trace_tensors_have_expected_form() {
        let x = BlochVector::new(0.3, -0.2, 0.5);
        let lam = lie_poisson_tensor(&x);
        assert!((lam[(0, 1)] - 2.0 * 0.5).abs() < 1e-15);
        assert!((lam[(1, 2)] - 2.0 * 0.3).abs() < 1e-15);
        assert!((lam[(2, 0)] - 2.0 * -0.2).abs() < 1e-15);
        assert!((lam + lam.transpose()).norm() < 1e-15);
        assert!((bloch_metric_tensor(&x) - Matrix3::identity() * 2.0).norm() < 1e-15);
    }

    #[test]
    fn partial_complex_structure_examples() {
        let e1 = Vector3::new(1.0, 0.0, 0.0);
        let out = partial_complex_structure(&BlochVector::new(0.0, 0.0, 1.0), &e1).unwrap();
        assert_eq!(out, Vector3::new(0.0, 1.0, 0.0));
        let out = partial_complex_structure(&BlochVector::new(0.0, 0.0, 0.5), &e1).unwrap();
        assert_eq!(out, Vector3::new(0.0, 1.0, 0.0));
        assert_eq!(
            partial_complex_structure(&BlochVector::new(0.0, 0.0, 0.0), &e1),
            Err(Error::Singular)
        );
        assert!(matches!(
            partial_complex_structure(&BlochVector::new(1.0, 0.0, 0.0), &e1),
            Err(Error::NotTangent(_))
        ));
    }

    #[test]
    fn ball_two_form_examples() {
        let north = BlochVector::new(0.0, 0.0, 1.0);
        let v = Vector3::new(1.0, 0.0, 0.0);
        let w = Vector3::new(0.0, 1.0, 0.0);
        assert_eq!(ball_two_form(&north, &v, &w).unwrap(), 1.0);
        assert_eq!(ball_two_form(&north, &v, &v).unwrap(), 0.0);
        assert_eq!(
            ball_two_form(&BlochVector::new(0.0, 0.0, 0.0), &v, &w),
            Err(Error::Singular)
        );
    }

    #[test]
    fn orbit_form_examples() {
        let up = make_density(CMatrix::from_diagonal(&CVector::from_vec(vec![re(1.0), re(0.0)]))).unwrap();
        let is1 = pauli(1) * I;
        let is2 = pauli(2) * I;
        let is3 = pauli(3) * I;
        assert!((orbit_symplectic_form(&up, &is1, &is2).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(orbit_symplectic_form(&up, &is3, &is2).unwrap(), 0.0);
        let mixed = DensityState::maximally_mixed(2);
        assert_eq!(orbit_symplectic_form(&mixed, &is1, &is2).unwrap(), 0.0);
        assert!(matches!(
            orbit_symplectic_form(&up, &pauli(1), &is2),
            Err(Error::NotAntiHermitian(_))
        ));
    }

    #[test]
    fn flow_rejects_bad_steps() {
        let rho = DensityState::maximally_mixed(2);
        let h = HermitianOperator::pauli(3);
        assert!(von_neumann_flow(&rho, &h, 1.0, 0.0, FlowMethod::Rk4).is_err());
        assert!(von_neumann_flow(&rho, &h, 1.0, -1e-3, FlowMethod::Exact).is_err());
        assert!(von_neumann_flow(&rho, &h, -1.0, 1e-3, FlowMethod::Exact).is_err());
    }

    #[test]
    fn zero_hamiltonian_is_stationary() {
        let rho = DensityState::from_bloch(&BlochVector::new(0.2, 0.4, -0.1)).unwrap();
        let traj = von_neumann_flow(&rho, &HermitianOperator::zeros(2), 0.1, 1e-3, FlowMethod::Rk4).unwrap();
        assert!(traj.states.iter().all(|m| m == rho.matrix()));
        assert_eq!(traj.len(), 11);
    }

    #[test]
    fn precession_exact_and_rk4() {
        let rho = DensityState::from_bloch(&BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        let h = HermitianOperator::pauli(3);
        for method in [FlowMethod::Exact, FlowMethod::Rk4] {
            let traj = von_neumann_flow(&rho, &h, FRAC_PI_2, 1e-3, method).unwrap();
            let x = bloch_of_matrix(traj.final_state()).unwrap();
            assert!(
                (x.as_vector() - Vector3::new(-1.0, 0.0, 0.0)).norm() < 1e-9,
                "{method:?}: {x:?}"
            );
            for (t, m) in traj.times.iter().zip(&traj.states) {
                let x = bloch_of_matrix(m).unwrap();
                let expected = Vector3::new((2.0 * t).cos(), (2.0 * t).sin(), 0.0);
                assert!((x.as_vector() - expected).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn csv_layout() {
        let rho = DensityState::maximally_mixed(2);
        let traj =
            von_neumann_flow(&rho, &HermitianOperator::zeros(2), 0.02, 1e-2, FlowMethod::Exact).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "t,re_0_0,im_0_0,re_0_1,im_0_1,re_1_0,im_1_0,re_1_1,im_1_1,x1,x2,x3"
        );
        assert_eq!(lines.next().unwrap(), "0,0.5,0,0,0,0,0,0.5,0,0,0,0");
        assert_eq!(lines.count(), 2);
    }
}
