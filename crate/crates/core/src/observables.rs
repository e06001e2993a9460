//! Hermitian operators as tensor fields, vector fields and quadratic functions.
//!
//! Under the conventions of this crate (`g = Re h`, `ω = Im h`,
//! `f_A = ⟨ψ|Aψ⟩/2`, `Λ = (ω♭)⁻¹`, `G = g⁻¹`) the gradient of `f_A` is `Aψ`
//! and its Hamiltonian field is `−iAψ`, so that
//!
//! ```text
//! {f_A, f_B} = −i f_[A,B]        (f_A, f_B) = f_(AB+BA)
//! ```
//!
//! hold with no extra factors.

use nalgebra::{DMatrix, DVector};

use crate::linalg::{self, CMatrix, C64};
use crate::realified::{apply_complex_structure, to_real, RealifiedVector, TensorTriple};
use crate::{Error, Result};

/// Tolerance on `‖A − A†‖_max` accepted by [`HermitianOperator::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// An n×n complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        linalg::ensure_square(&matrix)?;
        let dev = linalg::hermiticity_deviation(&matrix);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { matrix })
    }

    /// Hermitian part `(M + M†)/2` of an arbitrary square matrix.
    pub fn hermitian_part(m: &CMatrix) -> Result<Self> {
        linalg::ensure_square(m)?;
        Ok(Self {
            matrix: (m + m.adjoint()) * C64::new(0.5, 0.0),
        })
    }

    pub fn pauli(k: usize) -> Self {
        Self {
            matrix: linalg::pauli(k),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: CMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(n, n),
        }
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

    /// Operator norm (largest |eigenvalue|).
    pub fn spectral_norm(&self) -> f64 {
        let (vals, _) = linalg::hermitian_eigen(&self.matrix);
        vals.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    fn check_point(&self, x: &RealifiedVector) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(())
    }
}

/// `T_A`: the real 2n×2n matrix of the complex-linear map `A`.
pub fn tensorize(a: &CMatrix) -> DMatrix<f64> {
    let n = a.nrows();
    let m = a.ncols();
    DMatrix::from_fn(2 * n, 2 * m, |r, c| {
        let z = a[(r % n, c % m)];
        match (r < n, c < m) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// The pair `(X_A, Y_A) = (T_A Δ, T_A J Δ)` evaluated at `x`.
///
/// `X_A` is the gradient field of `f_A`; `Y_A = J X_A` is the field of the
/// one-parameter group `e^{iαA}`.
pub fn operator_fields(
    a: &HermitianOperator,
    x: &RealifiedVector,
) -> Result<(RealifiedVector, RealifiedVector)> {
    a.check_point(x)?;
    let t = tensorize(a.matrix());
    let xa = RealifiedVector::from_coords((&t * x.as_dvector()).as_slice().to_vec())?;
    let jx = apply_complex_structure(x);
    let ya = RealifiedVector::from_coords((&t * jx.as_dvector()).as_slice().to_vec())?;
    Ok((xa, ya))
}

/// `f_A(ψ) = ⟨ψ|Aψ⟩/2` for a (possibly non-Hermitian) matrix `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticFunction {
    operator: CMatrix,
}

/// Both evaluations of a quadratic function: through the complex inner
/// product and through the real tensors `g`, `ω`, `T_A`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticValue {
    pub inner: C64,
    pub tensor: C64,
}

impl QuadraticValue {
    pub fn value(&self) -> C64 {
        self.inner
    }

    pub fn discrepancy(&self) -> f64 {
        (self.inner - self.tensor).norm()
    }
}

impl QuadraticFunction {
    pub fn new(operator: CMatrix) -> Result<Self> {
        linalg::ensure_square(&operator)?;
        Ok(Self { operator })
    }

    pub fn from_hermitian(a: &HermitianOperator) -> Self {
        Self {
            operator: a.matrix().clone(),
        }
    }

    pub fn operator(&self) -> &CMatrix {
        &self.operator
    }

    fn check(&self, x: &RealifiedVector) -> Result<()> {
        if x.dim() != self.operator.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.operator.nrows(),
                got: x.dim(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &RealifiedVector) -> Result<C64> {
        self.check(x)?;
        let psi = x.to_complex();
        Ok(psi.dotc(&(&self.operator * &psi)) * 0.5)
    }

    /// `[g(Δ, T_A Δ) + i ω(Δ, T_A Δ)] / 2`
    pub fn evaluate_tensor(&self, x: &RealifiedVector) -> Result<C64> {
        self.check(x)?;
        let triple = TensorTriple::new(x.dim());
        let ta_x =
            RealifiedVector::from_coords((tensorize(&self.operator) * x.as_dvector()).as_slice().to_vec())?;
        let g = triple.g(x, &ta_x)?;
        let w = triple.omega(x, &ta_x)?;
        Ok(C64::new(g, w) * 0.5)
    }

    /// Differential of `Re f_A` as a covector on ℝ²ⁿ.
    ///
    /// For Hermitian `A` this is exactly `df_A = to_real(Aψ)`; for general
    /// `A` it is the differential of the real part, `to_real(Hψ)` with `H`
    /// the Hermitian part of `A`.
    pub fn differential(&self, x: &RealifiedVector) -> Result<DVector<f64>> {
        self.check(x)?;
        let h = (&self.operator + self.operator.adjoint()) * C64::new(0.5, 0.0);
        let psi = x.to_complex();
        Ok(to_real(&(h * psi)).as_dvector().clone())
    }
}

/// [`QuadraticFunction`] evaluated both ways.
pub fn quadratic_form(a: &CMatrix, psi: &RealifiedVector) -> Result<QuadraticValue> {
    let f = QuadraticFunction::new(a.clone())?;
    Ok(QuadraticValue {
        inner: f.evaluate(psi)?,
        tensor: f.evaluate_tensor(psi)?,
    })
}

/// `f̃_A(ψ) = ⟨ψ|Aψ⟩ / ⟨ψ|ψ⟩`
pub fn expectation(a: &HermitianOperator, psi: &RealifiedVector) -> Result<f64> {
    a.check_point(psi)?;
    let norm2 = psi.norm_squared();
    if norm2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    let z = psi.to_complex();
    Ok(z.dotc(&(a.matrix() * &z)).re / norm2)
}

/// Hamiltonian vector field `X_f = Λ df`, characterised by `ω(X_f, ·) = df`.
pub fn hamiltonian_field(df: &DVector<f64>) -> Result<DVector<f64>> {
    let n = even_half(df.len())?;
    Ok(TensorTriple::new(n).poisson_matrix() * df)
}

/// Gradient vector field `grad f = G df`.
pub fn gradient_field(df: &DVector<f64>) -> Result<DVector<f64>> {
    let n = even_half(df.len())?;
    Ok(TensorTriple::new(n).inverse_metric_matrix() * df)
}

fn even_half(len: usize) -> Result<usize> {
    if !len.is_multiple_of(2) {
        return Err(Error::OddLength(len));
    }
    Ok(len / 2)
}

/// Poisson and Riemann–Jordan brackets of two differentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Brackets {
    pub poisson: f64,
    pub jordan: f64,
}

/// `{f, g} = Λ(df, dg)` and `(f, g) = G(df, dg)` for caller-supplied
/// differentials at `x`. With this sign convention `{q_a, p_a} = 1`.
pub fn bracket_general(df: &[f64], dg: &[f64], x: &RealifiedVector) -> Result<Brackets> {
    let len = x.coords().len();
    for d in [df, dg] {
        if d.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                got: d.len(),
            });
        }
    }
    let triple = TensorTriple::new(x.dim());
    let df = DVector::from_column_slice(df);
    let dg = DVector::from_column_slice(dg);
    let poisson = (df.transpose() * triple.poisson_matrix() * &dg)[(0, 0)];
    let jordan = (df.transpose() * triple.inverse_metric_matrix() * &dg)[(0, 0)];
    Ok(Brackets { poisson, jordan })
}

fn quadratic_brackets(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &RealifiedVector,
) -> Result<Brackets> {
    a.check_point(psi)?;
    b.check_point(psi)?;
    let dfa = QuadraticFunction::from_hermitian(a).differential(psi)?;
    let dfb = QuadraticFunction::from_hermitian(b).differential(psi)?;
    bracket_general(dfa.as_slice(), dfb.as_slice(), psi)
}

/// `{f_A, f_B}(ψ) = Λ(df_A, df_B)`; equals `−i⟨ψ|[A,B]ψ⟩/2`.
pub fn poisson_bracket(a: &HermitianOperator, b: &HermitianOperator, psi: &RealifiedVector) -> Result<f64> {
    Ok(quadratic_brackets(a, b, psi)?.poisson)
}

/// `(f_A, f_B)(ψ) = G(df_A, df_B)`; equals `⟨ψ|(AB+BA)ψ⟩/2`.
pub fn jordan_bracket(a: &HermitianOperator, b: &HermitianOperator, psi: &RealifiedVector) -> Result<f64> {
    Ok(quadratic_brackets(a, b, psi)?.jordan)
}
