//! Small complex linear-algebra helpers shared by the geometric modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// Pauli matrix `σ_k` for `k ∈ {0,1,2,3}` (σ₀ is the identity).
pub fn pauli(k: usize) -> CMatrix {
    let entries = match k {
        0 => [ONE, ZERO, ZERO, ONE],
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, -I, I, ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("pauli index {k} out of range"),
    };
    CMatrix::from_row_slice(2, 2, &entries)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Kronecker product with `a` as the left (outer) factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `|u⟩⟨v|`
pub fn outer(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

/// `⟨u|v⟩`, antilinear in `u`.
pub fn inner(u: &CVector, v: &CVector) -> C64 {
    u.dotc(v)
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare(m.nrows(), m.ncols()));
    }
    Ok(m.nrows())
}

/// Entrywise deviation of `m` from hermiticity.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Entrywise deviation of `m` from anti-hermiticity.
pub fn anti_hermiticity_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m + m.adjoint()))
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues come back in descending order; each eigenvector's phase is
/// fixed so that its first entry with modulus above `1e-12` is real and
/// positive. Eigenvectors sharing an eigenvalue (to `1e-10`) are ordered
/// lexicographically by their (real, imaginary) components.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let sym = m.clone().symmetric_eigen();
    let mut pairs: Vec<(f64, CVector)> = (0..n)
        .map(|k| {
            let mut v: CVector = sym.eigenvectors.column(k).into_owned();
            if let Some(lead) = v.iter().find(|z| z.norm() > 1e-12).copied() {
                let phase = lead.conj() / lead.norm();
                v *= phase;
            }
            (sym.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|(la, va), (lb, vb)| {
        if (la - lb).abs() > 1e-10 {
            return lb.partial_cmp(la).unwrap();
        }
        for (x, y) in va.iter().zip(vb.iter()) {
            let ord =
                y.re.partial_cmp(&x.re)
                    .unwrap()
                    .then(y.im.partial_cmp(&x.im).unwrap());
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    });
    let values = pairs.iter().map(|(l, _)| *l).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (k, (_, v)) in pairs.iter().enumerate() {
        vectors.set_column(k, v);
    }
    (values, vectors)
}

/// `exp(-i H t)` for Hermitian `H`, through its spectral decomposition.
pub fn unitary_propagator(h: &CMatrix, t: f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(h);
    let phases = CVector::from_iterator(values.len(), values.iter().map(|&l| C64::from_polar(1.0, -l * t)));
    let scaled = CMatrix::from_fn(vectors.nrows(), vectors.ncols(), |r, c| {
        vectors[(r, c)] * phases[c]
    });
    scaled * vectors.adjoint()
}

/// Integer power of a square matrix by repeated squaring.
pub fn matrix_power(m: &CMatrix, mut k: u32) -> CMatrix {
    let n = m.nrows();
    let mut result = CMatrix::identity(n, n);
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = &result * &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    result
}
