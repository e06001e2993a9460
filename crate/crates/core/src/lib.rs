//! Geometric quantum mechanics on finite-dimensional Hilbert spaces.
//!
//! The complex Hilbert space ℂⁿ is treated as a real manifold ℝ²ⁿ carrying a
//! metric `g`, a symplectic form `ω` and a complex structure `J`. On top of
//! that triple the crate provides:
//!
//! - [`realified`]: coordinates, the tensor triple and the canonical vector fields.
//! - [`observables`]: Hermitian operators as tensors, vector fields and quadratic
//!   functions, with the Poisson and Riemann–Jordan brackets.
//! - [`projective`]: the momentum map into u*(n), the connection one-form,
//!   the Fubini–Study tensor and the two-level Bloch map.
//! - [`density`]: density states, mixtures, Casimirs, the Bloch-ball tensors,
//!   the coadjoint-orbit symplectic form and von Neumann flows.
//! - [`composite`]: two-qubit states, Pauli and Cartan decompositions and the
//!   product Poisson rule.
//! - [`gates`]: unitary gates as quadratic generating functions.
//!
//! Conventions used everywhere: ħ = 1, coordinates ordered `(q₁..qₙ, p₁..pₙ)`
//! with `z = q + ip`, the Hermitian product is antilinear in its first slot,
//! and quadratic functions are `f_A(ψ) = ⟨ψ|Aψ⟩/2`.

#![forbid(unsafe_code)]

pub mod calculus;
pub mod composite;
pub mod density;
mod error;
pub mod gates;
pub mod linalg;
pub mod observables;
pub mod projective;
pub mod realified;
pub mod sample;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};

pub use composite::{CartanForm, PauliDecomposition};
pub use density::{CasimirValue, DensityState, FlowMethod, MixtureDecomposition, Trajectory};
pub use gates::{BuiltinGate, GeneratingFunction};
pub use observables::{HermitianOperator, QuadraticFunction};
pub use projective::{AntiHermitianMoment, BlochVector};
pub use realified::{RealifiedVector, TensorTriple};
