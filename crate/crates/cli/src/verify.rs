//! Randomized property suites.
//!
//! Every trial draws its randomness from its own ChaCha8 stream, seeded by
//! mixing the run seed with the trial index through SplitMix64. Trials run
//! in parallel and are merged with order-independent max semantics.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use geoquant::calculus::{central_gradient, exterior_derivative_2form};
use geoquant::composite::{
    cartan_canonical_form, pauli_decompose, product_poisson, separable_pure, tensor_state, Monomial,
};
use geoquant::density::{
    ball_two_form, bloch_hamiltonian_field, bloch_metric_tensor, bloch_of_matrix, casimir, extended_brackets,
    lie_poisson_bloch, lie_poisson_tensor, mix, orbit_symplectic_form, partial_complex_structure,
    spectrum_deviation, von_neumann_flow,
};
use geoquant::gates::{apply_circuit, builtin_generating, canonical_residual, circuit_unitary};
use geoquant::linalg::{
    anticommutator, commutator, hermitian_eigen, max_abs, max_abs_vec, pauli, unitary_propagator, I,
};
use geoquant::observables::{
    bracket_general, hamiltonian_field, jordan_bracket, poisson_bracket, quadratic_form,
};
use geoquant::projective::{
    bloch_map, connection_form, fubini_study, horizontal_projection, momentum_map, pure_projector,
};
use geoquant::realified::{
    apply_complex_structure, hermitian_parts, homogeneity_degree, to_complex, to_real, HOMOGENEITY_STEP,
};
use geoquant::{
    sample, BlochVector, BuiltinGate, CMatrix, CVector, DensityState, FlowMethod, GeneratingFunction,
    HermitianOperator, MixtureDecomposition, QuadraticFunction, RealifiedVector, TensorTriple, C64,
};
use nalgebra::{DMatrix, Rotation3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::report::{Failure, VerificationReport};
use crate::CliError;

pub const MAX_DIM: usize = 16;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_FD_TOL: f64 = 1e-6;

/// Largest dimension used for the orbit-form rank check, whose cost grows
/// like n⁶.
const ORBIT_RANK_MAX_DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Realified,
    Brackets,
    Projective,
    Density,
    Composite,
    Gates,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 6] = [
        Suite::Realified,
        Suite::Brackets,
        Suite::Projective,
        Suite::Density,
        Suite::Composite,
        Suite::Gates,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Realified => "realified",
            Suite::Brackets => "brackets",
            Suite::Projective => "projective",
            Suite::Density => "density",
            Suite::Composite => "composite",
            Suite::Gates => "gates",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::INDIVIDUAL
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown suite '{s}' (expected realified, brackets, projective, density, composite, gates or all)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    /// Tolerance for algebraic identities.
    pub tol: f64,
    /// Tolerance for finite-difference and time-stepping checks.
    pub fd_tol: f64,
}

impl VerifyConfig {
    pub fn new(suite: Suite, dim: usize, trials: usize, seed: u64) -> Self {
        Self {
            suite,
            dim,
            trials,
            seed,
            tol: DEFAULT_TOL,
            fd_tol: DEFAULT_FD_TOL,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(1..=MAX_DIM).contains(&self.dim) {
            return Err(CliError::Usage(format!(
                "--dim must be in [1, {MAX_DIM}], got {}",
                self.dim
            )));
        }
        if self.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        for (name, t) in [("--tol", self.tol), ("--fd-tol", self.fd_tol)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Usage(format!("{name} must be positive, got {t}")));
            }
        }
        if self.suite == Suite::Composite && self.dim != 4 {
            return Err(CliError::Usage(format!(
                "the composite suite is defined for two qubits only; use --dim 4 (got {})",
                self.dim
            )));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer applied to `seed + (k + 1)·γ`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    let mut z = seed.wrapping_add((trial as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Algebraic,
    Numerical,
}

#[derive(Debug, Clone)]
struct Check {
    property: String,
    kind: Kind,
    deviation: f64,
}

struct Checks {
    suite: &'static str,
    items: Vec<Check>,
}

impl Checks {
    fn new(suite: Suite) -> Self {
        Self {
            suite: suite.name(),
            items: Vec::new(),
        }
    }

    fn push(&mut self, property: &str, kind: Kind, deviation: f64) {
        let deviation = if deviation.is_nan() {
            f64::INFINITY
        } else {
            deviation
        };
        let name = format!("{}.{property}", self.suite);
        match self.items.iter_mut().find(|c| c.property == name) {
            Some(c) => c.deviation = c.deviation.max(deviation),
            None => self.items.push(Check {
                property: name,
                kind,
                deviation,
            }),
        }
    }

    fn algebraic(&mut self, property: &str, deviation: f64) {
        self.push(property, Kind::Algebraic, deviation);
    }

    fn numerical(&mut self, property: &str, deviation: f64) {
        self.push(property, Kind::Numerical, deviation);
    }
}

type Outcome = geoquant::Result<()>;

/// Runs the configured suite(s) and collects a deterministic report.
pub fn run_verify(cfg: &VerifyConfig) -> Result<VerificationReport, CliError> {
    cfg.validate()?;
    let suites: Vec<(Suite, usize)> = match cfg.suite {
        Suite::All => Suite::INDIVIDUAL
            .iter()
            .map(|&s| (s, if s == Suite::Composite { 4 } else { cfg.dim }))
            .collect(),
        s => vec![(s, cfg.dim)],
    };

    let per_trial: Vec<(usize, Vec<Check>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| {
            let mut all = Vec::new();
            for &(suite, dim) in &suites {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, k));
                let mut checks = Checks::new(suite);
                if run_trial(suite, dim, &mut rng, &mut checks).is_err() {
                    checks.algebraic("trial_error", f64::INFINITY);
                }
                all.extend(checks.items);
            }
            (k, all)
        })
        .collect();

    let mut max_deviation = BTreeMap::new();
    let mut failures = Vec::new();
    for (trial, checks) in per_trial {
        for c in checks {
            let tol = match c.kind {
                Kind::Algebraic => cfg.tol,
                Kind::Numerical => cfg.fd_tol,
            };
            let worst = max_deviation.entry(c.property.clone()).or_insert(0.0f64);
            *worst = worst.max(c.deviation);
            if c.deviation.is_nan() || c.deviation > tol {
                failures.push(Failure {
                    property: c.property,
                    trial,
                    deviation: c.deviation,
                });
            }
        }
    }
    failures.sort_by(|a, b| a.property.cmp(&b.property).then(a.trial.cmp(&b.trial)));
    for v in max_deviation.values_mut() {
        if !v.is_finite() {
            *v = f64::MAX;
        }
    }
    for f in &mut failures {
        if !f.deviation.is_finite() {
            f.deviation = f64::MAX;
        }
    }

    Ok(VerificationReport {
        suite: cfg.suite.name().to_string(),
        dim: cfg.dim,
        trials: cfg.trials,
        seed: cfg.seed,
        tol: cfg.tol,
        fd_tol: cfg.fd_tol,
        failures,
        max_deviation,
    })
}

fn run_trial(suite: Suite, dim: usize, rng: &mut ChaCha8Rng, out: &mut Checks) -> Outcome {
    match suite {
        Suite::Realified => realified(rng, dim, out),
        Suite::Brackets => brackets(rng, dim, out),
        Suite::Projective => {
            projective(rng, dim, out)?;
            qubit_projective(rng, out)
        }
        Suite::Density => {
            density(rng, dim, out)?;
            qubit_density(rng, out)
        }
        Suite::Composite => composite(rng, out),
        Suite::Gates => gates(rng, dim, out),
        Suite::All => unreachable!("expanded by run_verify"),
    }
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn unit_state<R: Rng>(rng: &mut R, n: usize) -> RealifiedVector {
    to_real(&sample::unit_complex_vector(rng, n))
}

fn observable<R: Rng>(rng: &mut R, n: usize) -> HermitianOperator {
    sample::hermitian_with_norm(rng, n, 1.0)
}

fn max_abs_real(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

fn realified<R: Rng>(rng: &mut R, n: usize, out: &mut Checks) -> Outcome {
    let t = TensorTriple::new(n);
    let x = unit_state(rng, n);
    let y = unit_state(rng, n);
    let (jx, jy) = (t.j(&x)?, t.j(&y)?);

    out.algebraic(
        "j_invariance",
        (t.g(&jx, &jy)? - t.g(&x, &y)?)
            .abs()
            .max((t.omega(&jx, &jy)? - t.omega(&x, &y)?).abs()),
    );
    out.algebraic("compatibility", (t.g(&x, &y)? - t.omega(&x, &jy)?).abs());
    let h = hermitian_parts(&x, &y)?;
    let h_rev = hermitian_parts(&y, &x)?;
    out.algebraic(
        "hermitian_product",
        (h.h - C64::new(t.g(&x, &y)?, t.omega(&x, &y)?))
            .norm()
            .max((h.h - h_rev.h.conj()).norm()),
    );
    out.algebraic("j_squared", (&t.j(&jx)? + &x).norm());
    out.algebraic(
        "j_is_multiplication_by_i",
        max_abs_vec(&(jx.to_complex() - x.to_complex() * I)),
    );
    let back = to_real(&to_complex(x.coords())?);
    out.algebraic("round_trip", (&back - &x).norm());
    out.algebraic(
        "metric_from_poisson",
        max_abs_real(&(t.inverse_metric_matrix() - t.j_matrix() * t.poisson_matrix())),
    );

    // f_A with A positive definite, so the degree estimate is well conditioned.
    let b = observable(rng, n).into_matrix();
    let a = HermitianOperator::new(&b * &b + CMatrix::identity(n, n))?;
    let fa = QuadraticFunction::from_hermitian(&a);
    let deg_quadratic = homogeneity_degree(
        |v| fa.evaluate(v).map(|z| z.re).unwrap_or(f64::NAN),
        &x,
        HOMOGENEITY_STEP,
    )?;
    let deg_expectation = homogeneity_degree(
        |v| geoquant::observables::expectation(&a, v).unwrap_or(f64::NAN),
        &x,
        HOMOGENEITY_STEP,
    )?;
    out.numerical(
        "homogeneity",
        (deg_quadratic - 2.0).abs().max(deg_expectation.abs()),
    );
    Ok(())
}

fn f_of(m: &CMatrix, psi: &RealifiedVector) -> C64 {
    let z = psi.to_complex();
    z.dotc(&(m * &z)) / 2.0
}

fn brackets<R: Rng>(rng: &mut R, n: usize, out: &mut Checks) -> Outcome {
    let psi = unit_state(rng, n);
    let (a, b, c) = (observable(rng, n), observable(rng, n), observable(rng, n));
    let (am, bm) = (a.matrix(), b.matrix());

    let expected = f_of(&commutator(am, bm), &psi) * (-I);
    out.algebraic(
        "poisson_commutator",
        (expected - re(poisson_bracket(&a, &b, &psi)?)).norm(),
    );
    let expected = f_of(&anticommutator(am, bm), &psi);
    out.algebraic(
        "jordan_anticommutator",
        (expected - re(jordan_bracket(&a, &b, &psi)?)).norm(),
    );

    // {f_B, f_C} = f_D with D = −i[B, C].
    let d = |x: &HermitianOperator, y: &HermitianOperator| {
        HermitianOperator::hermitian_part(&(commutator(x.matrix(), y.matrix()) * (-I)))
    };
    let jacobi = poisson_bracket(&a, &d(&b, &c)?, &psi)?
        + poisson_bracket(&b, &d(&c, &a)?, &psi)?
        + poisson_bracket(&c, &d(&a, &b)?, &psi)?;
    out.algebraic("jacobi", jacobi.abs());

    let (fa, fb, fc) = (
        QuadraticFunction::from_hermitian(&a),
        QuadraticFunction::from_hermitian(&b),
        QuadraticFunction::from_hermitian(&c),
    );
    let (da, db, dc) = (
        fa.differential(&psi)?,
        fb.differential(&psi)?,
        fc.differential(&psi)?,
    );
    let (vb, vc) = (fb.evaluate(&psi)?.re, fc.evaluate(&psi)?.re);
    let d_product = &db * vc + &dc * vb;
    let lhs = bracket_general(da.as_slice(), d_product.as_slice(), &psi)?.poisson;
    let rhs = poisson_bracket(&a, &b, &psi)? * vc + vb * poisson_bracket(&a, &c, &psi)?;
    out.algebraic("leibniz", (lhs - rhs).abs());

    let t = TensorTriple::new(n);
    let xa = RealifiedVector::from_coords(hamiltonian_field(&da)?.as_slice().to_vec())?;
    let xb = RealifiedVector::from_coords(hamiltonian_field(&db)?.as_slice().to_vec())?;
    out.algebraic(
        "symplectic_pairing",
        (t.omega(&xa, &xb)? - poisson_bracket(&a, &b, &psi)?).abs(),
    );

    let fd = central_gradient(
        |x| {
            let v = RealifiedVector::from_coords(x.to_vec()).expect("even length");
            fa.evaluate(&v).map(|z| z.re).unwrap_or(f64::NAN)
        },
        psi.coords(),
        1e-5,
    );
    let grad_dev = fd
        .iter()
        .zip(da.iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    out.numerical("gradient", grad_dev);
    Ok(())
}

fn projective<R: Rng>(rng: &mut R, n: usize, out: &mut Checks) -> Outcome {
    let u = sample::unitary(rng, n);
    let z = sample::complex_vector(rng, n);
    let psi = to_real(&z);
    let moved = momentum_map(&to_real(&(&u * &z)));
    let conjugated = momentum_map(&psi).conjugate(&u);
    out.algebraic("equivariance", max_abs(&(moved.matrix() - conjugated.matrix())));

    let jpsi = apply_complex_structure(&psi);
    out.algebraic(
        "connection_canonical",
        (connection_form(&psi, &psi)? - re(1.0))
            .norm()
            .max((connection_form(&psi, &jpsi)? - I).norm()),
    );

    let w = sample::realified_vector(rng, n);
    let mut vertical = 0.0f64;
    for v in [&psi, &jpsi] {
        vertical = vertical
            .max(fubini_study(&psi, v, &w)?.norm())
            .max(fubini_study(&psi, &w, v)?.norm());
    }
    out.algebraic("fs_vertical", vertical);
    let v = sample::realified_vector(rng, n);
    out.algebraic(
        "fs_hermitian",
        (fubini_study(&psi, &v, &w)? - fubini_study(&psi, &w, &v)?.conj()).norm(),
    );

    let horizontal: Vec<_> = (0..n + 1)
        .map(|_| horizontal_projection(&psi, &sample::realified_vector(rng, n)))
        .collect::<geoquant::Result<_>>()?;
    let mut gram = CMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        for j in 0..=n {
            gram[(i, j)] = fubini_study(&psi, &horizontal[i], &horizontal[j])?;
        }
    }
    let (vals, _) = hermitian_eigen(&((&gram + gram.adjoint()) * re(0.5)));
    out.algebraic("fs_positive", (-vals.last().copied().unwrap_or(0.0)).max(0.0));

    let unit = sample::unit_complex_vector(rng, n);
    let base = to_real(&unit);
    let hv = horizontal_projection(&base, &v)?;
    let hw = horizontal_projection(&base, &w)?;
    let ambient = hv.to_complex().dotc(&hw.to_complex());
    let lam = C64::new(rng.random_range(0.5..2.0), rng.random_range(-1.0..1.0));
    let scaled = to_real(&(&unit * lam));
    out.algebraic(
        "pull_back",
        (fubini_study(&base, &hv, &hw)? - ambient)
            .norm()
            .max((fubini_study(&scaled, &hv, &hw)? - ambient / lam.norm_sqr()).norm()),
    );

    let rho = pure_projector(&psi)?;
    let m = rho.matrix();
    let a = observable(rng, n);
    let expectation = 2.0 * quadratic_form(a.matrix(), &psi)?.value().re / psi.norm_squared();
    out.algebraic(
        "pure_projector",
        max_abs(&(m * m - m))
            .max((m.trace() - re(1.0)).norm())
            .max(((m * a.matrix()).trace().re - expectation).abs()),
    );
    Ok(())
}

fn bloch_density(x: &BlochVector) -> CMatrix {
    (pauli(0) + pauli(1) * re(x[0]) + pauli(2) * re(x[1]) + pauli(3) * re(x[2])) * re(0.5)
}

fn omega_fs(x: &[f64], v: &[f64], w: &[f64]) -> f64 {
    let chart = |c: &[f64]| RealifiedVector::from_coords(c.to_vec()).expect("even length");
    fubini_study(&chart(x), &chart(v), &chart(w))
        .map(|h| h.im)
        .unwrap_or(f64::NAN)
}

fn qubit_projective<R: Rng>(rng: &mut R, out: &mut Checks) -> Outcome {
    let z = sample::complex_vector(rng, 2);
    let psi = to_real(&z);
    let x = bloch_map(&psi)?;
    out.algebraic("bloch_norm", (x.norm() - 1.0).abs());
    out.algebraic(
        "bloch_projector",
        max_abs(&(pure_projector(&psi)?.matrix() - bloch_density(&x))),
    );
    let lam = C64::from_polar(rng.random_range(0.1..5.0), rng.random_range(0.0..2.0 * PI));
    let y = bloch_map(&to_real(&(&z * lam)))?;
    out.algebraic("bloch_invariance", (y.as_vector() - x.as_vector()).norm());

    let theta = rng.random_range(-PI..PI);
    let rotated = bloch_map(&to_real(&(unitary_propagator(&(pauli(3) * re(0.5)), theta) * &z)))?;
    let rot = Rotation3::from_axis_angle(&Vector3::z_axis(), theta);
    out.algebraic(
        "bloch_rotation",
        (rotated.as_vector() - rot * x.as_vector()).norm(),
    );

    // The finite-difference error grows like ‖x‖⁻⁴, so keep the point away from 0.
    let point = to_real(&(sample::unit_complex_vector(rng, 2) * re(rng.random_range(0.5..2.0))));
    let mut closed = 0.0f64;
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        closed = closed.max(exterior_derivative_2form(omega_fs, point.coords(), i, j, k, 1e-5).abs());
    }
    out.numerical("fs_closed", closed);
    Ok(())
}

fn eigen_decomposition(rho: &DensityState) -> geoquant::Result<MixtureDecomposition> {
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let weights: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = weights.iter().sum();
    MixtureDecomposition::new(
        weights.iter().map(|w| w / total).collect(),
        (0..vals.len())
            .map(|k| to_real(&vecs.column(k).into_owned()))
            .collect(),
    )
}

/// Decomposition by the vectors `φ_j = Σ_k U_jk √p_k ψ_k` for a random
/// unitary `U` with more rows than eigenvectors.
fn mixed_decomposition<R: Rng>(rng: &mut R, rho: &DensityState) -> geoquant::Result<MixtureDecomposition> {
    let n = rho.dim();
    let terms = n + 2;
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let u = sample::unitary(rng, terms);
    let phis: Vec<CVector> = (0..terms)
        .map(|j| {
            (0..n).fold(CVector::zeros(n), |acc, k| {
                acc + vecs.column(k) * (u[(j, k)] * vals[k].max(0.0).sqrt())
            })
        })
        .collect();
    let weights: Vec<f64> = phis.iter().map(|p| p.norm_squared()).collect();
    let total: f64 = weights.iter().sum();
    MixtureDecomposition::new(
        weights.iter().map(|w| w / total).collect(),
        phis.iter().map(to_real).collect(),
    )
}

fn symmetrized(m: &CMatrix) -> geoquant::Result<DensityState> {
    DensityState::new((m + m.adjoint()) * re(0.5))
}

fn u_basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        let mut d = CMatrix::zeros(n, n);
        d[(j, j)] = I;
        out.push(d);
        for k in j + 1..n {
            let mut s = CMatrix::zeros(n, n);
            s[(j, k)] = I;
            s[(k, j)] = I;
            out.push(s);
            let mut a = CMatrix::zeros(n, n);
            a[(j, k)] = re(1.0);
            a[(k, j)] = re(-1.0);
            out.push(a);
        }
    }
    out
}

fn density<R: Rng>(rng: &mut R, n: usize, out: &mut Checks) -> Outcome {
    let rho = sample::density(rng, n);
    let (a, b) = (observable(rng, n), observable(rng, n));
    let d1 = eigen_decomposition(&rho)?;
    let d2 = mixed_decomposition(rng, &rho)?;
    out.algebraic(
        "mixture_reconstruction",
        max_abs(&(mix(&d2)?.matrix() - rho.matrix())),
    );
    let (b1, b2) = (extended_brackets(&d1, &a, &b)?, extended_brackets(&d2, &a, &b)?);
    let m = rho.matrix();
    let poisson = (m * commutator(a.matrix(), b.matrix()) * (-I)).trace().re / 2.0;
    let jordan = (m * anticommutator(a.matrix(), b.matrix())).trace().re / 2.0;
    out.algebraic(
        "decomposition_independence",
        [
            b1.poisson - b2.poisson,
            b1.jordan - b2.jordan,
            b1.poisson - poisson,
            b1.jordan - jordan,
        ]
        .iter()
        .fold(0.0, |acc, v| acc.max(v.abs())),
    );

    let u = sample::unitary(rng, n);
    let moved = symmetrized(&(&u * m * u.adjoint()))?;
    let mut cas = 0.0f64;
    for k in 2..=4 {
        cas = cas.max((casimir(&rho, k)?.value - casimir(&moved, k)?.value).abs());
    }
    out.algebraic("casimir_invariance", cas);

    let xi1 = observable(rng, n).into_matrix() * I;
    let xi2 = observable(rng, n).into_matrix() * I;
    out.algebraic(
        "orbit_antisymmetry",
        (orbit_symplectic_form(&rho, &xi1, &xi2)? + orbit_symplectic_form(&rho, &xi2, &xi1)?).abs(),
    );
    orbit_kernel(rng, n.min(ORBIT_RANK_MAX_DIM), out)?;

    let h = observable(rng, n);
    let exact = von_neumann_flow(&rho, &h, PI, 1e-3, FlowMethod::Exact)?;
    let rk4 = von_neumann_flow(&rho, &h, PI, 1e-3, FlowMethod::Rk4)?;
    out.numerical(
        "flow_rk4_vs_exact",
        max_abs(&(exact.final_state() - rk4.final_state())),
    );
    let mut spectrum = 0.0f64;
    let mut purity = 0.0f64;
    for s in &rk4.states {
        spectrum = spectrum.max(spectrum_deviation(s, m));
        let p: f64 = s.iter().map(|z| z.norm_sqr()).sum();
        purity = purity.max((p - rho.purity()).abs());
    }
    out.numerical("flow_spectrum_drift", spectrum);
    out.numerical("flow_purity_drift", purity);
    Ok(())
}

/// Random diagonal `ρ` with eigenvalues at least 0.05 apart; the form must
/// vanish on the diagonal subalgebra and have rank `n² − n` on `u(n)`.
fn orbit_kernel<R: Rng>(rng: &mut R, n: usize, out: &mut Checks) -> Outcome {
    let mut d: Vec<f64> = Vec::with_capacity(n);
    let mut level = 0.05;
    for _ in 0..n {
        level += rng.random_range(0.05..0.5);
        d.push(level);
    }
    let total: f64 = d.iter().sum();
    let diag = CVector::from_iterator(n, d.iter().map(|x| re(x / total)));
    let rho = DensityState::new(CMatrix::from_diagonal(&diag))?;

    let basis = u_basis(n);
    let mut gram = DMatrix::zeros(basis.len(), basis.len());
    for (i, x) in basis.iter().enumerate() {
        for (j, y) in basis.iter().enumerate() {
            gram[(i, j)] = orbit_symplectic_form(&rho, x, y)?;
        }
    }
    let mut kernel = 0.0f64;
    for j in 0..n {
        let mut xi = CMatrix::zeros(n, n);
        xi[(j, j)] = I;
        for y in &basis {
            kernel = kernel.max(orbit_symplectic_form(&rho, &xi, y)?.abs());
        }
    }
    out.algebraic("orbit_kernel", kernel);
    let sv = gram.singular_values();
    let scale = sv.max();
    let rank = sv.iter().filter(|s| **s > 1e-10 * scale).count();
    out.algebraic("orbit_rank", rank.abs_diff(n * n - n) as f64);
    Ok(())
}

fn ball_form(x: &[f64], v: &[f64], w: &[f64]) -> f64 {
    ball_two_form(
        &BlochVector::new(x[0], x[1], x[2]),
        &Vector3::from_column_slice(v),
        &Vector3::from_column_slice(w),
    )
    .unwrap_or(f64::NAN)
}

fn qubit_density<R: Rng>(rng: &mut R, out: &mut Checks) -> Outcome {
    let v = sample::ball_vector3(rng);
    let x = BlochVector::from_vector(v);
    let rho = DensityState::from_bloch(&x)?;
    let (a, b) = (observable(rng, 2), observable(rng, 2));

    let ext = extended_brackets(&eigen_decomposition(&rho)?, &a, &b)?;
    out.algebraic(
        "lie_poisson_factor",
        (lie_poisson_bloch(&x, &a, &b)? - 2.0 * ext.poisson).abs(),
    );
    let c = casimir(&rho, 2)?;
    out.algebraic(
        "bloch_casimir",
        (c.value - (1.0 + x.norm_squared()) / 2.0)
            .abs()
            .max((c.zeta.unwrap_or(f64::NAN) - x.norm_squared()).abs()),
    );

    let rho_dot = commutator(a.matrix(), rho.matrix()) * (-I);
    let velocity = Vector3::from_fn(|k, _| (&rho_dot * pauli(k + 1)).trace().re);
    out.algebraic(
        "bloch_velocity",
        (bloch_hamiltonian_field(&x, &a)? - velocity).norm(),
    );

    let s = BlochVector::from_vector(sample::unit_vector3(rng));
    let alpha = sample::tangent_vector3(rng, s.as_vector()) * rng.random_range(0.1..3.0);
    let lhs = lie_poisson_tensor(&s).transpose() * alpha;
    let rhs = partial_complex_structure(&s, &(bloch_metric_tensor(&s) * alpha))?;
    out.algebraic("poisson_complex_structure", (lhs - rhs).norm());

    let t = sample::tangent_vector3(rng, &v);
    let jt = partial_complex_structure(&x, &t)?;
    out.algebraic(
        "complex_structure_squared",
        (partial_complex_structure(&x, &jt)? + t).norm(),
    );

    let beta = sample::tangent_vector3(rng, &v) * rng.random_range(0.1..3.0);
    let w = sample::unit_vector3(rng) * rng.random_range(0.1..2.0);
    let raised = lie_poisson_tensor(&x).transpose() * beta / 2.0;
    out.algebraic(
        "ball_form_inverse",
        (ball_two_form(&x, &raised, &w)? + beta.dot(&w)).abs(),
    );

    let at_pole = exterior_derivative_2form(ball_form, &[1.0, 0.0, 0.0], 0, 1, 2, 1e-4);
    let inside = exterior_derivative_2form(ball_form, v.as_slice(), 0, 1, 2, 1e-5) * v.norm_squared();
    out.numerical(
        "ball_form_not_closed",
        (at_pole - 1.0).abs().max((inside - 1.0).abs()),
    );

    let start = DensityState::from_bloch(&BlochVector::new(1.0, 0.0, 0.0))?;
    let flow = von_neumann_flow(
        &start,
        &HermitianOperator::pauli(3),
        FRAC_PI_2,
        1e-3,
        FlowMethod::Rk4,
    )?;
    let end = bloch_of_matrix(flow.final_state())?;
    out.numerical(
        "precession",
        (end.as_vector() - Vector3::new(-1.0, 0.0, 0.0)).norm(),
    );
    Ok(())
}

/// Unit vector of ℂ² with Bloch vector `x`.
fn lift(x: &Vector3<f64>) -> CVector {
    let theta = x.z.clamp(-1.0, 1.0).acos();
    let phi = x.y.atan2(x.x);
    CVector::from_vec(vec![
        re((theta / 2.0).cos()),
        C64::from_polar((theta / 2.0).sin(), phi),
    ])
}

fn monomial<R: Rng>(rng: &mut R) -> Monomial {
    let mut m = Monomial::new(rng.random_range(1..=2), rng.random_range(1..=2));
    if rng.random_bool(0.5) {
        m = m.conj_z();
    }
    if rng.random_bool(0.5) {
        m = m.conj_w();
    }
    m
}

fn composite<R: Rng>(rng: &mut R, out: &mut Checks) -> Outcome {
    let rank = rng.random_range(1..=4);
    let rho = sample::density_of_rank(rng, 4, rank);
    let d = pauli_decompose(&rho)?;
    out.algebraic("pauli_round_trip", max_abs(&(d.reconstruct() - rho.matrix())));
    out.algebraic(
        "purity_identity",
        (d.squared_norm() - (4.0 * rho.purity() - 1.0)).abs(),
    );

    let n = sample::unit_vector3(rng);
    let m = sample::unit_vector3(rng);
    let sep = separable_pure(&n, &m)?;
    let ds = pauli_decompose(&sep)?;
    out.algebraic(
        "separable_rank_one",
        (ds.p - n)
            .amax()
            .max((ds.q - m).amax())
            .max((ds.r - n * m.transpose()).amax()),
    );
    let product = pure_projector(&to_real(&tensor_state(&lift(&n), &lift(&m))?))?;
    out.algebraic("separable_projector", max_abs(&(sep.matrix() - product.matrix())));

    let c = cartan_canonical_form(&rho)?;
    out.algebraic(
        "cartan_reconstruction",
        max_abs(&(c.reconstruct() - rho.matrix())),
    );
    let diag = c.diagonal();
    let outside = diag.iter().fold(0.0f64, |acc, &x| acc.max(-x).max(x - 1.0));
    out.algebraic(
        "cartan_diagonal",
        outside.max((diag.iter().sum::<f64>() - 1.0).abs()),
    );

    let z = sample::complex_vector(rng, 2);
    let w = sample::complex_vector(rng, 2);
    out.algebraic(
        "product_rule",
        product_poisson(monomial(rng), monomial(rng), &z, &w)?.residual(),
    );
    Ok(())
}

fn gates<R: Rng>(rng: &mut R, n: usize, out: &mut Checks) -> Outcome {
    let theta = rng.random_range(-PI..PI);
    let builtins = [
        BuiltinGate::Hadamard,
        BuiltinGate::Phase,
        BuiltinGate::PhaseShift(theta),
    ];
    let psi = sample::complex_vector(rng, 2);
    let mut unitarity = 0.0f64;
    let mut residual = 0.0f64;
    for g in builtins {
        let s = builtin_generating(g);
        unitarity = unitarity.max(s.unitarity_deviation());
        residual = residual.max(canonical_residual(&s, &psi, &s.apply(&psi)?)?);
    }
    out.algebraic("builtin_unitarity", unitarity);
    out.algebraic("builtin_canonical", residual);

    let h = builtin_generating(BuiltinGate::Hadamard);
    let x = bloch_map(&to_real(&psi))?;
    let y = bloch_map(&to_real(&h.apply(&psi)?))?;
    out.algebraic(
        "hadamard_involution",
        (y[0] - x[2])
            .abs()
            .max((y[1] + x[1]).abs())
            .max((y[2] - x[0]).abs()),
    );
    let squared = apply_circuit(&psi, &[h.clone(), h])?;
    out.algebraic("hadamard_squared", max_abs_vec(&(squared - &psi)));
    let shift_pi = builtin_generating(BuiltinGate::PhaseShift(PI));
    out.algebraic(
        "phase_shift_pi",
        max_abs(&(shift_pi.unitary() - builtin_generating(BuiltinGate::Phase).unitary())),
    );

    let s = GeneratingFunction::new(sample::unitary(rng, n))?;
    let phi0 = sample::complex_vector(rng, n);
    out.algebraic(
        "random_canonical",
        canonical_residual(&s, &phi0, &s.apply(&phi0)?)?,
    );
    let circuit: Vec<_> = (0..3)
        .map(|_| GeneratingFunction::new(sample::unitary(rng, n)))
        .collect::<geoquant::Result<_>>()?;
    let direct = circuit[2].unitary() * (circuit[1].unitary() * circuit[0].unitary());
    let grouped = circuit_unitary(n, &circuit[1..])? * circuit[0].unitary();
    let applied = apply_circuit(&phi0, &circuit)?;
    out.algebraic(
        "circuit_associativity",
        max_abs(&(circuit_unitary(n, &circuit)? - &direct))
            .max(max_abs(&(grouped - &direct)))
            .max(max_abs_vec(&(applied - &direct * &phi0))),
    );
    Ok(())
}
