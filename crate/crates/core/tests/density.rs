mod common;

use common::{max_abs, re, rng};
use geoquant::calculus::exterior_derivative_2form;
use geoquant::density::{
    ball_two_form, bloch_hamiltonian_field, bloch_metric_tensor, casimir, expectation_density,
    extended_brackets, lie_poisson_bloch, lie_poisson_tensor, mix, orbit_symplectic_form,
    partial_complex_structure, spectrum_deviation, von_neumann_flow, MixtureDecomposition,
};
use geoquant::linalg::{commutator, hermitian_eigen, pauli, I};
use geoquant::realified::to_real;
use geoquant::{sample, BlochVector, CMatrix, CVector, DensityState, FlowMethod, HermitianOperator, C64};
use nalgebra::{DMatrix, Matrix3, Vector3};
use rand::Rng;
use std::f64::consts::{FRAC_PI_2, PI};

fn eigen_decomposition(rho: &DensityState) -> MixtureDecomposition {
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let states = (0..vals.len())
        .map(|k| to_real(&vecs.column(k).into_owned()))
        .collect();
    let weights: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = weights.iter().sum();
    MixtureDecomposition::new(weights.iter().map(|w| w / total).collect(), states).unwrap()
}

/// `φ_j = Σ_k U_jk √p_k ψ_k` with a random unitary `U` of size `terms`.
fn mixed_decomposition<R: Rng>(r: &mut R, rho: &DensityState, terms: usize) -> MixtureDecomposition {
    let n = rho.dim();
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let u = sample::unitary(r, terms);
    let mut phis = Vec::new();
    for j in 0..terms {
        let mut phi = CVector::zeros(n);
        for k in 0..n {
            phi += vecs.column(k) * (u[(j, k)] * vals[k].max(0.0).sqrt());
        }
        phis.push(phi);
    }
    let weights: Vec<f64> = phis.iter().map(|p| p.norm_squared()).collect();
    let total: f64 = weights.iter().sum();
    MixtureDecomposition::new(
        weights.iter().map(|w| w / total).collect(),
        phis.iter().map(to_real).collect(),
    )
    .unwrap()
}

#[test]
fn extended_brackets_do_not_depend_on_decomposition() {
    let mut r = rng(51);
    let mut worst = 0.0f64;
    for n in [2, 3] {
        for _ in 0..50 {
            let rho = sample::density(&mut r, n);
            let a = sample::hermitian(&mut r, n);
            let b = sample::hermitian(&mut r, n);
            let d1 = eigen_decomposition(&rho);
            let d2 = mixed_decomposition(&mut r, &rho, n + 2);
            assert!(max_abs(&(mix(&d2).unwrap().matrix() - rho.matrix())) < 1e-12);
            let b1 = extended_brackets(&d1, &a, &b).unwrap();
            let b2 = extended_brackets(&d2, &a, &b).unwrap();
            let m = rho.matrix();
            let poisson = (m * commutator(a.matrix(), b.matrix()) * (-I)).trace().re / 2.0;
            let ab = a.matrix() * b.matrix();
            let jordan = (m * (&ab + ab.adjoint())).trace().re / 2.0;
            for v in [
                b1.poisson - b2.poisson,
                b1.jordan - b2.jordan,
                b1.poisson - poisson,
                b1.jordan - jordan,
            ] {
                worst = worst.max(v.abs());
            }
        }
    }
    assert!(worst < 1e-10, "decomposition dependence {worst}");
}

#[test]
fn mix_is_linear_in_weights() {
    let mut r = rng(52);
    for n in 1..=4 {
        let states: Vec<_> = (0..3).map(|_| sample::realified_vector(&mut r, n)).collect();
        let w = [0.2, 0.5, 0.3];
        let rho = mix(&MixtureDecomposition::new(w.to_vec(), states.clone()).unwrap()).unwrap();
        let mut direct = CMatrix::zeros(n, n);
        for (p, s) in w.iter().zip(&states) {
            let z = s.to_complex();
            direct += &z * z.adjoint() * re(p / s.norm_squared());
        }
        assert!(max_abs(&(rho.matrix() - &direct)) < 1e-12);
        let a = sample::hermitian(&mut r, n);
        let lhs = expectation_density(&rho, &a).unwrap();
        let rhs: f64 = w
            .iter()
            .zip(&states)
            .map(|(p, s)| {
                let single = MixtureDecomposition::new(vec![1.0], vec![s.clone()]).unwrap();
                p * expectation_density(&mix(&single).unwrap(), &a).unwrap()
            })
            .sum();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}

#[test]
fn casimirs_are_conjugation_invariant() {
    let mut r = rng(53);
    for n in 2..=4 {
        for _ in 0..20 {
            let rho = sample::density(&mut r, n);
            let u = sample::unitary(&mut r, n);
            let moved = DensityState::new({
                let m = &u * rho.matrix() * u.adjoint();
                (&m + m.adjoint()) * re(0.5)
            })
            .unwrap();
            for k in 2..=4 {
                let c0 = casimir(&rho, k).unwrap().value;
                let c1 = casimir(&moved, k).unwrap().value;
                assert!((c0 - c1).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn casimirs_commute_with_every_observable() {
    // {C_k, f_A} is the derivative of C_k along the flow of A.
    let mut r = rng(54);
    for n in 2..=3 {
        let rho = sample::density(&mut r, n);
        let a = sample::hermitian_with_norm(&mut r, n, 1.0);
        let eps = 1e-5;
        let at = |t: f64| {
            let traj = von_neumann_flow(&rho, &a, t, 1e-3, FlowMethod::Exact).unwrap();
            let m = traj.final_state().clone();
            DensityState::new((&m + m.adjoint()) * re(0.5)).unwrap()
        };
        let (plus, minus) = (at(eps), at(2.0 * eps));
        for k in 2..=4 {
            let c = casimir(&rho, k).unwrap().value;
            let slope = (casimir(&plus, k).unwrap().value - c) / eps;
            let slope2 = (casimir(&minus, k).unwrap().value - c) / (2.0 * eps);
            assert!(slope.abs() < 1e-8 && slope2.abs() < 1e-8);
        }
    }
}

#[test]
fn qubit_purity_matches_bloch_radius() {
    let mut r = rng(55);
    for _ in 0..50 {
        let x = sample::ball_vector3(&mut r);
        let rho = DensityState::from_bloch(&BlochVector::from_vector(x)).unwrap();
        let c = casimir(&rho, 2).unwrap();
        let zeta = c.zeta.unwrap();
        assert!((zeta - x.norm_squared()).abs() < 1e-12);
        assert!((c.value - (1.0 + zeta) / 2.0).abs() < 1e-12);
    }
}

#[test]
fn lie_poisson_is_twice_the_extended_bracket() {
    let mut r = rng(56);
    for _ in 0..50 {
        let x = BlochVector::from_vector(sample::ball_vector3(&mut r));
        let rho = DensityState::from_bloch(&x).unwrap();
        let a = sample::hermitian(&mut r, 2);
        let b = sample::hermitian(&mut r, 2);
        let ext = extended_brackets(&eigen_decomposition(&rho), &a, &b).unwrap();
        let lp = lie_poisson_bloch(&x, &a, &b).unwrap();
        assert!((lp - 2.0 * ext.poisson).abs() < 1e-12);
    }
}

fn epsilon_tensor(x: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, x.z, -x.y, -x.z, 0.0, x.x, x.y, -x.x, 0.0)
}

#[test]
fn bloch_tensors_have_closed_forms() {
    let mut r = rng(57);
    for _ in 0..50 {
        let v = sample::ball_vector3(&mut r);
        let x = BlochVector::from_vector(v);
        assert!((lie_poisson_tensor(&x) - epsilon_tensor(&v) * 2.0).norm() < 1e-12);
        assert!((bloch_metric_tensor(&x) - Matrix3::identity() * 2.0).norm() < 1e-12);
    }
}

#[test]
fn poisson_tensor_is_complex_structure_after_metric() {
    let mut r = rng(58);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let v = sample::unit_vector3(&mut r);
        let x = BlochVector::from_vector(v);
        let alpha = sample::tangent_vector3(&mut r, &v) * r.random_range(0.1..3.0);
        let lhs = lie_poisson_tensor(&x).transpose() * alpha;
        let rhs = partial_complex_structure(&x, &(bloch_metric_tensor(&x) * alpha)).unwrap();
        worst = worst.max((lhs - rhs).norm());
    }
    assert!(worst < 1e-10, "residual {worst}");
}

#[test]
fn partial_complex_structure_squares_to_minus_one() {
    let mut r = rng(59);
    for _ in 0..50 {
        let v = sample::ball_vector3(&mut r);
        let x = BlochVector::from_vector(v);
        let t = sample::tangent_vector3(&mut r, &v);
        let jt = partial_complex_structure(&x, &t).unwrap();
        let jjt = partial_complex_structure(&x, &jt).unwrap();
        assert!((jjt + t).norm() < 1e-12);
    }
}

#[test]
fn ball_two_form_inverts_poisson_tensor() {
    let mut r = rng(60);
    for _ in 0..50 {
        let v = sample::ball_vector3(&mut r);
        let x = BlochVector::from_vector(v);
        let alpha = sample::tangent_vector3(&mut r, &v) * r.random_range(0.1..3.0);
        let w = Vector3::new(
            r.random_range(-1.0..1.0),
            r.random_range(-1.0..1.0),
            r.random_range(-1.0..1.0),
        );
        let raised = lie_poisson_tensor(&x).transpose() * alpha / 2.0;
        let value = ball_two_form(&x, &raised, &w).unwrap();
        assert!((value + alpha.dot(&w)).abs() < 1e-12);
    }
}

fn ball_form(x: &[f64], v: &[f64], w: &[f64]) -> f64 {
    let p = BlochVector::new(x[0], x[1], x[2]);
    ball_two_form(&p, &Vector3::from_column_slice(v), &Vector3::from_column_slice(w)).unwrap()
}

#[test]
fn ball_two_form_is_not_closed() {
    let d = exterior_derivative_2form(ball_form, &[1.0, 0.0, 0.0], 0, 1, 2, 1e-4);
    assert!((d - 1.0).abs() < 1e-5, "dω = {d}");
    let mut r = rng(61);
    for _ in 0..20 {
        let v = sample::ball_vector3(&mut r);
        let d = exterior_derivative_2form(ball_form, v.as_slice(), 0, 1, 2, 1e-5);
        let expected = 1.0 / v.norm_squared();
        assert!(
            (d - expected).abs() < 1e-5 * expected,
            "dω = {d}, expected {expected}"
        );
    }
}

fn u_basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::new();
    for j in 0..n {
        let mut m = CMatrix::zeros(n, n);
        m[(j, j)] = I;
        out.push(m);
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

#[test]
fn orbit_form_is_antisymmetric() {
    let mut r = rng(62);
    for n in 2..=4 {
        let rho = sample::density(&mut r, n);
        let x1 = sample::hermitian(&mut r, n).into_matrix() * I;
        let x2 = sample::hermitian(&mut r, n).into_matrix() * I;
        let a = orbit_symplectic_form(&rho, &x1, &x2).unwrap();
        let b = orbit_symplectic_form(&rho, &x2, &x1).unwrap();
        assert!((a + b).abs() < 1e-12);
        assert!(orbit_symplectic_form(&rho, &x1, &x1).unwrap().abs() < 1e-12);
    }
}

#[test]
fn orbit_form_kernel_is_the_diagonal_subalgebra() {
    let mut r = rng(63);
    for k in 0..20 {
        let n = 2 + k % 3;
        let mut d: Vec<f64> = (0..n).map(|_| r.random_range(0.1..1.0)).collect();
        d.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for i in 1..n {
            if d[i - 1] - d[i] < 0.05 {
                d[i] = d[i - 1] - 0.05 - r.random_range(0.0..0.1);
            }
        }
        let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
        let d: Vec<f64> = d.iter().map(|x| x - min + 0.01).collect();
        let total: f64 = d.iter().sum();
        let diag = CVector::from_iterator(n, d.iter().map(|x| re(x / total)));
        let rho = DensityState::new(CMatrix::from_diagonal(&diag)).unwrap();

        let basis = u_basis(n);
        let gram = DMatrix::from_fn(basis.len(), basis.len(), |a, b| {
            orbit_symplectic_form(&rho, &basis[a], &basis[b]).unwrap()
        });
        let sv = gram.singular_values();
        let scale = sv.max();
        let rank = sv.iter().filter(|s| **s > 1e-10 * scale).count();
        assert_eq!(rank, n * n - n);
        for j in 0..n {
            let mut xi = CMatrix::zeros(n, n);
            xi[(j, j)] = I;
            for b in &basis {
                assert!(orbit_symplectic_form(&rho, &xi, b).unwrap().abs() < 1e-14);
            }
        }
    }
}

#[test]
fn rk4_tracks_exact_flow() {
    let mut r = rng(64);
    for n in 2..=4 {
        let rho = sample::density(&mut r, n);
        let h = sample::hermitian_with_norm(&mut r, n, 1.0);
        let exact = von_neumann_flow(&rho, &h, PI, 1e-3, FlowMethod::Exact).unwrap();
        let rk4 = von_neumann_flow(&rho, &h, PI, 1e-3, FlowMethod::Rk4).unwrap();
        assert_eq!(exact.times, rk4.times);
        let dev = max_abs(&(exact.final_state() - rk4.final_state()));
        assert!(dev < 1e-6, "rk4 deviation {dev}");
        for (m, t) in rk4.states.iter().zip(&rk4.times) {
            assert!(
                spectrum_deviation(m, rho.matrix()) < 1e-8,
                "spectrum drift at t = {t}"
            );
            let purity: f64 = m.iter().map(|z| z.norm_sqr()).sum();
            assert!((purity - rho.purity()).abs() < 1e-8);
        }
    }
}

#[test]
fn sigma_z_precession() {
    let rho = DensityState::from_bloch(&BlochVector::new(1.0, 0.0, 0.0)).unwrap();
    let h = HermitianOperator::pauli(3);
    for method in [FlowMethod::Exact, FlowMethod::Rk4] {
        let traj = von_neumann_flow(&rho, &h, FRAC_PI_2, 1e-3, method).unwrap();
        for (m, &t) in traj.states.iter().zip(&traj.times) {
            let x = geoquant::density::bloch_of_matrix(m).unwrap();
            let expected = Vector3::new((2.0 * t).cos(), (2.0 * t).sin(), 0.0);
            assert!((x.as_vector() - expected).norm() < 1e-6);
        }
        let x = geoquant::density::bloch_of_matrix(traj.final_state()).unwrap();
        assert!((x.as_vector() - Vector3::new(-1.0, 0.0, 0.0)).norm() < 1e-6);
    }
}

#[test]
fn bloch_hamiltonian_field_is_von_neumann_velocity() {
    let mut r = rng(65);
    for _ in 0..50 {
        let x = BlochVector::from_vector(sample::ball_vector3(&mut r));
        let a = sample::hermitian(&mut r, 2);
        let rho = DensityState::from_bloch(&x).unwrap();
        let rho_dot = commutator(a.matrix(), rho.matrix()) * (-I);
        let velocity = Vector3::from_fn(|k, _| (&rho_dot * pauli(k + 1)).trace().re);
        let field = bloch_hamiltonian_field(&x, &a).unwrap();
        assert!((field - velocity).norm() < 1e-12);
    }
}

#[test]
fn flow_preserves_trace_and_hermiticity() {
    let mut r = rng(66);
    let rho = sample::density(&mut r, 3);
    let h = sample::hermitian_with_norm(&mut r, 3, 1.0);
    let traj = von_neumann_flow(&rho, &h, 1.0, 1e-3, FlowMethod::Rk4).unwrap();
    for m in &traj.states {
        assert!((m.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(max_abs(&(m - m.adjoint())) < 1e-12);
    }
}
