mod common;

use common::{max_abs, re, rng};
use geoquant::composite::{
    cartan_canonical_form, pauli_decompose, product_poisson, separable_pure, tensor_state, Monomial,
};
use geoquant::projective::{bloch_map, pure_projector};
use geoquant::realified::to_real;
use geoquant::{sample, CMatrix, CVector, DensityState, C64};
use nalgebra::Vector3;
use rand::Rng;

/// Unit vector of ℂ² whose Bloch vector is `x`.
fn lift(x: &Vector3<f64>) -> CVector {
    let theta = x.z.clamp(-1.0, 1.0).acos();
    let phi = x.y.atan2(x.x);
    CVector::from_vec(vec![
        re((theta / 2.0).cos()),
        C64::from_polar((theta / 2.0).sin(), phi),
    ])
}

#[test]
fn lift_inverts_bloch_map() {
    let mut r = rng(71);
    for _ in 0..50 {
        let x = sample::unit_vector3(&mut r);
        let y = bloch_map(&to_real(&lift(&x))).unwrap();
        assert!((y.as_vector() - x).norm() < 1e-12);
    }
}

#[test]
fn separable_pure_is_projector_onto_product_state() {
    let mut r = rng(72);
    for _ in 0..50 {
        let n = sample::unit_vector3(&mut r);
        let m = sample::unit_vector3(&mut r);
        let rho = separable_pure(&n, &m).unwrap();
        let psi = tensor_state(&lift(&n), &lift(&m)).unwrap();
        let expected = pure_projector(&to_real(&psi)).unwrap();
        assert!(max_abs(&(rho.matrix() - expected.matrix())) < 1e-12);
    }
}

#[test]
fn pauli_round_trip_and_purity_identity() {
    let mut r = rng(73);
    for k in 0..100 {
        let rho = if k % 2 == 0 {
            sample::density(&mut r, 4)
        } else {
            sample::density_of_rank(&mut r, 4, 1 + k % 4)
        };
        let d = pauli_decompose(&rho).unwrap();
        assert!(max_abs(&(d.reconstruct() - rho.matrix())) < 1e-12);
        assert!((d.squared_norm() - (4.0 * rho.purity() - 1.0)).abs() < 1e-12);
    }
}

#[test]
fn product_states_have_rank_one_correlations() {
    let mut r = rng(74);
    for _ in 0..50 {
        let n = sample::unit_vector3(&mut r);
        let m = sample::unit_vector3(&mut r);
        let d = pauli_decompose(&separable_pure(&n, &m).unwrap()).unwrap();
        assert!((d.p - n).norm() < 1e-12);
        assert!((d.q - m).norm() < 1e-12);
        assert!((d.r - n * m.transpose()).norm() < 1e-12);
        let sv = d.r.singular_values();
        assert!(sv[1].abs() < 1e-12 && sv[2].abs() < 1e-12);
    }
}

#[test]
fn entangled_pure_states_are_not_product_form() {
    let s = re(std::f64::consts::FRAC_1_SQRT_2);
    let v = CVector::from_vec(vec![s, re(0.0), re(0.0), s]);
    let bell = pure_projector(&to_real(&v)).unwrap();
    let d = pauli_decompose(&bell).unwrap();
    assert!((d.r - d.p * d.q.transpose()).norm() > 1.0);
}

#[test]
fn cartan_form_reconstructs_state() {
    let mut r = rng(75);
    for k in 0..100 {
        let rho = if k % 3 == 0 {
            sample::density_of_rank(&mut r, 4, 1 + k % 4)
        } else {
            sample::density(&mut r, 4)
        };
        let c = cartan_canonical_form(&rho).unwrap();
        assert!(max_abs(&(c.reconstruct() - rho.matrix())) < 1e-12);
        let u = &c.unitary;
        assert!(max_abs(&(u.adjoint() * u - CMatrix::identity(4, 4))) < 1e-12);
        let diag = c.diagonal();
        assert!(diag.iter().all(|&x| (-1e-12..=1.0 + 1e-12).contains(&x)));
        assert!((diag.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(diag.windows(2).all(|w| w[0] >= w[1] - 1e-12));
    }
}

#[test]
fn cartan_form_is_deterministic() {
    let mut r = rng(76);
    let rho = sample::density(&mut r, 4);
    let a = cartan_canonical_form(&rho).unwrap();
    let b = cartan_canonical_form(&DensityState::new(rho.matrix().clone()).unwrap()).unwrap();
    assert_eq!(a, b);
}

fn random_monomial<R: Rng>(r: &mut R) -> Monomial {
    let mut m = Monomial::new(r.random_range(1..=2), r.random_range(1..=2));
    if r.random_bool(0.5) {
        m = m.conj_z();
    }
    if r.random_bool(0.5) {
        m = m.conj_w();
    }
    m
}

#[test]
fn poisson_bracket_obeys_product_rule() {
    let mut r = rng(77);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (a, b) = (random_monomial(&mut r), random_monomial(&mut r));
        let z = sample::complex_vector(&mut r, 2);
        let w = sample::complex_vector(&mut r, 2);
        worst = worst.max(product_poisson(a, b, &z, &w).unwrap().residual());
    }
    assert!(worst < 1e-12, "product rule residual {worst}");
}

#[test]
fn product_rule_has_nontrivial_values() {
    // {z₁w₁, z̄₁w̄₁} picks up the canonical pairings of both factors.
    let z = CVector::from_vec(vec![C64::new(0.4, 0.3), C64::new(-0.2, 1.0)]);
    let w = CVector::from_vec(vec![C64::new(1.1, -0.5), C64::new(0.7, 0.1)]);
    let a = Monomial::new(1, 1);
    let b = a.conj_z().conj_w();
    let pp = product_poisson(a, b, &z, &w).unwrap();
    assert!(pp.lhs.norm() > 0.1);
    assert!(pp.residual() < 1e-12);
    assert!(product_poisson(Monomial::new(3, 1), b, &z, &w).is_err());
}
