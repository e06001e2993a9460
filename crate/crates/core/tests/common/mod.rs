#![allow(dead_code)]

use geoquant::{CMatrix, CVector, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    geoquant::linalg::max_abs(m)
}

pub fn max_abs_vec(v: &CVector) -> f64 {
    geoquant::linalg::max_abs_vec(v)
}

pub fn max_abs_f64(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
