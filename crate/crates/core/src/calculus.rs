//! Finite-difference helpers used to check differential identities.

/// Central-difference gradient of `f` at `x` with absolute step `h`.
pub fn central_gradient<F>(f: F, x: &[f64], h: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|k| {
            probe[k] = x[k] + h;
            let fp = f(&probe);
            probe[k] = x[k] - h;
            let fm = f(&probe);
            probe[k] = x[k];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// Finite-difference exterior derivative of a two-form.
///
/// `form(x, v, w)` evaluates the two-form at `x` on the tangent vectors `v`,
/// `w`. Returns `dω(e_i, e_j, e_k) = ∂_i ω_jk − ∂_j ω_ik + ∂_k ω_ij` at `x`.
pub fn exterior_derivative_2form<F>(form: F, x: &[f64], i: usize, j: usize, k: usize, h: f64) -> f64
where
    F: Fn(&[f64], &[f64], &[f64]) -> f64,
{
    let dim = x.len();
    let e = |a: usize| {
        let mut v = vec![0.0; dim];
        v[a] = 1.0;
        v
    };
    let partial = |dir: usize, a: usize, b: usize| {
        let (ea, eb) = (e(a), e(b));
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[dir] += h;
        xm[dir] -= h;
        (form(&xp, &ea, &eb) - form(&xm, &ea, &eb)) / (2.0 * h)
    };
    partial(i, j, k) - partial(j, i, k) + partial(k, i, j)
}
