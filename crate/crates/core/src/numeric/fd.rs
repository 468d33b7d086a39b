//! Finite-difference weights on arbitrary grids.

/// Fornberg's algorithm: weights `w[k][j]` such that the `k`-th derivative
/// at `x0` is approximated by `sum_j w[k][j] * f(xs[j])`, for `k <= m`.
pub fn fornberg(x0: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Start index of a `width`-point stencil around sample `i`, shifted inward
/// at the ends.
pub fn stencil_start(i: usize, n: usize, width: usize) -> usize {
    let width = width.min(n);
    let half = width / 2;
    i.saturating_sub(half).min(n - width)
}

/// Derivatives of order 1 and 2 of sampled values with centred five-point
/// stencils (one-sided at the ends). Needs at least 3 samples.
pub fn derivatives(params: &[f64], values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = params.len();
    let width = 5.min(n);
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for i in 0..n {
        let s = stencil_start(i, n, width);
        let w = fornberg(params[i], &params[s..s + width], 2);
        for j in 0..width {
            d1[i] += w[1][j] * values[s + j];
            d2[i] += w[2][j] * values[s + j];
        }
    }
    (d1, d2)
}

/// Value and first derivative of the local cubic interpolant of
/// `values(params)` at `x`.
pub fn interpolate(params: &[f64], values: &[f64], x: f64) -> (f64, f64) {
    let n = params.len();
    let k = params.partition_point(|&p| p <= x).clamp(1, n - 1) - 1;
    let width = 4.min(n);
    let s = k.saturating_sub(1).min(n - width);
    let w = fornberg(x, &params[s..s + width], 1);
    let mut v = 0.0;
    let mut dv = 0.0;
    for j in 0..width {
        v += w[0][j] * values[s + j];
        dv += w[1][j] * values[s + j];
    }
    (v, dv)
}
