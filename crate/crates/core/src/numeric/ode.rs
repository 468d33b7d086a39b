//! Classical fourth-order Runge–Kutta for small fixed-size systems.

/// One RK4 step of size `h` for `y' = f(t, y)`.
pub fn rk4_step<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]>(f: &F, t: f64, y: &[f64; N], h: f64) -> [f64; N] {
    let add = |y: &[f64; N], k: &[f64; N], s: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &add(y, &k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, &add(y, &k2, 0.5 * h));
    let k4 = f(t + h, &add(y, &k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrates from `t0` to `t1` with `steps` equal steps and returns every
/// state including the initial one.
pub fn rk4_integrate<const N: usize, F: Fn(f64, &[f64; N]) -> [f64; N]>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    steps: usize,
) -> Vec<(f64, [f64; N])> {
    let steps = steps.max(1);
    let h = (t1 - t0) / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut y = y0;
    out.push((t0, y));
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        y = rk4_step(&f, t, &y, h);
        out.push((t0 + (i + 1) as f64 * h, y));
    }
    out
}
