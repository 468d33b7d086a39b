//! Hoppe's solution of the Born-Infeld equation
//! `z_tt (1 + z_x^2) - z_xx (1 - z_t^2) = 2 z_x z_t z_xt`.
//!
//! Given generating functions `f(phi + t/lambda)` and `g(phi - t/lambda)`,
//! the string `(x, z)(t, phi)` has
//! `x' = lambda cos(f-g) cos(f+g)`, `z' = lambda cos(f-g) sin(f+g)` and
//! `x. = -sin(f-g) sin(f+g)`, `z. = sin(f-g) cos(f+g)`, where primes are
//! `phi`-derivatives and dots are `t`-derivatives. The curvature
//! `(f' + g') / (lambda cos(f-g))` blows up where `cos(f-g) = 0`, and there
//! the string forms a swallowtail.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curves::{CurveFamily, ParametricCurve};
use crate::error::{Error, Result};
use crate::normal_forms::NormalForm;
use crate::numeric::{bisect, fd, integrate_with, QuadOptions};

/// Polynomial `sum c_k (zeta - center)^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    #[serde(default)]
    pub center: f64,
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { center: 0.0, coeffs }
    }

    pub fn around(center: f64, coeffs: Vec<f64>) -> Self {
        Self { center, coeffs }
    }

    pub fn eval(&self, zeta: f64) -> f64 {
        let u = zeta - self.center;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    pub fn deriv(&self, zeta: f64) -> f64 {
        let u = zeta - self.center;
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, c)| acc * u + k as f64 * c)
    }
}

/// How `g` is obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GMode {
    /// `g(zeta) = -f(-zeta)`.
    Symmetric,
    Explicit(Poly),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoppeData {
    pub f: Poly,
    pub g: GMode,
    pub lambda: f64,
}

/// Values of the generating functions at one `(t, phi)`.
#[derive(Debug, Clone, Copy)]
struct Fg {
    f: f64,
    g: f64,
    df: f64,
    dg: f64,
}

const QUAD: QuadOptions = QuadOptions {
    abs_tol: 1e-15,
    rel_tol: 1e-14,
    max_intervals: 4000,
};

impl HoppeData {
    pub fn new(f: Poly, g: GMode, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::OutOfRange {
                name: "lambda",
                value: lambda,
                reason: "lambda must be positive",
            });
        }
        Ok(Self { f, g, lambda })
    }

    pub fn symmetric(f: Poly, lambda: f64) -> Result<Self> {
        Self::new(f, GMode::Symmetric, lambda)
    }

    /// `f(zeta) = pi/4 + a (zeta - zeta0) - b (zeta - zeta0)^2` with the
    /// symmetric `g`.
    pub fn local_expansion(zeta0: f64, a: f64, b: f64, lambda: f64) -> Result<Self> {
        Self::symmetric(Poly::around(zeta0, vec![std::f64::consts::FRAC_PI_4, a, -b]), lambda)
    }

    fn fg(&self, t: f64, phi: f64) -> Fg {
        let u = phi + t / self.lambda;
        let v = phi - t / self.lambda;
        let (g, dg) = match &self.g {
            GMode::Symmetric => (-self.f.eval(-v), self.f.deriv(-v)),
            GMode::Explicit(p) => (p.eval(v), p.deriv(v)),
        };
        Fg {
            f: self.f.eval(u),
            g,
            df: self.f.deriv(u),
            dg,
        }
    }

    /// `(x', z')` at `(t, phi)`.
    pub fn tangent(&self, t: f64, phi: f64) -> [f64; 2] {
        let s = self.fg(t, phi);
        let c = self.lambda * (s.f - s.g).cos();
        [c * (s.f + s.g).cos(), c * (s.f + s.g).sin()]
    }

    /// `(x., z.)` at `(t, phi)`.
    pub fn velocity(&self, t: f64, phi: f64) -> [f64; 2] {
        let s = self.fg(t, phi);
        let d = (s.f - s.g).sin();
        [-d * (s.f + s.g).sin(), d * (s.f + s.g).cos()]
    }

    /// `f - g` and `f + g`.
    pub fn phases(&self, t: f64, phi: f64) -> (f64, f64) {
        let s = self.fg(t, phi);
        (s.f - s.g, s.f + s.g)
    }

    pub fn graph_ok(&self, t: f64, phi: f64) -> bool {
        self.phases(t, phi).1.abs() < std::f64::consts::FRAC_PI_2
    }

    /// Position of `(t, 0)`, integrating the velocity from `(0, 0)` at the origin.
    pub fn anchor(&self, t: f64) -> Result<[f64; 2]> {
        let w = integrate_with(
            |s| {
                let v = self.velocity(s, 0.0);
                Complex64::new(v[0], v[1])
            },
            0.0,
            t,
            QUAD,
        )?;
        Ok([w.re, w.im])
    }

    /// `int_{p0}^{p1} (x', z') dphi` at time `t`.
    pub fn arc(&self, t: f64, p0: f64, p1: f64) -> Result<[f64; 2]> {
        let w = integrate_with(
            |p| {
                let v = self.tangent(t, p);
                Complex64::new(v[0], v[1])
            },
            p0,
            p1,
            QUAD,
        )?;
        Ok([w.re, w.im])
    }

    /// `(x, z)(t, phi)`, integrating first in `t` along `phi = 0`, then in `phi`.
    pub fn point(&self, t: f64, phi: f64) -> Result<[f64; 2]> {
        let a = self.anchor(t)?;
        let d = self.arc(t, 0.0, phi)?;
        Ok([a[0] + d[0], a[1] + d[1]])
    }

    /// `(x, z)(t, phi)` along the other path: first in `phi` at `t = 0`,
    /// then in `t` at fixed `phi`.
    pub fn point_phi_first(&self, t: f64, phi: f64) -> Result<[f64; 2]> {
        let d = self.arc(0.0, 0.0, phi)?;
        let w = integrate_with(
            |s| {
                let v = self.velocity(s, phi);
                Complex64::new(v[0], v[1])
            },
            0.0,
            t,
            QUAD,
        )?;
        Ok([d[0] + w.re, d[1] + w.im])
    }
}

/// One time slice of the string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiCurve {
    pub t: f64,
    /// `(x, z)` against `phi`.
    pub curve: ParametricCurve,
    /// `(t_ref, phi_ref, x_ref, z_ref)` of the integration constant.
    pub anchor: [f64; 4],
}

/// The string at time `t` on the `phi` grid, by cumulative quadrature of
/// the tangent from `phi = 0`. Fails if the tangent turns vertical.
pub fn hoppe_curve(data: &HoppeData, t: f64, phis: &[f64]) -> Result<BiCurve> {
    if let Some(&phi) = phis.iter().find(|&&p| !data.graph_ok(t, p)) {
        return Err(Error::GraphCondition { t, phi });
    }
    let base = data.anchor(t)?;
    // Integrate outward from the sample closest to phi = 0.
    let start = phis
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .ok_or(Error::TooFewPoints { needed: 1, got: 0 })?;
    let mut pts = vec![[0.0; 2]; phis.len()];
    let d = data.arc(t, 0.0, phis[start])?;
    pts[start] = [base[0] + d[0], base[1] + d[1]];
    for i in start + 1..phis.len() {
        let d = data.arc(t, phis[i - 1], phis[i])?;
        pts[i] = [pts[i - 1][0] + d[0], pts[i - 1][1] + d[1]];
    }
    for i in (0..start).rev() {
        let d = data.arc(t, phis[i + 1], phis[i])?;
        pts[i] = [pts[i + 1][0] + d[0], pts[i + 1][1] + d[1]];
    }
    Ok(BiCurve {
        t,
        curve: ParametricCurve::new(phis.to_vec(), pts, Some(t))?,
        anchor: [0.0, 0.0, 0.0, 0.0],
    })
}

/// `(f' + g') / (lambda cos(f - g))`.
pub fn hoppe_curvature(data: &HoppeData, t: f64, phi: f64) -> Result<f64> {
    let s = data.fg(t, phi);
    let c = (s.f - s.g).cos();
    if c.abs() < 1e-14 {
        return Err(Error::SingularCurvature { t, phi });
    }
    Ok((s.df + s.dg) / (data.lambda * c))
}

/// Max over interior points of `|z_tt (1 + z_x^2) - z_xx (1 - z_t^2) - 2 z_x z_t z_xt|`
/// for `z[k][i] = z(ts[k], xs[i])`, using centred differences on a
/// uniform grid.
pub fn pde_residual(ts: &[f64], xs: &[f64], z: &[Vec<f64>]) -> Result<f64> {
    if ts.len() < 3 || xs.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: ts.len().min(xs.len()),
        });
    }
    if z.len() != ts.len() || z.iter().any(|row| row.len() != xs.len()) {
        return Err(Error::MismatchedGrids);
    }
    let ht = ts[1] - ts[0];
    let hx = xs[1] - xs[0];
    let mut worst: f64 = 0.0;
    for k in 1..ts.len() - 1 {
        for i in 1..xs.len() - 1 {
            let zt = (z[k + 1][i] - z[k - 1][i]) / (2.0 * ht);
            let zx = (z[k][i + 1] - z[k][i - 1]) / (2.0 * hx);
            let ztt = (z[k + 1][i] - 2.0 * z[k][i] + z[k - 1][i]) / (ht * ht);
            let zxx = (z[k][i + 1] - 2.0 * z[k][i] + z[k][i - 1]) / (hx * hx);
            let zxt = (z[k + 1][i + 1] - z[k + 1][i - 1] - z[k - 1][i + 1] + z[k - 1][i - 1]) / (4.0 * ht * hx);
            let r = ztt * (1.0 + zx * zx) - zxx * (1.0 - zt * zt) - 2.0 * zx * zt * zxt;
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

/// `z(t, x)` by solving `x(t, phi) = x` with Newton's method, starting at
/// `phi0`. Returns `(phi, z)`.
pub fn z_at(data: &HoppeData, t: f64, x: f64, phi0: f64) -> Result<(f64, f64)> {
    let base = data.anchor(t)?;
    let mut phi = phi0;
    for _ in 0..50 {
        if !data.graph_ok(t, phi) {
            return Err(Error::GraphCondition { t, phi });
        }
        let p = data.arc(t, 0.0, phi)?;
        let r = base[0] + p[0] - x;
        let dx = data.tangent(t, phi)[0];
        if dx == 0.0 {
            return Err(Error::SingularCurvature { t, phi });
        }
        let step = r / dx;
        phi -= step;
        if step.abs() <= 1e-15 * (1.0 + phi.abs()) {
            let p = data.arc(t, 0.0, phi)?;
            return Ok((phi, base[1] + p[1]));
        }
    }
    Err(Error::FitFailed(format!("no phi with x = {x} at t = {t}")))
}

/// PDE residual of the string on `ts` by `xs` (both uniform), with `z`
/// resampled at each `x` exactly through [`z_at`].
pub fn bi_residual_on(data: &HoppeData, ts: &[f64], xs: &[f64]) -> Result<f64> {
    let mut z = Vec::with_capacity(ts.len());
    for &t in ts {
        let mut row = Vec::with_capacity(xs.len());
        let mut phi = 0.0;
        for &x in xs {
            let (p, zv) = z_at(data, t, x, phi)?;
            phi = p;
            row.push(zv);
        }
        z.push(row);
    }
    pde_residual(ts, xs, &z)
}

/// PDE residual on the times `ts`, with `z` resampled onto a uniform
/// `x`-grid of `phis.len()` points spanning the `x`-range common to all
/// slices, shrunk by one grid step at each end.
pub fn bi_residual(data: &HoppeData, ts: &[f64], phis: &[f64]) -> Result<f64> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for &t in ts {
        let c = hoppe_curve(data, t, &[phis[0], phis[phis.len() - 1]])?;
        let xs = c.curve.xs();
        lo = lo.max(xs[0].min(xs[1]));
        hi = hi.min(xs[0].max(xs[1]));
    }
    let n = phis.len().max(3);
    let h = (hi - lo) / (n + 1) as f64;
    if !(h > 0.0) {
        return Err(Error::MismatchedGrids);
    }
    let xs: Vec<f64> = (1..=n).map(|i| lo + h * i as f64).collect();
    bi_residual_on(data, ts, &xs)
}

/// First time after `t_start` at which `cos(f - g)` vanishes at `phi`,
/// scanning in steps of `dt` up to `t_max` and refining by bisection.
pub fn curvature_blowup_time(data: &HoppeData, phi: f64, t_start: f64, t_max: f64, dt: f64) -> Result<f64> {
    let c = |t: f64| data.phases(t, phi).0.cos();
    let mut t = t_start;
    let c0 = c(t);
    while t < t_max {
        let next = (t + dt).min(t_max);
        if c(next) * c0 <= 0.0 {
            return bisect(c, t, next, 1e-14);
        }
        t = next;
    }
    Err(Error::NoBracket { lo: t_start, hi: t_max })
}

/// Singularity of the local expansion `(zeta0, a, b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiSingularity {
    pub t0: f64,
    pub phi: f64,
    pub location: [f64; 2],
    pub data: HoppeData,
    /// Leading-order swallowtail at `t' = 0`.
    pub form: NormalForm,
}

/// `t0 = lambda zeta0` and the swallowtail there; requires `a, b > 0`.
pub fn bi_singularity(zeta0: f64, a: f64, b: f64, lambda: f64) -> Result<BiSingularity> {
    if !(a > 0.0) {
        return Err(Error::OutOfRange {
            name: "a",
            value: a,
            reason: "a > 0 keeps the string regular before the singularity",
        });
    }
    if !(b > 0.0) {
        return Err(Error::OutOfRange {
            name: "b",
            value: b,
            reason: "b > 0 puts the first singularity at phi = 0",
        });
    }
    let data = HoppeData::local_expansion(zeta0, a, b, lambda)?;
    let t0 = lambda * zeta0;
    let location = data.point(t0, 0.0)?;
    let form = bi_local_form(a, b, lambda, 0.0)?.with_motion(0.0, location);
    Ok(BiSingularity {
        t0,
        phi: 0.0,
        location,
        data,
        form,
    })
}

/// Leading order near `phi = 0`, `t' = t0 - t`:
/// `x = lambda (2 a tau phi + (2b/3) phi^3)`,
/// `z = lambda (2 a^2 tau phi^2 + a b phi^4)` with `tau = t'/lambda`.
/// With `theta = 2 a phi` this is the swallowtail with `epsilon = t'` and
/// `A = lambda b / (4 a^3)`, placed at the origin.
pub fn bi_local_form(a: f64, b: f64, lambda: f64, tprime: f64) -> Result<NormalForm> {
    NormalForm::swallowtail(tprime, lambda * b / (4.0 * a.powi(3)))
}

/// Slices at `t = t0 - t'`, labelled with `t'`.
pub fn bi_family(data: &HoppeData, t0: f64, tprimes: &[f64], phis: &[f64]) -> Result<CurveFamily> {
    let curves = tprimes
        .iter()
        .map(|&tp| Ok(hoppe_curve(data, t0 - tp, phis)?.curve.with_label(Some(tp))))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveFamily::new(curves))
}

/// Max difference between `d/dt (x', z')` and `d/dphi (x., z.)` by
/// centred differences with step `h` at the given points.
pub fn integrability_defect(data: &HoppeData, points: &[(f64, f64)], h: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for &(t, p) in points {
        let a = data.tangent(t + h, p);
        let b = data.tangent(t - h, p);
        let c = data.velocity(t, p + h);
        let d = data.velocity(t, p - h);
        for k in 0..2 {
            let lhs = (a[k] - b[k]) / (2.0 * h);
            let rhs = (c[k] - d[k]) / (2.0 * h);
            worst = worst.max((lhs - rhs).abs());
        }
    }
    worst
}

/// Pointwise `| |(x', z')| - lambda |cos(f - g)| |` using the sampled curve's
/// five-point tangent.
pub fn tangent_norm_defect(data: &HoppeData, curve: &BiCurve) -> f64 {
    let phis = curve.curve.params();
    let (dx, _) = fd::derivatives(phis, &curve.curve.xs());
    let (dz, _) = fd::derivatives(phis, &curve.curve.ys());
    phis.iter()
        .enumerate()
        .map(|(i, &p)| {
            let want = data.lambda * data.phases(curve.t, p).0.cos().abs();
            (dx[i].hypot(dz[i]) - want).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{find_tips, geometry};
    use crate::normal_forms::{fit_normal_form, fit_scaling, tip_exponent, Kind};

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    fn generic() -> HoppeData {
        HoppeData::new(
            Poly::new(vec![0.2, 0.3, -0.1, 0.05]),
            GMode::Explicit(Poly::new(vec![-0.1, 0.25, 0.08])),
            1.3,
        )
        .unwrap()
    }

    #[test]
    fn poly_eval() {
        let p = Poly::around(1.0, vec![1.0, 2.0, 3.0]);
        assert_eq!(p.eval(2.0), 6.0);
        assert_eq!(p.deriv(2.0), 8.0);
        assert_eq!(Poly::new(vec![]).eval(3.0), 0.0);
    }

    #[test]
    fn flat_string() {
        let d = HoppeData::symmetric(Poly::new(vec![]), 1.0).unwrap();
        let c = hoppe_curve(&d, 0.7, &linspace(-1.0, 1.0, 11)).unwrap();
        for (p, q) in c.curve.params().iter().zip(c.curve.points()) {
            assert!((q[0] - p).abs() < 1e-14 && q[1].abs() < 1e-14);
        }
        assert_eq!(hoppe_curvature(&d, 0.3, 0.2).unwrap(), 0.0);
        let r = bi_residual(&d, &[0.0, 0.01, 0.02], &linspace(-1.0, 1.0, 21)).unwrap();
        assert!(r < 1e-10);
    }

    #[test]
    fn linear_generator_tangent() {
        // f = zeta, g = -f(-zeta) = zeta: f - g = 2t, f + g = 2 phi at lambda = 1.
        let d = HoppeData::symmetric(Poly::new(vec![0.0, 1.0]), 1.0).unwrap();
        for phi in [-0.3, 0.0, 0.4] {
            let v = d.tangent(0.0, phi);
            assert!((v[0] - (2.0 * phi).cos()).abs() < 1e-15);
            assert!((v[1] - (2.0 * phi).sin()).abs() < 1e-15);
            let v = d.tangent(0.2, phi);
            assert!((v[0] - 0.4f64.cos() * (2.0 * phi).cos()).abs() < 1e-15);
        }
        let c = hoppe_curve(&d, 0.0, &linspace(-0.5, 0.5, 101)).unwrap();
        let (dx, _) = fd::derivatives(c.curve.params(), &c.curve.xs());
        for (i, p) in c.curve.params().iter().enumerate().skip(2).take(96) {
            assert!((dx[i] - (2.0 * p).cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn curvature_values() {
        let d = HoppeData::symmetric(Poly::new(vec![0.0, 0.5]), 1.0).unwrap();
        assert!((hoppe_curvature(&d, 0.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let s = bi_singularity(1.0, 0.5, 0.5, 1.0).unwrap();
        for tp in [1e-3, 1e-5] {
            let k = hoppe_curvature(&s.data, 1.0 - tp, 0.0).unwrap();
            assert!((k * 2.0 * 0.5 * tp - 1.0).abs() < 1e-2, "{k}");
        }
        assert!(matches!(
            hoppe_curvature(&s.data, 1.0, 0.0),
            Err(Error::SingularCurvature { .. })
        ));
    }

    #[test]
    fn curvature_matches_geometry() {
        let d = generic();
        let c = hoppe_curve(&d, 0.4, &linspace(-0.5, 0.5, 2001)).unwrap();
        let g = geometry(&c.curve).unwrap();
        for i in (100..1900).step_by(200) {
            let k = hoppe_curvature(&d, 0.4, c.curve.params()[i]).unwrap();
            assert!((g.curvature[i] - k).abs() < 1e-4, "{} {}", g.curvature[i], k);
        }
    }

    #[test]
    fn paths_agree() {
        let d = generic();
        for (t, p) in [(0.3, 0.2), (-0.2, 0.5), (0.6, -0.4)] {
            let a = d.point(t, p).unwrap();
            let b = d.point_phi_first(t, p).unwrap();
            assert!((a[0] - b[0]).abs() < 1e-8 && (a[1] - b[1]).abs() < 1e-8);
        }
        assert!(integrability_defect(&d, &[(0.1, 0.2), (0.5, -0.3)], 1e-4) < 1e-6);
    }

    #[test]
    fn tangent_norm() {
        let d = generic();
        let c = hoppe_curve(&d, 0.2, &linspace(-0.5, 0.5, 2001)).unwrap();
        assert!(tangent_norm_defect(&d, &c) < 1e-8);
    }

    #[test]
    fn graph_condition() {
        let d = HoppeData::symmetric(Poly::new(vec![0.0, 1.0]), 1.0).unwrap();
        // f + g = 2 phi reaches pi/2 at phi = pi/4
        assert!(matches!(
            hoppe_curve(&d, 0.0, &[0.0, 0.5, 0.9]),
            Err(Error::GraphCondition { .. })
        ));
    }

    #[test]
    fn linear_z_solves_pde() {
        let ts = linspace(0.0, 1.0, 5);
        let xs = linspace(-1.0, 1.0, 7);
        let z: Vec<Vec<f64>> = ts.iter().map(|_| xs.clone()).collect();
        assert!(pde_residual(&ts, &xs, &z).unwrap() < 1e-12);
        let bad: Vec<Vec<f64>> = ts
            .iter()
            .map(|t| xs.iter().map(|x| x * x + 0.5 * t).collect())
            .collect();
        assert!(pde_residual(&ts, &xs, &bad).unwrap() > 0.1);
    }

    #[test]
    fn residual_second_order() {
        let d = generic();
        let res = |h: f64| {
            let ts = [0.3 - h, 0.3, 0.3 + h];
            let xs: Vec<f64> = (-5..=5).map(|i| 0.1 + h * i as f64).collect();
            bi_residual_on(&d, &ts, &xs).unwrap()
        };
        let r1 = res(2e-3);
        let r2 = res(1e-3);
        assert!(r2 <= 1e-5, "{r2}");
        let order = (r1 / r2).log2();
        assert!((order - 2.0).abs() < 0.3, "{order}");
    }

    #[test]
    fn singular_time() {
        let s = bi_singularity(1.0, 0.5, 0.5, 1.0).unwrap();
        assert_eq!(s.t0, 1.0);
        let t = curvature_blowup_time(&s.data, 0.0, 0.0, 2.0, 0.01).unwrap();
        assert!((t - 1.0).abs() < 1e-8);
        let s = bi_singularity(0.8, 0.7, 0.3, 2.0).unwrap();
        let t = curvature_blowup_time(&s.data, 0.0, 0.0, 3.0, 0.01).unwrap();
        assert!((t - s.t0).abs() < 1e-8);
        assert!(bi_singularity(1.0, -0.5, 0.5, 1.0).is_err());
        assert!(bi_singularity(1.0, 0.5, 0.0, 1.0).is_err());
    }

    #[test]
    fn local_form_tracks_string() {
        let s = bi_singularity(1.0, 0.5, 0.5, 1.0).unwrap();
        let tp = 1e-3;
        let nf = bi_local_form(0.5, 0.5, 1.0, tp).unwrap();
        let base = s.data.point(1.0 - tp, 0.0).unwrap();
        for phi in [-0.05, -0.01, 0.02, 0.05] {
            let p = s.data.point(1.0 - tp, phi).unwrap();
            let q = nf.local_point(2.0 * 0.5 * phi);
            let (dx, dz) = (p[0] - base[0] - q[0], p[1] - base[1] - q[1]);
            assert!(dx.hypot(dz) < 2e-5, "{phi}: {dx} {dz}");
        }
    }

    #[test]
    fn swallowtail_with_unit_gamma() {
        let s = bi_singularity(1.0, 0.5, 0.5, 1.0).unwrap();
        let phis = linspace(-0.6, 0.6, 2001);
        let fam = bi_family(&s.data, s.t0, &[1e-1, 1e-2, 1e-3, 0.0], &phis).unwrap();
        let fit = fit_scaling(&fam).unwrap();
        assert!((fit.gamma - 1.0).abs() < 0.02, "{}", fit.gamma);
        let crit = &fam.curves[3];
        let tip = find_tips(crit)[0];
        assert!(tip.sigma.abs() < 1e-6);
        let nf = fit_normal_form(crit, &tip).unwrap();
        assert_eq!(nf.form.kind, Kind::Swallowtail);
        let p = tip_exponent(crit, &tip, nf.window_radius).unwrap();
        assert!((p - 4.0 / 3.0).abs() < 0.02, "{p}");
    }
}
