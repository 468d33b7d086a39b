//! Free-surface potential flows: Hopkinson's drop driven by a vortex dipole
//! plus a vortex, and the cusped ridge of Craya and Sautreaux.
//!
//! The drop is the image of the real `zeta` axis under
//! `z / (2(1+m)) = -1/(zeta+i) + i/(zeta+i)^2 + (1+gamma^2)/(3(zeta+i)^3)`
//! with `gamma^2 = (1-m)/(1+m)`. It has cusps at `zeta = ±gamma`, and at
//! `m = 1` the two cusps merge in a swallowtail at `(0, 4/3)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curves::{find_self_intersections, ParametricCurve};
use crate::error::{Error, Result};
use crate::normal_forms::NormalForm;
use crate::numeric::{bisect, integrate_with, QuadOptions};

/// Hopkinson drop with relative vortex strength `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopkinsonDrop {
    pub m: f64,
    /// `sqrt((1-m)/(1+m))`, the parameter of the two cusps.
    pub gamma_m: f64,
}

impl HopkinsonDrop {
    /// Accepts `0 <= m <= 1`; `m = 1` is the swallowtail limit `gamma_m = 0`.
    pub fn new(m: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(Error::OutOfRange {
                name: "m",
                value: m,
                reason: "the drop is only given for 0 <= m <= 1",
            });
        }
        Ok(Self {
            m,
            gamma_m: ((1.0 - m) / (1.0 + m)).sqrt(),
        })
    }

    /// The boundary point for real `zeta`.
    pub fn point(&self, zeta: f64) -> [f64; 2] {
        let g2 = self.gamma_m * self.gamma_m;
        let s = 2.0 * (1.0 + self.m);
        let z2 = zeta * zeta;
        let d = 3.0 * (z2 + 1.0).powi(3);
        [
            -s * zeta * (3.0 * z2 * z2 - (1.0 + g2) * z2 + 3.0 * g2) / d,
            s * (6.0 * z2 * z2 + 3.0 * (1.0 - g2) * z2 + 1.0 + g2) / d,
        ]
    }

    /// `z(zeta)` from the complex closed form; agrees with [`Self::point`].
    pub fn z(&self, zeta: f64) -> Complex64 {
        let w = Complex64::new(zeta, 1.0);
        let g2 = self.gamma_m * self.gamma_m;
        2.0 * (1.0 + self.m) * (-1.0 / w + Complex64::i() / (w * w) + (1.0 + g2) / (3.0 * w * w * w))
    }

    /// `dz/dzeta = 2(1+m)(zeta^2 - gamma^2)/(zeta+i)^4`.
    pub fn dz_dzeta(&self, zeta: f64) -> Complex64 {
        let w = Complex64::new(zeta, 1.0);
        2.0 * (1.0 + self.m) * (zeta * zeta - self.gamma_m * self.gamma_m) / w.powi(4)
    }

    /// Swallowtail approximation near the top for `m` close to 1:
    /// `x = 2 eps zeta + 4 zeta^3/3`, `y - 4/3 = 4 eps zeta^2 + 4 zeta^4`
    /// with `eps = m - 1`, i.e. the normal form with `theta = 4 zeta`,
    /// `epsilon = (m - 1)/2` and `a = 1/16`.
    pub fn local_form(&self) -> Result<NormalForm> {
        drop_local_form(self.m)
    }
}

/// `zeta = tan(vartheta / 2)`; the drop is sampled in `vartheta`.
pub fn zeta_of(vartheta: f64) -> f64 {
    (0.5 * vartheta).tan()
}

pub fn vartheta_of(zeta: f64) -> f64 {
    2.0 * zeta.atan()
}

/// The closed drop boundary sampled uniformly in `vartheta` on `[-pi, pi]`,
/// so both ends are the origin. Curve parameters are `vartheta`.
pub fn drop_shape(m: f64, samples: usize) -> Result<ParametricCurve> {
    let drop = HopkinsonDrop::new(m)?;
    let n = samples.max(3);
    let pi = std::f64::consts::PI;
    let params: Vec<f64> = (0..n).map(|i| -pi + 2.0 * pi * i as f64 / (n - 1) as f64).collect();
    ParametricCurve::from_fn(&params, Some(m), |v| {
        if v.abs() == pi {
            [0.0, 0.0]
        } else {
            drop.point(zeta_of(v))
        }
    })
}

/// The top of the drop, `|zeta| <= half_width`, sampled uniformly in `zeta`.
pub fn drop_top(m: f64, half_width: f64, samples: usize) -> Result<ParametricCurve> {
    let drop = HopkinsonDrop::new(m)?;
    let n = samples.max(3);
    let params: Vec<f64> = (0..n)
        .map(|i| -half_width + 2.0 * half_width * i as f64 / (n - 1) as f64)
        .collect();
    ParametricCurve::from_fn(&params, Some(m), |z| drop.point(z))
}

/// Local swallowtail near `m = 1`, placed at `(0, 4/3)` and parameterized by
/// `theta = 4 zeta`.
pub fn drop_local_form(m: f64) -> Result<NormalForm> {
    Ok(NormalForm::swallowtail(0.5 * (m - 1.0), 1.0 / 16.0)?.with_motion(0.0, [0.0, 4.0 / 3.0]))
}

/// Number of self-intersections of the drop top `|zeta| <= 1`.
pub fn intersection_count(m: f64, samples: usize) -> Result<usize> {
    Ok(find_self_intersections(&drop_top(m, 1.0, samples)?).len())
}

/// Self-intersection counts over a sweep of `m`.
pub fn intersection_sweep(ms: &[f64], samples: usize) -> Result<Vec<(f64, usize)>> {
    ms.iter().map(|&m| Ok((m, intersection_count(m, samples)?))).collect()
}

/// Samples used on `|zeta| <= 1` when bisecting for the critical `m`.
pub const CRITICAL_M_SAMPLES: usize = 40001;

/// The `m` below which the drop top stops self-intersecting, by bisection
/// on the presence of crossings to `1e-5`.
pub fn critical_m() -> Result<f64> {
    let crosses = |m: f64| intersection_count(m, CRITICAL_M_SAMPLES).map(|n| n > 0);
    let (mut lo, mut hi) = (0.5, 0.999);
    if crosses(lo)? || !crosses(hi)? {
        return Err(Error::NoBracket { lo, hi });
    }
    while hi - lo > 1e-5 {
        let mid = 0.5 * (lo + hi);
        if crosses(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The critical `m` where the axis crossings `x(zeta) = 0, zeta != 0` merge,
/// `(1 + gamma^2)^2 = 36 gamma^2`, found by root-finding on `m`.
pub fn critical_m_closed_form() -> Result<f64> {
    bisect(
        |m| {
            let g2 = (1.0 - m) / (1.0 + m);
            (1.0 + g2).powi(2) - 36.0 * g2
        },
        0.5,
        1.0,
        1e-15,
    )
}

/// Craya-Sautreaux ridge with opening parameter 1/3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrayaShape {
    /// Parameterized by `theta`, with `l = exp(-i theta)`.
    pub curve: ParametricCurve,
}

impl CrayaShape {
    pub fn thetas(&self) -> &[f64] {
        self.curve.params()
    }
}

/// Distance from `±pi` at which the ridge is truncated.
pub const CRAYA_TRUNCATION: f64 = 1e-3;

/// `dz/dtheta = -(2/3)^{1/3} (1 - l) l^{2/3} / (1 + l)^{4/3}` on `l = exp(-i theta)`,
/// principal branches.
pub fn craya_dz(theta: f64) -> Complex64 {
    let c = (2.0f64 / 3.0).cbrt();
    let l = Complex64::from_polar(1.0, -theta);
    let one = Complex64::new(1.0, 0.0);
    -c * (one - l) * l.powf(2.0 / 3.0) / (one + l).powf(4.0 / 3.0)
}

/// [`craya_dz`] with the branch factors combined,
/// `l^{2/3} / (1 + l)^{4/3} = (2 cos(theta/2))^{-4/3}`, which avoids the
/// cancellation in `1 + l` near `theta = ±pi`.
fn craya_dz_reduced(theta: f64) -> Complex64 {
    let c = (2.0f64 / 3.0).cbrt();
    let (s, co) = (0.5 * theta).sin_cos();
    // 1 - l = 2i sin(theta/2) e^{-i theta/2}
    let one_minus_l = Complex64::new(0.0, 2.0 * s) * Complex64::from_polar(1.0, -0.5 * theta);
    -c * one_minus_l * (2.0 * co).powf(-4.0 / 3.0)
}

/// Integrates [`craya_dz`] outward from the tip at `theta = 0` on a uniform
/// grid over `|theta| <= pi - 1e-3`.
pub fn craya_shape(samples: usize) -> Result<CrayaShape> {
    let n = samples.max(3) | 1;
    let edge = std::f64::consts::PI - CRAYA_TRUNCATION;
    let thetas: Vec<f64> = (0..n).map(|i| -edge + 2.0 * edge * i as f64 / (n - 1) as f64).collect();
    let mid = n / 2;
    let opts = QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 1e-10,
        ..QuadOptions::default()
    };
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    for i in mid + 1..n {
        z[i] = z[i - 1] + integrate_with(craya_dz_reduced, thetas[i - 1], thetas[i], opts)?;
    }
    for i in (0..mid).rev() {
        z[i] = z[i + 1] + integrate_with(craya_dz_reduced, thetas[i + 1], thetas[i], opts)?;
    }
    let mut thetas = thetas;
    thetas[mid] = 0.0;
    let points = z.iter().map(|w| [w.re, w.im]).collect();
    Ok(CrayaShape {
        curve: ParametricCurve::new(thetas, points, None)?,
    })
}

/// Leading-order tip: `x = -(3^{2/3}/36) theta^3`, `y = -(3^{2/3}/12) theta^2`.
pub fn craya_local(theta: f64) -> [f64; 2] {
    let k = 3f64.powf(2.0 / 3.0);
    [-k / 36.0 * theta.powi(3), -k / 12.0 * theta * theta]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::find_tips;
    use crate::normal_forms::{fit_normal_form, tip_exponent, Kind};
    use proptest::prelude::*;

    #[test]
    fn apex_and_origin() {
        let d = HopkinsonDrop::new(1.0).unwrap();
        let p = d.point(0.0);
        assert_eq!(p[0], 0.0);
        assert!((p[1] - 4.0 / 3.0).abs() < 1e-12);
        let c = drop_shape(0.5, 101).unwrap();
        assert_eq!(c.points()[0], [0.0, 0.0]);
        assert_eq!(c.points()[100], [0.0, 0.0]);
        let far = HopkinsonDrop::new(0.2).unwrap().point(1e8);
        assert!(far[0].abs() < 1e-7 && far[1].abs() < 1e-15);
        assert!(HopkinsonDrop::new(1.5).is_err());
        assert!(HopkinsonDrop::new(-0.1).is_err());
    }

    #[test]
    fn gamma_invariant() {
        for m in [0.0, 0.2, 1.0 / 3.0, 0.9] {
            let d = HopkinsonDrop::new(m).unwrap();
            assert!((d.gamma_m.powi(2) * (1.0 + m) - (1.0 - m)).abs() < 1e-12);
        }
        assert!((HopkinsonDrop::new(1.0 / 3.0).unwrap().gamma_m - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rational_form_matches_complex_form() {
        let d = HopkinsonDrop::new(0.4).unwrap();
        for zeta in [-3.0, -0.5, 0.0, 0.2, 1.7] {
            let z = d.z(zeta);
            let p = d.point(zeta);
            assert!((z.re - p[0]).abs() < 1e-14 && (z.im - p[1]).abs() < 1e-14);
        }
    }

    #[test]
    fn derivative_matches_differences() {
        let d = HopkinsonDrop::new(0.6).unwrap();
        let h = 1e-4;
        for zeta in [-2.0, -0.3, 0.1, 0.9, 3.0] {
            let fd = (d.z(zeta + h) - d.z(zeta - h)) / (2.0 * h);
            assert!((fd - d.dz_dzeta(zeta)).norm() < 1e-6);
        }
    }

    #[test]
    fn two_cusps_at_gamma() {
        let c = drop_shape(1.0 / 3.0, 20001).unwrap();
        let tips = find_tips(&c);
        assert_eq!(tips.len(), 2);
        let g = 0.5f64.sqrt();
        let mut zs: Vec<f64> = tips.iter().map(|t| zeta_of(t.sigma)).collect();
        zs.sort_by(f64::total_cmp);
        assert!((zs[0] + g).abs() < 1e-4 && (zs[1] - g).abs() < 1e-4, "{zs:?}");
        for tip in tips {
            let fit = fit_normal_form(&c, &tip).unwrap();
            assert_eq!(fit.form.kind, Kind::Cusp);
            let p = tip_exponent(&c, &tip, fit.window_radius).unwrap();
            assert!((p - 2.0 / 3.0).abs() < 0.02, "{p}");
        }
    }

    #[test]
    fn local_form_near_top() {
        assert_eq!(drop_local_form(1.0).unwrap().point(4.0), [4.0 / 3.0, 4.0 + 4.0 / 3.0]);
        let m = 0.98;
        let d = HopkinsonDrop::new(m).unwrap();
        let nf = drop_local_form(m).unwrap();
        for i in 0..=20 {
            let zeta = -0.1 + 0.01 * i as f64;
            let p = d.point(zeta);
            let q = nf.point(4.0 * zeta);
            assert!((p[0] - q[0]).hypot(p[1] - q[1]) <= 1e-3);
        }
    }

    #[test]
    fn swallowtail_exponent_at_one() {
        let c = drop_top(1.0, 0.5, 8001).unwrap();
        let tip = find_tips(&c)[0];
        assert!(tip.sigma.abs() < 1e-6);
        let fit = fit_normal_form(&c, &tip).unwrap();
        assert_eq!(fit.form.kind, Kind::Swallowtail);
        let p = tip_exponent(&c, &tip, fit.window_radius).unwrap();
        assert!((p - 4.0 / 3.0).abs() < 0.02, "{p}");
    }

    #[test]
    fn crossings_either_side() {
        assert_eq!(intersection_count(0.94, 20001).unwrap(), 0);
        assert!(intersection_count(0.98, 20001).unwrap() > 0);
        let sweep = intersection_sweep(&[0.3, 0.99], 4001).unwrap();
        assert_eq!(sweep[0].1, 0);
        assert!(sweep[1].1 > 0);
    }

    #[test]
    fn critical_m_oracle() {
        let closed = critical_m_closed_form().unwrap();
        assert!((closed - 2.0 * 2f64.sqrt() / 3.0).abs() < 1e-12);
    }

    #[test]
    fn craya_tip() {
        let s = craya_shape(4001).unwrap();
        let mid = s.curve.len() / 2;
        assert_eq!(s.thetas()[mid], 0.0);
        assert_eq!(s.curve.points()[mid], [0.0, 0.0]);
        let th = s.thetas()[mid + 20];
        let p = s.curve.points()[mid + 20];
        let q = craya_local(th);
        assert!((p[0] / q[0] - 1.0).abs() < 0.01 && (p[1] / q[1] - 1.0).abs() < 0.01);
    }

    #[test]
    fn craya_simplified_integrand() {
        // l^{2/3} / (1 + l)^{4/3} = (2 cos(theta/2))^{-4/3} on the principal branch
        let c = (2.0f64 / 3.0).cbrt();
        for th in [-3.0, -1.0, 0.3, 2.5] {
            let l = Complex64::from_polar(1.0, -th);
            let want = -c * (Complex64::new(1.0, 0.0) - l) * (2.0 * (0.5 * th).cos()).powf(-4.0 / 3.0);
            assert!((craya_dz(th) - want).norm() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn drop_parity(m in 0.0f64..1.0, zeta in -5.0f64..5.0) {
            let d = HopkinsonDrop::new(m).unwrap();
            let p = d.point(zeta);
            let q = d.point(-zeta);
            prop_assert!((p[0] + q[0]).abs() <= 1e-12);
            prop_assert!((p[1] - q[1]).abs() <= 1e-12);
        }
    }
}
