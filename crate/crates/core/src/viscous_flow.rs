//! Stokes flow driven by a vortex dipole of strength `alpha` at depth `d`
//! below a free surface with tension, at capillary number
//! `Ca = alpha eta / (d^2 gamma)`.
//!
//! The free surface, in units of `d`, is
//! `x = a cos th + (a+1) cos th / (1 + sin th)`, `y = a (1 + sin th)`, where
//! `a` solves `4 pi Ca = -a (3a+2)^2 K(m) / (1 + a + sqrt(-2a(a+1)))` with
//! `m = 2 / (q^{1/4} + q^{-1/4})`, `q = -2a/(a+1)`. As `Ca` grows,
//! `a -> -1/3` and the surface forms a cusp at `th = pi/2`.

use serde::{Deserialize, Serialize};

use crate::curves::{CurveFamily, ParametricCurve};
use crate::error::{Error, Result};
use crate::normal_forms::NormalForm;
use crate::numeric::{bisect, linear_fit};

/// Arithmetic-geometric mean.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// `K(m) = int_0^{pi/2} dth / sqrt(1 - m^2 sin^2 th)`, modulus `m` (not the
/// parameter `m^2`), as `pi / (2 AGM(1, sqrt(1 - m^2)))`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    if !(m.abs() < 1.0) {
        return Err(Error::EllipticDivergence(m));
    }
    Ok(elliptic_k_complement(((1.0 - m) * (1.0 + m)).sqrt()))
}

/// `K` from the complementary modulus `k' = sqrt(1 - m^2)`, accurate when
/// `m` is within rounding of 1.
pub fn elliptic_k_complement(kp: f64) -> f64 {
    std::f64::consts::PI / (2.0 * agm(1.0, kp))
}

/// Solution of the capillary-number relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViscousCuspSolution {
    #[serde(rename = "Ca")]
    pub ca: f64,
    pub a: f64,
    /// Elliptic modulus `2 / (q^{1/4} + q^{-1/4})`.
    pub m_mod: f64,
    /// `a + 1/3`.
    pub epsilon: f64,
    /// Relative residual of the capillary-number relation at the root.
    pub residual: f64,
}

/// Complementary modulus `(1 - sqrt q)/(1 + sqrt q)` written in `eps` to
/// keep `1 - q = 3 eps / (2/3 + eps)` exact.
fn k_complement(eps: f64) -> f64 {
    let a = eps - 1.0 / 3.0;
    let q = -2.0 * a / (a + 1.0);
    let one_minus_q = 3.0 * eps / (2.0 / 3.0 + eps);
    one_minus_q / (1.0 + q.sqrt()).powi(2)
}

/// `m` of the capillary relation for `-1/3 <= a < 0`.
pub fn modulus(a: f64) -> f64 {
    let q = -2.0 * a / (a + 1.0);
    2.0 / (q.powf(0.25) + q.powf(-0.25))
}

/// Right side of the capillary relation divided by `4 pi`, i.e. `Ca(a)`,
/// as a function of `eps = a + 1/3 in (0, 1/3)`.
pub fn ca_of_epsilon(eps: f64) -> f64 {
    let a = eps - 1.0 / 3.0;
    // 3a + 2 = 1 + 3 eps
    let k = elliptic_k_complement(k_complement(eps));
    let num = -a * (1.0 + 3.0 * eps).powi(2) * k;
    let den = 1.0 + a + (-2.0 * a * (a + 1.0)).sqrt();
    num / (den * 4.0 * std::f64::consts::PI)
}

pub fn ca_of_a(a: f64) -> f64 {
    ca_of_epsilon(a + 1.0 / 3.0)
}

/// Solves for `a in (-1/3, 0)` by bisection in `ln eps`.
pub fn a_from_ca(ca: f64) -> Result<ViscousCuspSolution> {
    if !(ca > 0.0) || !ca.is_finite() {
        return Err(Error::NoBracket { lo: 0.0, hi: ca });
    }
    let lo = 1e-300f64.ln();
    let hi = (1.0 / 3.0 - 1e-15f64).ln();
    let f = |le: f64| ca_of_epsilon(le.exp()) - ca;
    if f(lo) * f(hi) > 0.0 {
        return Err(Error::NoBracket {
            lo: lo.exp(),
            hi: hi.exp(),
        });
    }
    // Ca decreases with eps; bisect to adjacent doubles.
    let (mut l, mut h) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (l + h);
        if mid <= l || mid >= h {
            break;
        }
        if f(mid) > 0.0 {
            l = mid;
        } else {
            h = mid;
        }
    }
    let (el, eh) = (l.exp(), h.exp());
    let eps = if (ca_of_epsilon(el) - ca).abs() <= (ca_of_epsilon(eh) - ca).abs() {
        el
    } else {
        eh
    };
    let a = eps - 1.0 / 3.0;
    Ok(ViscousCuspSolution {
        ca,
        a,
        m_mod: modulus(a),
        epsilon: eps,
        residual: ((ca_of_epsilon(eps) - ca) / ca).abs(),
    })
}

/// Closed-form shape point.
pub fn surface_point(a: f64, theta: f64) -> Result<[f64; 2]> {
    let (s, c) = theta.sin_cos();
    if (1.0 + s).abs() < 1e-12 {
        return Err(Error::Pole(theta));
    }
    Ok([a * c + (a + 1.0) * c / (1.0 + s), a * (1.0 + s)])
}

/// Samples the surface; the grid must avoid `theta = -pi/2`.
pub fn surface_shape(a: f64, thetas: &[f64]) -> Result<ParametricCurve> {
    if !(-1.0 / 3.0..0.0).contains(&a) {
        return Err(Error::OutOfRange {
            name: "a",
            value: a,
            reason: "the surface is given for -1/3 <= a < 0",
        });
    }
    let points = thetas
        .iter()
        .map(|&t| surface_point(a, t))
        .collect::<Result<Vec<_>>>()?;
    ParametricCurve::new(thetas.to_vec(), points, None)
}

/// Curvature of the exact surface from its analytic derivatives.
pub fn surface_curvature(a: f64, theta: f64) -> Result<f64> {
    let (s, c) = theta.sin_cos();
    let d = 1.0 + s;
    if d.abs() < 1e-12 {
        return Err(Error::Pole(theta));
    }
    let x1 = -a * s - (a + 1.0) / d;
    let x2 = -a * c + (a + 1.0) * c / (d * d);
    let y1 = a * c;
    let y2 = -a * s;
    Ok((x1 * y2 - y1 * x2) / (x1 * x1 + y1 * y1).powf(1.5))
}

/// Radius of curvature at the tip `theta = pi/2`, `9 eps^2 / (4|a|)`.
pub fn tip_radius_of(a: f64) -> Result<f64> {
    Ok(1.0 / surface_curvature(a, std::f64::consts::FRAC_PI_2)?.abs())
}

/// Prefactor of `R ~ C exp(-32 pi Ca)` obtained with tip coefficient `3 eps / 2`.
pub const RADIUS_PREFACTOR: f64 = 256.0 / 3.0;
/// The prefactor that follows if the tip coefficient is taken as `2 eps / 3`.
pub const RADIUS_PREFACTOR_ALT: f64 = 4096.0 / 243.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TipReport {
    #[serde(rename = "Ca")]
    pub ca: f64,
    pub epsilon: f64,
    pub radius: f64,
    /// `(256/3) exp(-32 pi Ca)`.
    pub radius_asymptotic: f64,
    /// `(4096/243) exp(-32 pi Ca)`.
    pub radius_asymptotic_alt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TipRadiusFit {
    pub reports: Vec<TipReport>,
    /// Slope of `ln R` against `Ca`; `-32 pi` asymptotically.
    pub asymptotic_radius_rate: f64,
    /// `exp` of the intercept of the same fit.
    pub prefactor: f64,
    /// Slope of `ln eps` against `Ca`; `-16 pi` asymptotically.
    pub epsilon_rate: f64,
    pub epsilon_prefactor: f64,
}

/// Smallest radius resolvable in double precision around a unit-size shape.
pub const RADIUS_FLOOR: f64 = 1e-14;

pub fn tip_radius(ca_list: &[f64]) -> Result<TipRadiusFit> {
    if ca_list.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: ca_list.len(),
        });
    }
    let mut reports = Vec::with_capacity(ca_list.len());
    for &ca in ca_list {
        let sol = a_from_ca(ca)?;
        let radius = tip_radius_of(sol.a)?;
        if radius < RADIUS_FLOOR {
            return Err(Error::RadiusFloor(radius));
        }
        let e = (-32.0 * std::f64::consts::PI * ca).exp();
        reports.push(TipReport {
            ca,
            epsilon: sol.epsilon,
            radius,
            radius_asymptotic: RADIUS_PREFACTOR * e,
            radius_asymptotic_alt: RADIUS_PREFACTOR_ALT * e,
        });
    }
    let cas: Vec<f64> = reports.iter().map(|r| r.ca).collect();
    let lr: Vec<f64> = reports.iter().map(|r| r.radius.ln()).collect();
    let le: Vec<f64> = reports.iter().map(|r| r.epsilon.ln()).collect();
    let fr = linear_fit(&cas, &lr).ok_or_else(|| Error::FitFailed("capillary numbers coincide".into()))?;
    let fe = linear_fit(&cas, &le).ok_or_else(|| Error::FitFailed("capillary numbers coincide".into()))?;
    Ok(TipRadiusFit {
        reports,
        asymptotic_radius_rate: fr.slope,
        prefactor: fr.intercept.exp(),
        epsilon_rate: fe.slope,
        epsilon_prefactor: fe.intercept.exp(),
    })
}

/// Tip expansion at `theta = pi/2 + delta`:
/// `x = -(3 eps/2) delta - delta^3/12`, `y + 2/3 - 2 eps = delta^2/6`,
/// as the cusp normal form with `theta = -delta / sqrt3`,
/// `epsilon = 3 sqrt3 eps / 2` and `a = 3 sqrt3 / 4`.
pub fn local_cusp_form(epsilon: f64) -> NormalForm {
    let s3 = 3f64.sqrt();
    NormalForm::cusp(1.5 * s3 * epsilon, 0.75 * s3)
        .expect("positive coefficient")
        .with_motion(0.0, [0.0, -2.0 / 3.0 + 2.0 * epsilon])
}

/// The parameter of [`local_cusp_form`] for a given `delta`.
pub fn local_theta(delta: f64) -> f64 {
    -delta / 3f64.sqrt()
}

/// Shapes for `a = -1/3 + eps` on `thetas`, labelled with `eps`.
pub fn surface_family(epsilons: &[f64], thetas: &[f64]) -> Result<CurveFamily> {
    let curves = epsilons
        .iter()
        .map(|&e| Ok(surface_shape(e - 1.0 / 3.0, thetas)?.with_label(Some(e))))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveFamily::new(curves))
}

/// Bisection-based inverse kept for cross-checks: the `eps` at which
/// `Ca(eps)` equals `ca`, found directly in `eps`.
pub fn epsilon_from_ca_linear(ca: f64) -> Result<f64> {
    bisect(|e| ca_of_epsilon(e) - ca, 1e-300, 1.0 / 3.0 - 1e-15, 1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{find_self_intersections, find_tips};
    use crate::normal_forms::{eval_normal_form, fit_normal_form, tip_exponent, Kind};
    use crate::numeric::integrate_with;
    use crate::numeric::QuadOptions;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn k_quad(m: f64) -> f64 {
        integrate_with(
            |t: f64| 1.0 / (1.0 - m * m * t.sin().powi(2)).sqrt(),
            0.0,
            FRAC_PI_2,
            QuadOptions {
                abs_tol: 1e-13,
                rel_tol: 1e-12,
                max_intervals: 20000,
            },
        )
        .unwrap()
    }

    #[test]
    fn k_values() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert!((elliptic_k(0.5).unwrap() - 1.685750354812596).abs() < 1e-10);
        assert!(elliptic_k(0.999999).unwrap() > 7.0);
        assert!(matches!(elliptic_k(1.0), Err(Error::EllipticDivergence(_))));
    }

    #[test]
    fn k_matches_quadrature() {
        for i in 0..=40 {
            let m = 0.999999 * i as f64 / 40.0;
            let k = elliptic_k(m).unwrap();
            assert!((k - k_quad(m)).abs() < 1e-10 * k, "{m}");
        }
    }

    #[test]
    fn complement_form_matches_modulus() {
        for eps in [1e-3, 0.05, 0.2, 0.3] {
            let a = eps - 1.0 / 3.0;
            let m = modulus(a);
            let kp = k_complement(eps);
            assert!((kp - (1.0 - m * m).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn solves_capillary_relation() {
        let mut last = 0.0;
        for i in 1..=10 {
            let ca = 0.05 * i as f64;
            let s = a_from_ca(ca).unwrap();
            assert!(s.residual <= 1e-12);
            assert!(s.a > -1.0 / 3.0 && s.a < 0.0);
            // eps carries the root; a = eps - 1/3 rounds it away at large Ca.
            assert!((ca_of_epsilon(s.epsilon) / ca - 1.0).abs() < 1e-10);
            if ca <= 0.3 {
                assert!((ca_of_a(s.a) / ca - 1.0).abs() < 1e-7);
            }
            if i > 1 {
                assert!(s.a < last);
            }
            last = s.a;
        }
        assert!(a_from_ca(0.0).is_err());
        assert!(a_from_ca(-1.0).is_err());
    }

    #[test]
    fn asymptotic_epsilon() {
        let s = a_from_ca(0.25).unwrap();
        let asym = 32.0 / 9.0 * (-4.0 * PI).exp();
        assert!((s.epsilon / asym - 1.0).abs() < 0.2);
        let lin = epsilon_from_ca_linear(0.25).unwrap();
        assert!((lin / s.epsilon - 1.0).abs() < 1e-6);
    }

    #[test]
    fn shape_points() {
        let p = surface_point(-1.0 / 3.0, FRAC_PI_2).unwrap();
        assert!(p[0].abs() < 1e-16 && (p[1] + 2.0 / 3.0).abs() < 1e-15);
        let p = surface_point(-0.2, FRAC_PI_2).unwrap();
        assert!(p[0].abs() < 1e-16 && (p[1] + 0.4).abs() < 1e-15);
        assert!(matches!(surface_shape(-0.2, &[0.0, -FRAC_PI_2]), Err(Error::Pole(_))));
        assert!(surface_shape(0.1, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn shape_symmetry() {
        for th in [0.1, 0.7, 1.2, 1.5] {
            let p = surface_point(-0.3, FRAC_PI_2 + th).unwrap();
            let q = surface_point(-0.3, FRAC_PI_2 - th).unwrap();
            assert!((p[0] + q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn critical_shape_exponent() {
        let thetas: Vec<f64> = (0..=4000).map(|i| FRAC_PI_2 - 1.0 + i as f64 / 2000.0).collect();
        let c = surface_shape(-1.0 / 3.0, &thetas).unwrap();
        let tip = find_tips(&c)[0];
        assert!((tip.sigma - FRAC_PI_2).abs() < 1e-6);
        let fit = fit_normal_form(&c, &tip).unwrap();
        assert_eq!(fit.form.kind, Kind::Cusp);
        let p = tip_exponent(&c, &tip, fit.window_radius).unwrap();
        assert!((p - 2.0 / 3.0).abs() < 0.01, "{p}");
    }

    #[test]
    fn curvature_matches_differences() {
        let a = -0.3;
        let h = 1e-4;
        for th in [0.3, 1.0, 2.0] {
            let p0 = surface_point(a, th - h).unwrap();
            let p1 = surface_point(a, th).unwrap();
            let p2 = surface_point(a, th + h).unwrap();
            let (x1, y1) = ((p2[0] - p0[0]) / (2.0 * h), (p2[1] - p0[1]) / (2.0 * h));
            let (x2, y2) = (
                (p2[0] - 2.0 * p1[0] + p0[0]) / (h * h),
                (p2[1] - 2.0 * p1[1] + p0[1]) / (h * h),
            );
            let k = (x1 * y2 - y1 * x2) / (x1 * x1 + y1 * y1).powf(1.5);
            assert!((k - surface_curvature(a, th).unwrap()).abs() < 1e-5);
        }
    }

    #[test]
    fn tip_radius_closed_form() {
        for eps in [1e-6, 1e-3, 0.1] {
            let r = tip_radius_of(eps - 1.0 / 3.0).unwrap();
            let want = 27.0 * eps * eps / (4.0 * (1.0 - 3.0 * eps));
            assert!((r / want - 1.0).abs() < 1e-9);
        }
        let r1 = tip_radius_of(1e-5 - 1.0 / 3.0).unwrap();
        let r2 = tip_radius_of(2e-5 - 1.0 / 3.0).unwrap();
        assert!((r2 / r1 / 4.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn local_form_substitution() {
        let nf = local_cusp_form(0.0);
        let p = nf.point(local_theta(1.0));
        assert!((p[0] + 1.0 / 12.0).abs() < 1e-15);
        assert!((p[1] - (-2.0 / 3.0 + 1.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn local_form_tracks_surface() {
        let eps = 1e-3;
        let nf = local_cusp_form(eps);
        for i in 0..=20 {
            let d = -0.05 + 0.005 * i as f64;
            let p = surface_point(eps - 1.0 / 3.0, FRAC_PI_2 + d).unwrap();
            let q = nf.point(local_theta(d));
            assert!((p[0] - q[0]).hypot(p[1] - q[1]) <= 1e-4);
        }
    }

    #[test]
    fn negative_epsilon_self_intersects() {
        let ds: Vec<f64> = (0..=400).map(|i| -0.2 + 0.001 * i as f64).collect();
        let nf = local_cusp_form(-1e-3);
        let thetas: Vec<f64> = ds.iter().map(|&d| local_theta(d)).rev().collect();
        let c = eval_normal_form(&nf, &thetas).unwrap();
        assert!(!find_self_intersections(&c).is_empty());
        let c = eval_normal_form(&local_cusp_form(1e-3), &thetas).unwrap();
        assert!(find_self_intersections(&c).is_empty());
    }

    #[test]
    fn exponential_laws() {
        let fit = tip_radius(&[0.15, 0.2, 0.25, 0.3, 0.35]).unwrap();
        assert!((fit.epsilon_rate / (-16.0 * PI) - 1.0).abs() < 0.01);
        assert!((fit.asymptotic_radius_rate / (-32.0 * PI) - 1.0).abs() < 0.02);
        assert!((fit.epsilon_prefactor / (32.0 / 9.0) - 1.0).abs() < 0.1);
        let r = fit.reports[4];
        assert!((r.radius / r.radius_asymptotic - 1.0).abs() < 0.1);
    }
}
