//! Least-squares fitting of the normal forms to a sampled curve near a tip.

use serde::{Deserialize, Serialize};

use super::{local_point, wrap_angle, Kind, NormalForm};
use crate::curves::{ParametricCurve, Tip};
use crate::error::{Error, Result};
use crate::numeric::{levenberg_marquardt, linear_fit, LmOptions};

/// Controls the window search and the classification decision.
#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    /// First window radius as a fraction of the curve diameter.
    pub window_fraction: f64,
    /// Factor by which the window shrinks when a fit is not decisive.
    pub shrink: f64,
    /// Smallest number of samples a window may hold.
    pub min_samples: usize,
    /// Required ratio between the losing and the winning residual.
    pub decisive_ratio: f64,
    /// Largest relative residual the winning form may have.
    pub max_residual: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            window_fraction: 0.1,
            shrink: 4.0,
            min_samples: 20,
            decisive_ratio: 10.0,
            max_residual: 2e-2,
        }
    }
}

/// The winning normal form together with the evidence for it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFormFit {
    pub form: NormalForm,
    /// Relative RMS distance of the winning fit (RMS / window radius).
    pub residual: f64,
    pub cusp_residual: f64,
    pub swallowtail_residual: f64,
    /// Radius of the window that decided the fit, in curve units.
    pub window_radius: f64,
    pub window_samples: usize,
}

/// Residuals below this are round-off and are not compared.
const RESIDUAL_FLOOR: f64 = 1e-15;

struct Window<'a> {
    s: Vec<f64>,
    pts: &'a [[f64; 2]],
    radius: f64,
}

fn window<'a>(curve: &'a ParametricCurve, tip: &Tip, radius: f64) -> Option<Window<'a>> {
    let pts = curve.points();
    let params = curve.params();
    let i0 = curve.nearest_index(tip.sigma);
    let inside = |p: &[f64; 2]| (p[0] - tip.point[0]).hypot(p[1] - tip.point[1]) <= radius;
    if !inside(&pts[i0]) {
        return None;
    }
    let mut lo = i0;
    while lo > 0 && inside(&pts[lo - 1]) {
        lo -= 1;
    }
    let mut hi = i0;
    while hi + 1 < pts.len() && inside(&pts[hi + 1]) {
        hi += 1;
    }
    let s = params[lo..=hi].iter().map(|p| p - tip.sigma).collect();
    let used = pts[lo..=hi]
        .iter()
        .map(|p| (p[0] - tip.point[0]).hypot(p[1] - tip.point[1]))
        .fold(0.0, f64::max);
    Some(Window {
        s,
        pts: &pts[lo..=hi],
        radius: used.max(f64::MIN_POSITIVE),
    })
}

struct KindFit {
    form: NormalForm,
    residual: f64,
}

fn model_residuals(kind: Kind, p: &[f64], u: &[f64], pts: &[[f64; 2]], scale: f64) -> Vec<f64> {
    let (tx, ty, phi, eps, la) = (p[0], p[1], p[2], p[3], p[4]);
    let a = la.exp();
    let (sn, cs) = phi.sin_cos();
    let mut r = Vec::with_capacity(2 * u.len());
    for (ui, d) in u.iter().zip(pts) {
        let th = p[5] + ui * (p[6] + ui * (p[7] + ui * p[8]));
        let q = local_point(kind, eps, a, th);
        r.push((tx + cs * q[0] - sn * q[1] - d[0]) / scale);
        r.push((ty + sn * q[0] + cs * q[1] - d[1]) / scale);
    }
    r
}

/// Fits one normal form kind on a window. The parameter is
/// `theta = c0 + c1 u + c2 u^2 + c3 u^3` in the window coordinate
/// `u = (sigma - sigma_tip) / max|sigma - sigma_tip|`.
fn fit_kind(kind: Kind, curve: &ParametricCurve, tip: &Tip, w: &Window) -> KindFit {
    let failed = KindFit {
        form: NormalForm {
            kind,
            epsilon: f64::NAN,
            a: f64::NAN,
            rotation: 0.0,
            translation: tip.point,
        },
        residual: f64::INFINITY,
    };
    let smax = w.s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let left = w.s.iter().fold(0.0f64, |m, v| m.max(-v));
    let right = w.s.iter().fold(0.0f64, |m, v| m.max(*v));
    let smin_side = left.min(right);
    if !(smax > 0.0) || !(smin_side > 0.0) || !smin_side.is_finite() {
        return failed;
    }
    let u: Vec<f64> = w.s.iter().map(|s| s / smax).collect();

    // Starting guess from the even and odd parts about the tip.
    let d = 0.5 * smin_side;
    let (pp, _) = curve.eval(tip.sigma + d);
    let (pm, _) = curve.eval(tip.sigma - d);
    let e = [
        0.5 * (pp[0] + pm[0]) - tip.point[0],
        0.5 * (pp[1] + pm[1]) - tip.point[1],
    ];
    let o = [0.5 * (pp[0] - pm[0]), 0.5 * (pp[1] - pm[1])];
    let en = e[0].hypot(e[1]);
    if !(en > 0.0) {
        return failed;
    }
    let phi = e[1].atan2(e[0]) - std::f64::consts::FRAC_PI_2;
    let ex = [phi.cos(), phi.sin()];
    let ox = o[0] * ex[0] + o[1] * ex[1];
    let on = ox.abs().max(1e-300);
    let theta_d = match kind {
        Kind::Cusp => (2.0 * en).sqrt(),
        Kind::Swallowtail => 4.0 * en / (3.0 * on),
    };
    let a0 = (3.0 * on / theta_d.powi(3)).clamp(1e-6, 1e8);
    let c1 = ox.signum() * theta_d * smax / d;
    // Tip speed estimates |eps| * |dtheta/dsigma|.
    let eps_guess = tip.speed * smax / c1.abs();
    let mut best: Option<(f64, Vec<f64>)> = None;
    // The sign of the odd part is unreliable when eps is comparable to the
    // cubic term, so both orientations are tried.
    let starts = [0.0, eps_guess, -eps_guess]
        .into_iter()
        .take(if eps_guess > 0.0 { 3 } else { 1 })
        .flat_map(|e| [(e, c1), (e, -c1)]);
    for (eps0, c1) in starts {
        let p0 = [tip.point[0], tip.point[1], phi, eps0, a0.ln(), 0.0, c1, 0.0, 0.0];
        let out = levenberg_marquardt(
            |p| model_residuals(kind, p, &u, w.pts, w.radius),
            &p0,
            LmOptions::default(),
        );
        if let Some(out) = out {
            if out.cost.is_finite() && best.as_ref().is_none_or(|b| out.cost < b.0) {
                best = Some((out.cost, out.params));
            }
        }
        if best.as_ref().is_some_and(|b| b.0 < 1e-26 * u.len() as f64) {
            break;
        }
    }
    let Some((cost, p)) = best else {
        return failed;
    };
    let a = p[4].exp();
    if !a.is_finite() || !p.iter().all(|v| v.is_finite()) {
        return failed;
    }
    // Points are in units of the window radius, so this is already relative.
    let residual = (cost / u.len() as f64).sqrt();
    KindFit {
        form: NormalForm {
            kind,
            epsilon: p[3],
            a,
            rotation: wrap_angle(p[2]),
            translation: [p[0], p[1]],
        },
        residual,
    }
}

/// Fits both normal forms around `tip` with the default options.
pub fn fit_normal_form(curve: &ParametricCurve, tip: &Tip) -> Result<NormalFormFit> {
    fit_normal_form_with(curve, tip, FitOptions::default())
}

/// Fits both normal forms around `tip` and keeps the one whose residual is
/// smaller by the decisive ratio. The window starts at a fraction of the
/// curve diameter and shrinks until the decision is clear or too few samples
/// remain.
pub fn fit_normal_form_with(curve: &ParametricCurve, tip: &Tip, opts: FitOptions) -> Result<NormalFormFit> {
    let diameter = curve.diameter();
    let mut frac = opts.window_fraction;
    let mut last = (f64::INFINITY, f64::INFINITY);
    let mut tried = false;
    while let Some(w) = window(curve, tip, frac * diameter) {
        if w.s.len() < opts.min_samples {
            break;
        }
        tried = true;
        let cusp = fit_kind(Kind::Cusp, curve, tip, &w);
        let swallow = fit_kind(Kind::Swallowtail, curve, tip, &w);
        last = (cusp.residual, swallow.residual);
        let rc = cusp.residual.max(RESIDUAL_FLOOR);
        let rs = swallow.residual.max(RESIDUAL_FLOOR);
        let (win, best, other) = if rc <= rs { (cusp, rc, rs) } else { (swallow, rs, rc) };
        if best <= opts.max_residual && other >= opts.decisive_ratio * best {
            return Ok(NormalFormFit {
                form: win.form,
                residual: win.residual,
                cusp_residual: last.0,
                swallowtail_residual: last.1,
                window_radius: w.radius,
                window_samples: w.s.len(),
            });
        }
        frac /= opts.shrink;
    }
    if !tried {
        return Err(Error::TooFewPoints {
            needed: opts.min_samples,
            got: window(curve, tip, opts.window_fraction * diameter).map_or(0, |w| w.s.len()),
        });
    }
    Err(Error::Unclassified {
        cusp_residual: last.0,
        swallowtail_residual: last.1,
    })
}

/// Exponent `p` of `|y| ~ |x|^p` at a tip, in the tip's own frame.
///
/// The curve is split into its even part `E` (displacement along the tip
/// axis) and odd part `O` (across it) about the tip, and `ln |E|` is
/// regressed on `ln |O|` over the decade `|O| / scale` in `[1e-4, 1e-1]`,
/// stopping at the first point that leaves the decade.
pub fn tip_exponent(curve: &ParametricCurve, tip: &Tip, scale: f64) -> Result<f64> {
    let params = curve.params();
    let (first, last) = (params[0], params[params.len() - 1]);
    let reach = (tip.sigma - first).min(last - tip.sigma);
    let i0 = curve.nearest_index(tip.sigma);
    let lo = i0.saturating_sub(2);
    let hi = (i0 + 2).min(params.len() - 1);
    let h = (params[hi] - params[lo]) / (hi - lo) as f64;
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    let mut k = 1;
    while k as f64 * h <= reach {
        let ds = k as f64 * h;
        let (pp, _) = curve.eval(tip.sigma + ds);
        let (pm, _) = curve.eval(tip.sigma - ds);
        let e = (0.5 * (pp[0] + pm[0]) - tip.point[0]).hypot(0.5 * (pp[1] + pm[1]) - tip.point[1]);
        let o = (0.5 * (pp[0] - pm[0])).hypot(0.5 * (pp[1] - pm[1]));
        if o > 0.1 * scale {
            break;
        }
        if o >= 1e-4 * scale && e > 0.0 {
            lx.push(o.ln());
            ly.push(e.ln());
        }
        k += 1;
    }
    if lx.len() < 5 {
        return Err(Error::FitFailed(format!(
            "only {} samples in the tip-exponent decade",
            lx.len()
        )));
    }
    linear_fit(&lx, &ly)
        .map(|f| f.slope)
        .ok_or_else(|| Error::FitFailed("degenerate tip-exponent regression".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{find_tips, speed_minimum};
    use crate::normal_forms::eval_normal_form;
    use proptest::prelude::*;

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    fn origin_tip(nf: &NormalForm, curve: &ParametricCurve) -> Tip {
        let sigma = 0.0;
        let speed = {
            let (_, v) = curve.eval(sigma);
            v[0].hypot(v[1])
        };
        Tip {
            sigma,
            point: nf.point(0.0),
            speed,
        }
    }

    #[test]
    fn recovers_large_cusp_coefficient() {
        let a = 9.0 * 3f64.sqrt();
        let nf = NormalForm::cusp(0.0, a).unwrap();
        let c = eval_normal_form(&nf, &linspace(-1.0, 1.0, 2001)).unwrap();
        let tip = find_tips(&c)[0];
        let fit = fit_normal_form(&c, &tip).unwrap();
        assert_eq!(fit.form.kind, Kind::Cusp);
        assert!((fit.form.a / a - 1.0).abs() < 0.01);
    }

    #[test]
    fn recovers_swallowtail() {
        let nf = NormalForm::swallowtail(0.0, 0.75).unwrap();
        let c = eval_normal_form(&nf, &linspace(-1.0, 1.0, 2001)).unwrap();
        let tip = find_tips(&c)[0];
        let fit = fit_normal_form(&c, &tip).unwrap();
        assert_eq!(fit.form.kind, Kind::Swallowtail);
        assert!((fit.form.a / 0.75 - 1.0).abs() < 0.01);
    }

    #[test]
    fn recovers_rigid_motion() {
        let nf = NormalForm::cusp(0.05, 2.0).unwrap().with_motion(2.2, [0.3, -1.1]);
        let c = eval_normal_form(&nf, &linspace(-1.0, 1.0, 1001)).unwrap();
        let tip = speed_minimum(&c);
        let fit = fit_normal_form(&c, &tip).unwrap();
        assert_eq!(fit.form.kind, Kind::Cusp);
        assert!((fit.form.epsilon - 0.05).abs() < 1e-6);
        assert!((fit.form.a - 2.0).abs() < 1e-6);
        assert!((fit.form.rotation - 2.2).abs() < 1e-6);
        assert!((fit.form.translation[0] - 0.3).abs() < 1e-6);
        assert!((fit.form.translation[1] + 1.1).abs() < 1e-6);
    }

    #[test]
    fn straight_line_is_unclassified() {
        let c = ParametricCurve::from_fn(&linspace(-1.0, 1.0, 201), None, |t| [t, 0.0]).unwrap();
        let tip = Tip {
            sigma: 0.0,
            point: [0.0, 0.0],
            speed: 1.0,
        };
        assert!(fit_normal_form(&c, &tip).is_err());
    }

    #[test]
    fn sparse_window_is_rejected() {
        let nf = NormalForm::cusp(0.0, 1.0).unwrap();
        let c = eval_normal_form(&nf, &linspace(-1.0, 1.0, 11)).unwrap();
        let tip = find_tips(&c)[0];
        assert!(matches!(fit_normal_form(&c, &tip), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn exponents_of_critical_forms() {
        let thetas = linspace(-1.0, 1.0, 4001);
        let cusp = eval_normal_form(&NormalForm::cusp(0.0, 1.0).unwrap(), &thetas).unwrap();
        let tip = find_tips(&cusp)[0];
        let p = tip_exponent(&cusp, &tip, 0.1).unwrap();
        assert!((p - 2.0 / 3.0).abs() < 0.01, "{p}");
        let sw = eval_normal_form(&NormalForm::swallowtail(0.0, 1.0).unwrap(), &thetas).unwrap();
        let tip = find_tips(&sw)[0];
        let p = tip_exponent(&sw, &tip, 0.1).unwrap();
        assert!((p - 4.0 / 3.0).abs() < 0.01, "{p}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn round_trip(rel in -0.05f64..0.05, a in 0.3f64..5.0, swallow in any::<bool>(),
                      rot in -3.0f64..3.0, tx in -2.0f64..2.0, ty in -2.0f64..2.0) {
            // Unfolding small against the window, as near a singularity.
            let eps = rel * a;
            let kind = if swallow { Kind::Swallowtail } else { Kind::Cusp };
            let nf = NormalForm::new(kind, eps, a).unwrap().with_motion(rot, [tx, ty]);
            let c = eval_normal_form(&nf, &linspace(-1.0, 1.0, 2001)).unwrap();
            let tip = origin_tip(&nf, &c);
            let fit = fit_normal_form(&c, &tip).unwrap();
            prop_assert_eq!(fit.form.kind, kind);
            prop_assert!((fit.form.a / a - 1.0).abs() < 0.01);
            prop_assert!((fit.form.epsilon - eps).abs() < 0.01 * eps.abs().max(1e-3));
        }

        #[test]
        fn kind_invariant_under_motion_and_reversal(rot in -3.0f64..3.0, tx in -1.0f64..1.0, swallow in any::<bool>()) {
            let kind = if swallow { Kind::Swallowtail } else { Kind::Cusp };
            let nf = NormalForm::new(kind, 0.0, 1.3).unwrap();
            let c = eval_normal_form(&nf, &linspace(-1.0, 1.0, 1501)).unwrap();
            let moved = c.transformed(rot, [tx, 0.5]).reversed();
            let base = fit_normal_form(&c, &find_tips(&c)[0]).unwrap();
            let other = fit_normal_form(&moved, &find_tips(&moved)[0]).unwrap();
            prop_assert_eq!(base.form.kind, other.form.kind);
            prop_assert!((base.form.a - other.form.a).abs() < 1e-6);
            prop_assert!((base.form.epsilon - other.form.epsilon).abs() < 1e-6);
        }
    }
}
