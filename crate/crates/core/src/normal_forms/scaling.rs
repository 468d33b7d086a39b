//! Scaling exponent of a family of curves approaching a singularity.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::fit::{fit_normal_form, tip_exponent};
use crate::curves::{find_tips, geometry, speed_minimum, CurveFamily, ParametricCurve, Tip};
use crate::error::{Error, Result};
use crate::numeric::linear_fit;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityFit {
    /// Exponent of `|eps| = |t'|^gamma`.
    pub gamma: f64,
    /// Exponent of `y ~ x^p` on the critical (`t' = 0`) curve, when present.
    pub tip_exponent: Option<f64>,
    /// RMS residual of the log-log regression for `gamma`.
    pub residual: f64,
    /// Coefficient `d` of the regular correction `(1 + d t')`.
    pub correction: f64,
    /// Plain log-log slope, without the correction term.
    pub gamma_uncorrected: f64,
    /// Log-log slope of the tip curvature radius against `t'`. It is about
    /// `2 gamma` for a cusp and `gamma` for a swallowtail.
    pub radius_slope: f64,
}

/// Minimum number of pre-singular curves needed for a regression.
pub const MIN_SCALING_CURVES: usize = 3;

pub(crate) fn critical_tip(curve: &ParametricCurve) -> Tip {
    find_tips(curve)
        .into_iter()
        .min_by(|a, b| a.speed.total_cmp(&b.speed))
        .unwrap_or_else(|| speed_minimum(curve))
}

fn radius_at(curve: &ParametricCurve, tip: &Tip) -> Option<f64> {
    let g = geometry(curve).ok()?;
    let i = curve.nearest_index(tip.sigma);
    let k = g.curvature[i].abs();
    (k > 0.0 && k.is_finite()).then(|| 1.0 / k)
}

/// Fits `gamma` from the curves with `t' > 0`.
///
/// Each curve's unfolding scale is its minimum speed `|dz/dsigma|`, which is
/// `|eps|` times the parameter scale for both normal forms. The fit is
/// `ln speed = gamma ln t' + c + d t'`, so that the first regular
/// correction to `|eps| = C t'^gamma` does not bias `gamma` when the
/// largest `t'` is not small. A `t' = 0` curve, if present, supplies the
/// tip exponent.
pub fn fit_scaling(family: &CurveFamily) -> Result<SimilarityFit> {
    let mut before: Vec<(f64, &ParametricCurve)> = family
        .curves
        .iter()
        .filter_map(|c| c.label().filter(|t| *t > 0.0).map(|t| (t, c)))
        .collect();
    before.sort_by(|a, b| a.0.total_cmp(&b.0));
    before.dedup_by(|a, b| a.0 == b.0);
    if before.len() < MIN_SCALING_CURVES {
        return Err(Error::FitFailed(format!(
            "need {MIN_SCALING_CURVES} curves with distinct t' > 0, got {}",
            before.len()
        )));
    }
    let mut lt = Vec::new();
    let mut lv = Vec::new();
    let mut lr = Vec::new();
    let mut speeds = Vec::new();
    for (t, c) in &before {
        let tip = speed_minimum(c);
        if !(tip.speed > 0.0) {
            return Err(Error::FitFailed(format!("tip speed vanishes at t' = {t}")));
        }
        lt.push(t.ln());
        lv.push(tip.speed.ln());
        speeds.push(tip.speed);
        lr.push(radius_at(c, &tip).map_or(f64::NAN, f64::ln));
    }
    if speeds.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::FitFailed("unfolding scale is not monotone in t'".into()));
    }
    let plain = linear_fit(&lt, &lv).ok_or_else(|| Error::FitFailed("degenerate regression".into()))?;
    let ts: Vec<f64> = before.iter().map(|b| b.0).collect();
    let (gamma, correction, rms) = corrected_fit(&lt, &ts, &lv)?;
    if !(gamma > 0.0) {
        return Err(Error::FitFailed(format!("non-positive exponent {gamma}")));
    }
    let radius_slope = linear_fit(&lt, &lr).map_or(f64::NAN, |f| f.slope);

    let tip_exp = family.curves.iter().find(|c| c.label() == Some(0.0)).and_then(|c| {
        let tip = critical_tip(c);
        let nf = fit_normal_form(c, &tip).ok()?;
        tip_exponent(c, &tip, nf.window_radius).ok()
    });
    Ok(SimilarityFit {
        gamma,
        tip_exponent: tip_exp,
        residual: rms,
        correction,
        gamma_uncorrected: plain.slope,
        radius_slope,
    })
}

/// Least squares for `v = gamma l + c + d t`; returns `(gamma, d, rms)`.
fn corrected_fit(l: &[f64], t: &[f64], v: &[f64]) -> Result<(f64, f64, f64)> {
    let n = l.len();
    let a = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => l[i],
        1 => 1.0,
        _ => t[i],
    });
    let b = DVector::from_column_slice(v);
    let sol = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::FitFailed(e.to_string()))?;
    let r = &a * &sol - b;
    Ok((sol[0], sol[2], (r.norm_squared() / n as f64).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal_forms::{eval_normal_form, NormalForm};

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    fn family(kind_swallow: bool, law: impl Fn(f64) -> f64, tps: &[f64]) -> CurveFamily {
        let thetas = linspace(-1.0, 1.0, 2001);
        let curves = tps
            .iter()
            .map(|&t| {
                let nf = if kind_swallow {
                    NormalForm::swallowtail(law(t), 1.0)
                } else {
                    NormalForm::cusp(law(t), 1.0)
                }
                .unwrap();
                eval_normal_form(&nf, &thetas).unwrap().with_label(Some(t))
            })
            .collect();
        CurveFamily::new(curves)
    }

    #[test]
    fn cusp_family_half_exponent() {
        let fam = family(false, f64::sqrt, &[0.1, 0.03, 0.01, 0.003, 0.0]);
        let fit = fit_scaling(&fam).unwrap();
        assert!((fit.gamma - 0.5).abs() < 0.02, "{}", fit.gamma);
        let p = fit.tip_exponent.unwrap();
        assert!((p - 2.0 / 3.0).abs() < 0.01, "{p}");
        assert!((fit.radius_slope / fit.gamma - 2.0).abs() < 0.1);
    }

    #[test]
    fn swallowtail_family_unit_exponent() {
        let fam = family(true, |t| t, &[0.1, 0.03, 0.01, 0.003, 0.0]);
        let fit = fit_scaling(&fam).unwrap();
        assert!((fit.gamma - 1.0).abs() < 0.02, "{}", fit.gamma);
        let p = fit.tip_exponent.unwrap();
        assert!((p - 4.0 / 3.0).abs() < 0.01, "{p}");
    }

    #[test]
    fn regular_correction_removed() {
        let fam = family(true, |t| (t + t * t).sin(), &[0.1, 0.01, 0.001, 0.0]);
        let fit = fit_scaling(&fam).unwrap();
        assert!(fit.gamma_uncorrected > 1.015);
        assert!((fit.gamma - 1.0).abs() < 2e-3, "{}", fit.gamma);
        assert!((fit.correction - 1.0).abs() < 0.1, "{}", fit.correction);
    }

    #[test]
    fn too_few_curves() {
        let fam = family(false, f64::sqrt, &[0.1, 0.01]);
        assert!(fit_scaling(&fam).is_err());
    }

    #[test]
    fn non_monotone_scales_fail() {
        let fam = family(false, |t| if t == 0.01 { 1.0 } else { t }, &[0.1, 0.03, 0.01, 0.003]);
        assert!(matches!(fit_scaling(&fam), Err(Error::FitFailed(_))));
    }
}
