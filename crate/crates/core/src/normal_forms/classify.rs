//! Blind classification of a curve family.

use serde::{Deserialize, Serialize};

use super::fit::{fit_normal_form, tip_exponent};
use super::scaling::{critical_tip, fit_scaling, MIN_SCALING_CURVES};
use super::{Kind, NormalForm};
use crate::curves::{CurveFamily, ParametricCurve};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// Relative residual of the winning normal form.
    pub fit: f64,
    pub cusp: f64,
    pub swallowtail: f64,
    /// RMS of the scaling regression, when a family was available.
    pub scaling: Option<f64>,
}

/// What the classifier concluded about a singularity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingularityReport {
    #[serde(flatten)]
    pub form: NormalForm,
    pub gamma: Option<f64>,
    pub tip_exponent: Option<f64>,
    pub residuals: Residuals,
    pub location: [f64; 2],
    pub critical_value: Option<f64>,
}

impl SingularityReport {
    pub fn kind(&self) -> Kind {
        self.form.kind
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn critical_curve(family: &CurveFamily) -> Option<&ParametricCurve> {
    family.curves.iter().min_by(|a, b| {
        let ka = a.label().map_or(f64::INFINITY, f64::abs);
        let kb = b.label().map_or(f64::INFINITY, f64::abs);
        ka.total_cmp(&kb)
    })
}

/// Locates the tip on the critical curve (label closest to zero), fits both
/// normal forms there, measures the tip exponent, and, when at least three
/// curves with `t' > 0` are present, fits the scaling exponent.
pub fn classify_family(family: &CurveFamily) -> Result<SingularityReport> {
    let curve = critical_curve(family).ok_or(Error::TooFewPoints { needed: 1, got: 0 })?;
    let tip = critical_tip(curve);
    let fit = fit_normal_form(curve, &tip)?;
    let exponent = tip_exponent(curve, &tip, fit.window_radius).ok();
    let labelled = family
        .curves
        .iter()
        .filter(|c| c.label().is_some_and(|t| t > 0.0))
        .count();
    let scaling = if labelled >= MIN_SCALING_CURVES {
        Some(fit_scaling(family)?)
    } else {
        None
    };
    Ok(SingularityReport {
        form: fit.form,
        gamma: scaling.map(|s| s.gamma),
        tip_exponent: exponent,
        residuals: Residuals {
            fit: fit.residual,
            cusp: fit.cusp_residual,
            swallowtail: fit.swallowtail_residual,
            scaling: scaling.map(|s| s.residual),
        },
        location: tip.point,
        critical_value: curve.label(),
    })
}
