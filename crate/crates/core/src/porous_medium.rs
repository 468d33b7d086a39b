//! Oil-water interface at the critical withdrawal rate, near the tip.
//!
//! Locally `x = (2A/3)(sigma + 1)^{3/2}` while `y` is linear in `sigma + 1`;
//! the slope of `y` is normalized to one. With `tau = ±sqrt(sigma + 1)` the
//! two mirrored branches form one smooth curve `x = (2A/3) tau^3`,
//! `y = tau^2`, which is the cusp normal form with `a = A / sqrt(2)` and
//! `theta = sqrt(2) tau`.

use serde::{Deserialize, Serialize};

use crate::curves::ParametricCurve;
use crate::error::{Error, Result};
use crate::normal_forms::NormalForm;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PorousCuspLocal {
    #[serde(rename = "A")]
    pub amplitude: f64,
    /// Slope of `y` in `sigma + 1`, fixed to one.
    pub y_slope: f64,
}

impl PorousCuspLocal {
    pub fn new(amplitude: f64) -> Result<Self> {
        if !(amplitude > 0.0) || !amplitude.is_finite() {
            return Err(Error::OutOfRange {
                name: "A",
                value: amplitude,
                reason: "the amplitude must be positive",
            });
        }
        Ok(Self {
            amplitude,
            y_slope: 1.0,
        })
    }

    /// Right branch point at `sigma >= -1`.
    pub fn point(&self, sigma: f64) -> Result<[f64; 2]> {
        if !(sigma >= -1.0) {
            return Err(Error::OutOfRange {
                name: "sigma",
                value: sigma,
                reason: "the local law holds for sigma >= -1",
            });
        }
        let s = sigma + 1.0;
        Ok([2.0 * self.amplitude / 3.0 * s.powf(1.5), self.y_slope * s])
    }

    pub fn normal_form(&self) -> NormalForm {
        NormalForm::cusp(0.0, self.amplitude / std::f64::consts::SQRT_2).expect("positive amplitude")
    }
}

/// Both branches of the interface for the given `sigma >= -1`, parameterized
/// by `tau = ±sqrt(sigma + 1)` in increasing order; the tip appears once.
pub fn local_cusp_shape(amplitude: f64, sigmas: &[f64]) -> Result<ParametricCurve> {
    let local = PorousCuspLocal::new(amplitude)?;
    let mut taus = Vec::with_capacity(2 * sigmas.len());
    for &s in sigmas {
        local.point(s)?;
        let t = (s + 1.0).sqrt();
        taus.push(t);
        if t > 0.0 {
            taus.push(-t);
        }
    }
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    ParametricCurve::from_fn(&taus, None, |t| {
        [2.0 * amplitude / 3.0 * t.powi(3), local.y_slope * t * t]
    })
}

/// One branch with `sigma` itself as the parameter.
pub fn branch(amplitude: f64, sigmas: &[f64]) -> Result<ParametricCurve> {
    let local = PorousCuspLocal::new(amplitude)?;
    let points = sigmas.iter().map(|&s| local.point(s)).collect::<Result<Vec<_>>>()?;
    ParametricCurve::new(sigmas.to_vec(), points, None)
}
