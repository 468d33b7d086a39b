//! Wavefronts moving at unit normal speed from an even initial profile
//! `h0(x0) = a1 x0^2 + a2 x0^4 + ...`.
//!
//! Each point travels along its ray,
//! `x = x0 - h0' t / sqrt(1 + h0'^2)`, `h = h0 + t / sqrt(1 + h0'^2)`,
//! which stays valid through the singularity. Neighbouring rays meet at
//! `t_c = (1 + h0'^2)^{3/2} / h0''`, and the first meeting is a swallowtail
//! of the front with local coefficient `a = 3(a1^3 - a2) / (4 a1^4)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curves::{CurveFamily, ParametricCurve};
use crate::error::{Error, Result};
use crate::numeric::{bisect, fd, golden_section};

/// Even polynomial initial front `h0 = a1 x^2 + a2 x^4 + sum_k higher[k] x^(2k+6)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialFront {
    pub a1: f64,
    pub a2: f64,
    #[serde(default)]
    pub higher: Vec<f64>,
}

impl InitialFront {
    /// A front with `a1 >= 0`; `a1 = 0` is allowed for flat fronts but
    /// never focuses at the axis.
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        if !(a1 >= 0.0) || !a1.is_finite() || !a2.is_finite() {
            return Err(Error::OutOfRange {
                name: "a1",
                value: a1,
                reason: "the initial front needs a finite a1 >= 0",
            });
        }
        Ok(Self {
            a1,
            a2,
            higher: Vec::new(),
        })
    }

    pub fn with_higher(mut self, higher: Vec<f64>) -> Self {
        self.higher = higher;
        self
    }

    fn coeffs(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        [(2, self.a1), (4, self.a2)]
            .into_iter()
            .chain(self.higher.iter().enumerate().map(|(k, c)| (2 * k as i32 + 6, *c)))
    }

    pub fn h0(&self, x: f64) -> f64 {
        self.coeffs().map(|(n, c)| c * x.powi(n)).sum()
    }

    pub fn h0_prime(&self, x: f64) -> f64 {
        self.coeffs().map(|(n, c)| c * n as f64 * x.powi(n - 1)).sum()
    }

    pub fn h0_second(&self, x: f64) -> f64 {
        self.coeffs()
            .map(|(n, c)| c * (n * (n - 1)) as f64 * x.powi(n - 2))
            .sum()
    }

    /// Position at time `t` of the ray leaving `x0`.
    pub fn ray_point(&self, x0: f64, t: f64) -> [f64; 2] {
        let p = self.h0_prime(x0);
        let q = (1.0 + p * p).sqrt();
        [x0 - p * t / q, self.h0(x0) + t / q]
    }
}

/// The front at time `t` sampled at the ray origins `x0s`, labelled with `t`.
pub fn propagate_front(front: &InitialFront, t: f64, x0s: &[f64]) -> Result<ParametricCurve> {
    if !(t >= 0.0) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            reason: "fronts are propagated forward in time",
        });
    }
    ParametricCurve::from_fn(x0s, Some(t), |x0| front.ray_point(x0, t))
}

/// `(1 + h0'^2)^{3/2} / h0''`, the time at which the ray from `x0` meets its
/// neighbours.
pub fn caustic_time(front: &InitialFront, x0: f64) -> Result<f64> {
    let h2 = front.h0_second(x0);
    if !(h2 > 0.0) {
        return Err(Error::NoFocusing { x0, h2 });
    }
    let p = front.h0_prime(x0);
    Ok((1.0 + p * p).powf(1.5) / h2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CausticPoint {
    pub x0: f64,
    pub t_c: f64,
    pub point: [f64; 2],
}

pub fn caustic_point(front: &InitialFront, x0: f64) -> Result<CausticPoint> {
    let t_c = caustic_time(front, x0)?;
    Ok(CausticPoint {
        x0,
        t_c,
        point: front.ray_point(x0, t_c),
    })
}

/// First focusing of the front.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EikonalSingularity {
    pub t0: f64,
    pub x0_star: f64,
    /// Local swallowtail coefficient `3(a1^3 - a2) / (4 a1^4)`.
    pub a: f64,
    pub location: [f64; 2],
}

/// Finds `t0 = min t_c` by golden-section search on `|x0| <= 1/sqrt(a1)`.
pub fn first_singularity(front: &InitialFront) -> Result<EikonalSingularity> {
    let (a1, a2) = (front.a1, front.a2);
    if !(a1 > 0.0) {
        return Err(Error::NoFocusing { x0: 0.0, h2: 2.0 * a1 });
    }
    let a = 3.0 * (a1.powi(3) - a2) / (4.0 * a1.powi(4));
    if !(a > 0.0) {
        return Err(Error::DegenerateFocusing { a });
    }
    let half = 1.0 / a1.sqrt();
    let tc = |x: f64| caustic_time(front, x).unwrap_or(f64::INFINITY);
    let (x0_star, t0) = golden_section(tc, -half, half, 1e-10);
    // The profile is even; snap to the axis when the minimum is there.
    let (x0_star, t0) = if tc(0.0) <= t0 { (0.0, tc(0.0)) } else { (x0_star, t0) };
    Ok(EikonalSingularity {
        t0,
        x0_star,
        a,
        location: front.ray_point(x0_star, t0),
    })
}

/// The caustic traced out for `t0 <= t <= t_max`: the points
/// `ray(x0, t_c(x0))` for every `x0` whose caustic time is at most `t_max`.
pub fn caustic_curve(front: &InitialFront, t_max: f64, samples: usize) -> Result<ParametricCurve> {
    let sing = first_singularity(front)?;
    if !(t_max > sing.t0) {
        return Err(Error::OutOfRange {
            name: "t_max",
            value: t_max,
            reason: "the caustic only exists after the first singular time",
        });
    }
    let edge = |dir: f64| -> Result<f64> {
        let f = |x: f64| caustic_time(front, x).unwrap_or(f64::INFINITY) - t_max;
        let mut hi = sing.x0_star + dir * 1e-3;
        let mut step = 1e-3;
        while f(hi) < 0.0 {
            step *= 2.0;
            hi = sing.x0_star + dir * step;
            if step > 1e6 {
                return Err(Error::NoBracket { lo: sing.x0_star, hi });
            }
        }
        bisect(f, sing.x0_star, hi, 1e-14)
    };
    let lo = edge(-1.0)?;
    let hi = edge(1.0)?;
    let n = samples.max(3);
    let x0s: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let pts = x0s
        .iter()
        .map(|&x| caustic_point(front, x).map(|c| c.point))
        .collect::<Result<Vec<_>>>()?;
    ParametricCurve::new(x0s, pts, None)
}

/// Leading-order caustic position from the local swallowtail, for `t' < 0`:
/// `x_c = ∓(2/3)(-t')^{3/2}/sqrt(a)`, `y_c = 1/(2 a1) - t'`.
pub fn local_caustic_point(front: &InitialFront, tprime: f64) -> Result<[f64; 2]> {
    let sing = first_singularity(front)?;
    if !(tprime < 0.0) {
        return Err(Error::OutOfRange {
            name: "tprime",
            value: tprime,
            reason: "the caustic exists only after the singularity",
        });
    }
    Ok([
        (2.0 / 3.0) * (-tprime).powf(1.5) / sing.a.sqrt(),
        1.0 / (2.0 * front.a1) - tprime,
    ])
}

/// The local swallowtail of the front near `t0`, in the physical frame:
/// `x = t' sigma + a sigma^3/3`, `y = 1/(2 a1) - t' + t' sigma^2/2 + a sigma^4/4`.
pub fn local_swallowtail(front: &InitialFront, tprime: f64, sigmas: &[f64]) -> Result<ParametricCurve> {
    let sing = first_singularity(front)?;
    let a = sing.a;
    let y0 = 1.0 / (2.0 * front.a1);
    ParametricCurve::from_fn(sigmas, Some(tprime), |s| {
        [
            tprime * s + a * s.powi(3) / 3.0,
            y0 - tprime + tprime * s * s / 2.0 + a * s.powi(4) / 4.0,
        ]
    })
}

/// Fronts at `t = t0 - t'` for each `t'`, labelled with `t'`.
pub fn front_family(front: &InitialFront, tprimes: &[f64], x0s: &[f64]) -> Result<CurveFamily> {
    let t0 = first_singularity(front)?.t0;
    let curves = tprimes
        .iter()
        .map(|&tp| propagate_front(front, t0 - tp, x0s).map(|c| c.with_label(Some(tp))))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveFamily::new(curves))
}

/// Pointwise residual `|Im(z_sigma conj(z_t)) + ds/dsigma|` on each interior
/// time slice, with five-point differences in `sigma` and centred differences
/// in `t`. Curve labels are the times and must be equally spaced.
pub fn eikonal_residual_profile(family: &CurveFamily) -> Result<Vec<Vec<f64>>> {
    let curves = &family.curves;
    if curves.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: curves.len(),
        });
    }
    if !family.shares_grid() {
        return Err(Error::MismatchedGrids);
    }
    let times: Vec<f64> = curves
        .iter()
        .map(|c| {
            c.label()
                .ok_or(Error::InvalidCurve("front without a time label".into()))
        })
        .collect::<Result<_>>()?;
    let params = curves[0].params();
    let mut out = Vec::new();
    for k in 1..curves.len() - 1 {
        let (t0, t1, t2) = (times[k - 1], times[k], times[k + 1]);
        let w = fd::fornberg(t1, &[t0, t1, t2], 1);
        let (xs, ys) = (curves[k].xs(), curves[k].ys());
        let (dx, _) = fd::derivatives(params, &xs);
        let (dy, _) = fd::derivatives(params, &ys);
        let mut res = Vec::with_capacity(params.len());
        for i in 0..params.len() {
            let zt = Complex64::new(
                w[1][0] * curves[k - 1].points()[i][0] + w[1][1] * xs[i] + w[1][2] * curves[k + 1].points()[i][0],
                w[1][0] * curves[k - 1].points()[i][1] + w[1][1] * ys[i] + w[1][2] * curves[k + 1].points()[i][1],
            );
            let zs = Complex64::new(dx[i], dy[i]);
            res.push(((zs * zt.conj()).im + zs.norm()).abs());
        }
        out.push(res);
    }
    Ok(out)
}

/// Maximum of [`eikonal_residual_profile`] over all interior slices.
pub fn eikonal_residual(family: &CurveFamily) -> Result<f64> {
    Ok(eikonal_residual_profile(family)?
        .iter()
        .flatten()
        .fold(0.0, |m: f64, v| m.max(*v)))
}
