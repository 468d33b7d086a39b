//! Hele-Shaw flow with suction at the origin, for the quadratic map
//! `f(xi, t) = a1 xi + a2 xi^2` of the unit disc onto the fluid.
//!
//! The coefficients obey `a1 a1' + 2 a2 a2' = -1` and `a1 a2' + 2 a2 a1' = 0`,
//! whose first integrals are `a1^2/2 + B^2/a1^4 = A - t` and `a2 a1^2 = B`.
//! The map stops being univalent when `a1 = 2|a2|`, i.e. `a1 = (2|B|)^{1/3}`,
//! at `t0 = A - (3/4)(2|B|)^{2/3}`; the boundary then has a 2/3 cusp.

use serde::{Deserialize, Serialize};

use crate::curves::{CurveFamily, ParametricCurve};
use crate::error::{Error, Result};
use crate::normal_forms::NormalForm;
use crate::numeric::{bisect, linear_fit, rk4_step};

/// Map coefficients at time `t` with the conserved `A` and `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyMapState {
    pub t: f64,
    pub a1: f64,
    pub a2: f64,
    #[serde(rename = "A")]
    pub big_a: f64,
    #[serde(rename = "B")]
    pub big_b: f64,
}

impl PolyMapState {
    /// Initial state, checked for univalence `a1 > 2|a2|`.
    pub fn initial(a1: f64, a2: f64) -> Result<Self> {
        if !(a1 > 2.0 * a2.abs()) || !a1.is_finite() {
            return Err(Error::NotUnivalent { a1, a2 });
        }
        Ok(Self {
            t: 0.0,
            a1,
            a2,
            big_a: 0.5 * a1 * a1 + a2 * a2,
            big_b: a2 * a1 * a1,
        })
    }

    pub fn is_univalent(&self) -> bool {
        self.a1 > 2.0 * self.a2.abs()
    }

    /// `a1 - 2|a2|`, which closes like `3 a~` near the singular time.
    pub fn univalence_margin(&self) -> f64 {
        self.a1 - 2.0 * self.a2.abs()
    }

    /// Area enclosed by the boundary, `pi (a1^2 + 2 a2^2)`.
    pub fn area(&self) -> f64 {
        std::f64::consts::PI * (self.a1 * self.a1 + 2.0 * self.a2 * self.a2)
    }

    /// Boundary point `f(e^{i theta})`.
    pub fn boundary_point(&self, theta: f64) -> [f64; 2] {
        [
            self.a1 * theta.cos() + self.a2 * (2.0 * theta).cos(),
            self.a1 * theta.sin() + self.a2 * (2.0 * theta).sin(),
        ]
    }
}

/// Closed-form singular time `A - (3/4)(2|B|)^{2/3}`; for `B = 0` the circle
/// shrinks to a point at `t = A`.
pub fn singular_time(a1_0: f64, a2_0: f64) -> Result<f64> {
    let s = PolyMapState::initial(a1_0, a2_0)?;
    Ok(s.big_a - 0.75 * (2.0 * s.big_b.abs()).powf(2.0 / 3.0))
}

/// Coefficients at time `t` from the first integrals. `a1` is the larger
/// root of `a1^2/2 + B^2/a1^4 = A - t`, bracketed by `[(2|B|)^{1/3}, a1_0]`.
pub fn evolve_map(a1_0: f64, a2_0: f64, t: f64) -> Result<PolyMapState> {
    let init = PolyMapState::initial(a1_0, a2_0)?;
    if !(t >= 0.0) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            reason: "evolution starts at t = 0",
        });
    }
    let t0 = singular_time(a1_0, a2_0)?;
    if t >= t0 {
        return Err(Error::PastSingularity { t, t0 });
    }
    let (big_a, big_b) = (init.big_a, init.big_b);
    let a1 = if big_b == 0.0 {
        (2.0 * (big_a - t)).sqrt()
    } else if t == 0.0 {
        a1_0
    } else {
        let g = |a1: f64| 0.5 * a1 * a1 + big_b * big_b / a1.powi(4) - (big_a - t);
        bisect(g, (2.0 * big_b.abs()).cbrt(), a1_0, 1e-15)?
    };
    Ok(PolyMapState {
        t,
        a1,
        a2: big_b / (a1 * a1),
        big_a,
        big_b,
    })
}

fn rhs(_t: f64, y: &[f64; 2]) -> [f64; 2] {
    let d = y[0] * y[0] - 4.0 * y[1] * y[1];
    [-y[0] / d, 2.0 * y[1] / d]
}

/// RK4 integration of the coefficient ODEs with `steps` equal steps up to
/// `t_end`. Returns every state, starting with the initial one.
pub fn integrate_map(a1_0: f64, a2_0: f64, t_end: f64, steps: usize) -> Result<Vec<PolyMapState>> {
    let init = PolyMapState::initial(a1_0, a2_0)?;
    let t0 = singular_time(a1_0, a2_0)?;
    if !(t_end < t0) {
        return Err(Error::PastSingularity { t: t_end, t0 });
    }
    let steps = steps.max(1);
    let h = t_end / steps as f64;
    let mut y = [a1_0, a2_0];
    let mut out = Vec::with_capacity(steps + 1);
    out.push(init);
    for k in 0..steps {
        let t = k as f64 * h;
        y = rk4_step(&rhs, t, &y, h);
        out.push(PolyMapState {
            t: t + h,
            a1: y[0],
            a2: y[1],
            ..init
        });
    }
    Ok(out)
}

/// Singular time found by integrating the ODEs with `a1` as the independent
/// variable (`dt/da1 = -(a1^2 - 4 a2^2)/a1`, `da2/da1 = -2 a2/a1`) until
/// `dt/da1` vanishes, which is where `da1/dt` blows up.
pub fn ode_blowup_time(a1_0: f64, a2_0: f64, steps: usize) -> Result<f64> {
    PolyMapState::initial(a1_0, a2_0)?;
    if a2_0 == 0.0 {
        return Err(Error::NoCusp);
    }
    let f = |a1: f64, y: &[f64; 2]| -> [f64; 2] { [-(a1 * a1 - 4.0 * y[1] * y[1]) / a1, -2.0 * y[1] / a1] };
    let margin = |a1: f64, y: &[f64; 2]| a1 - 2.0 * y[1].abs();
    // a1 decreases; at worst it reaches the origin.
    let h = -a1_0 / steps.max(1) as f64;
    let mut a1 = a1_0;
    let mut y = [0.0, a2_0];
    for _ in 0..steps.max(1) {
        let next = rk4_step(&f, a1, &y, h);
        if margin(a1 + h, &next) <= 0.0 {
            let hs = bisect(|s| margin(a1 + s, &rk4_step(&f, a1, &y, s)), 0.0, h, 1e-16)?;
            return Ok(rk4_step(&f, a1, &y, hs)[0]);
        }
        a1 += h;
        y = next;
    }
    Err(Error::NoCusp)
}

/// Closed-form cusp: time, location and critical coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspPrediction {
    pub t0: f64,
    pub location: [f64; 2],
    pub a1_crit: f64,
    pub a2_crit: f64,
}

impl CuspPrediction {
    /// Angle on the unit circle where the cusp forms: `pi` for `a2 > 0`,
    /// `0` for `a2 < 0`.
    pub fn theta(&self) -> f64 {
        if self.a2_crit > 0.0 {
            std::f64::consts::PI
        } else {
            0.0
        }
    }
}

pub fn predict_cusp(a1_0: f64, a2_0: f64) -> Result<CuspPrediction> {
    let init = PolyMapState::initial(a1_0, a2_0)?;
    if init.big_b == 0.0 {
        return Err(Error::NoCusp);
    }
    let a1c = (2.0 * init.big_b.abs()).cbrt();
    let a2c = 0.5 * a1c * init.big_b.signum();
    let crit = PolyMapState {
        t: singular_time(a1_0, a2_0)?,
        a1: a1c,
        a2: a2c,
        ..init
    };
    let theta = if a2c > 0.0 { std::f64::consts::PI } else { 0.0 };
    Ok(CuspPrediction {
        t0: crit.t,
        location: crit.boundary_point(theta),
        a1_crit: a1c,
        a2_crit: a2c,
    })
}

/// The state at the singular time, with the critical coefficients.
pub fn critical_state(a1_0: f64, a2_0: f64) -> Result<PolyMapState> {
    let init = PolyMapState::initial(a1_0, a2_0)?;
    let pred = predict_cusp(a1_0, a2_0)?;
    Ok(PolyMapState {
        t: pred.t0,
        a1: pred.a1_crit,
        a2: pred.a2_crit,
        ..init
    })
}

/// Boundary `(a1 cos th + a2 cos 2th, a1 sin th + a2 sin 2th)`, labelled with `t`.
pub fn boundary_curve(state: &PolyMapState, thetas: &[f64]) -> Result<ParametricCurve> {
    ParametricCurve::from_fn(thetas, Some(state.t), |th| state.boundary_point(th))
}

/// Local structure just before the cusp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeleShawLocal {
    pub tprime: f64,
    /// Exact `a1(t) - a1_crit`.
    pub a_tilde: f64,
    /// Leading order `sqrt(t'/3)`.
    pub a_tilde_asymptotic: f64,
    /// Cusp normal form of the boundary near the tip, in physical
    /// coordinates, with `theta = -sqrt(a1_crit) theta~`.
    pub form: NormalForm,
    /// Coefficient of the cubic in the scaled frame of [`HeleShawLocal::to_frame`].
    pub frame_a: f64,
    a1_crit: f64,
    tip_theta: f64,
}

impl HeleShawLocal {
    /// Maps a boundary point at angle `theta` into the similarity frame
    /// `Theta = th~ / (2 sqrt3 t'^{1/4})`, `X = -y / (6 t'^{3/4})`,
    /// `Y = -(x + c/2) / (12 c t'^{1/2}) - 1/(6 sqrt3 c)` with `c = a1_crit`
    /// and `th~ = theta - theta_tip`. For `c = 1/2` the boundary collapses
    /// onto `X = Theta + a Theta^3 / 3`, `Y = Theta^2 / 2` with `a = 3 sqrt3`.
    pub fn to_frame(&self, theta: f64, p: [f64; 2]) -> (f64, [f64; 2]) {
        let c = self.a1_crit;
        let tp = self.tprime;
        // The a2 < 0 geometry is the a2 > 0 one turned by pi.
        let (x, y) = if self.tip_theta == 0.0 {
            (-p[0], -p[1])
        } else {
            (p[0], p[1])
        };
        let th = theta - self.tip_theta;
        let big_theta = th / (2.0 * 3f64.sqrt() * tp.powf(0.25));
        let xc = -y / (6.0 * tp.powf(0.75));
        let yc = -(x + 0.5 * c) / (12.0 * c * tp.sqrt()) - 1.0 / (6.0 * 3f64.sqrt() * c);
        (big_theta, [xc, yc])
    }
}

/// Local cusp a time `t'` before the singularity.
pub fn local_cusp(a1_0: f64, a2_0: f64, tprime: f64) -> Result<HeleShawLocal> {
    if !(tprime > 0.0) {
        return Err(Error::OutOfRange {
            name: "tprime",
            value: tprime,
            reason: "the local cusp is defined before the singularity",
        });
    }
    let pred = predict_cusp(a1_0, a2_0)?;
    let state = evolve_map(a1_0, a2_0, pred.t0 - tprime)?;
    let c = pred.a1_crit;
    let a_tilde = state.a1 - c;
    let a_tilde_asymptotic = (tprime / 3.0).sqrt();
    // f(-1 + xi~) = (a2 - a1) + (a1 - 2 a2) xi~ + a2 xi~^2 with
    // a1 - 2 a2 ~ 3 a~, so x - (a2 - a1) ~ -(c/2) th~^2 and
    // y ~ -(a1 - 2 a2) th~ - (c/2) th~^3; with theta = -sqrt(c) th~ this is a
    // cusp turned by pi/2.
    let margin = state.univalence_margin();
    let shift = state.a2.abs() - state.a1;
    let epsilon = margin / c.sqrt();
    let a = 1.5 / c.sqrt();
    let mut form = NormalForm::cusp(epsilon, a)?.with_motion(std::f64::consts::FRAC_PI_2, [shift, 0.0]);
    let tip_theta = pred.theta();
    if tip_theta == 0.0 {
        form = form.with_motion(-std::f64::consts::FRAC_PI_2, [-shift, 0.0]);
    }
    Ok(HeleShawLocal {
        tprime,
        a_tilde,
        a_tilde_asymptotic,
        form,
        frame_a: 6.0 * 3f64.sqrt() * c,
        a1_crit: c,
        tip_theta,
    })
}

/// Least-squares coefficient `a` of `X = Theta + a Theta^3 / 3` for the
/// exact boundary mapped into the scaled frame, over `|Theta| <= theta_max`.
pub fn frame_coefficient(a1_0: f64, a2_0: f64, tprime: f64, theta_max: f64, samples: usize) -> Result<f64> {
    let local = local_cusp(a1_0, a2_0, tprime)?;
    let pred = predict_cusp(a1_0, a2_0)?;
    let state = evolve_map(a1_0, a2_0, pred.t0 - tprime)?;
    let half = theta_max * 2.0 * 3f64.sqrt() * tprime.powf(0.25);
    let n = samples.max(3);
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        let th = local.tip_theta - half + 2.0 * half * i as f64 / (n - 1) as f64;
        let (big, [xc, _]) = local.to_frame(th, state.boundary_point(th));
        num += (xc - big) * big.powi(3);
        den += big.powi(6);
    }
    if den == 0.0 {
        return Err(Error::FitFailed("empty frame window".into()));
    }
    Ok(3.0 * num / den)
}

/// Conservation diagnostics along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuctionInvariants {
    /// `max |a2 a1^2 - B|`.
    pub b_drift: f64,
    /// Slope of the enclosed area against time; suction gives `-2 pi`.
    pub area_slope: f64,
}

pub fn suction_invariants(trajectory: &[PolyMapState]) -> Result<SuctionInvariants> {
    if trajectory.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: trajectory.len(),
        });
    }
    let b_drift = trajectory
        .iter()
        .map(|s| (s.a2 * s.a1 * s.a1 - s.big_b).abs())
        .fold(0.0, f64::max);
    let ts: Vec<f64> = trajectory.iter().map(|s| s.t).collect();
    let areas: Vec<f64> = trajectory.iter().map(PolyMapState::area).collect();
    let fit = linear_fit(&ts, &areas).ok_or_else(|| Error::FitFailed("times are not distinct".into()))?;
    Ok(SuctionInvariants {
        b_drift,
        area_slope: fit.slope,
    })
}

/// Boundaries at `t = t0 - t'` for each `t'` (`t' = 0` gives the cusped
/// boundary), labelled with `t'`.
pub fn boundary_family(a1_0: f64, a2_0: f64, tprimes: &[f64], thetas: &[f64]) -> Result<CurveFamily> {
    let pred = predict_cusp(a1_0, a2_0)?;
    let curves = tprimes
        .iter()
        .map(|&tp| {
            let state = if tp == 0.0 {
                critical_state(a1_0, a2_0)?
            } else if tp < 0.0 {
                return Err(Error::PastSingularity {
                    t: pred.t0 - tp,
                    t0: pred.t0,
                });
            } else {
                evolve_map(a1_0, a2_0, pred.t0 - tp)?
            };
            Ok(boundary_curve(&state, thetas)?.with_label(Some(tp)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveFamily::new(curves))
}
