//! The two universal local forms of a free-surface singularity.
//!
//! Cusp:
//! `x = eps*theta + a*theta^3/3`, `y = theta^2/2`.
//!
//! Swallowtail:
//! `x = eps*theta + a*theta^3/3`, `y = eps*theta^2/2 + a*theta^4/4`.
//!
//! A [`NormalForm`] adds a rigid motion (rotation, then translation) that
//! places the local frame in the plane of the physical curve.

mod classify;
mod fit;
mod scaling;

use serde::{Deserialize, Serialize};

use crate::curves::ParametricCurve;
use crate::error::{Error, Result};

pub use classify::{classify_family, Residuals, SingularityReport};
pub use fit::{fit_normal_form, fit_normal_form_with, tip_exponent, FitOptions, NormalFormFit};
pub use scaling::{fit_scaling, SimilarityFit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Cusp,
    Swallowtail,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::Cusp => "cusp",
            Kind::Swallowtail => "swallowtail",
        })
    }
}

/// Which side of the singularity a similarity profile describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `t' > 0`, the `+` sign.
    Before,
    /// `t' < 0`, the `-` sign.
    After,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Before => 1.0,
            Side::After => -1.0,
        }
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(angle: f64) -> f64 {
    use std::f64::consts::PI;
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalForm {
    pub kind: Kind,
    pub epsilon: f64,
    pub a: f64,
    /// Rotation applied to the local frame, in `(-pi, pi]`.
    pub rotation: f64,
    pub translation: [f64; 2],
}

impl NormalForm {
    pub fn new(kind: Kind, epsilon: f64, a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::OutOfRange {
                name: "a",
                value: a,
                reason: "the normal-form coefficient must be positive",
            });
        }
        if !epsilon.is_finite() {
            return Err(Error::OutOfRange {
                name: "epsilon",
                value: epsilon,
                reason: "must be finite",
            });
        }
        Ok(Self {
            kind,
            epsilon,
            a,
            rotation: 0.0,
            translation: [0.0, 0.0],
        })
    }

    pub fn cusp(epsilon: f64, a: f64) -> Result<Self> {
        Self::new(Kind::Cusp, epsilon, a)
    }

    pub fn swallowtail(epsilon: f64, a: f64) -> Result<Self> {
        Self::new(Kind::Swallowtail, epsilon, a)
    }

    pub fn with_motion(mut self, rotation: f64, translation: [f64; 2]) -> Self {
        self.rotation = wrap_angle(rotation);
        self.translation = translation;
        self
    }

    /// The point at `theta` in the local frame, before the rigid motion.
    pub fn local_point(&self, theta: f64) -> [f64; 2] {
        local_point(self.kind, self.epsilon, self.a, theta)
    }

    /// Applies the rigid motion to a local-frame point.
    pub fn place(&self, p: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.rotation.sin_cos();
        [
            c * p[0] - s * p[1] + self.translation[0],
            s * p[0] + c * p[1] + self.translation[1],
        ]
    }

    pub fn point(&self, theta: f64) -> [f64; 2] {
        self.place(self.local_point(theta))
    }
}

pub(crate) fn local_point(kind: Kind, eps: f64, a: f64, t: f64) -> [f64; 2] {
    let t2 = t * t;
    let x = eps * t + a * t2 * t / 3.0;
    let y = match kind {
        Kind::Cusp => 0.5 * t2,
        Kind::Swallowtail => 0.5 * eps * t2 + 0.25 * a * t2 * t2,
    };
    [x, y]
}

/// Samples a normal form on `thetas`.
pub fn eval_normal_form(nf: &NormalForm, thetas: &[f64]) -> Result<ParametricCurve> {
    ParametricCurve::from_fn(thetas, None, |t| nf.point(t))
}

/// The self-similar profile `(X, Y)(sigma)` on one side of the singularity:
/// cusp `X = ±sigma + a sigma^3/3`, `Y = sigma^2/2`; swallowtail
/// `X = ±sigma + a sigma^3/3`, `Y = ±sigma^2/2 + a sigma^4/4`.
pub fn similarity_profile(kind: Kind, side: Side, a: f64, sigmas: &[f64]) -> Result<ParametricCurve> {
    if !(a > 0.0) {
        return Err(Error::OutOfRange {
            name: "a",
            value: a,
            reason: "the similarity profile needs a > 0",
        });
    }
    ParametricCurve::from_fn(sigmas, None, |s| local_point(kind, side.sign(), a, s))
}

/// `X^2 - 2Y(1 ± 2aY/3)^2`, which vanishes on the cusp similarity profile.
pub fn cusp_cubic_residual(x: f64, y: f64, a: f64, side: Side) -> f64 {
    let f = 1.0 + side.sign() * 2.0 * a * y / 3.0;
    x * x - 2.0 * y * f * f
}

/// One of the two cusps a swallowtail with `eps < 0` unfolds into.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalCusp {
    /// Normal-form parameter of the tip, `±sqrt(-eps/a)`.
    pub theta: f64,
    /// Tip in the local swallowtail frame.
    pub local_point: [f64; 2],
    /// Tip after the normal form's rigid motion.
    pub point: [f64; 2],
    /// Orthonormal rotation taking the local swallowtail frame to the cusp
    /// frame, whose `+y` axis points into the cusp.
    pub rotation: [[f64; 2]; 2],
    /// Leading behaviour `(cubic * s^3, quadratic * s^2)` in the cusp frame,
    /// for `theta = theta_c + s`.
    pub cubic: f64,
    pub quadratic: f64,
}

impl LocalCusp {
    /// Leading-order local expansion, mapped back to the local swallowtail frame.
    pub fn expansion(&self, s: f64) -> [f64; 2] {
        let u = [self.cubic * s * s * s, self.quadratic * s * s];
        let r = self.rotation;
        // Inverse of an orthonormal matrix is its transpose.
        [
            self.local_point[0] + r[0][0] * u[0] + r[1][0] * u[1],
            self.local_point[1] + r[0][1] * u[0] + r[1][1] * u[1],
        ]
    }
}

/// The two cusps of a swallowtail with `eps < 0`, ordered by `theta`.
pub fn swallowtail_cusps(nf: &NormalForm) -> Result<[LocalCusp; 2]> {
    if nf.kind != Kind::Swallowtail || !(nf.epsilon < 0.0) {
        return Err(Error::NoCusps { epsilon: nf.epsilon });
    }
    let (eps, a) = (nf.epsilon, nf.a);
    let root = (-eps / a).sqrt();
    let make = |theta: f64| {
        // Velocity vanishes at theta; second and third derivatives set the cusp.
        let d2 = [2.0 * a * theta, eps + 3.0 * a * theta * theta];
        let d3 = [2.0 * a, 6.0 * a * theta];
        let n = d2[0].hypot(d2[1]);
        let ey = [d2[0] / n, d2[1] / n];
        let ex = [ey[1], -ey[0]];
        let rotation = [ex, ey];
        let dot = |u: [f64; 2], v: [f64; 2]| u[0] * v[0] + u[1] * v[1];
        let local_point = local_point(Kind::Swallowtail, eps, a, theta);
        LocalCusp {
            theta,
            local_point,
            point: nf.place(local_point),
            rotation,
            cubic: dot(ex, d3) / 6.0,
            quadratic: dot(ey, d2) / 2.0,
        }
    };
    Ok([make(-root), make(root)])
}
