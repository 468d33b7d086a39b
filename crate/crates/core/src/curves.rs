//! Sampled planar curves and the geometry queries used to find their
//! singularities: arclength, speed, curvature, vanishing-tangent tips and
//! self-intersections.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::fd;

/// A planar curve sampled at strictly increasing parameter values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct ParametricCurve {
    label: Option<f64>,
    params: Vec<f64>,
    points: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
struct RawCurve {
    #[serde(default)]
    label: Option<f64>,
    params: Vec<f64>,
    points: Vec<[f64; 2]>,
}

impl TryFrom<RawCurve> for ParametricCurve {
    type Error = Error;
    fn try_from(raw: RawCurve) -> Result<Self> {
        ParametricCurve::new(raw.params, raw.points, raw.label)
    }
}

impl ParametricCurve {
    pub fn new(params: Vec<f64>, points: Vec<[f64; 2]>, label: Option<f64>) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::InvalidCurve(format!(
                "{} parameters but {} points",
                params.len(),
                points.len()
            )));
        }
        if params.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: params.len(),
            });
        }
        if params.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidCurve("parameters must be strictly increasing".into()));
        }
        if params.iter().any(|p| !p.is_finite()) || points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidCurve("non-finite parameter or coordinate".into()));
        }
        if label.is_some_and(|l| !l.is_finite()) {
            return Err(Error::InvalidCurve("non-finite label".into()));
        }
        Ok(Self { label, params, points })
    }

    /// Samples `f` at each parameter value.
    pub fn from_fn(params: &[f64], label: Option<f64>, f: impl Fn(f64) -> [f64; 2]) -> Result<Self> {
        Self::new(params.to_vec(), params.iter().map(|&s| f(s)).collect(), label)
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn label(&self) -> Option<f64> {
        self.label
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn with_label(mut self, label: Option<f64>) -> Self {
        self.label = label;
        self
    }

    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p[0]).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.points.iter().map(|p| p[1]).collect()
    }

    /// Rotates every point by `angle` about the origin, then translates.
    pub fn transformed(&self, angle: f64, translation: [f64; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        let points = self
            .points
            .iter()
            .map(|p| {
                [
                    c * p[0] - s * p[1] + translation[0],
                    s * p[0] + c * p[1] + translation[1],
                ]
            })
            .collect();
        Self {
            label: self.label,
            params: self.params.clone(),
            points,
        }
    }

    /// The same point set traversed backwards, with parameter `-sigma`.
    pub fn reversed(&self) -> Self {
        Self {
            label: self.label,
            params: self.params.iter().rev().map(|s| -s).collect(),
            points: self.points.iter().rev().copied().collect(),
        }
    }

    /// The sub-curve of samples `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        Self::new(
            self.params[range.clone()].to_vec(),
            self.points[range].to_vec(),
            self.label,
        )
    }

    /// Local cubic interpolation of position and velocity at parameter `sigma`.
    pub fn eval(&self, sigma: f64) -> ([f64; 2], [f64; 2]) {
        let (x, dx) = fd::interpolate(&self.params, &self.xs(), sigma);
        let (y, dy) = fd::interpolate(&self.params, &self.ys(), sigma);
        ([x, y], [dx, dy])
    }

    /// Index of the sample whose parameter is closest to `sigma`.
    pub fn nearest_index(&self, sigma: f64) -> usize {
        let k = self.params.partition_point(|&p| p < sigma);
        if k == 0 {
            0
        } else if k == self.len() || sigma - self.params[k - 1] <= self.params[k] - sigma {
            k - 1
        } else {
            k
        }
    }

    /// Velocity `dz/dsigma` at every sample.
    pub fn velocity(&self) -> Vec<[f64; 2]> {
        if self.len() == 2 {
            let d = self.params[1] - self.params[0];
            let v = [
                (self.points[1][0] - self.points[0][0]) / d,
                (self.points[1][1] - self.points[0][1]) / d,
            ];
            return vec![v, v];
        }
        let (dx, _) = fd::derivatives(&self.params, &self.xs());
        let (dy, _) = fd::derivatives(&self.params, &self.ys());
        dx.into_iter().zip(dy).map(|(a, b)| [a, b]).collect()
    }

    /// Bounding-box diagonal, used as the curve's length scale.
    pub fn diameter(&self) -> f64 {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in &self.points {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
        (x1 - x0).hypot(y1 - y0)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Writes `sigma,x,y` rows with a header.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["sigma", "x", "y"])?;
        for (s, p) in self.params.iter().zip(&self.points) {
            wr.serialize((s, p[0], p[1]))?;
        }
        wr.flush()?;
        Ok(())
    }

    /// Reads `sigma,x,y` rows; the label is not stored in CSV.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let mut params = Vec::new();
        let mut points = Vec::new();
        for row in rd.deserialize() {
            let (s, x, y): (f64, f64, f64) = row?;
            params.push(s);
            points.push([x, y]);
        }
        Self::new(params, points, None)
    }
}

/// Arclength, speed and signed curvature of a sampled curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryReport {
    pub arclength: f64,
    pub speed: Vec<f64>,
    pub curvature: Vec<f64>,
}

/// Finite-difference geometry. Curvature needs at least three samples.
pub fn geometry(curve: &ParametricCurve) -> Result<GeometryReport> {
    if curve.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: curve.len(),
        });
    }
    let arclength = curve
        .points
        .windows(2)
        .map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]))
        .sum();
    let (dx, ddx) = fd::derivatives(&curve.params, &curve.xs());
    let (dy, ddy) = fd::derivatives(&curve.params, &curve.ys());
    let mut speed = Vec::with_capacity(curve.len());
    let mut curvature = Vec::with_capacity(curve.len());
    for i in 0..curve.len() {
        let v = dx[i].hypot(dy[i]);
        speed.push(v);
        let cross = dx[i] * ddy[i] - dy[i] * ddx[i];
        curvature.push(if v > 0.0 {
            cross / (v * v * v)
        } else {
            f64::INFINITY.copysign(cross)
        });
    }
    Ok(GeometryReport {
        arclength,
        speed,
        curvature,
    })
}

/// A transversal crossing of two non-adjacent parts of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub sigma_i: f64,
    pub sigma_j: f64,
    pub point: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct IntersectionReport {
    pub crossings: Vec<Crossing>,
}

impl IntersectionReport {
    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }
}

fn segment_hit(p: [f64; 2], p2: [f64; 2], q: [f64; 2], q2: [f64; 2]) -> Option<(f64, f64)> {
    let r = [p2[0] - p[0], p2[1] - p[1]];
    let s = [q2[0] - q[0], q2[1] - q[1]];
    let rxs = r[0] * s[1] - r[1] * s[0];
    if rxs == 0.0 {
        return None;
    }
    let qp = [q[0] - p[0], q[1] - p[1]];
    let t = (qp[0] * s[1] - qp[1] * s[0]) / rxs;
    let u = (qp[0] * r[1] - qp[1] * r[0]) / rxs;
    ((0.0..1.0).contains(&t) && (0.0..1.0).contains(&u)).then_some((t, u))
}

/// Newton iteration on the interpolated curve for `z(a) = z(b)`, staying
/// within the two segments' neighbourhoods.
fn refine_crossing(curve: &ParametricCurve, i: usize, j: usize, a0: f64, b0: f64) -> (f64, f64) {
    let n = curve.len();
    let lo_a = curve.params[i.saturating_sub(1)];
    let hi_a = curve.params[(i + 2).min(n - 1)];
    let lo_b = curve.params[j.saturating_sub(1)];
    let hi_b = curve.params[(j + 2).min(n - 1)];
    let (mut a, mut b) = (a0, b0);
    for _ in 0..50 {
        let (za, va) = curve.eval(a);
        let (zb, vb) = curve.eval(b);
        let f = [za[0] - zb[0], za[1] - zb[1]];
        // Solve [va, -vb] [da, db]^T = -f.
        let det = va[0] * (-vb[1]) - va[1] * (-vb[0]);
        if det == 0.0 || !det.is_finite() {
            return (a0, b0);
        }
        let da = (-f[0] * (-vb[1]) + f[1] * (-vb[0])) / det;
        let db = (-va[0] * f[1] + va[1] * f[0]) / det;
        a += da;
        b += db;
        if !(lo_a..=hi_a).contains(&a) || !(lo_b..=hi_b).contains(&b) {
            return (a0, b0);
        }
        if da.abs() < 1e-15 * (1.0 + a.abs()) && db.abs() < 1e-15 * (1.0 + b.abs()) {
            break;
        }
    }
    (a, b)
}

/// All transversal crossings between non-adjacent segments.
///
/// Candidate segment pairs come from a sweep over bounding boxes sorted by
/// their left edge; each hit is refined by Newton's method on the local cubic
/// interpolant.
pub fn find_self_intersections(curve: &ParametricCurve) -> IntersectionReport {
    let pts = &curve.points;
    let nseg = pts.len() - 1;
    let bbox = |k: usize| {
        let (a, b) = (pts[k], pts[k + 1]);
        [a[0].min(b[0]), a[0].max(b[0]), a[1].min(b[1]), a[1].max(b[1])]
    };
    let boxes: Vec<[f64; 4]> = (0..nseg).map(bbox).collect();
    let mut order: Vec<usize> = (0..nseg).collect();
    order.sort_by(|&a, &b| boxes[a][0].total_cmp(&boxes[b][0]));
    let mut crossings = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let bi = boxes[i];
        for &j in &order[pos + 1..] {
            let bj = boxes[j];
            if bj[0] > bi[1] {
                break;
            }
            if i.abs_diff(j) < 2 || bj[2] > bi[3] || bj[3] < bi[2] {
                continue;
            }
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            if let Some((t, u)) = segment_hit(pts[lo], pts[lo + 1], pts[hi], pts[hi + 1]) {
                let a0 = curve.params[lo] + t * (curve.params[lo + 1] - curve.params[lo]);
                let b0 = curve.params[hi] + u * (curve.params[hi + 1] - curve.params[hi]);
                let (a, b) = refine_crossing(curve, lo, hi, a0, b0);
                let (za, _) = curve.eval(a);
                let (zb, _) = curve.eval(b);
                crossings.push(Crossing {
                    sigma_i: a.min(b),
                    sigma_j: a.max(b),
                    point: [0.5 * (za[0] + zb[0]), 0.5 * (za[1] + zb[1])],
                });
            }
        }
    }
    crossings.sort_by(|x, y| x.sigma_i.total_cmp(&y.sigma_i));
    IntersectionReport { crossings }
}

/// A point where the tangent vector (nearly) vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tip {
    pub sigma: f64,
    pub point: [f64; 2],
    /// Refined speed at `sigma`.
    pub speed: f64,
}

/// Fraction of the median speed below which a speed minimum counts as a tip.
pub const TIP_THRESHOLD: f64 = 1e-3;

/// Refines the speed minimum near sample `i` with a parabola through the
/// squared speeds of its neighbours; squared speed is smooth where the speed
/// itself has a corner.
fn refine_minimum(curve: &ParametricCurve, speed2: &[f64], i: usize) -> Tip {
    let n = curve.len();
    let mut sigma = curve.params[i];
    let mut s2 = speed2[i];
    if i > 0 && i + 1 < n {
        let (x0, x1, x2) = (curve.params[i - 1], curve.params[i], curve.params[i + 1]);
        let (f0, f1, f2) = (speed2[i - 1], speed2[i], speed2[i + 1]);
        let d01 = (f1 - f0) / (x1 - x0);
        let d12 = (f2 - f1) / (x2 - x1);
        let c = (d12 - d01) / (x2 - x0);
        // Newton form: p(x) = f0 + d01 (x - x0) + c (x - x0)(x - x1).
        if c > 0.0 {
            let v = 0.5 * (x0 + x1) - d01 / (2.0 * c);
            if v > x0 && v < x2 {
                sigma = v;
                s2 = f0 + d01 * (v - x0) + c * (v - x0) * (v - x1);
            }
        }
    }
    let (point, _) = curve.eval(sigma);
    Tip {
        sigma,
        point,
        speed: s2.max(0.0).sqrt(),
    }
}

fn squared_speed(curve: &ParametricCurve) -> Vec<f64> {
    curve.velocity().iter().map(|v| v[0] * v[0] + v[1] * v[1]).collect()
}

/// Local minima of the speed whose refined value is below
/// [`TIP_THRESHOLD`] times the median speed.
pub fn find_tips(curve: &ParametricCurve) -> Vec<Tip> {
    let n = curve.len();
    if n < 3 {
        return Vec::new();
    }
    let speed2 = squared_speed(curve);
    let mut sorted: Vec<f64> = speed2.iter().map(|s| s.sqrt()).collect();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[n / 2];
    let threshold = TIP_THRESHOLD * median;
    let mut tips = Vec::new();
    for i in 0..n {
        let left_ok = i == 0 || speed2[i] <= speed2[i - 1];
        let right_ok = i + 1 == n || speed2[i] < speed2[i + 1];
        if left_ok && right_ok {
            let tip = refine_minimum(curve, &speed2, i);
            if tip.speed <= threshold {
                tips.push(tip);
            }
        }
    }
    tips
}

/// The global speed minimum, refined, whether or not it is a tip.
pub fn speed_minimum(curve: &ParametricCurve) -> Tip {
    let speed2 = squared_speed(curve);
    let i = speed2
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    refine_minimum(curve, &speed2, i)
}

/// A set of curves indexed by distance to the singularity, `t' = t0 - t`
/// (or the analogous control-parameter distance), stored as curve labels.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CurveFamily {
    pub curves: Vec<ParametricCurve>,
}

impl CurveFamily {
    pub fn new(curves: Vec<ParametricCurve>) -> Self {
        Self { curves }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Parses a family, or a single bare curve as a one-member family.
    pub fn from_json(s: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(s)?;
        if value.get("curves").is_some() {
            Ok(serde_json::from_value(value)?)
        } else {
            Ok(Self::new(vec![serde_json::from_value(value)?]))
        }
    }

    /// True when every curve shares the first curve's parameter grid.
    pub fn shares_grid(&self) -> bool {
        self.curves.windows(2).all(|w| w[0].params == w[1].params)
    }
}
