//! One function per scenario: parameters in, curves and results out.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use cusplab::born_infeld::{bi_family, curvature_blowup_time, GMode, HoppeData, Poly};
use cusplab::eikonal::{first_singularity, front_family, InitialFront};
use cusplab::hele_shaw::{
    boundary_family, critical_state, integrate_map, local_cusp, ode_blowup_time, predict_cusp, suction_invariants,
};
use cusplab::normal_forms::{classify_family, SingularityReport};
use cusplab::porous_medium::{local_cusp_shape, PorousCuspLocal};
use cusplab::potential_flow::{
    craya_local, craya_shape, critical_m, critical_m_closed_form, drop_local_form, drop_shape, drop_top,
    intersection_sweep, HopkinsonDrop, CRAYA_TRUNCATION, CRITICAL_M_SAMPLES,
};
use cusplab::viscous_flow::{a_from_ca, local_cusp_form, surface_shape, tip_radius};
use cusplab::CurveFamily;
use serde_json::{json, Value};

use crate::config::{ListSpec, Params, Scenario, DEFAULT_SLICES};
use crate::error::{CliError, Result};

/// What a scenario produced, before anything is written.
#[derive(Debug, Clone)]
pub struct ScenarioOutput {
    pub family: Option<CurveFamily>,
    pub singularity: Option<SingularityReport>,
    pub results: Value,
}

pub fn run(scenario: Scenario, p: &Params) -> Result<ScenarioOutput> {
    match scenario {
        Scenario::Eikonal => eikonal(p),
        Scenario::HeleShaw => hele_shaw(p),
        Scenario::Hopkinson => hopkinson(p),
        Scenario::Craya => craya(p),
        Scenario::Porous => porous(p),
        Scenario::Viscous => viscous(p),
        Scenario::BornInfeld => born_infeld(p),
        Scenario::Classify => classify(p),
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// `DEFAULT_SLICES - 1` values of `t'` log-spaced from `hi` down to `lo`,
/// then `t' = 0`.
fn auto_tprimes(hi: f64, lo: f64) -> Vec<f64> {
    let k = DEFAULT_SLICES - 1;
    let mut v: Vec<f64> = (0..k).map(|i| hi * (lo / hi).powf(i as f64 / (k - 1) as f64)).collect();
    v.push(0.0);
    v
}

fn tprimes(p: &Params, key: &str, hi: f64, lo: f64) -> Result<Vec<f64>> {
    Ok(match p.list(key)? {
        ListSpec::Auto => auto_tprimes(hi, lo),
        ListSpec::Values(v) => v,
    })
}

fn samples(p: &Params, key: &str) -> Result<usize> {
    let n = p.usize(key)?;
    if n < 16 {
        return Err(CliError::invalid(key, "need at least 16 samples"));
    }
    Ok(n)
}

fn positive(p: &Params, key: &str) -> Result<f64> {
    let x = p.f64(key)?;
    if x.is_nan() || x <= 0.0 {
        return Err(CliError::invalid(key, "must be positive"));
    }
    Ok(x)
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn eikonal(p: &Params) -> Result<ScenarioOutput> {
    let front = InitialFront::new(p.f64("a1")?, p.f64("a2")?)?;
    let (lo, hi) = p.range("x0-range")?;
    let x0s = linspace(lo, hi, samples(p, "samples")?);
    let sing = first_singularity(&front)?;
    let tps = tprimes(p, "t-list", 1e-1, 1e-3)?;
    let family = front_family(&front, &tps, &x0s)?;
    let report = classify_family(&family)?;
    Ok(ScenarioOutput {
        family: Some(family),
        singularity: Some(report),
        results: json!({
            "t0": sing.t0,
            "x0_star": sing.x0_star,
            "a": sing.a,
            "location": sing.location,
            "t_prime": tps,
        }),
    })
}

fn hele_shaw(p: &Params) -> Result<ScenarioOutput> {
    let (a1, a2) = (p.f64("a1")?, p.f64("a2")?);
    let pred = predict_cusp(a1, a2)?;
    let tps = tprimes(p, "t-list", 1e-2, 1e-4)?;
    if let Some(&bad) = tps.iter().find(|&&t| t < 0.0 || t >= pred.t0) {
        return Err(CliError::invalid("t-list", format!("t' = {bad} is outside [0, t0)")));
    }
    let half = positive(p, "theta-window")?;
    let thetas = linspace(pred.theta() - half, pred.theta() + half, samples(p, "theta-samples")?);
    let family = boundary_family(a1, a2, &tps, &thetas)?;
    let report = classify_family(&family)?;
    let crit = critical_state(a1, a2)?;
    let blowup = ode_blowup_time(a1, a2, 10_000)?;
    let traj = integrate_map(a1, a2, 0.95 * pred.t0, 10_000)?;
    let inv = suction_invariants(&traj)?;
    let smallest = tps.iter().copied().filter(|&t| t > 0.0).fold(f64::INFINITY, f64::min);
    let local = if smallest.is_finite() {
        Some(local_cusp(a1, a2, smallest)?)
    } else {
        None
    };
    Ok(ScenarioOutput {
        family: Some(family),
        singularity: Some(report),
        results: json!({
            "t0": pred.t0,
            "ode_blowup_time": blowup,
            "location": pred.location,
            "critical_state": to_value(&crit)?,
            "invariants": to_value(&inv)?,
            "local": to_value(&local)?,
            "t_prime": tps,
        }),
    })
}

fn hopkinson(p: &Params) -> Result<ScenarioOutput> {
    let m = p.f64("m")?;
    let n = samples(p, "samples")?;
    let drop = HopkinsonDrop::new(m)?;
    let sweep = match p.get("m-sweep") {
        None => Vec::new(),
        Some(_) => match p.list("m-sweep")? {
            ListSpec::Auto => linspace(0.9, 1.0, 11),
            ListSpec::Values(v) => v,
        },
    };
    let mut curves = vec![drop_shape(m, n)?];
    for &ms in &sweep {
        curves.push(drop_shape(ms, n)?);
    }
    let top = drop_top(m, 0.5, n.max(8001))?;
    let report = classify_family(&CurveFamily::new(vec![top]))?;
    let crossings = intersection_sweep(&sweep, CRITICAL_M_SAMPLES)?;
    let critical = if p.bool("find-critical-m")? {
        Some(json!({ "m_star": critical_m()?, "closed_form": critical_m_closed_form()? }))
    } else {
        None
    };
    Ok(ScenarioOutput {
        family: Some(CurveFamily::new(curves)),
        singularity: Some(report),
        results: json!({
            "m": m,
            "gamma_m": drop.gamma_m,
            "apex": drop.point(0.0),
            "local_form": to_value(&drop_local_form(m)?)?,
            "crossings": crossings.iter().map(|(m, k)| json!({ "m": m, "count": k })).collect::<Vec<_>>(),
            "critical_m": critical,
        }),
    })
}

fn craya(p: &Params) -> Result<ScenarioOutput> {
    let shape = craya_shape(samples(p, "samples")?)?;
    let curve = shape.curve;
    // Leading coefficients recovered from the quadrature near the tip.
    let mid = curve.len() / 2;
    let k = mid + 5;
    let th = curve.params()[k];
    let q = curve.points()[k];
    let exact = craya_local(th);
    let report = classify_family(&CurveFamily::new(vec![curve.clone()]))?;
    Ok(ScenarioOutput {
        family: Some(CurveFamily::new(vec![curve])),
        singularity: Some(report),
        results: json!({
            "truncation": CRAYA_TRUNCATION,
            "cubic_coefficient": q[0] / th.powi(3),
            "cubic_coefficient_local": exact[0] / th.powi(3),
            "quadratic_coefficient": q[1] / (th * th),
            "quadratic_coefficient_local": exact[1] / (th * th),
        }),
    })
}

fn porous(p: &Params) -> Result<ScenarioOutput> {
    let amp = p.f64("A")?;
    let smax = p.f64("sigma-max")?;
    if smax.is_nan() || smax <= -1.0 {
        return Err(CliError::invalid("sigma-max", "must exceed -1"));
    }
    let local = PorousCuspLocal::new(amp)?;
    let curve = local_cusp_shape(amp, &linspace(-1.0, smax, samples(p, "samples")?))?;
    let report = classify_family(&CurveFamily::new(vec![curve.clone()]))?;
    Ok(ScenarioOutput {
        family: Some(CurveFamily::new(vec![curve])),
        singularity: Some(report),
        results: json!({
            "A": amp,
            "normal_form": to_value(&local.normal_form())?,
        }),
    })
}

fn viscous(p: &Params) -> Result<ScenarioOutput> {
    let ca = positive(p, "ca")?;
    let sweep = match p.list("ca-sweep")? {
        ListSpec::Auto => linspace(0.15, 0.35, 9),
        ListSpec::Values(v) => v,
    };
    let thetas = linspace(FRAC_PI_2 - 1.5, FRAC_PI_2 + 1.5, samples(p, "theta-samples")?);
    let sol = a_from_ca(ca)?;
    let shape = surface_shape(sol.a, &thetas)?.with_label(Some(ca));
    let report = classify_family(&CurveFamily::new(vec![shape.clone()]))?;
    let mut curves = vec![shape];
    for &c in &sweep {
        curves.push(surface_shape(a_from_ca(c)?.a, &thetas)?.with_label(Some(c)));
    }
    let radius = if sweep.len() >= 2 {
        Some(tip_radius(&sweep)?)
    } else {
        None
    };
    Ok(ScenarioOutput {
        family: Some(CurveFamily::new(curves)),
        singularity: Some(report),
        results: json!({
            "solution": to_value(&sol)?,
            "local_form": to_value(&local_cusp_form(sol.epsilon))?,
            "tip_radius": to_value(&radius)?,
        }),
    })
}

/// First time at which `cos(f - g)` vanishes somewhere on the `phi` grid.
fn first_singular_time(data: &HoppeData, phis: &[f64], t_max: f64) -> Result<(f64, f64)> {
    let coarse = linspace(phis[0], phis[phis.len() - 1], 201);
    let mut best: Option<(f64, f64)> = None;
    for &phi in &coarse {
        if let Ok(t) = curvature_blowup_time(data, phi, 0.0, t_max, 1e-2) {
            if best.is_none_or(|(b, _)| t < b) {
                best = Some((t, phi));
            }
        }
    }
    best.ok_or(CliError::Numerical(cusplab::Error::NoBracket { lo: 0.0, hi: t_max }))
}

fn born_infeld(p: &Params) -> Result<ScenarioOutput> {
    let coeffs = match p.list("f-coeffs")? {
        ListSpec::Values(v) if v.len() <= 7 => v,
        _ => return Err(CliError::invalid("f-coeffs", "expected at most 7 coefficients")),
    };
    let g = match p.get("g-coeffs") {
        None => GMode::Symmetric,
        Some(_) => match p.list("g-coeffs")? {
            ListSpec::Values(v) if v.len() <= 7 => GMode::Explicit(Poly::new(v)),
            _ => return Err(CliError::invalid("g-coeffs", "expected at most 7 coefficients")),
        },
    };
    let data = HoppeData::new(Poly::new(coeffs), g, positive(p, "lambda")?)?;
    let (lo, hi) = p.range("phi-range")?;
    let phis = linspace(lo, hi, samples(p, "samples")?);
    let (t0, phi_star) = first_singular_time(&data, &phis, positive(p, "t-max")?)?;
    let tps = tprimes(p, "t-list", 1e-1, 1e-3)?;
    let family = bi_family(&data, t0, &tps, &phis)?;
    let report = classify_family(&family)?;
    Ok(ScenarioOutput {
        family: Some(family),
        singularity: Some(report),
        results: json!({
            "t0": t0,
            "phi_star": phi_star,
            "location": data.point(t0, phi_star)?,
            "data": to_value(&data)?,
            "t_prime": tps,
        }),
    })
}

/// Classifies a family stored as JSON. A lone curve is accepted too.
pub fn classify_file(path: &Path) -> Result<SingularityReport> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input {
        path: path.into(),
        reason: e.to_string(),
    })?;
    let family = CurveFamily::from_json(&text).map_err(|e| CliError::Input {
        path: path.into(),
        reason: e.to_string(),
    })?;
    Ok(classify_family(&family)?)
}

fn classify(p: &Params) -> Result<ScenarioOutput> {
    let input = p.string("input")?;
    let report = classify_file(Path::new(&input))?;
    Ok(ScenarioOutput {
        family: None,
        singularity: Some(report),
        results: json!({ "kind": report.kind(), "gamma": report.gamma }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_list_has_default_slices() {
        let v = auto_tprimes(1e-1, 1e-3);
        assert_eq!(v.len(), DEFAULT_SLICES);
        assert_eq!(v[0], 1e-1);
        assert!((v[DEFAULT_SLICES - 2] - 1e-3).abs() < 1e-15);
        assert_eq!(v[DEFAULT_SLICES - 1], 0.0);
    }

    #[test]
    fn default_born_infeld_generator() {
        let p = Scenario::BornInfeld.defaults();
        let ListSpec::Values(c) = p.list("f-coeffs").unwrap() else {
            panic!("defaults hold values")
        };
        let local = Poly::around(1.0, vec![std::f64::consts::FRAC_PI_4, 0.5, -0.5]);
        let f = Poly::new(c);
        for z in [-1.0, 0.3, 2.0] {
            assert!((f.eval(z) - local.eval(z)).abs() < 1e-14);
        }
    }
}
