use thiserror::Error;

/// Errors raised by the solvers, fitters and curve tools.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("{name} = {value} is out of range: {reason}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("initial front does not focus at x0 = {x0} (h0'' = {h2})")]
    NoFocusing { x0: f64, h2: f64 },

    #[error("degenerate focusing: local swallowtail coefficient a = {a} is not positive")]
    DegenerateFocusing { a: f64 },

    #[error("t = {t} is at or past the singular time t0 = {t0}")]
    PastSingularity { t: f64, t0: f64 },

    #[error("map with a1 = {a1}, a2 = {a2} is not univalent on the unit circle")]
    NotUnivalent { a1: f64, a2: f64 },

    #[error("B = 0: the circle shrinks to a point without forming a cusp")]
    NoCusp,

    #[error("swallowtail with epsilon = {epsilon} has no cusps (needs epsilon < 0)")]
    NoCusps { epsilon: f64 },

    #[error(
        "singularity unclassified: cusp residual {cusp_residual:.3e}, swallowtail residual {swallowtail_residual:.3e}"
    )]
    Unclassified {
        cusp_residual: f64,
        swallowtail_residual: f64,
    },

    #[error("fit failed: {0}")]
    FitFailed(String),

    #[error("no sign change in bracket [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("complete elliptic integral diverges for modulus {0}")]
    EllipticDivergence(f64),

    #[error("parameter grid hits the pole at theta = {0}")]
    Pole(f64),

    #[error("graph condition |f + g| < pi/2 violated at t = {t}, phi = {phi}")]
    GraphCondition { t: f64, phi: f64 },

    #[error("curvature is singular at t = {t}, phi = {phi}: cos(f - g) = 0")]
    SingularCurvature { t: f64, phi: f64 },

    #[error("curves in the family do not share a parameter grid")]
    MismatchedGrids,

    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    Quadrature { tol: f64, estimate: f64 },

    #[error("radius {0:e} is below the double-precision floor")]
    RadiusFloor(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
