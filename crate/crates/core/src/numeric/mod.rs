//! Small numerical kernels shared by the solvers: quadrature, root finding,
//! one-dimensional minimization, ODE stepping, least squares and regression.

pub mod fd;
pub mod lm;
pub mod ode;
pub mod optimize;
pub mod quad;
pub mod roots;
pub mod stats;

pub use lm::{levenberg_marquardt, LmOptions, LmOutcome};
pub use ode::{rk4_integrate, rk4_step};
pub use optimize::golden_section;
pub use quad::{integrate, integrate_with, QuadOptions, QuadValue};
pub use roots::{bisect, brent};
pub use stats::{linear_fit, LinearFit};
