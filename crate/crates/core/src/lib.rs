//! Exact free-surface solutions, their singularities, and the two universal
//! local forms (cusp and swallowtail) they collapse onto.

// `!(x > 0.0)` is used throughout to reject NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod born_infeld;
pub mod curves;
pub mod eikonal;
pub mod error;
pub mod hele_shaw;
pub mod normal_forms;
pub mod numeric;
pub mod porous_medium;
pub mod potential_flow;
pub mod viscous_flow;

pub use curves::{CurveFamily, ParametricCurve};
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/normal-forms.md")]
    mod normal_forms {}
    #[doc = include_str!("../../../book/src/eikonal.md")]
    mod eikonal {}
    #[doc = include_str!("../../../book/src/hele-shaw.md")]
    mod hele_shaw {}
    #[doc = include_str!("../../../book/src/potential-flow.md")]
    mod potential_flow {}
    #[doc = include_str!("../../../book/src/porous-viscous.md")]
    mod porous_viscous {}
    #[doc = include_str!("../../../book/src/born-infeld.md")]
    mod born_infeld {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
