//! Alpha-curvelets, beta-shearlets and tensor wavelets on periodic grids,
//! together with the alpha-molecule toolkit used to compare them:
//! parametrizations and the alpha-scaled index distance, molecule order
//! checks, cross-Gramian decay, consistency sums, cartoon-like test images
//! and N-term approximation experiments.

// `!(x > 0.0)` is the NaN-rejecting form used throughout for validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod approx;
pub mod cartoon;
pub mod cli;
pub mod consistency;
pub mod error;
pub mod frame;
pub mod gramian;
pub mod grid;
pub mod molecule;
pub mod param;
pub mod windows;

pub use error::{Error, Result};
pub use frame::{CoefficientSet, Frame, FrameSpec};
pub use grid::{FrequencyGrid, Image};
pub use param::{ParamIndex, ParamPoint, Parametrization};

/// Text form of a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
