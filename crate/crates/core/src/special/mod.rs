//! Numerical kernels shared by the speed solvers and the bound evaluators.
//!
//! - [`hyp2f1`]: Gauss hypergeometric function on `z < 1` (Pfaff transform for `z < 0`).
//! - [`integrate`]: globally adaptive Gauss–Kronrod (7, 15) quadrature.
//! - [`bisect`] / [`bisect_bracket`]: bracketing root finder.
//! - [`maximize_scalar`] / [`nelder_mead`]: derivative-free maximizers.
//!
//! Everything here is a pure function of its inputs.

mod hypergeometric;
mod optimize;
mod quadrature;
mod roots;

pub use hypergeometric::{hyp2f1, hyp2f1_series, SERIES_MAX_TERMS};
pub use optimize::{maximize_scalar, nelder_mead, NelderMeadOptions};
pub use quadrature::{integrate, integrate_with_breakpoints, QuadratureResult, MAX_DEPTH};
pub use roots::{bisect, bisect_bracket, Bracket};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("argument z = {0} outside the supported domain z < 1")]
    OutOfDomain(f64),
    #[error("hypergeometric series did not converge after {0} terms")]
    SeriesNotConverged(usize),
    #[error("non-finite function value {value} at x = {at}")]
    NonFinite { at: f64, value: f64 },
    #[error("quadrature tolerance not met: value {value}, error estimate {error}")]
    ToleranceNotMet { value: f64, error: f64 },
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {flo}, f(hi) = {fhi}")]
    NoSignChange { lo: f64, hi: f64, flo: f64, fhi: f64 },
    #[error("iteration cap {0} reached")]
    IterationCap(usize),
}
