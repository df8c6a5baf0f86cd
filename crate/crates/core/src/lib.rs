//! Spreading speeds of traveling fronts for the 1-D reaction–diffusion
//! equation u_t = u_xx + f(u) with a Stefan free boundary
//! L′(t) = −κ u_x(L(t), t).
//!
//! The crate offers three independent routes to the speed c(κ):
//!
//! - [`phaseplane`]: the exact speed, by backward shooting of the
//!   phase-plane problem p p′ − c p + f = 0, p(0) = c/κ, p(1) = 0.
//! - [`varbound`]: lower bounds from the integral variational functional
//!   c² ≥ 2∫fg / (g(0)/κ² + ∫g²/h), for trial functions g with h = −g′,
//!   plus closed-form bounds for Fisher and ZFK-type estimates.
//! - [`pdesim`]: a direct front-fixing simulation of the free-boundary PDE.
//!
//! [`special`] holds the numerical kernels, [`reactions`] the reaction terms
//! and [`acceptance`] the end-to-end checks shared by the test suite and the
//! command-line `selftest`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod pdesim;
pub mod phaseplane;
pub mod reactions;
pub mod special;
pub mod varbound;
