//! Exact front speed from the phase-plane boundary-value problem
//!
//! ```text
//! p dp/dq − c p + f(q) = 0,   p(0) = c/κ,   p(1) = 0,   p > 0 on (0, 1)
//! ```
//!
//! where p = −q_z is the slope of the traveling profile q(x − ct). For a
//! given c the unique relevant trajectory is the unstable manifold of the
//! saddle at q = 1; it is integrated backward towards q = 0 and the speed is
//! the c for which it lands on p(0) = c/κ.

use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::reactions::ReactionTerm;
use crate::special::{bisect_bracket, integrate, SpecialError};
use crate::varbound::TrialFunction;

/// Default bisection width for [`stefan_speed`].
pub const DEFAULT_SPEED_TOL: f64 = 1e-10;

/// A trajectory with p(0) at or below this value counts as reaching the
/// origin when locating the κ = ∞ speed.
const P0_FLOOR: f64 = 1e-9;

/// Starting offset from q = 1 when f′(1⁻) = 0.
const DEGENERATE_EPS: f64 = 1e-3;

/// Step bound while bisecting; the result does not depend on it, only the
/// output grid density does.
const BISECTION_MAX_STEP: f64 = 0.02;

#[derive(Debug, Error)]
pub enum ShootError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degenerate saddle at q = 1 (f'(1-) = {fprime1}) and no usable fallback start")]
    DegenerateSaddle { fprime1: f64 },
    #[error("step size underflow at q = {q} (p = {p})")]
    StepUnderflow { q: f64, p: f64 },
    #[error("no traveling wave detected for kappa = {kappa}: {reason}")]
    NoTravelingWave { kappa: f64, reason: String },
    #[error("profile touches down at q = {0}; the optimal trial needs a positive connection")]
    Touchdown(f64),
    #[error("profile has p(0) = {0}; the optimal trial needs p(0) > 0")]
    ZeroSlopeAtOrigin(f64),
    #[error(transparent)]
    Numerics(#[from] SpecialError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions {
    /// Distance from q = 1 where integration starts.
    pub eps: f64,
    /// Output resolution: the step never exceeds 1/n_steps in q.
    pub n_steps: usize,
    pub rtol: f64,
    pub atol: f64,
    /// p below this in the interior counts as touchdown.
    pub touchdown: f64,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            eps: 1e-8,
            n_steps: 2000,
            rtol: 1e-10,
            atol: 1e-14,
            touchdown: 1e-12,
        }
    }
}

/// Sampled solution p(q) of the phase-plane equation for one speed c.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseProfile {
    pub c: f64,
    pub kappa: f64,
    /// Increasing. Ends at 1 − eps; starts at 0 unless the profile touched down.
    pub q_grid: Vec<f64>,
    pub p_values: Vec<f64>,
    /// Slope of the unstable manifold at q = 1 (p ≈ μ(1 − q)).
    pub mu: f64,
    pub touchdown: Option<f64>,
    pub degenerate_saddle: bool,
}

impl PhaseProfile {
    /// p(0), or `None` when the trajectory touched down before q = 0.
    pub fn p_at_zero(&self) -> Option<f64> {
        match (self.touchdown, self.q_grid.first()) {
            (None, Some(&0.0)) => Some(self.p_values[0]),
            _ => None,
        }
    }

    /// Largest |p p′ − c p + f| over interior samples, with p′ from the
    /// three-point formula on the (non-uniform) grid.
    pub fn max_residual(&self, f: &ReactionTerm) -> f64 {
        let q = &self.q_grid;
        let p = &self.p_values;
        let mut worst = 0.0_f64;
        for i in 1..q.len().saturating_sub(1) {
            let h0 = q[i] - q[i - 1];
            let h1 = q[i + 1] - q[i];
            let dp = -h1 / (h0 * (h0 + h1)) * p[i - 1]
                + (h1 - h0) / (h0 * h1) * p[i]
                + h0 / (h1 * (h0 + h1)) * p[i + 1];
            let r = p[i] * dp - self.c * p[i] + f.eval(q[i]);
            worst = worst.max(r.abs());
        }
        worst
    }

    /// Writes `q,p` rows with a header.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "q,p")?;
        for (q, p) in self.q_grid.iter().zip(&self.p_values) {
            writeln!(out, "{q:.11e},{p:.11e}")?;
        }
        Ok(())
    }
}

/// Exact Stefan speed together with its κ = ∞ reference.
#[derive(Debug, Clone, Serialize)]
pub struct SpeedResult {
    pub kappa: f64,
    pub c_star: f64,
    pub bracket: (f64, f64),
    /// |p(0; c*) − c*/κ|
    pub residual: f64,
    pub c_rd_reference: f64,
    pub profile: PhaseProfile,
}

struct Trajectory {
    /// Increasing in s = 1 − q.
    s: Vec<f64>,
    p: Vec<f64>,
    touchdown: Option<f64>,
    mu: f64,
    degenerate: bool,
}

impl Trajectory {
    fn p_at_zero(&self) -> Option<f64> {
        match (self.touchdown, self.s.last()) {
            (None, Some(&1.0)) => self.p.last().copied(),
            _ => None,
        }
    }
}

// Dormand–Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

/// One Dormand–Prince step of dp/ds = f(1 − s)/p − c. `None` if a stage left
/// the half-plane p > 0.
fn dopri_step(f: &ReactionTerm, c: f64, s: f64, p: f64, h: f64) -> Option<(f64, f64)> {
    let rhs = |s: f64, p: f64| -> Option<f64> {
        if !(p > 0.0) {
            return None;
        }
        let v = f.eval(1.0 - s) / p - c;
        v.is_finite().then_some(v)
    };
    let k1 = rhs(s, p)?;
    let k2 = rhs(s + C2 * h, p + h * A21 * k1)?;
    let k3 = rhs(s + C3 * h, p + h * (A31 * k1 + A32 * k2))?;
    let k4 = rhs(s + C4 * h, p + h * (A41 * k1 + A42 * k2 + A43 * k3))?;
    let k5 = rhs(s + C5 * h, p + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))?;
    let k6 = rhs(
        s + h,
        p + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
    )?;
    let p_new = p + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    let k7 = rhs(s + h, p_new)?;
    let err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    Some((p_new, err))
}

fn saddle_slope(c: f64, fprime1: f64) -> f64 {
    0.5 * (-c + (c * c - 4.0 * fprime1).sqrt())
}

fn integrate_backward(
    f: &ReactionTerm,
    c: f64,
    opts: &ShootOptions,
    max_step: f64,
) -> Result<Trajectory, ShootError> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(ShootError::InvalidInput(format!(
            "speed c = {c} must be positive"
        )));
    }
    if !(opts.eps > 0.0 && opts.eps <= 1e-3) {
        return Err(ShootError::InvalidInput(format!(
            "eps = {} must lie in (0, 1e-3]",
            opts.eps
        )));
    }
    let fprime1 = f.fprime1_left();
    let (s0, p0, mu, degenerate) = if fprime1 < -1e-12 {
        let mu = saddle_slope(c, fprime1);
        // First step taken analytically along p ≈ μ(1 − q).
        (opts.eps, mu * opts.eps, mu, false)
    } else if fprime1.abs() <= 1e-12 {
        let s0 = opts.eps.max(DEGENERATE_EPS);
        let tail = integrate(|q| f.eval(q), 1.0 - s0, 1.0, 1e-12)?.value;
        if !(tail > 0.0) {
            return Err(ShootError::DegenerateSaddle { fprime1 });
        }
        let p0 = (2.0 * tail).sqrt();
        (s0, p0, p0 / s0, true)
    } else {
        return Err(ShootError::DegenerateSaddle { fprime1 });
    };

    let mut s = s0;
    let mut p = p0;
    let mut traj = Trajectory {
        s: vec![s],
        p: vec![p],
        touchdown: None,
        mu,
        degenerate,
    };
    let mut h = 0.5 * s0;
    while s < 1.0 {
        let remaining = 1.0 - s;
        let h_min = 1e-15 + 1e-13 * s;
        let mut last = false;
        if h >= remaining {
            h = remaining;
            last = true;
        }
        if h > max_step {
            h = max_step;
            last = false;
        }
        let step = dopri_step(f, c, s, p, h).filter(|(p_new, _)| *p_new >= opts.touchdown);
        let Some((p_new, err)) = step else {
            if h <= h_min {
                if p < 1e-6 {
                    traj.touchdown = Some(1.0 - s);
                    return Ok(traj);
                }
                return Err(ShootError::StepUnderflow { q: 1.0 - s, p });
            }
            h *= 0.25;
            continue;
        };
        let scale = opts.atol + opts.rtol * p.abs().max(p_new.abs());
        let err_norm = err.abs() / scale;
        if err_norm <= 1.0 {
            s = if last { 1.0 } else { s + h };
            p = p_new;
            traj.s.push(s);
            traj.p.push(p);
            let grow = if err_norm == 0.0 {
                5.0
            } else {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= grow;
        } else {
            if h <= h_min {
                if p < 1e-6 {
                    traj.touchdown = Some(1.0 - s);
                    return Ok(traj);
                }
                return Err(ShootError::StepUnderflow { q: 1.0 - s, p });
            }
            h *= (0.9 * err_norm.powf(-0.25)).clamp(0.1, 0.9);
        }
    }
    Ok(traj)
}

fn into_profile(traj: Trajectory, c: f64, kappa: f64) -> PhaseProfile {
    let q_grid: Vec<f64> = traj.s.iter().rev().map(|s| 1.0 - s).collect();
    let p_values: Vec<f64> = traj.p.iter().rev().copied().collect();
    PhaseProfile {
        c,
        kappa,
        q_grid,
        p_values,
        mu: traj.mu,
        touchdown: traj.touchdown,
        degenerate_saddle: traj.degenerate,
    }
}

/// Integrates dp/dq = c − f(q)/p backward from the saddle at q = 1 with an
/// adaptive Dormand–Prince 5(4) scheme, stopping at q = 0 or at an interior
/// touchdown p < `opts.touchdown`.
///
/// `kappa_hint` is only recorded in the profile.
pub fn shoot_profile(
    f: &ReactionTerm,
    c: f64,
    kappa_hint: f64,
    opts: &ShootOptions,
) -> Result<PhaseProfile, ShootError> {
    let max_step = 1.0 / opts.n_steps.max(1) as f64;
    let traj = integrate_backward(f, c, opts, max_step)?;
    Ok(into_profile(traj, c, kappa_hint))
}

/// p(0; c) if the backward trajectory reaches q = 0 with p > 0.
fn landing_slope(f: &ReactionTerm, c: f64, opts: &ShootOptions) -> Result<Option<f64>, ShootError> {
    let traj = integrate_backward(f, c, opts, BISECTION_MAX_STEP)?;
    Ok(traj.p_at_zero())
}

/// Speed of the front for the standard problem (κ = ∞): the smallest c whose
/// backward trajectory reaches the origin instead of crossing q = 0 at p > 0.
pub fn standard_speed(f: &ReactionTerm, opts: &ShootOptions) -> Result<f64, ShootError> {
    // Below the floor the trajectory is captured by the slow manifold
    // p ≈ f/c of the origin, where explicit steps shrink like f/c²; only the
    // verdict p(0) ≤ floor matters, so stop there.
    let coarse = ShootOptions {
        touchdown: opts.touchdown.max(P0_FLOOR),
        ..*opts
    };
    let reaches_positive = |c: f64| -> Result<bool, ShootError> {
        Ok(matches!(landing_slope(f, c, &coarse)?, Some(p) if p > P0_FLOOR))
    };

    // Comparison with the linear problem bounds the speed by 2·sup √(f(u)/u).
    let n = 4096;
    let growth = (1..n)
        .map(|i| {
            let u = i as f64 / n as f64;
            f.eval(u) / u
        })
        .fold(f.fprime0().max(0.0), f64::max);
    let mut hi = 2.0 * growth.sqrt() * 1.05 + 1e-6;
    let mut doublings = 0;
    while reaches_positive(hi)? {
        hi *= 2.0;
        doublings += 1;
        if doublings > 40 {
            return Err(ShootError::NoTravelingWave {
                kappa: f64::INFINITY,
                reason: "trajectory keeps reaching q = 0 with p > 0".into(),
            });
        }
    }

    let mut lo = 1e-12;
    if f.fprime0() > 0.0 {
        // Linear spreading speed; the front is pulled unless the trajectory
        // still lands with positive slope there.
        let c_lin = 2.0 * f.fprime0().sqrt();
        if c_lin < hi {
            if !reaches_positive(c_lin)? {
                return Ok(c_lin);
            }
            lo = c_lin;
        }
    }
    if !reaches_positive(lo)? {
        return Err(ShootError::NoTravelingWave {
            kappa: f64::INFINITY,
            reason: format!("already at c = {lo} the trajectory does not reach q = 0 with p > 0"),
        });
    }

    let mut failure: Option<ShootError> = None;
    let bracket = bisect_bracket(
        |c| match reaches_positive(c) {
            Ok(true) => 1.0,
            Ok(false) => -1.0,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-10,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(bracket?.midpoint())
}

/// Stefan front speed for `kappa`, bisecting G(c) = p(0; c) − c/κ
/// (G = −1 on touchdown) on `[tol, c_rd]` to width `tol·min(1, κ)`.
pub fn stefan_speed(f: &ReactionTerm, kappa: f64, tol: f64) -> Result<SpeedResult, ShootError> {
    let opts = ShootOptions::default();
    let c_rd = standard_speed(f, &opts)?;
    stefan_speed_with_reference(f, kappa, tol, c_rd, &opts)
}

/// [`stefan_speed`] with a precomputed κ = ∞ speed, for sweeps over κ.
pub fn stefan_speed_with_reference(
    f: &ReactionTerm,
    kappa: f64,
    tol: f64,
    c_rd: f64,
    opts: &ShootOptions,
) -> Result<SpeedResult, ShootError> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(ShootError::InvalidInput(format!(
            "kappa = {kappa} must be positive and finite"
        )));
    }
    if !(tol >= 1e-10 && tol < c_rd) {
        return Err(ShootError::InvalidInput(format!(
            "tol = {tol} must be at least 1e-10 and below c_rd = {c_rd}"
        )));
    }
    let residual_of = |c: f64| -> Result<f64, ShootError> {
        Ok(match landing_slope(f, c, opts)? {
            Some(p0) => p0 - c / kappa,
            None => -1.0,
        })
    };

    let lo = tol;
    let hi = c_rd;
    let g_lo = residual_of(lo)?;
    let g_hi = residual_of(hi)?;
    if !(g_lo > 0.0) || !(g_hi < 0.0) {
        return Err(ShootError::NoTravelingWave {
            kappa,
            reason: format!("G({lo}) = {g_lo}, G({hi}) = {g_hi}: no sign change"),
        });
    }

    let mut failure: Option<ShootError> = None;
    let bracket = bisect_bracket(
        |c| match residual_of(c) {
            Ok(g) => g,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        tol * kappa.min(1.0),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let bracket = bracket?;

    let mut c_star = bracket.midpoint();
    let mut profile = shoot_profile(f, c_star, kappa, opts)?;
    if profile.p_at_zero().is_none() {
        c_star = bracket.lo;
        profile = shoot_profile(f, c_star, kappa, opts)?;
    }
    let p0 = profile.p_at_zero().ok_or_else(|| ShootError::NoTravelingWave {
        kappa,
        reason: "converged profile does not reach q = 0".into(),
    })?;
    Ok(SpeedResult {
        kappa,
        c_star,
        bracket: (bracket.lo, bracket.hi),
        residual: (p0 - c_star / kappa).abs(),
        c_rd_reference: c_rd,
        profile,
    })
}

/// Reconstructs the maximizing trial function ĝ(q) = exp(−c ∫₀^q ds/p(s))
/// on the profile grid (cumulative trapezoid), with ĥ = (c/p)ĝ and
/// ĝ²/ĥ = ĝ p/c.
pub fn optimal_g(profile: &PhaseProfile) -> Result<TrialFunction, ShootError> {
    if let Some(q) = profile.touchdown {
        return Err(ShootError::Touchdown(q));
    }
    let p0 = profile
        .p_at_zero()
        .ok_or_else(|| ShootError::InvalidInput("profile does not start at q = 0".into()))?;
    if !(p0 > 0.0) {
        return Err(ShootError::ZeroSlopeAtOrigin(p0));
    }
    let c = profile.c;
    let q = &profile.q_grid;
    let p = &profile.p_values;
    let n = q.len();
    let mut g = Vec::with_capacity(n);
    let mut h = Vec::with_capacity(n);
    let mut ratio = Vec::with_capacity(n);
    let mut exponent = 0.0;
    for i in 0..n {
        if i > 0 {
            exponent += 0.5 * (q[i] - q[i - 1]) * (c / p[i - 1] + c / p[i]);
        }
        let gi = (-exponent).exp();
        g.push(gi);
        h.push(c / p[i] * gi);
        ratio.push(gi * p[i] / c);
    }
    Ok(TrialFunction::from_samples(
        "optimal",
        vec![c, profile.kappa],
        q.clone(),
        g,
        h,
        ratio,
    ))
}
