//! Free-boundary simulation of
//!
//! ```text
//! u_t = u_xx + f(u),   0 < x < L(t),
//! u_x(0, t) = 0,  u(L(t), t) = 0,  L'(t) = −κ u_x(L(t), t),
//! ```
//!
//! by front fixing: with ξ = x/L the domain is the unit interval and
//!
//! ```text
//! u_t = u_ξξ/L² + ξ (L'/L) u_ξ + f(u).
//! ```
//!
//! Central differences in ξ, a ghost node at ξ = 0, a one-sided three-point
//! stencil for u_ξ(1) and Heun (explicit RK2) in time, with L' re-evaluated
//! at both stages.

use std::fmt;
use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::reactions::ReactionTerm;

/// Smallest admissible number of ξ nodes.
pub const MIN_NODES: usize = 201;
/// Explicit stability factor: dt ≤ STABILITY_FACTOR·(Δξ·L_min)².
pub const STABILITY_FACTOR: f64 = 0.4;
/// Upper tolerance on the initial profile.
pub const INITIAL_MAX: f64 = 1.0 + 1e-9;
/// Relative agreement required between the windowed mean of L' and the
/// least-squares slope of L(t).
pub const SPEED_CONSISTENCY: f64 = 0.01;

pub const SPREADING_LENGTH_FACTOR: f64 = 3.0;
pub const SPREADING_MIN_MAX_U: f64 = 0.5;
pub const VANISHING_MAX_U: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("time step {dt:e} exceeds the stability bound {bound:e}")]
    StepTooLarge { dt: f64, bound: f64 },
    #[error("numerical instability: non-finite state at t = {t}")]
    Unstable { t: f64 },
    #[error("domain length {l} fell below the floor {l_min} at t = {t}")]
    BelowFloor { t: f64, l: f64, l_min: f64 },
    #[error("speed is only defined for spreading runs, outcome was {0}")]
    NotSpreading(Outcome),
    #[error("window fraction {0} must lie in (0, 0.5]")]
    InvalidWindow(f64),
    #[error("mean L' = {mean} and fitted slope = {slope} disagree by more than 1%")]
    Inconsistent { mean: f64, slope: f64 },
}

/// Initial profile as a function of ξ = x/L0.
#[derive(Debug, Clone)]
pub enum InitialData {
    /// amplitude·cos(πξ/2)
    Cosine { amplitude: f64 },
    /// Values on the uniform ξ-grid, one per node.
    Samples(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub reaction: ReactionTerm,
    pub kappa: f64,
    pub l0: f64,
    pub initial: InitialData,
    pub n_xi: usize,
    /// Explicit step; `None` picks the largest stable step that divides
    /// `record_interval`.
    pub dt: Option<f64>,
    pub t_end: f64,
    /// Floor on L used by the stability bound; defaults to `l0`.
    pub l_min: Option<f64>,
    pub record_interval: f64,
}

impl SimConfig {
    pub fn new(reaction: ReactionTerm, kappa: f64, l0: f64, initial: InitialData, t_end: f64) -> Self {
        Self {
            reaction,
            kappa,
            l0,
            initial,
            n_xi: 401,
            dt: None,
            t_end,
            l_min: None,
            record_interval: 0.5,
        }
    }

    pub fn with_nodes(mut self, n_xi: usize) -> Self {
        self.n_xi = n_xi;
        self
    }

    pub fn with_record_interval(mut self, interval: f64) -> Self {
        self.record_interval = interval;
        self
    }

    pub fn floor(&self) -> f64 {
        self.l_min.unwrap_or(self.l0)
    }

    pub fn stability_bound(&self) -> f64 {
        let dxi = 1.0 / (self.n_xi.max(2) - 1) as f64;
        STABILITY_FACTOR * (dxi * self.floor()).powi(2)
    }

    /// Step size and steps per record.
    fn schedule(&self) -> Result<(f64, usize), SimError> {
        let bound = self.stability_bound();
        match self.dt {
            Some(dt) => {
                if !(dt > 0.0) {
                    return Err(SimError::InvalidConfig(format!("dt = {dt} must be positive")));
                }
                if dt > bound {
                    return Err(SimError::StepTooLarge { dt, bound });
                }
                let per = (self.record_interval / dt).round().max(1.0) as usize;
                Ok((dt, per))
            }
            None => {
                let per = (self.record_interval / bound).ceil().max(1.0) as usize;
                Ok((self.record_interval / per as f64, per))
            }
        }
    }

    fn initial_profile(&self) -> Result<Vec<f64>, SimError> {
        let n = self.n_xi;
        let u = match &self.initial {
            InitialData::Cosine { amplitude } => {
                if !(*amplitude >= 0.0 && *amplitude <= INITIAL_MAX) {
                    return Err(SimError::InvalidConfig(format!(
                        "cosine amplitude {amplitude} outside [0, 1]"
                    )));
                }
                let mut u: Vec<f64> = (0..n)
                    .map(|i| amplitude * (std::f64::consts::FRAC_PI_2 * i as f64 / (n - 1) as f64).cos())
                    .collect();
                u[n - 1] = 0.0;
                u
            }
            InitialData::Samples(s) => {
                if s.len() != n {
                    return Err(SimError::InvalidConfig(format!(
                        "{} initial samples for {n} nodes",
                        s.len()
                    )));
                }
                if s[n - 1].abs() > 1e-12 {
                    return Err(SimError::InvalidConfig(format!(
                        "u0(L0) = {} must vanish",
                        s[n - 1]
                    )));
                }
                let mut u = s.clone();
                u[n - 1] = 0.0;
                u
            }
        };
        if let Some(v) = u.iter().find(|v| !(**v >= 0.0 && **v <= INITIAL_MAX)) {
            return Err(SimError::InvalidConfig(format!("u0 value {v} outside [0, 1]")));
        }
        Ok(u)
    }

    fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::InvalidConfig(m));
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return bad(format!("kappa = {} must be finite and positive", self.kappa));
        }
        if !(self.l0 > 0.0 && self.l0.is_finite()) {
            return bad(format!("L0 = {} must be positive", self.l0));
        }
        if !(self.floor() > 0.0 && self.floor() <= self.l0) {
            return bad(format!("L_min = {} must lie in (0, L0]", self.floor()));
        }
        if self.n_xi < MIN_NODES {
            return bad(format!("n_xi = {} is below {MIN_NODES}", self.n_xi));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end = {} must be positive", self.t_end));
        }
        if !(self.record_interval > 0.0 && self.record_interval <= self.t_end) {
            return bad(format!(
                "record interval {} must lie in (0, t_end]",
                self.record_interval
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Spreading,
    Vanishing,
    Undecided,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Spreading => "spreading",
            Outcome::Vanishing => "vanishing",
            Outcome::Undecided => "undecided",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SimTrajectory {
    pub l0: f64,
    pub kappa: f64,
    pub dt: f64,
    pub steps: usize,
    pub times: Vec<f64>,
    pub l_series: Vec<f64>,
    pub ldot_series: Vec<f64>,
    pub max_u_series: Vec<f64>,
    pub xi: Vec<f64>,
    pub final_u: Vec<f64>,
    /// Extremes of u and L' over every step, not only recorded ones.
    pub u_min: f64,
    pub u_max: f64,
    pub ldot_min: f64,
    pub outcome: Outcome,
}

impl SimTrajectory {
    pub fn final_length(&self) -> f64 {
        *self.l_series.last().unwrap()
    }

    /// CSV with columns `t,L,Ldot`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,L,Ldot")?;
        for i in 0..self.times.len() {
            writeln!(
                out,
                "{:.11e},{:.11e},{:.11e}",
                self.times[i], self.l_series[i], self.ldot_series[i]
            )?;
        }
        Ok(())
    }

    /// CSV with columns `xi,u` for the final profile.
    pub fn write_profile_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "xi,u")?;
        for (x, u) in self.xi.iter().zip(&self.final_u) {
            writeln!(out, "{x:.11e},{u:.11e}")?;
        }
        Ok(())
    }
}

struct Stepper<'a> {
    f: &'a ReactionTerm,
    kappa: f64,
    dxi: f64,
}

impl Stepper<'_> {
    /// L' from the one-sided stencil (u = 0 at the last node).
    fn ldot(&self, u: &[f64], l: f64) -> f64 {
        let n = u.len() - 1;
        let u_xi = (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * self.dxi);
        -self.kappa * u_xi / l
    }

    fn rhs(&self, u: &[f64], l: f64, ldot: f64, du: &mut [f64]) {
        let n = u.len() - 1;
        let diff = 1.0 / (l * l * self.dxi * self.dxi);
        let adv = ldot / (l * 2.0 * self.dxi);
        du[0] = 2.0 * (u[1] - u[0]) * diff + self.f.eval(u[0]);
        for i in 1..n {
            let xi = i as f64 * self.dxi;
            du[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * diff
                + xi * adv * (u[i + 1] - u[i - 1])
                + self.f.eval(u[i]);
        }
        du[n] = 0.0;
    }
}

fn classify(l0: f64, l_end: f64, max_u: f64) -> Outcome {
    if l_end > SPREADING_LENGTH_FACTOR * l0 && max_u > SPREADING_MIN_MAX_U {
        Outcome::Spreading
    } else if max_u < VANISHING_MAX_U {
        Outcome::Vanishing
    } else {
        Outcome::Undecided
    }
}

fn max_of(u: &[f64]) -> f64 {
    u.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Runs the free-boundary problem to `t_end` (rounded up to a whole number
/// of record intervals).
pub fn simulate(cfg: &SimConfig) -> Result<SimTrajectory, SimError> {
    cfg.validate()?;
    let (dt, per_record) = cfg.schedule()?;
    let mut u = cfg.initial_profile()?;
    let n = cfg.n_xi;
    let dxi = 1.0 / (n - 1) as f64;
    let stepper = Stepper {
        f: &cfg.reaction,
        kappa: cfg.kappa,
        dxi,
    };
    let records = (cfg.t_end / (dt * per_record as f64) - 1e-9).ceil().max(1.0) as usize;
    let floor = cfg.floor();

    let mut l = cfg.l0;
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut stage = vec![0.0; n];

    let first_ldot = stepper.ldot(&u, l);
    let mut times = vec![0.0];
    let mut l_series = vec![l];
    let mut ldot_series = vec![first_ldot];
    let mut max_u_series = vec![max_of(&u)];
    let mut u_min = u.iter().copied().fold(f64::INFINITY, f64::min);
    let mut u_max = max_u_series[0];
    let mut ldot_min = first_ldot;

    let mut step = 0usize;
    for _ in 0..records {
        for _ in 0..per_record {
            let ld1 = stepper.ldot(&u, l);
            stepper.rhs(&u, l, ld1, &mut k1);
            for i in 0..n {
                stage[i] = u[i] + dt * k1[i];
            }
            let l_stage = l + dt * ld1;
            let ld2 = stepper.ldot(&stage, l_stage);
            stepper.rhs(&stage, l_stage, ld2, &mut k2);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for i in 0..n {
                u[i] += 0.5 * dt * (k1[i] + k2[i]);
                lo = lo.min(u[i]);
                hi = hi.max(u[i]);
            }
            l += 0.5 * dt * (ld1 + ld2);
            step += 1;
            let t = step as f64 * dt;
            if !(lo.is_finite() && hi.is_finite() && l.is_finite()) {
                return Err(SimError::Unstable { t });
            }
            if l < floor * (1.0 - 1e-12) {
                return Err(SimError::BelowFloor { t, l, l_min: floor });
            }
            u_min = u_min.min(lo);
            u_max = u_max.max(hi);
            ldot_min = ldot_min.min(0.5 * (ld1 + ld2));
        }
        let ld = stepper.ldot(&u, l);
        ldot_min = ldot_min.min(ld);
        times.push(step as f64 * dt);
        l_series.push(l);
        ldot_series.push(ld);
        max_u_series.push(max_of(&u));
    }

    let outcome = classify(cfg.l0, l, *max_u_series.last().unwrap());
    Ok(SimTrajectory {
        l0: cfg.l0,
        kappa: cfg.kappa,
        dt,
        steps: step,
        times,
        l_series,
        ldot_series,
        max_u_series,
        xi: (0..n).map(|i| i as f64 * dxi).collect(),
        final_u: u,
        u_min,
        u_max,
        ldot_min,
        outcome,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpeedEstimate {
    /// Mean of L' over the final window.
    pub speed: f64,
    /// Least-squares slope of L(t) over the same window.
    pub fit_slope: f64,
    pub samples: usize,
}

/// Late-time spreading speed from the last `window_fraction` of the run.
pub fn measure_speed(traj: &SimTrajectory, window_fraction: f64) -> Result<SpeedEstimate, SimError> {
    if traj.outcome != Outcome::Spreading {
        return Err(SimError::NotSpreading(traj.outcome));
    }
    if !(window_fraction > 0.0 && window_fraction <= 0.5) {
        return Err(SimError::InvalidWindow(window_fraction));
    }
    let t_end = *traj.times.last().unwrap();
    let t_start = t_end * (1.0 - window_fraction);
    let idx: Vec<usize> = (0..traj.times.len())
        .filter(|&i| traj.times[i] >= t_start)
        .collect();
    if idx.len() < 2 {
        return Err(SimError::InvalidWindow(window_fraction));
    }
    let m = idx.len() as f64;
    let speed = idx.iter().map(|&i| traj.ldot_series[i]).sum::<f64>() / m;
    let tm = idx.iter().map(|&i| traj.times[i]).sum::<f64>() / m;
    let lm = idx.iter().map(|&i| traj.l_series[i]).sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &i in &idx {
        let dt = traj.times[i] - tm;
        sxy += dt * (traj.l_series[i] - lm);
        sxx += dt * dt;
    }
    let fit_slope = sxy / sxx;
    if (speed - fit_slope).abs() > SPEED_CONSISTENCY * fit_slope.abs() {
        return Err(SimError::Inconsistent {
            mean: speed,
            slope: fit_slope,
        });
    }
    Ok(SpeedEstimate {
        speed,
        fit_slope,
        samples: idx.len(),
    })
}

/// Observed convergence order from estimates on grids refined by factors
/// of two: log₂(|c₁ − c₂| / |c₂ − c₃|).
pub fn observed_order(coarse: f64, medium: f64, fine: f64) -> f64 {
    ((coarse - medium).abs() / (medium - fine).abs()).log2()
}
