//! End-to-end acceptance checks.
//!
//! Each criterion runs independently, returns a [`CriterionReport`] and
//! counts as passed only if its numerical check holds and it finishes within
//! its runtime budget. All tolerances are fixed constants below.

use std::f64::consts::LN_2;
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::pdesim::{measure_speed, observed_order, simulate, InitialData, Outcome, SimConfig};
use crate::phaseplane::{
    optimal_g, shoot_profile, standard_speed, stefan_speed, stefan_speed_with_reference, ShootOptions,
    DEFAULT_SPEED_TOL,
};
use crate::reactions::{CaseLabel, ReactionTerm};
use crate::special::hyp2f1;
use crate::varbound::{
    bound_value, catalog, fisher_bound_hyper, optimize_bound, sensitivity_kappa, sensitivity_m, zfk_bound,
    TrialFamily,
};

pub const KPP_LIMIT_TOL: f64 = 1e-3;
pub const VANISHING_SPEED_MAX: f64 = 1e-2;
pub const VARIATIONAL_REL_TOL: f64 = 1e-4;
pub const SANDWICH_SLACK: f64 = 1e-6;
pub const HYPER_REL_TOL: f64 = 1e-6;
pub const HYP2F1_TOL: f64 = 1e-12;
pub const SENSITIVITY_M_REL_TOL: f64 = 0.02;
pub const SENSITIVITY_KAPPA_REL_TOL: f64 = 0.01;
pub const PDE_SPEED_REL_TOL: f64 = 0.02;
pub const PDE_MIN_ORDER: f64 = 1.7;
pub const BISTABLE_PROFILE_TOL: f64 = 1e-6;

/// Seed of the random ₂F₁ symmetry tuples.
pub const HYP2F1_SEED: u64 = 20_240_521;
/// Finite-difference steps in κ and m.
pub const FD_STEP_KAPPA: f64 = 1e-3;
pub const FD_STEP_M: f64 = 1e-3;

/// Fisher free-boundary reference run.
pub const PDE_L0: f64 = 20.0;
pub const PDE_T_END: f64 = 150.0;
pub const PDE_WINDOW: f64 = 0.25;
pub const PDE_GRIDS: [usize; 3] = [201, 401, 801];

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_secs: f64,
    pub budget_secs: f64,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<22} {:>7.2}s / {:>4.0}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_secs,
            self.budget_secs,
            self.detail
        )
    }
}

type Check = fn() -> Result<(bool, String), String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget_secs: f64,
    check: Check,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        name: "kpp-limit",
        budget_secs: 1.0,
        check: kpp_limit,
    },
    Criterion {
        id: 2,
        name: "vanishing-limit",
        budget_secs: 1.0,
        check: vanishing_limit,
    },
    Criterion {
        id: 3,
        name: "variational-equality",
        budget_secs: 5.0,
        check: variational_equality,
    },
    Criterion {
        id: 4,
        name: "soundness-sandwich",
        budget_secs: 30.0,
        check: soundness_sandwich,
    },
    Criterion {
        id: 5,
        name: "generalized-zfk",
        budget_secs: 30.0,
        check: generalized_zfk,
    },
    Criterion {
        id: 6,
        name: "hypergeometric-bound",
        budget_secs: 2.0,
        check: hypergeometric_bound,
    },
    Criterion {
        id: 7,
        name: "hyp2f1-kernel",
        budget_secs: 1.0,
        check: hyp2f1_kernel,
    },
    Criterion {
        id: 8,
        name: "kappa-monotonicity",
        budget_secs: 10.0,
        check: kappa_monotonicity,
    },
    Criterion {
        id: 9,
        name: "m-monotonicity",
        budget_secs: 20.0,
        check: m_monotonicity,
    },
    Criterion {
        id: 10,
        name: "feynman-hellmann",
        budget_secs: 5.0,
        check: feynman_hellmann,
    },
    Criterion {
        id: 11,
        name: "pde-ode-consistency",
        budget_secs: 60.0,
        check: pde_ode_consistency,
    },
    Criterion {
        id: 12,
        name: "dichotomy",
        budget_secs: 60.0,
        check: dichotomy,
    },
    Criterion {
        id: 13,
        name: "bistable-exact-profile",
        budget_secs: 1.0,
        check: bistable_profile,
    },
];

/// Identifiers and names of all criteria, in order.
pub fn criteria() -> Vec<(u32, &'static str)> {
    CRITERIA.iter().map(|c| (c.id, c.name)).collect()
}

/// Runs one criterion by number.
pub fn run(id: u32) -> Option<CriterionReport> {
    CRITERIA.iter().find(|c| c.id == id).map(execute)
}

pub fn run_all() -> Vec<CriterionReport> {
    CRITERIA.iter().map(execute).collect()
}

fn execute(c: &Criterion) -> CriterionReport {
    let start = Instant::now();
    let outcome = (c.check)();
    let elapsed = start.elapsed().as_secs_f64();
    let (ok, mut detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_budget = elapsed <= c.budget_secs;
    if !in_budget {
        detail.push_str("; over runtime budget");
    }
    CriterionReport {
        id: c.id,
        name: c.name,
        passed: ok && in_budget,
        detail,
        elapsed_secs: elapsed,
        budget_secs: c.budget_secs,
    }
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Built-in terms exercised by the property criteria.
pub fn reference_reactions() -> Vec<ReactionTerm> {
    vec![
        ReactionTerm::fisher(),
        ReactionTerm::mkpp(2.0).expect("valid"),
        ReactionTerm::combustion(0.3, 1.0).expect("valid"),
        ReactionTerm::bistable_cubic(0.25).expect("valid"),
    ]
}

fn monostable_or_combustion() -> Vec<ReactionTerm> {
    reference_reactions()
        .into_iter()
        .filter(|f| matches!(f.case_label(), CaseLabel::A | CaseLabel::C | CaseLabel::D))
        .collect()
}

fn label(f: &ReactionTerm) -> String {
    if f.params().is_empty() {
        f.name().to_string()
    } else {
        let p: Vec<String> = f.params().iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", f.name(), p.join(","))
    }
}

fn kpp_limit() -> Result<(bool, String), String> {
    let r = stefan_speed(&ReactionTerm::fisher(), 1e6, DEFAULT_SPEED_TOL).map_err(err)?;
    let ok = (r.c_star - 2.0).abs() <= KPP_LIMIT_TOL;
    Ok((
        ok,
        format!("c(kappa=1e6) = {:.7}, target 2 +- {KPP_LIMIT_TOL:e}", r.c_star),
    ))
}

fn vanishing_limit() -> Result<(bool, String), String> {
    let r = stefan_speed(&ReactionTerm::fisher(), 1e-4, DEFAULT_SPEED_TOL).map_err(err)?;
    Ok((
        r.c_star <= VANISHING_SPEED_MAX,
        format!("c(kappa=1e-4) = {:.4e} <= {VANISHING_SPEED_MAX:e}", r.c_star),
    ))
}

fn variational_equality() -> Result<(bool, String), String> {
    let mut worst = 0.0_f64;
    for f in [
        ReactionTerm::fisher(),
        ReactionTerm::combustion(0.3, 1.0).map_err(err)?,
    ] {
        for kappa in [0.5, 1.0, 5.0] {
            let s = stefan_speed(&f, kappa, DEFAULT_SPEED_TOL).map_err(err)?;
            let g = optimal_g(&s.profile).map_err(err)?;
            let b = bound_value(&f, kappa, &g).map_err(err)?;
            worst = worst.max(rel(b.c_squared(), s.c_star * s.c_star));
        }
    }
    Ok((
        worst <= VARIATIONAL_REL_TOL,
        format!("max relative |J(g_hat) - c*^2| / c*^2 = {worst:.3e} <= {VARIATIONAL_REL_TOL:e}"),
    ))
}

fn soundness_sandwich() -> Result<(bool, String), String> {
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_case = String::new();
    let mut checked = 0;
    for f in monostable_or_combustion() {
        let c_rd = standard_speed(&f, &ShootOptions::default()).map_err(err)?;
        for kappa in [0.1, 1.0, 10.0] {
            let c = stefan_speed_with_reference(&f, kappa, DEFAULT_SPEED_TOL, c_rd, &ShootOptions::default())
                .map_err(err)?
                .c_star;
            let mut bounds: Vec<(String, f64)> = Vec::new();
            for g in catalog(kappa) {
                let b = bound_value(&f, kappa, &g).map_err(|e| format!("{} / {}: {e}", label(&f), g.id()))?;
                bounds.push((b.trial_id, b.c_lower));
            }
            for family in [
                TrialFamily::Linear,
                TrialFamily::Exponential,
                TrialFamily::PowerPair,
            ] {
                let b = optimize_bound(&f, kappa, family, None).map_err(err)?;
                bounds.push((b.trial_id, b.c_lower));
            }
            for (id, lower) in bounds {
                checked += 1;
                if lower - c > worst_gap {
                    worst_gap = lower - c;
                    worst_case = format!("{} kappa={kappa} {id}", label(&f));
                }
            }
        }
    }
    Ok((
        worst_gap <= SANDWICH_SLACK,
        format!("{checked} bounds; max(c_lower - c*) = {worst_gap:.3e} at {worst_case}"),
    ))
}

fn generalized_zfk() -> Result<(bool, String), String> {
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_case = String::new();
    for f in monostable_or_combustion() {
        let c_rd = standard_speed(&f, &ShootOptions::default()).map_err(err)?;
        for kappa in [0.1, 1.0, 10.0] {
            let c = stefan_speed_with_reference(&f, kappa, DEFAULT_SPEED_TOL, c_rd, &ShootOptions::default())
                .map_err(err)?
                .c_star;
            let z = zfk_bound(&f, kappa).map_err(err)?;
            if z.c_lower - c > worst_gap {
                worst_gap = z.c_lower - c;
                worst_case = format!("{} kappa={kappa}", label(&f));
            }
        }
    }
    Ok((
        worst_gap <= 0.0,
        format!("max(c_zfk_kappa - c*) = {worst_gap:.3e} at {worst_case}"),
    ))
}

fn hypergeometric_bound() -> Result<(bool, String), String> {
    let mut worst = 0.0_f64;
    for kappa in [0.25, 1.0, 4.0, 20.0] {
        let r = fisher_bound_hyper(kappa).map_err(err)?;
        worst = worst.max(r.diagnostics["relative_discrepancy"]);
    }
    Ok((
        worst <= HYPER_REL_TOL,
        format!("closed form vs quadrature: max relative discrepancy {worst:.3e} <= {HYPER_REL_TOL:e}"),
    ))
}

fn hyp2f1_kernel() -> Result<(bool, String), String> {
    let ln2 = hyp2f1(1.0, 1.0, 2.0, -1.0).map_err(err)?;
    let ln2_err = (ln2 - LN_2).abs();
    let mut zero_ok = true;
    let mut rng = ChaCha8Rng::seed_from_u64(HYP2F1_SEED);
    let mut worst_sym = 0.0_f64;
    for _ in 0..100 {
        let a = rng.gen_range(-2.0..3.0);
        let b = rng.gen_range(-2.0..3.0);
        let c = rng.gen_range(0.5..5.0);
        let z = rng.gen_range(-3.0..0.8);
        zero_ok &= hyp2f1(a, b, c, 0.0).map_err(err)? == 1.0;
        let ab = hyp2f1(a, b, c, z).map_err(err)?;
        let ba = hyp2f1(b, a, c, z).map_err(err)?;
        worst_sym = worst_sym.max((ab - ba).abs() / ab.abs().max(1.0));
    }
    let ok = ln2_err <= HYP2F1_TOL && zero_ok && worst_sym <= HYP2F1_TOL;
    Ok((
        ok,
        format!("|2F1(1,1;2;-1) - ln2| = {ln2_err:.1e}; F(z=0)=1 exact: {zero_ok}; max symmetry gap {worst_sym:.1e}"),
    ))
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0])
}

fn kappa_monotonicity() -> Result<(bool, String), String> {
    let kappas = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0];
    let mut failures = Vec::new();
    for f in reference_reactions() {
        let c_rd = standard_speed(&f, &ShootOptions::default()).map_err(err)?;
        let mut speeds = Vec::new();
        for &k in &kappas {
            let s = stefan_speed_with_reference(&f, k, DEFAULT_SPEED_TOL, c_rd, &ShootOptions::default())
                .map_err(|e| format!("{} kappa={k}: {e}", label(&f)))?;
            speeds.push(s.c_star);
        }
        if !strictly_increasing(&speeds) {
            failures.push(label(&f));
        }
    }
    let n = reference_reactions().len();
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            format!("{n} reactions x {} kappas strictly increasing", kappas.len())
        } else {
            format!("not increasing for {}", failures.join(", "))
        },
    ))
}

fn mkpp_speed_squared(kappa: f64, m: f64) -> Result<f64, String> {
    let f = ReactionTerm::mkpp(m).map_err(err)?;
    let c = stefan_speed(&f, kappa, DEFAULT_SPEED_TOL).map_err(err)?.c_star;
    Ok(c * c)
}

fn m_monotonicity() -> Result<(bool, String), String> {
    let ms = [1.0, 1.5, 2.0, 3.0];
    let h = FD_STEP_M;
    let mut monotone = true;
    let mut worst = 0.0_f64;
    let mut signs_ok = true;
    for kappa in [0.5, 2.0] {
        let speeds: Vec<f64> = ms
            .iter()
            .map(|&m| mkpp_speed_squared(kappa, m))
            .collect::<Result<_, _>>()?;
        monotone &= speeds.windows(2).all(|w| w[1] < w[0]);
        for (&m, &c2) in ms.iter().zip(&speeds) {
            let s = sensitivity_m(kappa, m).map_err(err)?;
            signs_ok &= s <= 0.0;
            // m < 1 is outside the family, so m = 1 uses a one-sided stencil.
            let fd = if m - h < 1.0 {
                (-3.0 * c2 + 4.0 * mkpp_speed_squared(kappa, m + h)?
                    - mkpp_speed_squared(kappa, m + 2.0 * h)?)
                    / (2.0 * h)
            } else {
                (mkpp_speed_squared(kappa, m + h)? - mkpp_speed_squared(kappa, m - h)?) / (2.0 * h)
            };
            worst = worst.max(rel(s, fd));
        }
    }
    let ok = monotone && signs_ok && worst <= SENSITIVITY_M_REL_TOL;
    Ok((
        ok,
        format!(
            "decreasing in m: {monotone}; dc2/dm <= 0: {signs_ok}; max relative gap to differences {worst:.3e} <= {SENSITIVITY_M_REL_TOL}"
        ),
    ))
}

fn feynman_hellmann() -> Result<(bool, String), String> {
    let f = ReactionTerm::fisher();
    let c2 = |k: f64| -> Result<f64, String> {
        let c = stefan_speed(&f, k, DEFAULT_SPEED_TOL).map_err(err)?.c_star;
        Ok(c * c)
    };
    let h = FD_STEP_KAPPA;
    let fd = (c2(1.0 + h)? - c2(1.0 - h)?) / (2.0 * h);
    let s = sensitivity_kappa(&f, 1.0).map_err(err)?;
    let gap = rel(s, fd);
    Ok((
        gap <= SENSITIVITY_KAPPA_REL_TOL,
        format!("dc2/dkappa = {s:.6}, centered difference {fd:.6}, relative gap {gap:.2e}"),
    ))
}

fn pde_ode_consistency() -> Result<(bool, String), String> {
    let f = ReactionTerm::fisher();
    let exact = stefan_speed(&f, 1.0, DEFAULT_SPEED_TOL).map_err(err)?.c_star;
    let mut speeds = Vec::new();
    for n in PDE_GRIDS {
        let cfg = SimConfig::new(
            f.clone(),
            1.0,
            PDE_L0,
            InitialData::Cosine { amplitude: 1.0 },
            PDE_T_END,
        )
        .with_nodes(n);
        let traj = simulate(&cfg).map_err(err)?;
        speeds.push(measure_speed(&traj, PDE_WINDOW).map_err(err)?.speed);
    }
    let gap = rel(speeds[2], exact);
    let order = observed_order(speeds[0], speeds[1], speeds[2]);
    Ok((
        gap <= PDE_SPEED_REL_TOL && order >= PDE_MIN_ORDER,
        format!(
            "speeds {:.6}/{:.6}/{:.6} vs c* = {exact:.6}; fine-grid gap {gap:.2e}; observed order {order:.2}",
            speeds[0], speeds[1], speeds[2]
        ),
    ))
}

/// The spreading reference run of the dichotomy criterion.
pub fn spreading_reference() -> SimConfig {
    SimConfig::new(
        ReactionTerm::fisher(),
        1.0,
        PDE_L0,
        InitialData::Cosine { amplitude: 1.0 },
        PDE_T_END,
    )
    .with_nodes(201)
}

/// The vanishing reference run: small domain, small data, slow boundary.
pub fn vanishing_reference() -> SimConfig {
    SimConfig::new(
        ReactionTerm::fisher(),
        0.02,
        0.1,
        InitialData::Cosine { amplitude: 0.01 },
        0.05,
    )
    .with_nodes(201)
    .with_record_interval(0.005)
}

fn dichotomy() -> Result<(bool, String), String> {
    let s = simulate(&spreading_reference()).map_err(err)?;
    let v = simulate(&vanishing_reference()).map_err(err)?;
    let ok = s.outcome == Outcome::Spreading && v.outcome == Outcome::Vanishing;
    Ok((
        ok,
        format!(
            "spreading run: {} (L = {:.2}); vanishing run: {} (max u = {:.2e}, L = {:.5})",
            s.outcome,
            s.final_length(),
            v.outcome,
            v.max_u_series.last().unwrap(),
            v.final_length()
        ),
    ))
}

fn bistable_profile() -> Result<(bool, String), String> {
    let f = ReactionTerm::bistable_cubic(0.25).map_err(err)?;
    let c = 2.0_f64.sqrt() / 4.0;
    let p = shoot_profile(&f, c, f64::INFINITY, &ShootOptions::default()).map_err(err)?;
    let sup = p
        .q_grid
        .iter()
        .zip(&p.p_values)
        .map(|(&q, &v)| (v - q * (1.0 - q) / 2.0_f64.sqrt()).abs())
        .fold(0.0, f64::max);
    Ok((
        sup <= BISTABLE_PROFILE_TOL,
        format!("sup |p - q(1-q)/sqrt2| = {sup:.2e} <= {BISTABLE_PROFILE_TOL:e}"),
    ))
}
