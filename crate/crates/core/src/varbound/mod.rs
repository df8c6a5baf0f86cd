//! Lower bounds on the Stefan front speed from the integral variational
//! functional
//!
//! ```text
//! c² ≥ 2∫₀¹ f g dq / ( g(0)/κ² + ∫₀¹ g²/h dq ),   h = −g′ > 0,
//! ```
//!
//! with equality for ĝ(q) = exp(−c∫₀^q ds/p(s)), p the phase-plane
//! solution. Every closed-form bound in this module is cross-checked against
//! direct quadrature of the functional.

mod trial;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::phaseplane::{optimal_g, stefan_speed, ShootError, DEFAULT_SPEED_TOL};
use crate::reactions::{CaseLabel, ReactionError, ReactionTerm};
use crate::special::{
    hyp2f1, integrate_with_breakpoints, maximize_scalar, nelder_mead, NelderMeadOptions, SpecialError,
};

pub use trial::{catalog, SampledTrial, TrialFamily, TrialFunction};

/// Relative tolerance of the functional's integrals.
pub const BOUND_QUAD_TOL: f64 = 1e-12;

/// Printed constants of the simple Fisher bound c₁ = Aκ/(1 + Bκ²).
pub const FISHER_SIMPLE_A: f64 = 0.23141;
pub const FISHER_SIMPLE_B: f64 = 0.0556737;

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("invalid trial function: {0}")]
    InvalidTrial(String),
    #[error("unknown trial family `{0}`")]
    UnknownFamily(String),
    #[error("kappa = {0} must be positive")]
    InvalidKappa(f64),
    #[error("{0}")]
    Unsupported(String),
    #[error("non-finite {what} integral: {value}")]
    NonFinite { what: &'static str, value: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(#[from] SpecialError),
    #[error(transparent)]
    Reaction(#[from] ReactionError),
    #[error("speed oracle failed: {0}")]
    Oracle(#[from] ShootError),
}

/// One evaluation of the functional.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub kappa: f64,
    pub trial_id: String,
    pub theta: Vec<f64>,
    /// 2∫ f g
    pub numerator: f64,
    /// ∫ g²/h + 1/κ²
    pub denominator: f64,
    pub c_lower: f64,
    pub diagnostics: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl BoundResult {
    fn new(kappa: f64, trial_id: &str, theta: Vec<f64>, numerator: f64, denominator: f64) -> Self {
        let c_lower = if numerator >= 0.0 {
            (numerator / denominator).sqrt()
        } else {
            0.0
        };
        Self {
            kappa,
            trial_id: trial_id.to_string(),
            theta,
            numerator,
            denominator,
            c_lower,
            diagnostics: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    /// Lower bound on c², i.e. numerator/denominator clipped at 0.
    pub fn c_squared(&self) -> f64 {
        self.c_lower * self.c_lower
    }
}

fn check_kappa(kappa: f64) -> Result<(), BoundError> {
    if kappa > 0.0 {
        Ok(())
    } else {
        Err(BoundError::InvalidKappa(kappa))
    }
}

fn finite(what: &'static str, value: f64) -> Result<f64, BoundError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(BoundError::NonFinite { what, value })
    }
}

/// Trapezoidal sum of `values` over the (non-uniform) grid `q`.
pub(crate) fn trapezoid(q: &[f64], values: impl Fn(usize) -> f64) -> f64 {
    (1..q.len())
        .map(|i| 0.5 * (q[i] - q[i - 1]) * (values(i - 1) + values(i)))
        .sum()
}

/// Evaluates the functional for trial `g` at Stefan constant `kappa`
/// (`f64::INFINITY` drops the 1/κ² term, giving the standard-problem bound).
///
/// Closed-form trials use adaptive quadrature split at the breakpoints of
/// both f and g. Tabulated trials use trapezoidal sums on their own grid,
/// with ∫g²/h taken from the stored ratio samples.
pub fn bound_value(f: &ReactionTerm, kappa: f64, g: &TrialFunction) -> Result<BoundResult, BoundError> {
    check_kappa(kappa)?;
    let inv_k2 = 1.0 / (kappa * kappa);
    let (fg, ratio) = match g.sampled() {
        Some(s) => {
            let fg = trapezoid(&s.q, |i| f.eval(s.q[i]) * s.g[i]);
            let ratio = trapezoid(&s.q, |i| s.ratio[i]);
            (fg, ratio)
        }
        None => {
            let mut breaks: Vec<f64> = f.breakpoints().to_vec();
            breaks.extend_from_slice(g.breakpoints());
            let fg =
                integrate_with_breakpoints(|q| f.eval(q) * g.g(q), 0.0, 1.0, &breaks, BOUND_QUAD_TOL)?.value;
            let ratio =
                integrate_with_breakpoints(|q| g.g2_over_h(q), 0.0, 1.0, g.breakpoints(), BOUND_QUAD_TOL)?
                    .value;
            (fg, ratio)
        }
    };
    let numerator = finite("numerator", 2.0 * fg)?;
    let denominator = finite("denominator", ratio + inv_k2)?;
    if !(denominator > 0.0) {
        return Err(BoundError::NonFinite {
            what: "denominator",
            value: denominator,
        });
    }
    Ok(BoundResult::new(
        kappa,
        g.id(),
        g.theta().to_vec(),
        numerator,
        denominator,
    ))
}

/// c ≥ κ/(1+κ)·√(2∫₀¹f), valid for f ≥ 0 on (0, 1).
pub fn zfk_bound(f: &ReactionTerm, kappa: f64) -> Result<BoundResult, BoundError> {
    check_kappa(kappa)?;
    if f.case_label() == CaseLabel::B {
        return Err(BoundError::Unsupported(format!(
            "the ZFK bound needs f >= 0 on (0,1); `{}` is bistable",
            f.name()
        )));
    }
    let n = 1024;
    if let Some(u) = (1..n).map(|i| i as f64 / n as f64).find(|&u| f.eval(u) < -1e-12) {
        return Err(BoundError::Unsupported(format!(
            "the ZFK bound needs f >= 0 on (0,1); f({u}) < 0"
        )));
    }
    let numerator = 2.0 * f.integral01();
    let denominator = (1.0 + 1.0 / kappa).powi(2);
    let mut r = BoundResult::new(kappa, "zfk_closed", vec![], numerator, denominator);
    r.diagnostics.insert("c_zfk".into(), numerator.sqrt());
    Ok(r)
}

/// Fisher bound with g₁ = 1 − λq, from the exact polynomial integrals
/// 2∫u(1−u)(1−λu) = 1/3 − λ/6 and ∫(1−λq)²/λ = (1 − (1−λ)³)/(3λ²).
///
/// Diagnostics: `paper_literal_c1` (the printed Aκ/(1+Bκ²) form) and
/// `quadrature_c_lower` (the same functional by adaptive quadrature).
pub fn fisher_bound_simple(kappa: f64, lambda: f64) -> Result<BoundResult, BoundError> {
    check_kappa(kappa)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(BoundError::InvalidTrial(format!(
            "lambda = {lambda} must lie in (0, 1)"
        )));
    }
    let numerator = 1.0 / 3.0 - lambda / 6.0;
    let denominator = (1.0 - (1.0 - lambda).powi(3)) / (3.0 * lambda * lambda) + 1.0 / (kappa * kappa);
    let mut r = BoundResult::new(kappa, "fisher_simple", vec![lambda], numerator, denominator);
    let quad = bound_value(&ReactionTerm::fisher(), kappa, &TrialFunction::linear(lambda)?)?;
    r.diagnostics.insert("quadrature_c_lower".into(), quad.c_lower);
    r.diagnostics
        .insert("paper_literal_c1".into(), fisher_simple_literal(kappa));
    Ok(r)
}

/// The printed closed form 0.23141κ/(1 + 0.0556737κ²).
pub fn fisher_simple_literal(kappa: f64) -> f64 {
    if kappa.is_infinite() {
        return 0.0;
    }
    FISHER_SIMPLE_A * kappa / (1.0 + FISHER_SIMPLE_B * kappa * kappa)
}

/// Closed form of the g₂ functional for Fisher in terms of ₂F₁, returning
/// the bound on c²:
///
/// ```text
/// 2κ²(1+κ)[(3+4κ)(2 − F(1,κ₁;3+κ₁;−κ)) − (2+κ)F(1,κ₁;4+κ₁;−κ)]
/// ─────────────────────────────────────────────────────────────────
///     (1+2κ)(3+4κ)(2 + 3κ + κ(1+κ)F(1,κ₂;3+κ₁;−κ))
/// ```
///
/// with κ₁ = κ/(κ+1), κ₂ = −1/(κ+1).
pub fn fisher_hyper_closed_form(kappa: f64) -> Result<f64, BoundError> {
    check_kappa(kappa)?;
    let k = kappa;
    let k1 = k / (k + 1.0);
    let k2 = -1.0 / (k + 1.0);
    let f_a = hyp2f1(1.0, k1, 3.0 + k1, -k)?;
    let f_b = hyp2f1(1.0, k1, 4.0 + k1, -k)?;
    let f_c = hyp2f1(1.0, k2, 3.0 + k1, -k)?;
    let num = 2.0 * k * k * (1.0 + k) * ((3.0 + 4.0 * k) * (2.0 - f_a) - (2.0 + k) * f_b);
    let den = (1.0 + 2.0 * k) * (3.0 + 4.0 * k) * (2.0 + 3.0 * k + k * (1.0 + k) * f_c);
    finite("hypergeometric closed form", num / den)
}

/// Fisher bound with g₂ = ((1−q)/(1+κq))^(κ/(1+κ)).
///
/// `c_lower` comes from direct quadrature of the functional. The ₂F₁ closed
/// form is attached as `closed_form_c_squared`, `closed_form_c_lower` and
/// `relative_discrepancy` (of c²).
pub fn fisher_bound_hyper(kappa: f64) -> Result<BoundResult, BoundError> {
    check_kappa(kappa)?;
    let g2 = TrialFunction::g2(kappa)?;
    let mut r = bound_value(&ReactionTerm::fisher(), kappa, &g2)?;
    r.trial_id = "fisher_hyper".into();
    let closed = fisher_hyper_closed_form(kappa)?;
    let direct = r.numerator / r.denominator;
    r.diagnostics.insert("closed_form_c_squared".into(), closed);
    r.diagnostics
        .insert("closed_form_c_lower".into(), closed.max(0.0).sqrt());
    r.diagnostics
        .insert("relative_discrepancy".into(), ((closed - direct) / direct).abs());
    Ok(r)
}

/// Maximizes the functional over a parametric family inside the box
/// `theta_domain` (the family default when `None`).
///
/// One-parameter families use golden-section search, the two-parameter
/// family Nelder–Mead on the box (points outside are clamped). Failed
/// evaluations count as −1; if the optimizer gives up, the best point seen is
/// returned with a warning.
pub fn optimize_bound(
    f: &ReactionTerm,
    kappa: f64,
    family: TrialFamily,
    theta_domain: Option<&[(f64, f64)]>,
) -> Result<BoundResult, BoundError> {
    check_kappa(kappa)?;
    let domain: Vec<(f64, f64)> = match theta_domain {
        Some(d) => d.to_vec(),
        None => family.default_domain(),
    };
    if domain.len() != family.dimension() || domain.iter().any(|&(lo, hi)| !(lo <= hi)) {
        return Err(BoundError::InvalidTrial(format!(
            "{} needs {} ordered interval(s), got {:?}",
            family.name(),
            family.dimension(),
            domain
        )));
    }
    let clamp = |theta: &[f64]| -> Vec<f64> {
        theta
            .iter()
            .zip(&domain)
            .map(|(&t, &(lo, hi))| t.clamp(lo, hi))
            .collect()
    };
    let objective = |theta: &[f64]| -> f64 {
        family
            .build(theta, kappa)
            .and_then(|g| bound_value(f, kappa, &g))
            .map(|r| r.c_lower)
            .unwrap_or(-1.0)
    };

    let mut warnings = Vec::new();
    let best_theta = if family.dimension() == 1 {
        let (lo, hi) = domain[0];
        let (x, _) = maximize_scalar(|x| objective(&[x]), lo, hi, 1e-8);
        vec![x]
    } else {
        let x0: Vec<f64> = domain.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect();
        let mut seen: (Vec<f64>, f64) = (x0.clone(), f64::NEG_INFINITY);
        let opts = NelderMeadOptions {
            tol: 1e-12,
            initial_step: 0.25,
            ..Default::default()
        };
        let result = nelder_mead(
            |theta| {
                let t = clamp(theta);
                let v = objective(&t);
                if v > seen.1 {
                    seen = (t, v);
                }
                v
            },
            &x0,
            &opts,
        );
        match result {
            Ok((x, _)) => clamp(&x),
            Err(e) => {
                warnings.push(format!(
                    "optimizer stopped early ({e}); returning best point seen"
                ));
                seen.0
            }
        }
    };
    let g = family.build(&best_theta, kappa)?;
    let mut r = bound_value(f, kappa, &g)?;
    r.trial_id = format!("{}_optimized", family.name());
    r.warnings = warnings;
    Ok(r)
}

/// dc²/dκ from the fixed optimizer ĝ:
/// 4/κ³ · ∫fĝ / (∫ĝ²/ĥ + 1/κ²)².
pub fn sensitivity_kappa(f: &ReactionTerm, kappa: f64) -> Result<f64, BoundError> {
    check_kappa(kappa)?;
    let speed = stefan_speed(f, kappa, DEFAULT_SPEED_TOL)?;
    let g = optimal_g(&speed.profile)?;
    let s = g.sampled().expect("optimal_g is tabulated");
    let fg = trapezoid(&s.q, |i| f.eval(s.q[i]) * s.g[i]);
    let d = trapezoid(&s.q, |i| s.ratio[i]) + 1.0 / (kappa * kappa);
    Ok(4.0 / kappa.powi(3) * fg / (d * d))
}

/// dc²/dm for f = u^m(1−u) from the fixed optimizer ĝ:
/// 2∫q^m(1−q) ln q ĝ / (∫ĝ²/ĥ + 1/κ²). Non-positive since ln q < 0.
pub fn sensitivity_m(kappa: f64, m: f64) -> Result<f64, BoundError> {
    check_kappa(kappa)?;
    let f = ReactionTerm::mkpp(m)?;
    let speed = stefan_speed(&f, kappa, DEFAULT_SPEED_TOL)?;
    let g = optimal_g(&speed.profile)?;
    let s = g.sampled().expect("optimal_g is tabulated");
    let weight = |q: f64| {
        if q > 0.0 {
            q.powf(m) * (1.0 - q) * q.ln()
        } else {
            0.0
        }
    };
    let num = 2.0 * trapezoid(&s.q, |i| weight(s.q[i]) * s.g[i]);
    let d = trapezoid(&s.q, |i| s.ratio[i]) + 1.0 / (kappa * kappa);
    Ok(num / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_trial_closed_form_vs_quadrature() {
        let f = ReactionTerm::fisher();
        let r = bound_value(&f, 1.0, &TrialFunction::linear(0.22).unwrap()).unwrap();
        let num: f64 = 1.0 / 3.0 - 0.22 / 6.0;
        let den: f64 = (1.0 - 0.78_f64.powi(3)) / (3.0 * 0.22 * 0.22) + 1.0;
        assert!((num - 0.296_666_7).abs() < 1e-7);
        assert!((den - 4.618_787).abs() < 1e-6);
        assert!((r.numerator - num).abs() < 1e-10 * num);
        assert!((r.denominator - den).abs() < 1e-10 * den);
        assert!((r.c_lower - (num / den).sqrt()).abs() < 1e-12);
        assert!((r.c_lower - 0.2534).abs() < 1e-4);
    }

    #[test]
    fn zfk_trial_value() {
        let f = ReactionTerm::fisher();
        let r = bound_value(&f, 1.0, &TrialFunction::zfk(1.0).unwrap()).unwrap();
        let exact = 1.5 - 2.0 * std::f64::consts::LN_2;
        assert!((r.c_squared() - exact).abs() < 1e-12);
        assert!((r.c_lower - 0.337_203).abs() < 1e-6);
    }

    #[test]
    fn infinite_kappa_drops_boundary_term() {
        let f = ReactionTerm::fisher();
        let g = TrialFunction::linear(0.5).unwrap();
        let r = bound_value(&f, f64::INFINITY, &g).unwrap();
        let finite = bound_value(&f, 1.0, &g).unwrap();
        assert!((r.denominator - (finite.denominator - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn negative_numerator_gives_zero_bound() {
        let f = ReactionTerm::bistable_cubic(0.45).unwrap();
        let r = bound_value(&f, 1.0, &TrialFunction::exponential(20.0).unwrap()).unwrap();
        assert!(r.numerator < 0.0);
        assert_eq!(r.c_lower, 0.0);
    }

    #[test]
    fn zfk_closed_examples() {
        let f = ReactionTerm::fisher();
        let r = zfk_bound(&f, 1.0).unwrap();
        assert!((r.c_lower - 0.5 * (1.0_f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((r.c_lower - 0.288_675_1).abs() < 1e-7);
        let r = zfk_bound(&f, f64::INFINITY).unwrap();
        assert!((r.c_lower - 0.577_350_3).abs() < 1e-7);
        let r = zfk_bound(&f, 1e-12).unwrap();
        assert!(r.c_lower < 1e-11);
        let b = ReactionTerm::bistable_cubic(0.25).unwrap();
        assert!(matches!(zfk_bound(&b, 1.0), Err(BoundError::Unsupported(_))));
    }

    #[test]
    fn fisher_simple_examples() {
        let r = fisher_bound_simple(1.0, 0.22).unwrap();
        assert!((r.c_lower - 0.2534).abs() < 1e-4);
        assert!((r.diagnostics["quadrature_c_lower"] - r.c_lower).abs() < 1e-11);
        assert!((r.diagnostics["paper_literal_c1"] - 0.23141 / 1.0556737).abs() < 1e-15);
        assert!((r.diagnostics["paper_literal_c1"] - 0.21921).abs() < 1e-5);
        let small = fisher_bound_simple(1e-6, 0.22).unwrap();
        assert!(small.c_lower < 1e-5);
        assert!(small.diagnostics["paper_literal_c1"] < 1e-5);
    }

    #[test]
    fn fisher_hyper_matches_quadrature() {
        for k in [0.25, 1.0, 4.0, 20.0] {
            let r = fisher_bound_hyper(k).unwrap();
            assert!(
                r.diagnostics["relative_discrepancy"] < 1e-6,
                "kappa {k}: {:?}",
                r.diagnostics
            );
        }
        assert!(fisher_bound_hyper(1e-6).unwrap().c_lower < 1e-5);
    }

    #[test]
    fn optimization_dominates_fixed_samples() {
        let f = ReactionTerm::fisher();
        let fixed = bound_value(&f, 1.0, &TrialFunction::linear(0.22).unwrap()).unwrap();
        let opt = optimize_bound(&f, 1.0, TrialFamily::Linear, Some(&[(0.01, 0.99)])).unwrap();
        assert!(opt.c_lower >= fixed.c_lower);
        let fixed = bound_value(&f, 1.0, &TrialFunction::power_pair(0.5, 1.0).unwrap()).unwrap();
        let opt = optimize_bound(&f, 1.0, TrialFamily::PowerPair, None).unwrap();
        assert!(opt.c_lower >= fixed.c_lower);
        let two = optimize_bound(&f, 1.0, TrialFamily::PowerGeneral, None).unwrap();
        assert!(
            two.c_lower >= opt.c_lower - 1e-9,
            "{} vs {}",
            two.c_lower,
            opt.c_lower
        );
        assert!(two.warnings.is_empty());
    }

    #[test]
    fn optimize_rejects_bad_domain() {
        let f = ReactionTerm::fisher();
        assert!(optimize_bound(&f, 1.0, TrialFamily::Linear, Some(&[(0.5, 0.1)])).is_err());
        assert!(optimize_bound(&f, 1.0, TrialFamily::PowerGeneral, Some(&[(0.1, 0.5)])).is_err());
    }

    #[test]
    fn kappa_must_be_positive() {
        let f = ReactionTerm::fisher();
        let g = TrialFunction::linear(0.5).unwrap();
        assert!(matches!(
            bound_value(&f, 0.0, &g),
            Err(BoundError::InvalidKappa(_))
        ));
        assert!(matches!(zfk_bound(&f, -1.0), Err(BoundError::InvalidKappa(_))));
    }
}
