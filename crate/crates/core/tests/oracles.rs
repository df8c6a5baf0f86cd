//! Cross-checks against oracles that share no code with the library:
//! exact rational series, a fixed-step RK4 shooter and finite differences.

use num::{BigInt, BigRational, ToPrimitive};

use frontspeed::phaseplane::{optimal_g, shoot_profile, stefan_speed, ShootOptions, DEFAULT_SPEED_TOL};
use frontspeed::reactions::ReactionTerm;
use frontspeed::special::hyp2f1;
use frontspeed::varbound::{bound_value, sensitivity_kappa, sensitivity_m};

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Σ_{n<terms} (a)ₙ(b)ₙ/((c)ₙ n!) zⁿ in exact arithmetic.
fn exact_series(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    z: &BigRational,
    terms: usize,
) -> BigRational {
    let one = rational(1, 1);
    let mut term = one.clone();
    let mut sum = one.clone();
    for n in 0..terms - 1 {
        let k = rational(n as i64, 1);
        term = term * (a + &k) * (b + &k) / ((c + &k) * (&k + &one)) * z;
        sum += &term;
    }
    sum
}

#[test]
fn hyp2f1_against_rational_series() {
    // 2F1(1, 1/2; 7/2; −5) = 6⁻¹ · 2F1(1, 3; 7/2; 5/6) by Pfaff.
    let tail = exact_series(
        &rational(1, 1),
        &rational(3, 1),
        &rational(7, 2),
        &rational(5, 6),
        200,
    );
    let oracle = (tail / rational(6, 1)).to_f64().unwrap();
    let v = hyp2f1(1.0, 0.5, 3.5, -5.0).unwrap();
    assert!(((v - oracle) / oracle).abs() < 1e-12, "{v} vs {oracle}");
}

#[test]
fn hyp2f1_positive_argument_against_rational_series() {
    let oracle = exact_series(
        &rational(3, 4),
        &rational(-5, 2),
        &rational(9, 4),
        &rational(1, 2),
        200,
    )
    .to_f64()
    .unwrap();
    let v = hyp2f1(0.75, -2.5, 2.25, 0.5).unwrap();
    assert!(((v - oracle) / oracle).abs() < 1e-13, "{v} vs {oracle}");
}

/// Fixed-step RK4 for dp/ds = f(1 − s)/p − c from the saddle, s = 1 − q.
/// Returns p at s = 1, or None if p hits zero first.
fn rk4_landing(f: &ReactionTerm, c: f64, steps: usize) -> Option<f64> {
    let mu = 0.5 * (-c + (c * c - 4.0 * f.fprime1_left()).sqrt());
    let s0 = 1e-7;
    let h = (1.0 - s0) / steps as f64;
    let rhs = |s: f64, p: f64| f.eval(1.0 - s) / p - c;
    let mut p = mu * s0;
    for i in 0..steps {
        let s = s0 + i as f64 * h;
        let k1 = rhs(s, p);
        let k2 = rhs(s + 0.5 * h, p + 0.5 * h * k1);
        let k3 = rhs(s + 0.5 * h, p + 0.5 * h * k2);
        let k4 = rhs(s + h, p + h * k3);
        p += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if p.is_nan() || p <= 0.0 {
            return None;
        }
    }
    Some(p)
}

#[test]
fn sub_kpp_landing_slope_matches_rk4() {
    let f = ReactionTerm::fisher();
    let oracle = rk4_landing(&f, 0.5, 200_000).unwrap();
    let p = shoot_profile(&f, 0.5, f64::INFINITY, &ShootOptions::default()).unwrap();
    let p0 = p.p_at_zero().unwrap();
    assert!(oracle > 0.0);
    assert!((p0 - oracle).abs() < 1e-7, "{p0} vs {oracle}");
}

#[test]
fn stefan_speed_matches_rk4_bisection() {
    let f = ReactionTerm::fisher();
    for &kappa in &[0.5, 1.0, 5.0] {
        let g = |c: f64| rk4_landing(&f, c, 100_000).map_or(-1.0, |p| p - c / kappa);
        let (mut lo, mut hi) = (1e-3, 2.0);
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let c = stefan_speed(&f, kappa, DEFAULT_SPEED_TOL).unwrap().c_star;
        assert!((c - oracle).abs() < 1e-6, "kappa {kappa}: {c} vs {oracle}");
    }
}

#[test]
fn combustion_speed_matches_rk4_bisection() {
    let f = ReactionTerm::combustion(0.3, 1.0).unwrap();
    let kappa = 1.0;
    let g = |c: f64| rk4_landing(&f, c, 100_000).map_or(-1.0, |p| p - c / kappa);
    let (mut lo, mut hi) = (1e-3, 1.0);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c = stefan_speed(&f, kappa, DEFAULT_SPEED_TOL).unwrap().c_star;
    assert!((c - 0.5 * (lo + hi)).abs() < 1e-6);
}

#[test]
fn optimal_trial_shape() {
    let f = ReactionTerm::fisher();
    let s = stefan_speed(&f, 1.0, DEFAULT_SPEED_TOL).unwrap();
    let g = optimal_g(&s.profile).unwrap();
    let t = g.sampled().unwrap();
    assert_eq!(t.g[0], 1.0);
    assert!(t.g.windows(2).all(|w| w[1] < w[0]));
    assert!(t.h.iter().all(|&h| h > 0.0));
    assert!(*t.g.last().unwrap() < 1e-3);

    // Near q = 1, p ≈ μ(1 − q), so ĝ ∝ (1 − q)^(c/μ).
    let expected = s.c_star / s.profile.mu;
    let i = t.q.iter().position(|&q| q > 0.99).unwrap();
    let j = t.q.iter().position(|&q| q > 0.995).unwrap();
    let slope = (t.g[j] / t.g[i]).ln() / ((1.0 - t.q[j]) / (1.0 - t.q[i])).ln();
    assert!(
        (slope - expected).abs() < 0.02 * expected,
        "{slope} vs {expected}"
    );
}

#[test]
fn optimal_trial_attains_speed() {
    for f in [ReactionTerm::fisher(), ReactionTerm::mkpp(2.0).unwrap()] {
        let s = stefan_speed(&f, 1.0, DEFAULT_SPEED_TOL).unwrap();
        let b = bound_value(&f, 1.0, &optimal_g(&s.profile).unwrap()).unwrap();
        let exact = s.c_star * s.c_star;
        assert!(((b.c_squared() - exact) / exact).abs() < 1e-4);
    }
}

fn c2(f: &ReactionTerm, kappa: f64) -> f64 {
    let c = stefan_speed(f, kappa, DEFAULT_SPEED_TOL).unwrap().c_star;
    c * c
}

#[test]
fn kappa_sensitivity_is_positive_and_matches_differences() {
    for f in [
        ReactionTerm::fisher(),
        ReactionTerm::combustion(0.3, 1.0).unwrap(),
        ReactionTerm::bistable_cubic(0.25).unwrap(),
    ] {
        for &k in &[0.5, 2.0] {
            let s = sensitivity_kappa(&f, k).unwrap();
            let h = 1e-3 * k;
            let fd = (c2(&f, k + h) - c2(&f, k - h)) / (2.0 * h);
            assert!(s > 0.0);
            assert!(
                ((s - fd) / fd).abs() < 0.01,
                "{} kappa {k}: {s} vs {fd}",
                f.name()
            );
        }
    }
}

#[test]
fn kappa_sensitivity_flattens_for_large_kappa() {
    let f = ReactionTerm::fisher();
    let s = sensitivity_kappa(&f, 1e3).unwrap();
    assert!(s > 0.0 && s < 1e-3, "{s}");
    assert!(s < 1e-2 * sensitivity_kappa(&f, 1.0).unwrap());
}

#[test]
fn m_sensitivity_matches_differences() {
    let speed2 = |m: f64| c2(&ReactionTerm::mkpp(m).unwrap(), 1.0);
    let h = 1e-3;
    let s = sensitivity_m(1.0, 1.0).unwrap();
    let fd = (-3.0 * speed2(1.0) + 4.0 * speed2(1.0 + h) - speed2(1.0 + 2.0 * h)) / (2.0 * h);
    assert!(s < 0.0);
    assert!(((s - fd) / fd).abs() < 0.02, "{s} vs {fd}");
    assert!(sensitivity_m(1.0, 2.0).unwrap() <= 0.0);
}
