//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.

#![allow(clippy::excessive_precision)]

use serde::{Deserialize, Serialize};

use super::SpecialError;

/// Maximum bisection depth of any subinterval.
pub const MAX_DEPTH: u32 = 40;

const MAX_INTERVALS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    abs_value: f64,
    depth: u32,
}

fn eval_checked<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, SpecialError> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecialError::NonFinite { at: x, value: v })
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, depth: u32) -> Result<Panel, SpecialError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = eval_checked(f, center)?;
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = fc.abs() * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval_checked(f, center - dx)?;
        let f2 = eval_checked(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (1.0_f64).min((200.0 * error / res_asc).powf(1.5));
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel {
        lo,
        hi,
        value,
        error,
        abs_value: res_abs,
        depth,
    })
}

/// Integrates `f` over `[lo, hi]` to relative accuracy `rel_tol`.
///
/// Panels are bisected largest-error-first until the summed error estimate is
/// below `rel_tol · |value|` (with a round-off floor relative to ∫|f|), or no
/// panel can be split without exceeding [`MAX_DEPTH`].
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> Result<QuadratureResult, SpecialError> {
    integrate_with_breakpoints(f, lo, hi, &[], rel_tol)
}

/// Like [`integrate`], but starts from panels split at the given interior
/// points, so that discontinuities in `f` or its derivatives sit on panel edges.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    rel_tol: f64,
) -> Result<QuadratureResult, SpecialError> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(SpecialError::InvalidParameter(format!(
            "integration interval [{lo}, {hi}] must satisfy lo < hi"
        )));
    }
    if !(rel_tol > 0.0) {
        return Err(SpecialError::InvalidParameter(format!(
            "rel_tol = {rel_tol} must be positive"
        )));
    }
    let mut edges: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup();
    edges.insert(0, lo);
    edges.push(hi);

    let mut panels = Vec::with_capacity(64);
    for w in edges.windows(2) {
        panels.push(kronrod15(&f, w[0], w[1], 0)?);
    }
    let mut evaluations = 15 * panels.len();

    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let abs_value: f64 = panels.iter().map(|p| p.abs_value).sum();
        let target = (rel_tol * value.abs()).max(50.0 * f64::EPSILON * abs_value);
        if error <= target {
            return Ok(QuadratureResult {
                value,
                abs_error_estimate: error,
                evaluations,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depth < MAX_DEPTH)
            .max_by(|a, b| a.1.error.partial_cmp(&b.1.error).unwrap())
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Err(SpecialError::ToleranceNotMet { value, error });
        };
        if panels.len() >= MAX_INTERVALS {
            return Err(SpecialError::ToleranceNotMet { value, error });
        }
        let p = panels.swap_remove(i);
        let mid = 0.5 * (p.lo + p.hi);
        panels.push(kronrod15(&f, p.lo, mid, p.depth + 1)?);
        panels.push(kronrod15(&f, mid, p.hi, p.depth + 1)?);
        evaluations += 30;
    }
}
