//! Reaction terms f(u) on [0, 1] together with the derived quantities the
//! speed solvers and bounds need: f′(0), f′(1⁻), ∫₀¹f and the sign-pattern
//! class (monostable A, bistable B, combustion C, degenerate monostable D).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special::{integrate_with_breakpoints, SpecialError};

/// Sign tolerance used by [`classify`].
pub const SIGN_TOL: f64 = 1e-12;
/// Tolerance for calling an endpoint derivative zero.
pub const DERIVATIVE_TOL: f64 = 1e-6;
/// Endpoint magnitude allowed for user-supplied terms.
pub const ENDPOINT_TOL: f64 = 1e-9;
/// Step of the one-sided endpoint differences.
pub const FD_STEP: f64 = 1e-6;
/// Grid size used when a label is assigned at construction.
pub const CLASSIFY_GRID: usize = 1024;

#[derive(Debug, Error)]
pub enum ReactionError {
    #[error("unknown reaction term `{0}`")]
    UnknownName(String),
    #[error("parameter {name} = {value} out of domain: {reason}")]
    ParameterOutOfDomain {
        name: String,
        value: f64,
        reason: &'static str,
    },
    #[error("unknown parameter `{param}` for reaction `{family}`")]
    UnknownParameter { family: String, param: String },
    #[error("f({at}) = {value} but reaction terms must vanish at u = 0 and u = 1")]
    EndpointNonZero { at: f64, value: f64 },
    #[error("non-finite value f({at}) = {value}")]
    NonFinite { at: f64, value: f64 },
    #[error("invalid reaction document: {0}")]
    InvalidDocument(String),
    #[error("quadrature of f failed: {0}")]
    Quadrature(#[from] SpecialError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    A,
    B,
    C,
    D,
    Other,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseLabel::A => "A",
            CaseLabel::B => "B",
            CaseLabel::C => "C",
            CaseLabel::D => "D",
            CaseLabel::Other => "Other",
        };
        f.write_str(s)
    }
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// An immutable, cheaply clonable reaction term.
#[derive(Clone)]
pub struct ReactionTerm {
    name: String,
    params: BTreeMap<String, f64>,
    evaluator: Evaluator,
    case_label: CaseLabel,
    fprime0: f64,
    fprime1_left: f64,
    integral01: f64,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for ReactionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReactionTerm")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("case_label", &self.case_label)
            .field("fprime0", &self.fprime0)
            .field("fprime1_left", &self.fprime1_left)
            .field("integral01", &self.integral01)
            .field("breakpoints", &self.breakpoints)
            .finish()
    }
}

impl ReactionTerm {
    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        (self.evaluator)(u)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    pub fn case_label(&self) -> CaseLabel {
        self.case_label
    }

    pub fn fprime0(&self) -> f64 {
        self.fprime0
    }

    pub fn fprime1_left(&self) -> f64 {
        self.fprime1_left
    }

    pub fn integral01(&self) -> f64 {
        self.integral01
    }

    /// Interior points where f or f′ may jump.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// f(u) = u(1−u).
    pub fn fisher() -> Self {
        Self::mkpp(1.0).expect("m = 1 is valid").renamed("fisher")
    }

    /// f(u) = u^m (1−u), m ≥ 1. Case A for m = 1, case D for m > 1.
    pub fn mkpp(m: f64) -> Result<Self, ReactionError> {
        if !(m.is_finite() && m >= 1.0) {
            return Err(ReactionError::ParameterOutOfDomain {
                name: "m".into(),
                value: m,
                reason: "mkpp needs m >= 1",
            });
        }
        let evaluator: Evaluator = if m == 1.0 {
            Arc::new(|u: f64| u * (1.0 - u))
        } else if m == m.round() && m <= 16.0 {
            let k = m as i32;
            Arc::new(move |u: f64| u.powi(k) * (1.0 - u))
        } else {
            Arc::new(move |u: f64| if u <= 0.0 { 0.0 } else { u.powf(m) * (1.0 - u) })
        };
        let mut term = ReactionTerm {
            name: "mkpp".into(),
            params: BTreeMap::from([("m".to_string(), m)]),
            evaluator,
            case_label: CaseLabel::Other,
            fprime0: if m == 1.0 { 1.0 } else { 0.0 },
            fprime1_left: -1.0,
            integral01: 1.0 / ((m + 1.0) * (m + 2.0)),
            breakpoints: Vec::new(),
        };
        term.case_label = classify(&term, CLASSIFY_GRID);
        Ok(term)
    }

    /// f(u) = (u−a)^s (1−u) for u > a, zero below the ignition threshold a.
    pub fn combustion(a: f64, shape: f64) -> Result<Self, ReactionError> {
        if !(a > 0.0 && a < 1.0) {
            return Err(ReactionError::ParameterOutOfDomain {
                name: "a".into(),
                value: a,
                reason: "ignition threshold must lie in (0, 1)",
            });
        }
        if !(shape.is_finite() && shape >= 1.0) {
            return Err(ReactionError::ParameterOutOfDomain {
                name: "shape".into(),
                value: shape,
                reason: "shape exponent must be >= 1",
            });
        }
        let evaluator: Evaluator = if shape == 1.0 {
            Arc::new(move |u: f64| if u > a { (u - a) * (1.0 - u) } else { 0.0 })
        } else {
            Arc::new(move |u: f64| {
                if u > a {
                    (u - a).powf(shape) * (1.0 - u)
                } else {
                    0.0
                }
            })
        };
        let width = 1.0 - a;
        let mut term = ReactionTerm {
            name: "combustion".into(),
            params: BTreeMap::from([("a".to_string(), a), ("shape".to_string(), shape)]),
            evaluator,
            case_label: CaseLabel::Other,
            fprime0: 0.0,
            fprime1_left: -width.powf(shape),
            integral01: width.powf(shape + 2.0) / ((shape + 1.0) * (shape + 2.0)),
            breakpoints: vec![a],
        };
        term.case_label = classify(&term, CLASSIFY_GRID);
        Ok(term)
    }

    /// f(u) = u(1−u)(u−a). Bistable (case B) for a < 1/2.
    pub fn bistable_cubic(a: f64) -> Result<Self, ReactionError> {
        if !(a > 0.0 && a < 1.0) {
            return Err(ReactionError::ParameterOutOfDomain {
                name: "a".into(),
                value: a,
                reason: "threshold must lie in (0, 1)",
            });
        }
        let mut term = ReactionTerm {
            name: "bistable_cubic".into(),
            params: BTreeMap::from([("a".to_string(), a)]),
            evaluator: Arc::new(move |u: f64| u * (1.0 - u) * (u - a)),
            case_label: CaseLabel::Other,
            fprime0: -a,
            fprime1_left: -(1.0 - a),
            integral01: (1.0 - 2.0 * a) / 12.0,
            breakpoints: Vec::new(),
        };
        term.case_label = classify(&term, CLASSIFY_GRID);
        Ok(term)
    }

    /// Builds a term from an arbitrary evaluator, deriving all metadata
    /// numerically (one-sided differences at the endpoints, adaptive
    /// quadrature split at `breakpoints`).
    pub fn from_fn<F>(name: &str, breakpoints: Vec<f64>, f: F) -> Result<Self, ReactionError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        for &u in &[0.0, 1.0] {
            let v = f(u);
            if !v.is_finite() {
                return Err(ReactionError::NonFinite { at: u, value: v });
            }
            if v.abs() > ENDPOINT_TOL {
                return Err(ReactionError::EndpointNonZero { at: u, value: v });
            }
        }
        for i in 0..=CLASSIFY_GRID + 1 {
            let u = i as f64 / (CLASSIFY_GRID + 1) as f64;
            let v = f(u);
            if !v.is_finite() {
                return Err(ReactionError::NonFinite { at: u, value: v });
            }
        }
        // f(0) = f(1) = 0 exactly; tiny endpoint residue is dropped.
        let evaluator: Evaluator = Arc::new(move |u: f64| if u <= 0.0 || u >= 1.0 { 0.0 } else { f(u) });
        let e = evaluator.clone();
        let integral01 = integrate_with_breakpoints(|u| e(u), 0.0, 1.0, &breakpoints, 1e-13)?.value;
        let h = FD_STEP;
        let fprime0 = (-3.0 * evaluator(0.0) + 4.0 * evaluator(h) - evaluator(2.0 * h)) / (2.0 * h);
        let fprime1_left =
            (3.0 * evaluator(1.0) - 4.0 * evaluator(1.0 - h) + evaluator(1.0 - 2.0 * h)) / (2.0 * h);
        let mut term = ReactionTerm {
            name: name.to_string(),
            params: BTreeMap::new(),
            evaluator,
            case_label: CaseLabel::Other,
            fprime0,
            fprime1_left,
            integral01,
            breakpoints,
        };
        term.case_label = classify(&term, CLASSIFY_GRID);
        Ok(term)
    }

    fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        if name == "fisher" {
            self.params.clear();
        }
        self
    }
}

fn reject_unknown(
    family: &str,
    params: &BTreeMap<String, f64>,
    allowed: &[&str],
) -> Result<(), ReactionError> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(ReactionError::UnknownParameter {
                family: family.into(),
                param: key.clone(),
            });
        }
    }
    Ok(())
}

/// Constructs one of the built-in families by name.
///
/// | name             | params            | f(u)                    |
/// |------------------|-------------------|-------------------------|
/// | `fisher`         | –                 | u(1−u)                  |
/// | `mkpp`           | `m` (default 1)   | u^m(1−u)                |
/// | `combustion`     | `a`, `shape` (1)  | (u−a)^shape(1−u)·𝟙[u>a] |
/// | `bistable_cubic` | `a`               | u(1−u)(u−a)             |
pub fn make_builtin(name: &str, params: &BTreeMap<String, f64>) -> Result<ReactionTerm, ReactionError> {
    let required = |key: &str| {
        params
            .get(key)
            .copied()
            .ok_or_else(|| ReactionError::ParameterOutOfDomain {
                name: key.into(),
                value: f64::NAN,
                reason: "required parameter missing",
            })
    };
    match name {
        "fisher" => {
            reject_unknown(name, params, &[])?;
            Ok(ReactionTerm::fisher())
        }
        "mkpp" => {
            reject_unknown(name, params, &["m"])?;
            ReactionTerm::mkpp(params.get("m").copied().unwrap_or(1.0))
        }
        "combustion" => {
            reject_unknown(name, params, &["a", "shape"])?;
            ReactionTerm::combustion(required("a")?, params.get("shape").copied().unwrap_or(1.0))
        }
        "bistable_cubic" => {
            reject_unknown(name, params, &["a"])?;
            ReactionTerm::bistable_cubic(required("a")?)
        }
        other => Err(ReactionError::UnknownName(other.into())),
    }
}

/// Assigns a case label from the sign pattern of f on a uniform open grid of
/// `grid_n` points (at least 256) and the stored endpoint derivatives.
pub fn classify(f: &ReactionTerm, grid_n: usize) -> CaseLabel {
    let n = grid_n.max(256);
    let values: Vec<f64> = (1..=n).map(|i| f.eval(i as f64 / (n + 1) as f64)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return CaseLabel::Other;
    }

    let strictly_positive = values.iter().all(|&v| v > 0.0);
    if strictly_positive {
        if f.fprime0 > DERIVATIVE_TOL && f.fprime1_left < -DERIVATIVE_TOL {
            return CaseLabel::A;
        }
        if f.fprime0.abs() <= DERIVATIVE_TOL {
            return CaseLabel::D;
        }
        return CaseLabel::Other;
    }

    #[derive(PartialEq, Clone, Copy)]
    enum Sign {
        Neg,
        Zero,
        Pos,
    }
    let signs: Vec<Sign> = values
        .iter()
        .map(|&v| {
            if v > SIGN_TOL {
                Sign::Pos
            } else if v < -SIGN_TOL {
                Sign::Neg
            } else {
                Sign::Zero
            }
        })
        .collect();
    let first_pos = match signs.iter().position(|&s| s == Sign::Pos) {
        Some(i) => i,
        None => return CaseLabel::Other,
    };
    if signs[first_pos..].iter().any(|&s| s != Sign::Pos) {
        return CaseLabel::Other;
    }
    let head = &signs[..first_pos];
    if head.is_empty() {
        return CaseLabel::Other;
    }
    if head.iter().all(|&s| s == Sign::Zero) {
        return CaseLabel::C;
    }
    // Bistable: negative, at most a couple of near-zero points at the
    // crossing, then positive.
    let last_neg = head.iter().rposition(|&s| s == Sign::Neg).unwrap_or(0);
    let neg_prefix = head[..=last_neg].iter().all(|&s| s == Sign::Neg);
    let crossing = head.len() - last_neg - 1;
    if head[0] == Sign::Neg && neg_prefix && crossing <= 2 && f.integral01 > 0.0 {
        return CaseLabel::B;
    }
    CaseLabel::Other
}

/// A polynomial segment `Σ coefficients[k] u^k` on `[from, to]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub from: f64,
    pub to: f64,
    pub coefficients: Vec<f64>,
}

/// JSON document describing a reaction term.
///
/// ```json
/// {"type": "polynomial", "coefficients": [0, 1, -1]}
/// {"type": "piecewise", "pieces": [{"from": 0, "to": 0.3, "coefficients": [0]},
///                                  {"from": 0.3, "to": 1, "coefficients": [-0.3, 1.3, -1]}]}
/// {"type": "builtin", "name": "combustion", "params": {"a": 0.3}}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ReactionConfig {
    Polynomial {
        coefficients: Vec<f64>,
    },
    Piecewise {
        pieces: Vec<Piece>,
    },
    Builtin {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

impl ReactionConfig {
    pub fn from_json(text: &str) -> Result<Self, ReactionError> {
        serde_json::from_str(text).map_err(|e| ReactionError::InvalidDocument(e.to_string()))
    }
}

fn horner(coefficients: &[f64], u: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

/// Builds a reaction term from a structured document.
pub fn custom_from_config(doc: &ReactionConfig) -> Result<ReactionTerm, ReactionError> {
    match doc {
        ReactionConfig::Builtin { name, params } => make_builtin(name, params),
        ReactionConfig::Polynomial { coefficients } => {
            if coefficients.iter().any(|c| !c.is_finite()) {
                return Err(ReactionError::InvalidDocument("non-finite coefficient".into()));
            }
            let coeffs = coefficients.clone();
            let mut term = ReactionTerm::from_fn("polynomial", Vec::new(), move |u| horner(&coeffs, u))?;
            // Exact metadata for polynomials.
            let c = coefficients;
            term.fprime0 = c.get(1).copied().unwrap_or(0.0);
            term.fprime1_left = c.iter().enumerate().skip(1).map(|(k, &ck)| k as f64 * ck).sum();
            term.integral01 = c.iter().enumerate().map(|(k, &ck)| ck / (k as f64 + 1.0)).sum();
            term.params = c
                .iter()
                .enumerate()
                .map(|(k, &ck)| (format!("c{k}"), ck))
                .collect();
            term.case_label = classify(&term, CLASSIFY_GRID);
            Ok(term)
        }
        ReactionConfig::Piecewise { pieces } => {
            if pieces.is_empty() {
                return Err(ReactionError::InvalidDocument(
                    "piecewise term needs pieces".into(),
                ));
            }
            let mut expected = 0.0;
            for p in pieces {
                if (p.from - expected).abs() > 1e-12 || !(p.to > p.from) {
                    return Err(ReactionError::InvalidDocument(format!(
                        "pieces must tile [0, 1] in order; got [{}, {}] after {}",
                        p.from, p.to, expected
                    )));
                }
                if p.coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(ReactionError::InvalidDocument("non-finite coefficient".into()));
                }
                expected = p.to;
            }
            if (expected - 1.0).abs() > 1e-12 {
                return Err(ReactionError::InvalidDocument(format!(
                    "pieces end at {expected}, expected 1"
                )));
            }
            let breakpoints: Vec<f64> = pieces[..pieces.len() - 1].iter().map(|p| p.to).collect();
            let segments = pieces.clone();
            let term = ReactionTerm::from_fn("piecewise", breakpoints, move |u| {
                let i = segments
                    .iter()
                    .position(|p| u < p.to)
                    .unwrap_or(segments.len() - 1);
                horner(&segments[i].coefficients, u)
            })?;
            Ok(term)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::integrate;

    fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn fisher_metadata() {
        let f = make_builtin("fisher", &BTreeMap::new()).unwrap();
        assert_eq!(f.eval(0.5), 0.25);
        assert_eq!(f.fprime0(), 1.0);
        assert!((f.integral01() - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(f.case_label(), CaseLabel::A);
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(1.0), 0.0);
    }

    #[test]
    fn mkpp_two_is_case_d() {
        let f = make_builtin("mkpp", &params(&[("m", 2.0)])).unwrap();
        assert_eq!(f.fprime0(), 0.0);
        assert_eq!(f.case_label(), CaseLabel::D);
        assert_eq!(classify(&f, 1024), CaseLabel::D);
    }

    #[test]
    fn bistable_integral_by_quadrature() {
        let f = make_builtin("bistable_cubic", &params(&[("a", 0.25)])).unwrap();
        let exact: f64 = (1.0 - 2.0 * 0.25) / 12.0;
        assert!((exact - 1.0 / 24.0).abs() < 1e-16);
        assert!((f.integral01() - exact).abs() < 1e-16);
        let q = integrate(|u| f.eval(u), 0.0, 1.0, 1e-13).unwrap().value;
        assert!((q - exact).abs() < 1e-10 * exact);
        assert_eq!(f.case_label(), CaseLabel::B);
    }

    #[test]
    fn bistable_without_positive_mass_is_other() {
        let f = ReactionTerm::bistable_cubic(0.6).unwrap();
        assert_eq!(f.case_label(), CaseLabel::Other);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&ReactionTerm::fisher(), 256), CaseLabel::A);
        let c = make_builtin("combustion", &params(&[("a", 0.3)])).unwrap();
        assert_eq!(classify(&c, 1024), CaseLabel::C);
        let zero = custom_from_config(&ReactionConfig::Polynomial {
            coefficients: vec![0.0],
        })
        .unwrap();
        assert_eq!(classify(&zero, 1024), CaseLabel::Other);
    }

    #[test]
    fn builtin_errors() {
        assert!(matches!(
            make_builtin("logistic", &BTreeMap::new()),
            Err(ReactionError::UnknownName(_))
        ));
        assert!(matches!(
            make_builtin("mkpp", &params(&[("m", 0.5)])),
            Err(ReactionError::ParameterOutOfDomain { .. })
        ));
        assert!(matches!(
            make_builtin("combustion", &params(&[("a", 1.2)])),
            Err(ReactionError::ParameterOutOfDomain { .. })
        ));
        assert!(matches!(
            make_builtin("combustion", &BTreeMap::new()),
            Err(ReactionError::ParameterOutOfDomain { .. })
        ));
        assert!(matches!(
            make_builtin("fisher", &params(&[("m", 2.0)])),
            Err(ReactionError::UnknownParameter { .. })
        ));
    }

    #[test]
    fn polynomial_config_matches_fisher() {
        let doc = ReactionConfig::from_json(r#"{"type": "polynomial", "coefficients": [0, 1, -1]}"#).unwrap();
        let p = custom_from_config(&doc).unwrap();
        let f = ReactionTerm::fisher();
        for i in 0..=100 {
            let u = i as f64 / 100.0;
            assert_eq!(p.eval(u), f.eval(u));
        }
        assert_eq!(p.fprime0(), f.fprime0());
        assert_eq!(p.fprime1_left(), f.fprime1_left());
        assert!((p.integral01() - f.integral01()).abs() < 1e-16);
        assert_eq!(p.case_label(), CaseLabel::A);
    }

    #[test]
    fn piecewise_config_is_combustion() {
        let doc = ReactionConfig::from_json(
            r#"{"type": "piecewise", "pieces": [
                {"from": 0, "to": 0.3, "coefficients": [0]},
                {"from": 0.3, "to": 1, "coefficients": [-0.3, 1.3, -1]}]}"#,
        )
        .unwrap();
        let p = custom_from_config(&doc).unwrap();
        assert_eq!(p.case_label(), CaseLabel::C);
        let c = ReactionTerm::combustion(0.3, 1.0).unwrap();
        assert!((p.integral01() - c.integral01()).abs() < 1e-12);
        assert!(p.fprime0().abs() < 1e-12);
        assert!((p.fprime1_left() - c.fprime1_left()).abs() < 1e-8);
        assert_eq!(p.breakpoints(), &[0.3]);
    }

    #[test]
    fn u_minus_u_cubed_is_accepted() {
        let p = custom_from_config(&ReactionConfig::Polynomial {
            coefficients: vec![0.0, 1.0, 0.0, -1.0],
        })
        .unwrap();
        assert_eq!(p.case_label(), CaseLabel::A);
        assert_eq!(p.fprime1_left(), -2.0);
    }

    #[test]
    fn config_rejects_nonzero_endpoints() {
        let e = custom_from_config(&ReactionConfig::Polynomial {
            coefficients: vec![0.0, 1.0],
        })
        .unwrap_err();
        assert!(matches!(e, ReactionError::EndpointNonZero { at, .. } if at == 1.0));
        let e = custom_from_config(&ReactionConfig::Polynomial {
            coefficients: vec![1e-6, 1.0, -1.0],
        })
        .unwrap_err();
        assert!(matches!(e, ReactionError::EndpointNonZero { at, .. } if at == 0.0));
        // Within tolerance is fine.
        custom_from_config(&ReactionConfig::Polynomial {
            coefficients: vec![1e-10, 1.0, -1.0],
        })
        .unwrap();
    }

    #[test]
    fn config_rejects_non_finite() {
        let e = ReactionTerm::from_fn("bad", vec![], |u| {
            if (u - 0.5).abs() < 0.01 {
                f64::INFINITY
            } else {
                0.0
            }
        });
        assert!(matches!(e, Err(ReactionError::NonFinite { .. })));
    }

    #[test]
    fn config_rejects_bad_tiling() {
        let doc = ReactionConfig::from_json(
            r#"{"type": "piecewise", "pieces": [{"from": 0, "to": 0.5, "coefficients": [0]}]}"#,
        )
        .unwrap();
        assert!(matches!(
            custom_from_config(&doc),
            Err(ReactionError::InvalidDocument(_))
        ));
        assert!(ReactionConfig::from_json(r#"{"type": "spline"}"#).is_err());
    }

    #[test]
    fn builtin_document() {
        let doc =
            ReactionConfig::from_json(r#"{"type": "builtin", "name": "mkpp", "params": {"m": 3}}"#).unwrap();
        let f = custom_from_config(&doc).unwrap();
        assert_eq!(f.case_label(), CaseLabel::D);
        assert!((f.integral01() - 1.0 / 20.0).abs() < 1e-15);
    }
}
