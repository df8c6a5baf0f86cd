use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::BoundError;

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Samples of a tabulated trial function. `ratio` holds g²/h, stored
/// separately because h diverges where p → 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledTrial {
    pub q: Vec<f64>,
    pub g: Vec<f64>,
    pub h: Vec<f64>,
    pub ratio: Vec<f64>,
}

#[derive(Clone)]
enum Form {
    Closed { g: Scalar, h: Scalar, ratio: Scalar },
    Sampled(SampledTrial),
}

/// A positive, non-increasing g on [0, 1] with g(0) = 1 and h = −g′ ≥ 0.
#[derive(Clone)]
pub struct TrialFunction {
    id: String,
    theta: Vec<f64>,
    breakpoints: Vec<f64>,
    form: Form,
}

impl fmt::Debug for TrialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TrialFunction")
            .field("id", &self.id)
            .field("theta", &self.theta)
            .field("sampled", &self.sampled().is_some())
            .finish()
    }
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), BoundError> {
    if cond {
        Ok(())
    } else {
        Err(BoundError::InvalidTrial(msg()))
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    let n = xs.len();
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let i = xs.partition_point(|&v| v <= x) - 1;
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + t * (ys[i + 1] - ys[i])
}

impl TrialFunction {
    /// Closed-form trial from g, h = −g′ and the simplified ratio g²/h.
    pub fn closed<G, H, R>(id: &str, theta: Vec<f64>, g: G, h: H, ratio: R) -> Self
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        H: Fn(f64) -> f64 + Send + Sync + 'static,
        R: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            id: id.to_string(),
            theta,
            breakpoints: Vec::new(),
            form: Form::Closed {
                g: Arc::new(g),
                h: Arc::new(h),
                ratio: Arc::new(ratio),
            },
        }
    }

    pub fn from_samples(
        id: &str,
        theta: Vec<f64>,
        q: Vec<f64>,
        g: Vec<f64>,
        h: Vec<f64>,
        ratio: Vec<f64>,
    ) -> Self {
        Self {
            id: id.to_string(),
            theta,
            breakpoints: Vec::new(),
            form: Form::Sampled(SampledTrial { q, g, h, ratio }),
        }
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    /// g₁(q) = 1 − λq, λ ∈ (0, 1].
    pub fn linear(lambda: f64) -> Result<Self, BoundError> {
        require(lambda > 0.0 && lambda <= 1.0, || {
            format!("linear trial needs 0 < lambda <= 1, got {lambda}")
        })?;
        Ok(Self::closed(
            "linear",
            vec![lambda],
            move |q| 1.0 - lambda * q,
            move |_| lambda,
            move |q| (1.0 - lambda * q).powi(2) / lambda,
        ))
    }

    /// g(q) = e^(−λq), λ > 0.
    pub fn exponential(lambda: f64) -> Result<Self, BoundError> {
        require(lambda > 0.0 && lambda.is_finite(), || {
            format!("exp trial needs lambda > 0, got {lambda}")
        })?;
        Ok(Self::closed(
            "exp",
            vec![lambda],
            move |q| (-lambda * q).exp(),
            move |q| lambda * (-lambda * q).exp(),
            move |q| (-lambda * q).exp() / lambda,
        ))
    }

    /// g(q) = 1/(1 + λq), λ > 0.
    pub fn rational(lambda: f64) -> Result<Self, BoundError> {
        require(lambda > 0.0 && lambda.is_finite(), || {
            format!("rational trial needs lambda > 0, got {lambda}")
        })?;
        Ok(Self::closed(
            "rational",
            vec![lambda],
            move |q| 1.0 / (1.0 + lambda * q),
            move |q| lambda / (1.0 + lambda * q).powi(2),
            move |_| 1.0 / lambda,
        ))
    }

    /// g_ZFK(u) = 1/(1 + κu): the optimal g when f vanishes away from u = 1.
    pub fn zfk(kappa: f64) -> Result<Self, BoundError> {
        let mut t = Self::rational(kappa)?;
        t.id = "zfk".into();
        Ok(t)
    }

    /// g(q) = ((1 − q)/(1 + βq))^α with α > 0, β ≥ 0.
    pub fn power_general(alpha: f64, beta: f64) -> Result<Self, BoundError> {
        require(alpha > 0.0 && alpha.is_finite(), || {
            format!("power trial needs alpha > 0, got {alpha}")
        })?;
        require(beta >= 0.0 && beta.is_finite(), || {
            format!("power trial needs beta >= 0, got {beta}")
        })?;
        let g = move |q: f64| ((1.0 - q) / (1.0 + beta * q)).powf(alpha);
        Ok(Self::closed(
            "power_general",
            vec![alpha, beta],
            g,
            move |q| alpha * (1.0 + beta) * g(q) / ((1.0 - q) * (1.0 + beta * q)),
            move |q| g(q) * (1.0 - q) * (1.0 + beta * q) / (alpha * (1.0 + beta)),
        ))
    }

    /// g(q) = ((1 − q)/(1 + κq))^α.
    pub fn power_pair(alpha: f64, kappa: f64) -> Result<Self, BoundError> {
        let mut t = Self::power_general(alpha, kappa)?;
        t.id = "power_pair".into();
        t.theta = vec![alpha];
        Ok(t)
    }

    /// g₂(q) = ((1 − q)/(1 + κq))^(κ/(1+κ)), built from the guess
    /// p = (c/κ)(1 − q)(1 + κq).
    pub fn g2(kappa: f64) -> Result<Self, BoundError> {
        require(kappa > 0.0 && kappa.is_finite(), || {
            format!("g2 needs 0 < kappa < inf, got {kappa}")
        })?;
        let mut t = Self::power_pair(kappa / (1.0 + kappa), kappa)?;
        t.id = "g2".into();
        Ok(t)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn sampled(&self) -> Option<&SampledTrial> {
        match &self.form {
            Form::Sampled(s) => Some(s),
            Form::Closed { .. } => None,
        }
    }

    pub fn g(&self, q: f64) -> f64 {
        match &self.form {
            Form::Closed { g, .. } => g(q),
            Form::Sampled(s) => interpolate(&s.q, &s.g, q),
        }
    }

    pub fn h(&self, q: f64) -> f64 {
        match &self.form {
            Form::Closed { h, .. } => h(q),
            Form::Sampled(s) => interpolate(&s.q, &s.h, q),
        }
    }

    /// g²/h evaluated in its simplified form.
    pub fn g2_over_h(&self, q: f64) -> f64 {
        match &self.form {
            Form::Closed { ratio, .. } => ratio(q),
            Form::Sampled(s) => interpolate(&s.q, &s.ratio, q),
        }
    }

    /// Checks g(0) = 1, monotonicity on a 1024-point grid and h ≥ 0 inside.
    pub fn validate(&self) -> Result<(), BoundError> {
        let g0 = self.g(0.0);
        require((g0 - 1.0).abs() <= 1e-12, || {
            format!("{}: g(0) = {g0}, expected 1", self.id)
        })?;
        let n = 1024;
        let mut prev = g0;
        for i in 1..=n {
            let q = i as f64 / n as f64;
            let g = self.g(q);
            require(g <= prev + 1e-15, || {
                format!("{}: g increases at q = {q}", self.id)
            })?;
            require(g >= 0.0, || format!("{}: g < 0 at q = {q}", self.id))?;
            prev = g;
            if i < n {
                let h = self.h(q);
                require(h >= 0.0, || format!("{}: h = {h} < 0 at q = {q}", self.id))?;
            }
        }
        Ok(())
    }
}

/// Parametric trial families accepted by [`super::optimize_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialFamily {
    /// 1 − λq
    Linear,
    /// ((1 − q)/(1 + κq))^α
    PowerPair,
    /// e^(−λq)
    Exponential,
    /// 1/(1 + λq)
    Rational,
    /// ((1 − q)/(1 + βq))^α, two parameters
    PowerGeneral,
}

impl TrialFamily {
    pub const ALL: [TrialFamily; 5] = [
        TrialFamily::Linear,
        TrialFamily::PowerPair,
        TrialFamily::Exponential,
        TrialFamily::Rational,
        TrialFamily::PowerGeneral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TrialFamily::Linear => "linear",
            TrialFamily::PowerPair => "power_pair",
            TrialFamily::Exponential => "exp",
            TrialFamily::Rational => "rational",
            TrialFamily::PowerGeneral => "power_general",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            TrialFamily::PowerGeneral => 2,
            _ => 1,
        }
    }

    pub fn default_domain(self) -> Vec<(f64, f64)> {
        match self {
            TrialFamily::Linear => vec![(0.01, 0.99)],
            TrialFamily::PowerPair => vec![(0.01, 0.99)],
            TrialFamily::Exponential => vec![(0.01, 20.0)],
            TrialFamily::Rational => vec![(0.01, 100.0)],
            TrialFamily::PowerGeneral => vec![(0.01, 2.0), (0.0, 100.0)],
        }
    }

    pub fn build(self, theta: &[f64], kappa: f64) -> Result<TrialFunction, BoundError> {
        require(theta.len() == self.dimension(), || {
            format!(
                "{} takes {} parameter(s), got {}",
                self.name(),
                self.dimension(),
                theta.len()
            )
        })?;
        match self {
            TrialFamily::Linear => TrialFunction::linear(theta[0]),
            TrialFamily::PowerPair => TrialFunction::power_pair(theta[0], kappa),
            TrialFamily::Exponential => TrialFunction::exponential(theta[0]),
            TrialFamily::Rational => TrialFunction::rational(theta[0]),
            TrialFamily::PowerGeneral => TrialFunction::power_general(theta[0], theta[1]),
        }
    }
}

impl FromStr for TrialFamily {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TrialFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| BoundError::UnknownFamily(s.to_string()))
    }
}

impl fmt::Display for TrialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fixed trial functions used for soundness checks at a given κ.
pub fn catalog(kappa: f64) -> Vec<TrialFunction> {
    let mut out = vec![
        TrialFunction::linear(0.22),
        TrialFunction::linear(0.5),
        TrialFunction::linear(1.0),
        TrialFunction::exponential(1.0),
        TrialFunction::exponential(4.0),
        TrialFunction::rational(1.0),
        TrialFunction::zfk(kappa),
        TrialFunction::power_pair(0.25, kappa),
        TrialFunction::power_general(0.8, 2.0),
    ];
    if kappa.is_finite() {
        out.push(TrialFunction::g2(kappa));
    }
    out.into_iter()
        .map(|t| t.expect("catalog parameters are valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_trials_are_valid() {
        for kappa in [0.1, 1.0, 10.0] {
            for t in catalog(kappa) {
                t.validate().unwrap();
            }
        }
    }

    #[test]
    fn closed_h_matches_finite_difference() {
        let d = 1e-6;
        for t in catalog(2.0) {
            for i in 1..50 {
                let q = i as f64 / 50.0;
                let fd = -(t.g(q + d) - t.g(q - d)) / (2.0 * d);
                let h = t.h(q);
                assert!(
                    (fd - h).abs() <= 1e-6 * (1.0 + h.abs()),
                    "{} at {q}: {fd} vs {h}",
                    t.id()
                );
                let r = t.g(q).powi(2) / h;
                assert!(
                    (r - t.g2_over_h(q)).abs() <= 1e-12 * (1.0 + r),
                    "{} ratio at {q}",
                    t.id()
                );
            }
        }
    }

    #[test]
    fn g2_exponent() {
        let t = TrialFunction::g2(1.0).unwrap();
        assert_eq!(t.theta(), &[0.5]);
        let q: f64 = 0.3;
        assert!((t.g(q) - ((1.0 - q) / (1.0 + q)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn family_parsing() {
        for f in TrialFamily::ALL {
            assert_eq!(f.name().parse::<TrialFamily>().unwrap(), f);
        }
        assert!(matches!(
            "cubic".parse::<TrialFamily>(),
            Err(BoundError::UnknownFamily(_))
        ));
    }

    #[test]
    fn invalid_parameters() {
        assert!(TrialFunction::linear(1.5).is_err());
        assert!(TrialFunction::linear(0.0).is_err());
        assert!(TrialFunction::exponential(-1.0).is_err());
        assert!(TrialFunction::power_general(0.5, -1.0).is_err());
        assert!(TrialFamily::Linear.build(&[0.1, 0.2], 1.0).is_err());
    }

    #[test]
    fn sampled_interpolation() {
        let t = TrialFunction::from_samples(
            "tab",
            vec![],
            vec![0.0, 0.5, 1.0],
            vec![1.0, 0.5, 0.0],
            vec![1.0, 1.0, 1.0],
            vec![1.0, 0.25, 0.0],
        );
        assert_eq!(t.g(0.25), 0.75);
        assert_eq!(t.g2_over_h(0.75), 0.125);
        t.validate().unwrap();
    }
}
