//! Gauss hypergeometric function ₂F₁(a, b; c; z) for real arguments with z < 1.

use super::SpecialError;

/// Hard cap on the number of series terms.
pub const SERIES_MAX_TERMS: usize = 1_000_000;

const REL_TERM_TOL: f64 = 1e-16;

/// ₂F₁(a, b; c; z) for `z < 1`.
///
/// Negative arguments are mapped into `[0, 1)` with the Pfaff transformation
/// ₂F₁(a,b;c;z) = (1−z)^(−a) ₂F₁(a, c−b; c; z/(z−1)), and the power series is
/// summed there.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecialError> {
    check_parameters(a, b, c, z)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    if z >= 1.0 {
        return Err(SpecialError::OutOfDomain(z));
    }
    if z < 0.0 {
        let w = z / (z - 1.0);
        let tail = series(a, c - b, c, w)?;
        Ok((1.0 - z).powf(-a) * tail)
    } else {
        series(a, b, c, z)
    }
}

/// Direct power series Σ (a)ₙ(b)ₙ/((c)ₙ n!) zⁿ, valid for |z| < 1.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecialError> {
    check_parameters(a, b, c, z)?;
    if z.abs() >= 1.0 {
        return Err(SpecialError::OutOfDomain(z));
    }
    series(a, b, c, z)
}

fn check_parameters(a: f64, b: f64, c: f64, z: f64) -> Result<(), SpecialError> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(SpecialError::InvalidParameter(format!(
            "non-finite argument in 2F1({a}, {b}; {c}; {z})"
        )));
    }
    if c <= 0.0 && c == c.round() {
        return Err(SpecialError::InvalidParameter(format!(
            "c = {c} is a non-positive integer"
        )));
    }
    Ok(())
}

fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64, SpecialError> {
    // Neumaier-compensated partial sums.
    let mut sum = 1.0_f64;
    let mut comp = 0.0_f64;
    let mut term = 1.0_f64;
    for n in 0..SERIES_MAX_TERMS {
        let k = n as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        if term == 0.0 {
            return Ok(sum + comp);
        }
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;

        // Stop only once the terms are small and still shrinking.
        let next_ratio = ((a + k + 1.0) * (b + k + 1.0) / ((c + k + 1.0) * (k + 2.0)) * z).abs();
        if term.abs() <= REL_TERM_TOL * (sum + comp).abs() && next_ratio < 1.0 {
            return Ok(sum + comp);
        }
    }
    Err(SpecialError::SeriesNotConverged(SERIES_MAX_TERMS))
}
