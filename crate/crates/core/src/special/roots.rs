use super::SpecialError;

/// Final bisection interval. `lo == hi` when a root was hit exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Bisects `f` on `[lo, hi]` until the bracket is narrower than `tol`.
///
/// Only the sign of `f` is used. A NaN value aborts with
/// [`SpecialError::NonFinite`]; infinities are fine.
pub fn bisect_bracket<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<Bracket, SpecialError> {
    if !(lo <= hi) || !(tol > 0.0) {
        return Err(SpecialError::InvalidParameter(format!(
            "bisection needs lo <= hi and tol > 0 (got [{lo}, {hi}], tol {tol})"
        )));
    }
    let mut eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            Err(SpecialError::NonFinite { at: x, value: v })
        } else {
            Ok(v)
        }
    };
    let flo = eval(lo)?;
    if flo == 0.0 {
        return Ok(Bracket { lo, hi: lo });
    }
    let fhi = eval(hi)?;
    if fhi == 0.0 {
        return Ok(Bracket { lo: hi, hi });
    }
    if flo.signum() == fhi.signum() {
        return Err(SpecialError::NoSignChange { lo, hi, flo, fhi });
    }
    let lo_positive = flo > 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = eval(mid)?;
        if fm == 0.0 {
            return Ok(Bracket { lo: mid, hi: mid });
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bracket { lo, hi })
}

/// Root of `f` on `[lo, hi]` to within `tol`; see [`bisect_bracket`].
pub fn bisect<F: FnMut(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, SpecialError> {
    let b = bisect_bracket(f, lo, hi, tol)?;
    if b.lo == b.hi {
        Ok(b.lo)
    } else {
        Ok(b.midpoint())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-10).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-10);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-7);
    }

    #[test]
    fn sign_definite_is_an_error() {
        let e = bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-8).unwrap_err();
        assert!(matches!(e, SpecialError::NoSignChange { .. }));
    }

    #[test]
    fn root_at_lower_endpoint() {
        assert_eq!(bisect(|x| x - 0.25, 0.25, 3.0, 1e-12).unwrap(), 0.25);
        assert_eq!(bisect(|x| x - 3.0, 0.25, 3.0, 1e-12).unwrap(), 3.0);
    }

    #[test]
    fn bracket_width_respects_tolerance() {
        let b = bisect_bracket(|x| x.cos(), 0.0, 3.0, 1e-9).unwrap();
        assert!(b.width() <= 1e-9);
        assert!(b.lo <= std::f64::consts::FRAC_PI_2 && std::f64::consts::FRAC_PI_2 <= b.hi);
    }

    #[test]
    fn nan_aborts() {
        let e = bisect(|x| if x > 1.0 { f64::NAN } else { x - 2.0 }, 0.0, 4.0, 1e-6);
        assert!(matches!(e, Err(SpecialError::NonFinite { .. })));
    }
}
