//! Coordinate substitutions that move endpoint singularities and slow tails
//! out of the way of the Gauss-Kronrod rule.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `t = lo + e^w`, mapping the whole line onto `(lo, inf)` with Jacobian `e^w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpShift {
    pub lo: f64,
}

impl ExpShift {
    pub fn to_original(&self, w: f64) -> f64 {
        self.lo + w.exp()
    }

    pub fn jacobian(&self, w: f64) -> f64 {
        w.exp()
    }

    pub fn to_line(&self, t: f64) -> f64 {
        (t - self.lo).ln()
    }
}

pub fn transform_semi_infinite_log(lo: f64) -> Result<ExpShift> {
    if !lo.is_finite() {
        return Err(Error::Argument(format!(
            "lower endpoint must be finite, got {lo}"
        )));
    }
    Ok(ExpShift { lo })
}

/// `x = lo + (hi - lo) / (1 + e^-w)`, mapping the whole line onto `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticMap {
    pub lo: f64,
    pub hi: f64,
}

impl LogisticMap {
    pub fn to_original(&self, w: f64) -> f64 {
        let width = self.hi - self.lo;
        // Measure from the nearer endpoint so both ends keep full precision.
        if w <= 0.0 {
            self.lo + width * logistic(w)
        } else {
            self.hi - width * logistic(-w)
        }
    }

    pub fn jacobian(&self, w: f64) -> f64 {
        let e = (-w.abs()).exp();
        (self.hi - self.lo) * e / ((1.0 + e) * (1.0 + e))
    }
}

/// `1 / (1 + e^-w)` without overflow.
pub fn logistic(w: f64) -> f64 {
    if w >= 0.0 {
        1.0 / (1.0 + (-w).exp())
    } else {
        let e = w.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^w)` without overflow or cancellation.
pub fn softplus(w: f64) -> f64 {
    w.max(0.0) + (-w.abs()).exp().ln_1p()
}

/// Majorants `(left, right)` for the parts of
/// `∫ e^w / ((w^2 + pi^2) (1 + e^w)^n) dw` lying outside `[-window, window]`.
///
/// Left: the integrand is below `e^w / (w^2 + pi^2)`. Right: below
/// `e^{-(n-1) w} / (w^2 + pi^2)` for `n >= 2`, and for `n = 1` below
/// `1 / (w^2 + pi^2)`, whose tail is an arctangent.
pub fn moment_tail_bounds(n: u32, window: f64) -> (f64, f64) {
    let w = window.max(0.0);
    let q = w * w + PI * PI;
    let left = (-w).exp() / q;
    let right = if n <= 1 {
        (0.5 * PI - (w / PI).atan()) / PI
    } else {
        let m = f64::from(n - 1);
        (-m * w).exp() / (m * q)
    };
    (left, right)
}

/// Smallest window (to 1e-6 relative) whose two tail majorants are each
/// below `abs_tol / 4`. For `n = 1` the right tail decays like `1 / w`, so
/// the window is of order `1 / abs_tol`; the engine compactifies the line
/// instead of truncating it.
pub fn moment_truncation_window(n: u32, abs_tol: f64) -> Result<f64> {
    if !(abs_tol > 0.0 && abs_tol.is_finite()) {
        return Err(Error::Argument(format!(
            "abs_tol must be positive, got {abs_tol}"
        )));
    }
    let target = 0.25 * abs_tol;
    let ok = |w: f64| {
        let (l, r) = moment_tail_bounds(n, w);
        l < target && r < target
    };
    let mut hi = 1.0;
    while !ok(hi) {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_shift_at_origin() {
        let m = transform_semi_infinite_log(1.0).unwrap();
        assert_eq!(m.to_original(0.0), 2.0);
        assert_eq!(m.jacobian(0.0), 1.0);
        assert!((m.to_line(m.to_original(-3.5)) + 3.5).abs() < 1e-14);
        assert!(transform_semi_infinite_log(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn logistic_map_endpoints() {
        let m = LogisticMap { lo: 0.0, hi: 1.0 };
        assert_eq!(m.to_original(0.0), 0.5);
        assert_eq!(m.jacobian(0.0), 0.25);
        assert!(m.to_original(-40.0) > 0.0);
        assert!(m.to_original(-40.0) < 1e-17);
        assert!(m.to_original(40.0) <= 1.0);
        assert!(m.jacobian(800.0) == 0.0);
    }

    #[test]
    fn stable_helpers() {
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-16);
        assert_eq!(softplus(1000.0), 1000.0);
        assert!(softplus(-1000.0) >= 0.0);
        assert_eq!(logistic(-1000.0), 0.0);
        assert_eq!(logistic(1000.0), 1.0);
    }

    #[test]
    fn tail_window_meets_budget() {
        for n in 2..=20 {
            let w = moment_truncation_window(n, 1e-14).unwrap();
            let (l, r) = moment_tail_bounds(n, w);
            assert!(l < 2.5e-15 && r < 2.5e-15, "n={n} w={w}");
            // exponential tails: the window stays moderate
            assert!(w < 40.0, "n={n} w={w}");
        }
        let w1 = moment_truncation_window(1, 1e-14).unwrap();
        assert!(w1 > 1e13);
    }
}
