//! The verification record: one named check, its expected and computed
//! values, and the tolerance policy that decided pass or fail.

use serde::{Deserialize, Serialize};

/// Fixed decimal rendering used in every report: 17 significant digits,
/// lowercase exponent.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders `re+imi` / `re-imi` with [`fmt_f64`] parts.
pub fn fmt_complex(re: f64, im: f64) -> String {
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", fmt_f64(re), sign, fmt_f64(im.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TolerancePolicy {
    Absolute,
    Relative,
    AbsoluteOrRelative,
    /// Exact equality or a boolean predicate; the error fields are 0 on
    /// agreement and 1 otherwise.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationRecord {
    pub check_name: String,
    pub expected: String,
    pub computed: String,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub policy: TolerancePolicy,
    pub passed: bool,
    /// The identity or claim being checked, written as a formula.
    pub anchor: String,
}

impl VerificationRecord {
    pub fn numeric(
        check_name: impl Into<String>,
        expected: f64,
        computed: f64,
        tolerance: f64,
        policy: TolerancePolicy,
        anchor: impl Into<String>,
    ) -> Self {
        let abs_error = (computed - expected).abs();
        Self::from_errors(
            check_name,
            fmt_f64(expected),
            fmt_f64(computed),
            abs_error,
            relative(abs_error, expected.abs()),
            tolerance,
            policy,
            anchor,
        )
    }

    /// Compares complex values through the modulus of their difference.
    pub fn complex(
        check_name: impl Into<String>,
        expected: (f64, f64),
        computed: (f64, f64),
        tolerance: f64,
        policy: TolerancePolicy,
        anchor: impl Into<String>,
    ) -> Self {
        let abs_error = (computed.0 - expected.0).hypot(computed.1 - expected.1);
        Self::from_errors(
            check_name,
            fmt_complex(expected.0, expected.1),
            fmt_complex(computed.0, computed.1),
            abs_error,
            relative(abs_error, expected.0.hypot(expected.1)),
            tolerance,
            policy,
            anchor,
        )
    }

    /// Exact comparison of two renderings (rationals, tables, verdicts).
    pub fn exact(
        check_name: impl Into<String>,
        expected: impl Into<String>,
        computed: impl Into<String>,
        anchor: impl Into<String>,
    ) -> Self {
        let expected = expected.into();
        let computed = computed.into();
        let agree = expected == computed;
        Self::predicate(check_name, expected, computed, agree, anchor)
    }

    /// A check whose outcome is a boolean decided elsewhere.
    pub fn predicate(
        check_name: impl Into<String>,
        expected: impl Into<String>,
        computed: impl Into<String>,
        holds: bool,
        anchor: impl Into<String>,
    ) -> Self {
        let indicator = if holds { 0.0 } else { 1.0 };
        Self {
            check_name: check_name.into(),
            expected: expected.into(),
            computed: computed.into(),
            abs_error: indicator,
            rel_error: indicator,
            tolerance: 0.0,
            policy: TolerancePolicy::Exact,
            passed: holds,
            anchor: anchor.into(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn from_errors(
        check_name: impl Into<String>,
        expected: String,
        computed: String,
        abs_error: f64,
        rel_error: f64,
        tolerance: f64,
        policy: TolerancePolicy,
        anchor: impl Into<String>,
    ) -> Self {
        // NaN errors compare false and fail every policy.
        let passed = match policy {
            TolerancePolicy::Absolute => abs_error <= tolerance,
            TolerancePolicy::Relative => rel_error <= tolerance,
            TolerancePolicy::AbsoluteOrRelative => abs_error <= tolerance || rel_error <= tolerance,
            TolerancePolicy::Exact => abs_error == 0.0,
        };
        Self {
            check_name: check_name.into(),
            expected,
            computed,
            abs_error,
            rel_error,
            tolerance,
            policy,
            passed,
            anchor: anchor.into(),
        }
    }
}

fn relative(abs_error: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        abs_error / scale
    } else if abs_error == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-19.0 / 720.0), "-2.6388888888888889e-2");
        assert_eq!(
            fmt_complex(1.0, -0.5),
            "1.0000000000000000e0-5.0000000000000000e-1i"
        );
    }

    #[test]
    fn policies() {
        let r =
            VerificationRecord::numeric("a", 2.0, 2.0 + 1e-9, 1e-9, TolerancePolicy::Relative, "x");
        assert!(r.passed);
        let r =
            VerificationRecord::numeric("a", 2.0, 2.0 + 1e-9, 1e-9, TolerancePolicy::Absolute, "x");
        assert!(!r.passed);
        let r = VerificationRecord::numeric(
            "a",
            0.0,
            1e-12,
            1e-10,
            TolerancePolicy::AbsoluteOrRelative,
            "x",
        );
        assert!(r.passed && r.rel_error.is_infinite());
        let r = VerificationRecord::numeric(
            "a",
            1.0,
            f64::NAN,
            1.0,
            TolerancePolicy::AbsoluteOrRelative,
            "x",
        );
        assert!(!r.passed);
    }

    #[test]
    fn exact_and_predicate() {
        assert!(VerificationRecord::exact("e", "1/2", "1/2", "x").passed);
        let r = VerificationRecord::exact("e", "1/2", "1/3", "x");
        assert!(!r.passed);
        assert_eq!(r.abs_error, 1.0);
        assert_eq!(r.policy, TolerancePolicy::Exact);
    }
}
