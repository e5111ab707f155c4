//! The representing measure of `F(x) = x / ((1 + x) ln(1 + x))`.
//!
//! Its density on `(1, inf)` is
//!
//! ```text
//! rho(t) = t / ((t - 1) ([ln(t - 1)]^2 + pi^2))
//! ```
//!
//! and the moments `∫ rho(t) / t^(n+1) dt = ∫ dt / (t^n ([ln(t-1)]^2 + pi^2))`
//! equal `(-1)^(n+1) b_n` for `n >= 1`. Quadrature never touches `rho` in the
//! `t` coordinate: with `t = 1 + e^w` the moment integrands become
//! `e^w / ((w^2 + pi^2) (1 + e^w)^n)`, smooth on the whole line, and the
//! `t = 1 / s` form on `(0, 1)` is written in the logit coordinate
//! `v = ln(s / (1 - s))`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{
    integrate, softplus, Domain, IntegralResult, IntegralTask, DEFAULT_ABS_TOL, DEFAULT_REL_TOL,
};
use crate::record::{TolerancePolicy, VerificationRecord};

const PI_SQ: f64 = PI * PI;

/// Density of the representing measure on `(1, inf)`.
///
/// Evaluated as `t / ((t - 1) L)` with `L = [ln(t - 1)]^2 + pi^2`; a
/// non-finite `L` yields 0, the analytic limit along that path.
pub fn density_rho(t: f64) -> Result<f64> {
    if !(t > 1.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "density is defined for finite t > 1, got {t}"
        )));
    }
    let gap = t - 1.0;
    let log_gap = gap.ln();
    let l = log_gap * log_gap + PI_SQ;
    if !l.is_finite() {
        return Ok(0.0);
    }
    Ok(t / (gap * l))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensitySample {
    pub t: f64,
    pub rho: f64,
}

impl DensitySample {
    pub fn at(t: f64) -> Result<Self> {
        Ok(Self {
            t,
            rho: density_rho(t)?,
        })
    }
}

/// `points` samples with `t - 1` geometrically spaced between `t_min - 1`
/// and `t_max - 1`; the endpoints are hit exactly.
pub fn density_grid(t_min: f64, t_max: f64, points: usize) -> Result<Vec<DensitySample>> {
    if !(t_min > 1.0 && t_min < t_max && t_max.is_finite()) {
        return Err(Error::Argument(format!(
            "need 1 < t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if points < 2 {
        return Err(Error::Argument(format!(
            "need at least 2 points, got {points}"
        )));
    }
    let lo = (t_min - 1.0).ln();
    let hi = (t_max - 1.0).ln();
    let last = points - 1;
    (0..points)
        .map(|i| {
            let t = match i {
                0 => t_min,
                i if i == last => t_max,
                i => {
                    let f = i as f64 / last as f64;
                    1.0 + (lo + f * (hi - lo)).exp()
                }
            };
            DensitySample::at(t)
        })
        .collect()
}

/// Which of the two equal moment integrals to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MomentSide {
    /// `∫_1^inf dt / (t^n ([ln(t-1)]^2 + pi^2))`
    HalfLineWeight,
    /// `∫_0^1 s^(n-2) ds / ([ln(1/s - 1)]^2 + pi^2)`
    UnitInterval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentRequest {
    pub n: u32,
    pub side: MomentSide,
}

impl MomentRequest {
    pub fn new(n: u32, side: MomentSide) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument(
                "moment order must be >= 1; n = 0 diverges".into(),
            ));
        }
        Ok(Self { n, side })
    }

    /// Evaluates the moment, which equals `(-1)^(n+1) b_n > 0`.
    pub fn evaluate(&self, rel_tol: f64) -> Result<IntegralResult> {
        let n = f64::from(self.n);
        match self.side {
            MomentSide::HalfLineWeight => {
                // t = 1 + e^w: e^w / t^n = exp(w - n ln(1 + e^w))
                integrate_line(
                    move |w| (w - n * softplus(w)).exp() / (w * w + PI_SQ),
                    rel_tol,
                )
            }
            MomentSide::UnitInterval => {
                // s = 1 / (1 + e^-v): ln s = -softplus(-v), ln(1 - s) = -softplus(v),
                // ln(1/s - 1) = -v and ds = s (1 - s) dv.
                integrate_line(
                    move |v| {
                        let log_s = -softplus(-v);
                        let log_one_minus_s = -softplus(v);
                        ((n - 1.0) * log_s + log_one_minus_s).exp() / (v * v + PI_SQ)
                    },
                    rel_tol,
                )
            }
        }
    }
}

fn integrate_line(f: impl Fn(f64) -> f64, rel_tol: f64) -> Result<IntegralResult> {
    let task = IntegralTask::new(f, Domain::WholeLine).with_tolerances(rel_tol, DEFAULT_ABS_TOL);
    integrate(&task)
}

/// `(-1)^(n+1) b_n` by quadrature of the half-line moment.
pub fn bk2_via_integral(n: u32, rel_tol: f64) -> Result<IntegralResult> {
    MomentRequest::new(n, MomentSide::HalfLineWeight)?.evaluate(rel_tol)
}

/// The same moment after `t = 1 / s`, as an integral over `(0, 1)`.
pub fn moment_unit_interval(n: u32, rel_tol: f64) -> Result<IntegralResult> {
    MomentRequest::new(n, MomentSide::UnitInterval)?.evaluate(rel_tol)
}

/// `∫_1^inf rho(t) / t dt = F(0+) = 1`.
///
/// In the `w` coordinate the integrand is `1 / (w^2 + pi^2)`. The quadrature
/// is requested at `tolerance / 100`, floored at the engine default.
pub fn total_mass_identity(tolerance: f64) -> Result<VerificationRecord> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(Error::Argument(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let rel = (0.01 * tolerance).max(DEFAULT_REL_TOL);
    let r = integrate_line(|w| 1.0 / (w * w + PI_SQ), rel)?;
    Ok(VerificationRecord::numeric(
        "mass_total",
        1.0,
        r.value,
        tolerance,
        TolerancePolicy::Absolute,
        "int_1^inf rho(t)/t dt = lim_{x->0+} x/((1+x)ln(1+x)) = 1",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{bk2_recurrence, ExactRational};
    use crate::quad::Transform;
    use std::f64::consts::E;

    fn signed_exact(n: usize) -> f64 {
        let b = bk2_recurrence(n).values()[n].clone();
        let v: ExactRational = if n % 2 == 1 { b } else { -b };
        v.to_f64()
    }

    #[test]
    fn density_closed_forms() {
        assert!((density_rho(2.0).unwrap() - 2.0 / PI_SQ).abs() < 1e-16);
        let t = 1.0 + E;
        let expect = (1.0 + E) / (E * (1.0 + PI_SQ));
        assert!((density_rho(t).unwrap() - expect).abs() < 1e-15 * expect);
        // t = 10: ln 9 = 2 ln 3
        let l9 = 2.0 * 3f64.ln();
        let expect = 10.0 / (9.0 * (l9 * l9 + PI_SQ));
        assert!((density_rho(10.0).unwrap() - expect).abs() < 1e-15 * expect);
    }

    #[test]
    fn density_domain() {
        assert!(matches!(density_rho(1.0), Err(Error::Domain(_))));
        assert!(density_rho(0.5).is_err());
        assert!(density_rho(f64::NAN).is_err());
        assert!(density_rho(f64::INFINITY).is_err());
    }

    #[test]
    fn density_positive_on_log_grid() {
        let lo = 1e-12f64.ln();
        let hi = (1e12f64 - 1.0).ln();
        for i in 0..10_000 {
            let t = 1.0 + (lo + (hi - lo) * i as f64 / 9_999.0).exp();
            let rho = density_rho(t).unwrap();
            assert!(rho > 0.0 && rho.is_finite(), "t = {t}");
        }
    }

    #[test]
    fn grid_hits_two() {
        let g = density_grid(1.5, 3.0, 3).unwrap();
        assert_eq!(g[0].t, 1.5);
        assert_eq!(g[1].t, 2.0);
        assert_eq!(g[2].t, 3.0);
        assert!((g[1].rho - 2.0 / PI_SQ).abs() < 1e-16);
        assert!(density_grid(1.0, 3.0, 3).is_err());
        assert!(density_grid(2.0, 3.0, 1).is_err());
    }

    #[test]
    fn listed_moments() {
        let r = bk2_via_integral(1, 1e-12).unwrap();
        assert!(r.converged);
        assert!((r.value - 0.5).abs() < 1e-12, "{r:?}");
        let r = bk2_via_integral(4, 1e-12).unwrap();
        assert!((r.value - 19.0 / 720.0).abs() < 1e-13, "{r:?}");
        let r = moment_unit_interval(2, 1e-12).unwrap();
        assert!((r.value - 1.0 / 12.0).abs() < 1e-13, "{r:?}");
        let r = moment_unit_interval(1, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn moment_twenty_matches_exact() {
        let exact = signed_exact(20);
        let r = bk2_via_integral(20, 1e-12).unwrap();
        assert!(
            ((r.value - exact) / exact).abs() <= 1e-10,
            "{} vs {}",
            r.value,
            exact
        );
    }

    #[test]
    fn order_zero_rejected() {
        assert!(matches!(
            bk2_via_integral(0, 1e-12),
            Err(Error::Argument(_))
        ));
        assert!(moment_unit_interval(0, 1e-12).is_err());
    }

    #[test]
    fn unit_interval_integrand_at_half() {
        // s = 1/2 is v = 0: s^(n-2) / pi^2 with n = 2
        let s: f64 = 0.5;
        let direct = 1.0 / ((1.0 / s - 1.0).ln().powi(2) + PI_SQ);
        assert!((direct - 1.0 / PI_SQ).abs() < 1e-16);
    }

    #[test]
    fn moments_decrease() {
        let vals: Vec<f64> = (1..=20)
            .map(|n| bk2_via_integral(n, 1e-12).unwrap().value)
            .collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn mass_identity() {
        let r = total_mass_identity(1e-10).unwrap();
        assert!(r.passed, "{r:?}");
        let r = total_mass_identity(1e-12).unwrap();
        assert!(r.passed, "{r:?}");
    }

    /// Direct t-space quadrature on (1 + delta, T) with analytic tail
    /// majorants agrees with the whole-line evaluation.
    #[test]
    fn direct_and_transformed_routes_agree() {
        for n in [2u32, 3, 5] {
            let nf = f64::from(n);
            let delta: f64 = 1e-10;
            let upper: f64 = 1e6;
            let direct = IntegralTask::new(
                move |t: f64| {
                    let lg = (t - 1.0).ln();
                    1.0 / ((lg * lg + PI_SQ) * t.powf(nf))
                },
                Domain::Finite {
                    lo: 1.0 + delta,
                    hi: upper,
                },
            )
            .with_tolerances(1e-12, 1e-15);
            let direct = integrate(&direct).unwrap();
            // integrand <= 1/pi^2 near t = 1 and <= t^-n / ln^2(T-1) beyond T
            let lower_tail = delta / PI_SQ;
            let lu = (upper - 1.0).ln();
            let upper_tail = 1.0 / ((nf - 1.0) * upper.powf(nf - 1.0) * (lu * lu + PI_SQ));
            let line = bk2_via_integral(n, 1e-12).unwrap();
            let gap = (line.value - direct.value).abs();
            let budget = lower_tail + upper_tail + line.error_estimate + direct.error_estimate;
            assert!(gap <= budget, "n={n}: gap {gap:e} > {budget:e}");
        }
    }

    /// The engine's generic exp-shift path agrees with the hand-written
    /// whole-line integrand.
    #[test]
    fn engine_exp_shift_matches() {
        for n in [2u32, 6] {
            let nf = f64::from(n);
            let task = IntegralTask::new(
                move |t: f64| {
                    let lg = (t - 1.0).ln();
                    1.0 / ((lg * lg + PI_SQ) * t.powf(nf))
                },
                Domain::SemiInfiniteFrom(1.0),
            )
            .with_transform(Transform::ExpShiftAtLowerEndpoint);
            let generic = integrate(&task).unwrap();
            let exact = signed_exact(n as usize);
            assert!(
                ((generic.value - exact) / exact).abs() < 1e-10,
                "n={n} {generic:?}"
            );
        }
    }
}
