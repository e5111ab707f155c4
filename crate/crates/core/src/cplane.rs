//! `F(z) = z / ((1 + z) Log(1 + z))` on the cut plane `C \ (-inf, 0]`, its
//! Stieltjes integral
//!
//! ```text
//! F(z) = ∫_1^inf rho(t) / (z + t) dt,   rho(t) = t / ((t - 1)([ln(t-1)]^2 + pi^2))
//! ```
//!
//! and the probes that check its boundary values, its decay at infinity and
//! the vanishing of `z F(z)` at the origin.

use std::f64::consts::{FRAC_PI_2, PI};

use num::complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::density_rho;
use crate::quad::{integrate, logistic, softplus, Domain, IntegralTask, DEFAULT_ABS_TOL};

pub type ComplexPoint = Complex64;

const PI_SQ: f64 = PI * PI;

/// `z` is finite and not on `(-inf, 0]`.
pub fn in_cut_plane(z: ComplexPoint) -> bool {
    z.re.is_finite() && z.im.is_finite() && !(z.im == 0.0 && z.re <= 0.0)
}

/// Principal `Log(1 + z)`, accurate for small `|z|`.
pub fn ln_1p(z: ComplexPoint) -> ComplexPoint {
    let (x, y) = (z.re, z.im);
    let arg = y.atan2(1.0 + x);
    let modulus_log = if z.norm() < 0.5 {
        // |1 + z|^2 - 1 = 2x + x^2 + y^2
        0.5 * (x * (2.0 + x) + y * y).ln_1p()
    } else {
        (1.0 + x).hypot(y).ln()
    };
    Complex64::new(modulus_log, arg)
}

/// Direct formula. `z = 0` returns the removable-singularity value 1.
pub fn f_direct(z: ComplexPoint) -> Result<ComplexPoint> {
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if !in_cut_plane(z) {
        return Err(Error::Domain(format!(
            "{z} is not in the cut plane C \\ (-inf, 0]"
        )));
    }
    Ok(z / ((1.0 + z) * ln_1p(z)))
}

/// Result of a complex quadrature: two real integrals, one per component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexQuadrature {
    pub value: ComplexPoint,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// `∫_1^inf rho(t) / (z + t) dt` with `t = 1 + e^w`, where
/// `rho(t) dt / (z + t) = dw / ((w^2 + pi^2)(1 + z / (1 + e^w)))`.
/// `z = 0` is allowed and gives the total mass.
pub fn f_via_representation(z: ComplexPoint, rel_tol: f64) -> Result<ComplexQuadrature> {
    if !(in_cut_plane(z) || (z.re == 0.0 && z.im == 0.0)) {
        return Err(Error::Domain(format!(
            "{z} is not in the cut plane C \\ (-inf, 0]"
        )));
    }
    // q(w) = 1 / (a + i b) with a = 1 + Re z / (1 + e^w), b = Im z / (1 + e^w)
    let parts = move |w: f64| {
        let s = logistic(-w);
        let a = 1.0 + z.re * s;
        let b = z.im * s;
        let d = (a * a + b * b) * (w * w + PI_SQ);
        (a / d, -b / d)
    };
    let re = integrate(
        &IntegralTask::new(move |w| parts(w).0, Domain::WholeLine)
            .with_tolerances(rel_tol, DEFAULT_ABS_TOL),
    )?;
    let im = integrate(
        &IntegralTask::new(move |w| parts(w).1, Domain::WholeLine)
            .with_tolerances(rel_tol, DEFAULT_ABS_TOL),
    )?;
    Ok(ComplexQuadrature {
        value: Complex64::new(re.value, im.value),
        error_estimate: re.error_estimate.hypot(im.error_estimate),
        evaluations: re.evaluations + im.evaluations,
        converged: re.converged && im.converged,
    })
}

/// `1 / x + ∫_1^inf dt / (([ln(t-1)]^2 + pi^2)(x + t))`, which equals `1 / ln(1 + x)`.
pub fn reciprocal_log_representation(x: f64, rel_tol: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!(
            "x must be positive and finite, got {x}"
        )));
    }
    let shift = 1.0 + x;
    // e^w dw / ((w^2 + pi^2)(x + 1 + e^w))
    let integrand = move |w: f64| {
        let ratio = if w > 0.0 {
            1.0 / (1.0 + shift * (-w).exp())
        } else {
            let e = w.exp();
            e / (shift + e)
        };
        ratio / (w * w + PI_SQ)
    };
    let r = integrate(
        &IntegralTask::new(integrand, Domain::WholeLine).with_tolerances(rel_tol, DEFAULT_ABS_TOL),
    )?;
    Ok(1.0 / x + r.value)
}

pub const MAX_DERIVATIVE_ORDER: u32 = 8;

/// `d^k/dx^k [x / ln(1 + x)] = (-1)^(k+1) k! ∫_1^inf t / ([ln(t-1)]^2 + pi^2) (x + t)^-(k+1) dt`.
pub fn kth_derivative_via_integral(x: f64, k: u32, rel_tol: f64) -> Result<f64> {
    if !(1..=MAX_DERIVATIVE_ORDER).contains(&k) {
        return Err(Error::Argument(format!(
            "derivative order must be in 1..={MAX_DERIVATIVE_ORDER}, got {k}"
        )));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!(
            "x must be positive and finite, got {x}"
        )));
    }
    let log_shift = x.ln_1p();
    let power = f64::from(k + 1);
    // t = 1 + e^w: t dt / (x + t)^(k+1) = exp(ln t + w - (k+1) ln(x + 1 + e^w)) dw
    let integrand = move |w: f64| {
        let log_t = softplus(w);
        let log_x_plus_t = log_add_exp(log_shift, w);
        (log_t + w - power * log_x_plus_t).exp() / (w * w + PI_SQ)
    };
    let r = integrate(
        &IntegralTask::new(integrand, Domain::WholeLine).with_tolerances(rel_tol, DEFAULT_ABS_TOL),
    )?;
    let factorial: f64 = (1..=k).map(f64::from).product();
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    Ok(sign * factorial * r.value)
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    hi + (-(a - b).abs()).exp().ln_1p()
}

/// A point `-t + i epsilon` just above the cut.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryProbe {
    t: f64,
    epsilon: f64,
}

impl BoundaryProbe {
    pub fn new(t: f64, epsilon: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Argument(format!("t must be positive, got {t}")));
        }
        if t == 1.0 {
            return Err(Error::Argument(
                "t = 1: the boundary limit is infinite".into(),
            ));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Argument(format!(
                "epsilon must lie in (0, 1), got {epsilon}"
            )));
        }
        Ok(Self { t, epsilon })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// `Im F(-t + i epsilon)`.
pub fn boundary_imaginary_limit(probe: BoundaryProbe) -> Result<f64> {
    Ok(f_direct(Complex64::new(-probe.t, probe.epsilon))?.im)
}

/// `lim_{eps->0+} Im F(-t + i eps)`: 0 on `(0, 1)`, `-pi rho(t)` beyond 1.
pub fn boundary_limit_closed_form(t: f64) -> Result<f64> {
    match t {
        t if t > 0.0 && t < 1.0 => Ok(0.0),
        t if t > 1.0 => {
            let lg = (t - 1.0).ln();
            Ok(-PI * t / ((t - 1.0) * (lg * lg + PI_SQ)))
        }
        _ => Err(Error::Argument(format!(
            "no finite boundary limit at t = {t}"
        ))),
    }
}

/// Sokhotski form of the boundary limit: `-pi rho(t)`.
pub fn boundary_limit_from_density(t: f64) -> Result<f64> {
    Ok(-PI * density_rho(t)?)
}

/// `r / ((r - 1) ln(r - 1))`, an upper bound for `|F(r e^{i theta})|`.
pub fn decay_bound(r: f64) -> f64 {
    r / ((r - 1.0) * (r - 1.0).ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DecayProbe {
    pub radius: f64,
    pub max_modulus: f64,
    pub bound: f64,
}

impl DecayProbe {
    pub fn within_bound(&self) -> bool {
        self.max_modulus <= self.bound
    }
}

/// Largest `|F(r e^{i theta})|` over the angle grid.
pub fn decay_at_infinity_probe(r: f64, theta_grid: &[f64]) -> Result<DecayProbe> {
    if !(r > 2.0 && r.is_finite()) {
        return Err(Error::Argument(format!("radius must exceed 2, got {r}")));
    }
    if theta_grid.is_empty() {
        return Err(Error::Argument("empty angle grid".into()));
    }
    let mut max_modulus: f64 = 0.0;
    for &theta in theta_grid {
        if !(theta > -PI && theta < PI) {
            return Err(Error::Argument(format!("angle {theta} outside (-pi, pi)")));
        }
        max_modulus = max_modulus.max(f_direct(Complex64::from_polar(r, theta))?.norm());
    }
    Ok(DecayProbe {
        radius: r,
        max_modulus,
        bound: decay_bound(r),
    })
}

/// `n` angles evenly spaced strictly inside `(-pi, pi)`.
pub fn open_angle_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| -PI + 2.0 * PI * (i as f64 + 0.5) / n as f64)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SmallZRow {
    pub epsilon: f64,
    pub max_modulus: f64,
    /// `10 epsilon / |ln epsilon|`, reported for comparison only.
    pub envelope: f64,
}

/// Largest `|z F(z)|` on the half circle `z = epsilon e^{i theta}` for each epsilon.
pub fn small_z_vanishing_probe(eps_grid: &[f64], theta_grid: &[f64]) -> Result<Vec<SmallZRow>> {
    if eps_grid.is_empty() || theta_grid.is_empty() {
        return Err(Error::Argument("grids must be nonempty".into()));
    }
    if eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Argument(
            "epsilon grid must be strictly decreasing".into(),
        ));
    }
    if let Some(bad) = eps_grid.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(Error::Argument(format!("epsilon {bad} outside (0, 1)")));
    }
    if let Some(bad) = theta_grid
        .iter()
        .find(|t| t.is_nan() || t.abs() > FRAC_PI_2)
    {
        return Err(Error::Argument(format!(
            "angle {bad} outside [-pi/2, pi/2]"
        )));
    }
    eps_grid
        .iter()
        .map(|&epsilon| {
            let mut max_modulus: f64 = 0.0;
            for &theta in theta_grid {
                let z = Complex64::from_polar(epsilon, theta);
                max_modulus = max_modulus.max((z * f_direct(z)?).norm());
            }
            Ok(SmallZRow {
                epsilon,
                max_modulus,
                envelope: 10.0 * epsilon / epsilon.ln().abs(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::bk2_recurrence;
    use std::f64::consts::{E, FRAC_PI_4, LN_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn direct_values() {
        let v = f_direct(c(1.0, 0.0)).unwrap();
        assert!((v.re - 1.0 / (2.0 * LN_2)).abs() < 1e-15 && v.im == 0.0);
        assert_eq!(f_direct(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));

        // z = i: i / ((1 + i)(ln sqrt 2 + i pi/4)), evaluated by hand-expanded arithmetic
        let (lr, li) = (0.5 * LN_2, FRAC_PI_4);
        // (1 + i)(lr + i li) = (lr - li) + i (lr + li)
        let (dr, di) = (lr - li, lr + li);
        let den = dr * dr + di * di;
        // i / (dr + i di) = (di + i dr) / den
        let expect = c(di / den, dr / den);
        let got = f_direct(c(0.0, 1.0)).unwrap();
        assert!((got - expect).norm() < 1e-15);
        assert!((got.re - 0.767_997_13).abs() < 1e-8 && (got.im + 0.297_724_76).abs() < 1e-8);
    }

    #[test]
    fn direct_rejects_cut() {
        for z in [c(-1.0, 0.0), c(-0.5, 0.0), c(-3.0, -0.0), c(f64::NAN, 1.0)] {
            assert!(matches!(f_direct(z), Err(Error::Domain(_))), "{z}");
        }
        assert!(f_direct(c(-1.0, 1e-300)).is_ok());
    }

    #[test]
    fn small_argument_log_is_accurate() {
        let z = c(1e-10, 2e-10);
        let got = ln_1p(z);
        // series z - z^2/2
        let expect = z - z * z / 2.0;
        assert!((got - expect).norm() < 1e-25);
        let v = f_direct(z).unwrap();
        // F(z) = 1 - z/2 + O(z^2)... to first order
        assert!((v - (1.0 - 0.5 * z)).norm() < 1e-18);
    }

    #[test]
    fn representation_matches_direct() {
        for z in [c(1.0, 0.0), c(-0.5, 0.5), c(0.0, 1.0), c(3.0, -7.0)] {
            let rep = f_via_representation(z, 1e-12).unwrap();
            let direct = f_direct(z).unwrap();
            assert!(rep.converged);
            assert!(
                (rep.value - direct).norm() <= 1e-8,
                "{z}: {} vs {}",
                rep.value,
                direct
            );
        }
        let mass = f_via_representation(c(0.0, 0.0), 1e-12).unwrap();
        assert!((mass.value - 1.0).norm() < 1e-12);
        assert!(f_via_representation(c(-2.0, 0.0), 1e-12).is_err());
    }

    #[test]
    fn reciprocal_log_values() {
        let v = reciprocal_log_representation(1.0, 1e-12).unwrap();
        assert!((v - 1.0 / LN_2).abs() < 1e-10);
        let v = reciprocal_log_representation(E - 1.0, 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let v = reciprocal_log_representation(0.5, 1e-12).unwrap();
        assert!((v - 1.0 / 1.5f64.ln()).abs() < 1e-10);
        assert!(reciprocal_log_representation(0.0, 1e-12).is_err());
    }

    #[test]
    fn first_derivative_closed_form() {
        let v = kth_derivative_via_integral(1.0, 1, 1e-12).unwrap();
        let expect = (LN_2 - 0.5) / (LN_2 * LN_2);
        assert!((v - expect).abs() < 1e-11, "{v} vs {expect}");
    }

    #[test]
    fn derivative_vs_finite_difference() {
        let g = |x: f64| x / x.ln_1p();
        let h = 1e-3;
        for x in [0.5, 1.0, 2.0] {
            let d1 = (g(x + h) - g(x - h)) / (2.0 * h);
            let d2 = (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
            let i1 = kth_derivative_via_integral(x, 1, 1e-12).unwrap();
            let i2 = kth_derivative_via_integral(x, 2, 1e-12).unwrap();
            assert!(((i1 - d1) / d1).abs() < 1e-5, "x={x} k=1");
            assert!(((i2 - d2) / d2).abs() < 1e-5, "x={x} k=2");
        }
    }

    #[test]
    fn derivative_vs_exact_series() {
        // sum_{n>=k} b_n n!/(n-k)! x^(n-k); |b_n| <= 1/2 bounds the remainder
        let b = bk2_recurrence(40);
        let x: f64 = 0.01;
        for k in 1..=4u32 {
            let ku = k as usize;
            let mut series = 0.0;
            let top = ku + 12;
            for n in ku..=top {
                let falling: f64 = ((n - ku + 1)..=n).map(|v| v as f64).product();
                series += b.values()[n].to_f64() * falling * x.powi((n - ku) as i32);
            }
            let remainder: f64 = ((top + 1)..=(top + 40))
                .map(|n| {
                    let falling: f64 = ((n - ku + 1)..=n).map(|v| v as f64).product();
                    0.5 * falling * x.powi((n - ku) as i32)
                })
                .sum();
            assert!(remainder < 1e-12);
            let v = kth_derivative_via_integral(x, k, 1e-12).unwrap();
            assert!(
                (v - series).abs() < 1e-6 + remainder,
                "k={k}: {v} vs {series}"
            );
        }
    }

    #[test]
    fn derivative_at_small_x_recovers_coefficients() {
        let b = bk2_recurrence(4);
        for k in 1..=4u32 {
            let factorial: f64 = (1..=k).map(f64::from).product();
            let target = factorial * b.values()[k as usize].to_f64();
            let v = kth_derivative_via_integral(1e-6, k, 1e-12).unwrap();
            assert!(((v - target) / target).abs() < 1e-4, "k={k}");
        }
    }

    #[test]
    fn derivative_order_bounds() {
        assert!(matches!(
            kth_derivative_via_integral(1.0, 0, 1e-12),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            kth_derivative_via_integral(1.0, 9, 1e-12),
            Err(Error::Argument(_))
        ));
        assert!(kth_derivative_via_integral(1.0, 8, 1e-12).is_ok());
        assert!(kth_derivative_via_integral(-1.0, 2, 1e-12).is_err());
    }

    #[test]
    fn boundary_limits() {
        let v = boundary_imaginary_limit(BoundaryProbe::new(2.0, 1e-6).unwrap()).unwrap();
        assert!((v + 2.0 / PI).abs() < 1e-4 * 2.0 / PI);
        let v = boundary_imaginary_limit(BoundaryProbe::new(0.5, 1e-6).unwrap()).unwrap();
        assert!(v.abs() < 1e-5);
        let v = boundary_imaginary_limit(BoundaryProbe::new(5.0, 1e-6).unwrap()).unwrap();
        let l4 = 4f64.ln();
        let expect = -PI * 5.0 / (4.0 * (l4 * l4 + PI_SQ));
        assert!(((v - expect) / expect).abs() < 1e-4);
    }

    #[test]
    fn boundary_probe_validation() {
        assert!(BoundaryProbe::new(1.0, 1e-6).is_err());
        assert!(BoundaryProbe::new(-1.0, 1e-6).is_err());
        assert!(BoundaryProbe::new(2.0, 0.0).is_err());
        assert!(BoundaryProbe::new(2.0, 1.0).is_err());
        assert!(boundary_limit_closed_form(1.0).is_err());
    }

    #[test]
    fn closed_form_equals_minus_pi_rho() {
        for t in [1.5, 2.0, 5.0, 10.0, 1e4] {
            let a = boundary_limit_closed_form(t).unwrap();
            let b = boundary_limit_from_density(t).unwrap();
            assert!((a - b).abs() <= 1e-15 * a.abs());
        }
    }

    #[test]
    fn decay_probe() {
        let grid = open_angle_grid(100);
        let p3 = decay_at_infinity_probe(1e3, &grid).unwrap();
        assert!(p3.within_bound());
        assert!((p3.bound - 1000.0 / (999.0 * 999f64.ln())).abs() < 1e-15);
        let p6 = decay_at_infinity_probe(1e6, &grid).unwrap();
        assert!(p6.within_bound());
        assert!((p6.bound - 7.24e-2).abs() < 1e-4);
        assert!(p6.max_modulus < p3.max_modulus);
        assert!(decay_at_infinity_probe(2.0, &grid).is_err());
        assert!(decay_at_infinity_probe(10.0, &[PI]).is_err());
    }

    #[test]
    fn small_z_probe() {
        let rows = small_z_vanishing_probe(&[0.1], &[0.0]).unwrap();
        let expect = 0.01 / (1.1 * 1.1f64.ln());
        assert!((rows[0].max_modulus - expect).abs() < 1e-14);
        assert!((expect - 0.09538).abs() < 1e-5);

        let thetas: Vec<f64> = (0..=20)
            .map(|i| -FRAC_PI_2 + PI * i as f64 / 20.0)
            .collect();
        let rows = small_z_vanishing_probe(&[0.1, 0.01, 0.001], &thetas).unwrap();
        assert!(rows.windows(2).all(|w| w[1].max_modulus < w[0].max_modulus));

        let rows = small_z_vanishing_probe(&[0.01], &[FRAC_PI_2, -FRAC_PI_2]).unwrap();
        assert!(((rows[0].max_modulus - 0.01) / 0.01).abs() < 0.01);

        assert!(small_z_vanishing_probe(&[0.01, 0.1], &[0.0]).is_err());
        assert!(small_z_vanishing_probe(&[0.1], &[2.0]).is_err());
        assert!(small_z_vanishing_probe(&[], &[0.0]).is_err());
    }
}
