//! Adaptive one-dimensional quadrature.
//!
//! Global adaptive bisection driven by a 10/21-point Gauss-Kronrod pair.
//! Infinite domains are compactified onto `[-1, 1]` (or `[0, 1]`) by
//! `x = u / (1 - |u|)`, so algebraically decaying tails need no truncation.
//! The optional [`Transform`] is applied first and turns an endpoint
//! singularity into a smooth whole-line integrand.

mod rule;
mod transform;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

pub use transform::{
    logistic, moment_tail_bounds, moment_truncation_window, softplus, transform_semi_infinite_log,
    ExpShift, LogisticMap,
};

use crate::error::{Error, Result};
use rule::{gk21, NODES_PER_SEGMENT};

pub const DEFAULT_REL_TOL: f64 = 1e-12;
pub const DEFAULT_ABS_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_EVALS: usize = 200_000;
pub const MIN_MAX_EVALS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite { lo: f64, hi: f64 },
    SemiInfiniteFrom(f64),
    WholeLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Transform {
    #[default]
    None,
    /// `t = lo + e^w`; valid with [`Domain::SemiInfiniteFrom`].
    ExpShiftAtLowerEndpoint,
    /// `x = lo + (hi - lo) / (1 + e^-w)`; valid with [`Domain::Finite`].
    LogisticToLine,
}

/// An integrand over its original coordinate plus domain, substitution and budget.
#[derive(Clone)]
pub struct IntegralTask<F> {
    pub integrand: F,
    pub domain: Domain,
    pub transform: Transform,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
}

impl<F: Fn(f64) -> f64> IntegralTask<F> {
    pub fn new(integrand: F, domain: Domain) -> Self {
        Self {
            integrand,
            domain,
            transform: Transform::None,
            rel_tol: DEFAULT_REL_TOL,
            abs_tol: DEFAULT_ABS_TOL,
            max_evals: DEFAULT_MAX_EVALS,
        }
    }

    pub fn with_transform(mut self, transform: Transform) -> Self {
        self.transform = transform;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_evals(mut self, max_evals: usize) -> Self {
        self.max_evals = max_evals;
        self
    }

    fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.rel_tol) || !positive(self.abs_tol) {
            return Err(Error::InvalidTask(format!(
                "tolerances must be positive and finite (rel {}, abs {})",
                self.rel_tol, self.abs_tol
            )));
        }
        if self.max_evals < MIN_MAX_EVALS {
            return Err(Error::InvalidTask(format!(
                "max_evals must be at least {MIN_MAX_EVALS}, got {}",
                self.max_evals
            )));
        }
        match self.domain {
            Domain::Finite { lo, hi } if !(lo.is_finite() && hi.is_finite() && lo < hi) => {
                return Err(Error::InvalidTask(format!(
                    "finite domain needs lo < hi, got [{lo}, {hi}]"
                )));
            }
            Domain::SemiInfiniteFrom(lo) if !lo.is_finite() => {
                return Err(Error::InvalidTask(format!(
                    "semi-infinite domain needs finite lo, got {lo}"
                )));
            }
            _ => {}
        }
        match (self.transform, self.domain) {
            (Transform::None, _)
            | (Transform::ExpShiftAtLowerEndpoint, Domain::SemiInfiniteFrom(_))
            | (Transform::LogisticToLine, Domain::Finite { .. }) => Ok(()),
            (t, d) => Err(Error::InvalidTask(format!(
                "transform {t:?} does not apply to {d:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// How an abscissa `u` of the finite working interval reaches the original coordinate.
#[derive(Debug, Clone, Copy)]
enum Plan {
    Finite,
    /// `x = lo + u / (1 - u)` on `[0, 1]`
    HalfLine {
        lo: f64,
    },
    /// `w = u / (1 - |u|)` on `[-1, 1]`, then the substitution back to `x`.
    Line(LineMap),
}

#[derive(Debug, Clone, Copy)]
enum LineMap {
    Identity,
    Exp(ExpShift),
    Logistic(LogisticMap),
}

impl Plan {
    fn of(domain: Domain, transform: Transform) -> Self {
        match (domain, transform) {
            (Domain::Finite { .. }, Transform::None) => Plan::Finite,
            (Domain::Finite { lo, hi }, Transform::LogisticToLine) => {
                Plan::Line(LineMap::Logistic(LogisticMap { lo, hi }))
            }
            (Domain::SemiInfiniteFrom(lo), Transform::None) => Plan::HalfLine { lo },
            (Domain::SemiInfiniteFrom(lo), Transform::ExpShiftAtLowerEndpoint) => {
                Plan::Line(LineMap::Exp(ExpShift { lo }))
            }
            (Domain::WholeLine, _) => Plan::Line(LineMap::Identity),
            _ => unreachable!("validated"),
        }
    }

    fn working_segments(&self, domain: Domain) -> Vec<(f64, f64)> {
        match (self, domain) {
            (Plan::Finite, Domain::Finite { lo, hi }) => vec![(lo, hi)],
            (Plan::HalfLine { .. }, _) => vec![(0.0, 1.0)],
            // the compactifying map has a curvature jump at u = 0
            _ => vec![(-1.0, 0.0), (0.0, 1.0)],
        }
    }

    /// `(x, jacobian)` for a working abscissa, or `None` where the node sits at
    /// the compactified infinity or the Jacobian underflows; such nodes
    /// contribute zero and the integrand is not called.
    fn node(&self, u: f64) -> Option<(f64, f64)> {
        match *self {
            Plan::Finite => Some((u, 1.0)),
            Plan::HalfLine { lo } => {
                let gap = 1.0 - u;
                (gap > 0.0).then(|| (lo + u / gap, 1.0 / (gap * gap)))
            }
            Plan::Line(map) => {
                let gap = 1.0 - u.abs();
                if gap <= 0.0 {
                    return None;
                }
                let w = u / gap;
                let dw = 1.0 / (gap * gap);
                let (x, jac) = match map {
                    LineMap::Identity => (w, 1.0),
                    LineMap::Exp(m) => (m.to_original(w), m.jacobian(w)),
                    LineMap::Logistic(m) => (m.to_original(w), m.jacobian(w)),
                };
                (jac > 0.0).then_some((x, jac * dw))
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn too_narrow(a: f64, b: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    (b - a) <= 1000.0 * f64::EPSILON * scale
}

/// Integrates `task`, bisecting the segment with the largest error estimate
/// until the summed estimate meets `max(abs_tol, rel_tol |value|)` or the
/// evaluation budget runs out (then `converged` is false and the best
/// estimate is returned).
pub fn integrate<F: Fn(f64) -> f64>(task: &IntegralTask<F>) -> Result<IntegralResult> {
    task.validate()?;
    let plan = Plan::of(task.domain, task.transform);

    let mut g = |u: f64| -> Result<f64> {
        let Some((x, jac)) = plan.node(u) else {
            return Ok(0.0);
        };
        let v = (task.integrand)(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand {
                abscissa: x,
                value: v,
            });
        }
        if v == 0.0 {
            return Ok(0.0);
        }
        let weighted = v * jac;
        if !weighted.is_finite() {
            return Err(Error::NonFiniteIntegrand {
                abscissa: x,
                value: weighted,
            });
        }
        Ok(weighted)
    };

    let target = |value: f64| task.abs_tol.max(task.rel_tol * value.abs());

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    let mut evaluations = 0;
    for (a, b) in plan.working_segments(task.domain) {
        let est = gk21(&mut g, a, b)?;
        evaluations += NODES_PER_SEGMENT;
        heap.push(Segment {
            a,
            b,
            value: est.value,
            error: est.error,
        });
    }

    let mut value: f64 = heap.iter().map(|s| s.value).sum();
    let mut error: f64 = heap.iter().map(|s| s.error).sum();
    let mut iterations = 0usize;

    while error > target(value) && evaluations + 2 * NODES_PER_SEGMENT <= task.max_evals {
        let Some(worst) = heap.pop() else { break };
        if too_narrow(worst.a, worst.b) {
            frozen.push(worst);
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk21(&mut g, worst.a, mid)?;
        let right = gk21(&mut g, mid, worst.b)?;
        evaluations += 2 * NODES_PER_SEGMENT;

        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: left.value,
            error: left.error,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: right.value,
            error: right.error,
        });

        iterations += 1;
        if iterations.is_multiple_of(64) {
            // resynchronize running sums
            value = heap.iter().chain(&frozen).map(|s| s.value).sum();
            error = heap.iter().chain(&frozen).map(|s| s.error).sum();
        }
    }

    let mut segments: Vec<Segment> = heap.into_iter().chain(frozen).collect();
    segments.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value: f64 = segments.iter().map(|s| s.value).sum();
    let error_estimate: f64 = segments.iter().map(|s| s.error).sum();

    Ok(IntegralResult {
        value,
        error_estimate,
        evaluations,
        converged: error_estimate <= target(value),
    })
}
