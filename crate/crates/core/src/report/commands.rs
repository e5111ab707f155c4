use std::io;

use num::complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use super::battery::{checks, Settings};
use super::config::{OutputFormat, RunConfig};
use super::emit::{csv_document, json_document};
use crate::cplane::{f_direct, f_via_representation};
use crate::exact::{
    alternating_sequence, bk2_recurrence, certify_cm, difference_table, CmCertificate,
    ExactRational,
};
use crate::measure::{bk2_via_integral, density_grid, DensitySample};
use crate::quad::DEFAULT_REL_TOL;
use crate::record::{fmt_f64, TolerancePolicy, VerificationRecord};

/// Pass threshold for `eval-f`.
pub const EVAL_F_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub body: String,
    pub outcome: Outcome,
}

fn pool(config: &RunConfig) -> Result<rayon::ThreadPool, CommandError> {
    if config.parallelism == 0 {
        return Err(CommandError::Usage("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| {
            CommandError::Usage(format!(
                "cannot start {} worker threads: {e}",
                config.parallelism
            ))
        })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Bk2Row {
    pub n: usize,
    pub exact: String,
    pub decimal: String,
    /// Signed `b_n` from quadrature; absent at `n = 0`.
    pub quadrature: Option<f64>,
    pub abs_diff: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
struct Bk2Summary {
    rows: usize,
    max_rel_diff: f64,
    all_converged: bool,
}

/// Table of `b_0 ..= b_maxN`, exact and by quadrature.
pub fn cmd_bk2(config: &RunConfig) -> Result<CommandOutput, CommandError> {
    let table = bk2_recurrence(config.max_n);
    let quad_tol = (0.01 * config.rel_tol).max(DEFAULT_REL_TOL);
    let quad: Vec<Option<(f64, bool)>> = pool(config)?
        .install(|| {
            (0..=config.max_n)
                .into_par_iter()
                .map(|n| {
                    if n == 0 {
                        return Ok(None);
                    }
                    let r = bk2_via_integral(n as u32, quad_tol)?;
                    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                    Ok(Some((sign * r.value, r.converged)))
                })
                .collect::<crate::Result<Vec<_>>>()
        })
        .map_err(|e| CommandError::Domain(e.to_string()))?;

    let mut max_rel_diff: f64 = 0.0;
    let mut all_converged = true;
    let rows: Vec<Bk2Row> = table
        .values()
        .iter()
        .zip(&quad)
        .enumerate()
        .map(|(n, (b, q))| {
            let exact = b.to_f64();
            let abs_diff = q.map(|(v, converged)| {
                all_converged &= converged;
                let d = (v - exact).abs();
                max_rel_diff = max_rel_diff.max(d / exact.abs());
                d
            });
            Bk2Row {
                n,
                exact: b.to_string(),
                decimal: fmt_f64(exact),
                quadrature: q.map(|(v, _)| v),
                abs_diff,
            }
        })
        .collect();

    let body = match config.output_format {
        OutputFormat::Csv => csv_document(
            &["n", "exact", "decimal", "quadrature", "abs_diff"],
            rows.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    r.exact.clone(),
                    r.decimal.clone(),
                    r.quadrature.map(fmt_f64).unwrap_or_default(),
                    r.abs_diff.map(fmt_f64).unwrap_or_default(),
                ]
            }),
        ),
        OutputFormat::Json => json_document(
            config,
            &rows,
            &Bk2Summary {
                rows: rows.len(),
                max_rel_diff,
                all_converged,
            },
        ),
    };
    Ok(CommandOutput {
        body,
        outcome: Outcome::Pass,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
struct CertificateRow {
    max_index: usize,
    max_order: usize,
    checked: usize,
    holds: bool,
    violation_order: Option<usize>,
    violation_index: Option<usize>,
    violation_value: Option<String>,
}

impl From<&CmCertificate> for CertificateRow {
    fn from(c: &CmCertificate) -> Self {
        Self {
            max_index: c.max_index,
            max_order: c.max_order,
            checked: c.checked,
            holds: c.holds,
            violation_order: c.first_violation.as_ref().map(|v| v.order),
            violation_index: c.first_violation.as_ref().map(|v| v.index),
            violation_value: c.first_violation.as_ref().map(|v| v.value.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct HoldsSummary {
    holds: bool,
}

/// Certificate for `a_n = (-1)^n b_{n+1}`, `n = 0 ..= maxN`, orders `0 ..= maxK`.
///
/// `injected` replaces the sequence (a test hook); its order is capped at
/// `len - 1`.
pub fn cmd_verify_cm(
    config: &RunConfig,
    injected: Option<Vec<ExactRational>>,
) -> Result<CommandOutput, CommandError> {
    let (seq, order) = match injected {
        Some(seq) => {
            if seq.is_empty() {
                return Err(CommandError::Usage("injected sequence is empty".into()));
            }
            let order = config.max_k.min(seq.len() - 1);
            (seq, order)
        }
        None => {
            if config.max_k + 1 > config.max_n {
                return Err(CommandError::Usage(format!(
                    "verify-cm needs max-k + 1 <= max-n (got max-k {}, max-n {})",
                    config.max_k, config.max_n
                )));
            }
            let seq = alternating_sequence(&bk2_recurrence(config.max_n + 1))
                .map_err(|e| CommandError::Usage(e.to_string()))?;
            (seq, config.max_k)
        }
    };
    let table = difference_table(&seq, order).map_err(|e| CommandError::Usage(e.to_string()))?;
    let cert = certify_cm(&table);
    let row = CertificateRow::from(&cert);
    let body = match config.output_format {
        OutputFormat::Csv => csv_document(
            &[
                "max_index",
                "max_order",
                "checked",
                "holds",
                "violation_order",
                "violation_index",
                "violation_value",
            ],
            [vec![
                row.max_index.to_string(),
                row.max_order.to_string(),
                row.checked.to_string(),
                row.holds.to_string(),
                row.violation_order
                    .map(|v| v.to_string())
                    .unwrap_or_default(),
                row.violation_index
                    .map(|v| v.to_string())
                    .unwrap_or_default(),
                row.violation_value.clone().unwrap_or_default(),
            ]],
        ),
        OutputFormat::Json => json_document(
            config,
            std::slice::from_ref(&row),
            &HoldsSummary { holds: cert.holds },
        ),
    };
    let outcome = if cert.holds {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok(CommandOutput { body, outcome })
}

/// Parses `p/q` or integer terms separated by commas.
pub fn parse_sequence(text: &str) -> Result<Vec<ExactRational>, CommandError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|term| {
            let parsed = match term.split_once('/') {
                Some((p, q)) => p
                    .trim()
                    .parse::<i64>()
                    .ok()
                    .zip(q.trim().parse::<i64>().ok()),
                None => term.parse::<i64>().ok().map(|p| (p, 1)),
            };
            parsed
                .and_then(|(p, q)| ExactRational::new(p, q).ok())
                .ok_or_else(|| CommandError::Usage(format!("bad sequence term {term:?}")))
        })
        .collect()
}

const RECORD_HEADER: [&str; 9] = [
    "check_name",
    "expected",
    "computed",
    "abs_error",
    "rel_error",
    "tolerance",
    "policy",
    "passed",
    "anchor",
];

fn policy_name(p: TolerancePolicy) -> &'static str {
    match p {
        TolerancePolicy::Absolute => "absolute",
        TolerancePolicy::Relative => "relative",
        TolerancePolicy::AbsoluteOrRelative => "absolute-or-relative",
        TolerancePolicy::Exact => "exact",
    }
}

fn records_csv(records: &[VerificationRecord]) -> String {
    csv_document(
        &RECORD_HEADER,
        records.iter().map(|r| {
            vec![
                r.check_name.clone(),
                r.expected.clone(),
                r.computed.clone(),
                fmt_f64(r.abs_error),
                fmt_f64(r.rel_error),
                fmt_f64(r.tolerance),
                policy_name(r.policy).to_string(),
                r.passed.to_string(),
                r.anchor.clone(),
            ]
        }),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
}

impl Summary {
    pub fn of(records: &[VerificationRecord]) -> Self {
        let passed = records.iter().filter(|r| r.passed).count();
        Self {
            total: records.len(),
            passed,
            failed: records.len() - passed,
            all_passed: passed == records.len(),
        }
    }
}

fn emit_records(config: &RunConfig, records: &[VerificationRecord]) -> CommandOutput {
    let summary = Summary::of(records);
    let body = match config.output_format {
        OutputFormat::Csv => records_csv(records),
        OutputFormat::Json => json_document(config, records, &summary),
    };
    let outcome = if summary.all_passed {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    CommandOutput { body, outcome }
}

/// Direct value vs. Stieltjes representation at `re + i im`.
pub fn cmd_eval_f(re: f64, im: f64, config: &RunConfig) -> Result<CommandOutput, CommandError> {
    let z = Complex64::new(re, im);
    let direct = f_direct(z).map_err(|e| CommandError::Domain(e.to_string()))?;
    let rep = f_via_representation(z, config.rel_tol.min(DEFAULT_REL_TOL))
        .map_err(|e| CommandError::Domain(e.to_string()))?;
    let record = VerificationRecord::complex(
        format!("eval_f_{re}{im:+}i"),
        (direct.re, direct.im),
        (rep.value.re, rep.value.im),
        EVAL_F_RESIDUAL_TOL,
        TolerancePolicy::Absolute,
        "z/((1+z)Log(1+z)) = int_1^inf rho(t) dt/(z+t)",
    );
    Ok(emit_records(config, &[record]))
}

#[derive(Debug, Clone, Serialize)]
struct DensitySummary {
    points: usize,
    all_positive: bool,
}

/// Log-spaced samples of the density, CSV header `t,rho`.
pub fn cmd_density(
    t_min: f64,
    t_max: f64,
    points: usize,
    config: &RunConfig,
) -> Result<CommandOutput, CommandError> {
    let samples: Vec<DensitySample> =
        density_grid(t_min, t_max, points).map_err(|e| CommandError::Usage(e.to_string()))?;
    let all_positive = samples.iter().all(|s| s.rho > 0.0);
    let body = match config.output_format {
        OutputFormat::Csv => csv_document(
            &["t", "rho"],
            samples.iter().map(|s| vec![fmt_f64(s.t), fmt_f64(s.rho)]),
        ),
        OutputFormat::Json => json_document(
            config,
            &samples,
            &DensitySummary {
                points,
                all_positive,
            },
        ),
    };
    let outcome = if all_positive {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok(CommandOutput { body, outcome })
}

/// Runs the whole battery. Records are sorted by name, failures first.
pub fn run_battery(config: &RunConfig) -> Result<Vec<VerificationRecord>, CommandError> {
    let settings = Settings::from_config(config);
    let mut records: Vec<VerificationRecord> = pool(config)?.install(|| {
        checks()
            .into_par_iter()
            .flat_map_iter(|(_, check)| check(&settings))
            .collect()
    });
    records.sort_by(|a, b| {
        a.passed
            .cmp(&b.passed)
            .then_with(|| a.check_name.cmp(&b.check_name))
    });
    Ok(records)
}

pub fn cmd_selftest(config: &RunConfig) -> Result<CommandOutput, CommandError> {
    let records = run_battery(config)?;
    Ok(emit_records(config, &records))
}
