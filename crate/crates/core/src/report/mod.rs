//! Verification records, the self-test battery and the subcommand
//! implementations behind the `gregory` binary.
//!
//! Every subcommand returns its rendered body plus a pass/fail outcome; the
//! binary maps outcomes to exit codes 0 (pass) and 1 (verification failure)
//! and [`CommandError`] to 2.

mod battery;
mod commands;
mod config;
mod emit;

pub use battery::{checks, representation_grid, Settings};
pub use commands::{
    cmd_bk2, cmd_density, cmd_eval_f, cmd_selftest, cmd_verify_cm, parse_sequence, run_battery,
    Bk2Row, CommandError, CommandOutput, Outcome, Summary, EVAL_F_RESIDUAL_TOL,
};
pub use config::{OutputFormat, RunConfig};

pub mod thresholds {
    //! Pass thresholds of the self-test battery.
    pub use super::battery::{
        BK2_QUADRATURE_REL_TOL, BOUNDARY_EPSILON, BOUNDARY_REL_TOL, CM_TOTAL_ORDER,
        MASS_MOMENT_ABS_TOL, MASS_TOTAL_ABS_TOL, ORACLE_EQUIVALENCE_N, RECIPROCAL_LOG_ABS_TOL,
        REPRESENTATION_ABS_TOL, SELF_TEST_ABS_TOL,
    };
}
