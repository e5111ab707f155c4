//! Exact rational kernel: Bernoulli numbers of the second kind, forward
//! difference tables and complete-monotonicity certificates.

mod bernoulli;
mod differences;
mod rational;

pub use bernoulli::{
    alternating_sequence, bk2_falling_factorial, bk2_recurrence, Bk2Method, Bk2Table,
};
pub use differences::{certify_cm, difference_table, CmCertificate, CmViolation, DifferenceTable};
pub use rational::{ratio, ExactRational};
