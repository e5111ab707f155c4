//! Bernoulli numbers of the second kind (Gregory coefficients) computed two ways:
//! exactly, as rationals, and by quadrature of the Stieltjes-type integral
//! representation of `z / ((1 + z) ln(1 + z))` on the cut plane.
//!
//! Modules:
//!
//! * [`exact`] - arbitrary-precision rationals, two independent generators for
//!   `b_n`, finite-difference tables and complete-monotonicity certificates.
//! * [`quad`] - adaptive Gauss-Kronrod quadrature over finite, semi-infinite
//!   and whole-line domains with endpoint-regularizing substitutions.
//! * [`measure`] - the representing density on `(1, inf)` and its moments.
//! * [`cplane`] - principal-branch evaluation on the cut plane and the
//!   numerical limit probes.
//! * [`report`] - verification records, the self-test battery and the CSV/JSON
//!   emitters used by the `gregory` binary.

pub mod cplane;
pub mod error;
pub mod exact;
pub mod measure;
pub mod quad;
pub mod record;
pub mod report;

pub use error::{Error, Result};
