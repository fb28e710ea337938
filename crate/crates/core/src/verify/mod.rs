//! Identity checkers and seeded parameter sweeps.
//!
//! Every checker computes the two sides of one identity along independent code paths: the
//! integral or series side uses [`crate::quad`] and [`crate::qfun`] evaluation, the closed
//! side uses only Pochhammer closed forms. The outcome is an immutable [`VerificationReport`].

mod checks;
mod report;
mod sweep;

pub use checks::*;
pub use report::{Flag, IdentityId, Inputs, VerificationReport};
pub use sweep::{run_sweep, sample_case, Case, ParamBox, SweepSpec};

use serde::{Deserialize, Serialize};

use crate::qcore::TruncationPolicy;
use crate::quad::QuadratureSpec;

/// Numerical settings shared by all checkers.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CheckConfig {
    pub quad: QuadratureSpec,
    pub trunc: TruncationPolicy,
    /// Overrides the identity's default tolerance.
    pub tolerance: Option<f64>,
}

impl CheckConfig {
    pub fn tolerance_for(&self, id: IdentityId) -> f64 {
        self.tolerance.unwrap_or_else(|| id.default_tolerance())
    }
}
