use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};

/// The identities that can be checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityId {
    /// Full-circle orthogonality of `C_n^{(α,β,γ,δ)}`.
    #[serde(rename = "THM_1_1")]
    Thm11,
    /// Seven-parameter q-beta integral.
    #[serde(rename = "THM_1_2")]
    Thm12,
    /// Half-circle bi-orthogonality of the reduced families.
    #[serde(rename = "THM_1_3")]
    Thm13,
    /// `Φ_n(e^{iθ}, e^{-iθ}) = (q;q)_n C_n(e^{iθ})`.
    #[serde(rename = "PROP_2_1_2")]
    Prop212,
    /// `|C_n(1)|^{1/n} → max{|γ|, |δ|}`.
    #[serde(rename = "PROP_2_1_3")]
    Prop213,
    /// Absolute convergence of the bilinear majorant series.
    #[serde(rename = "PROP_2_2")]
    Prop22,
    /// Jackson-integral representation of `Φ_n`.
    #[serde(rename = "PROP_2_4")]
    Prop24,
    /// Connection between the reduced families with parameters `a` and `b`.
    #[serde(rename = "PROP_3_1")]
    Prop31,
    /// Rogers' `6φ5` summation.
    #[serde(rename = "ROGERS_6W5")]
    Rogers6W5,
    /// The q-binomial theorem.
    #[serde(rename = "QBINOMIAL")]
    QBinomial,
    /// Orthogonality of the continuous q-ultraspherical polynomials.
    #[serde(rename = "ULTRA_ORTHO")]
    UltraOrtho,
}

impl IdentityId {
    pub const ALL: [IdentityId; 11] = [
        IdentityId::Thm11,
        IdentityId::Thm12,
        IdentityId::Thm13,
        IdentityId::Prop212,
        IdentityId::Prop213,
        IdentityId::Prop22,
        IdentityId::Prop24,
        IdentityId::Prop31,
        IdentityId::Rogers6W5,
        IdentityId::QBinomial,
        IdentityId::UltraOrtho,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::Thm11 => "THM_1_1",
            IdentityId::Thm12 => "THM_1_2",
            IdentityId::Thm13 => "THM_1_3",
            IdentityId::Prop212 => "PROP_2_1_2",
            IdentityId::Prop213 => "PROP_2_1_3",
            IdentityId::Prop22 => "PROP_2_2",
            IdentityId::Prop24 => "PROP_2_4",
            IdentityId::Prop31 => "PROP_3_1",
            IdentityId::Rogers6W5 => "ROGERS_6W5",
            IdentityId::QBinomial => "QBINOMIAL",
            IdentityId::UltraOrtho => "ULTRA_ORTHO",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            IdentityId::Thm11 | IdentityId::Thm12 | IdentityId::Thm13 | IdentityId::UltraOrtho => {
                1e-8
            }
            IdentityId::Prop212 => 1e-12,
            IdentityId::Prop213 => 0.05,
            IdentityId::Prop22 | IdentityId::Prop24 => 1e-10,
            IdentityId::Prop31 | IdentityId::Rogers6W5 => 1e-9,
            IdentityId::QBinomial => 1e-11,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = QError;
    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == upper)
            .ok_or_else(|| QError::domain(format!("unknown identity '{s}'")))
    }
}

/// Numerical events that invalidate a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Flag {
    NearSingular,
    NoConvergence,
    TruncationExceeded,
    /// The checker rejected its inputs; only produced inside sweeps.
    DomainError,
}

impl Flag {
    /// The flag standing for a numerical error, or `None` for domain errors.
    pub fn from_error(e: &QError) -> Option<Flag> {
        match e {
            QError::Domain(_) => None,
            QError::NearSingular { .. } => Some(Flag::NearSingular),
            QError::TruncationExceeded { .. } => Some(Flag::TruncationExceeded),
            QError::DivergentSeries { .. } => Some(Flag::NoConvergence),
        }
    }
}

/// Parameter record of a check; complex inputs appear as `name_re` / `name_im`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Inputs(BTreeMap<String, f64>);

impl Inputs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn real(mut self, name: &str, v: f64) -> Self {
        self.0.insert(name.to_string(), v);
        self
    }

    pub fn complex(mut self, name: &str, v: Complex64) -> Self {
        self.0.insert(format!("{name}_re"), v.re);
        self.0.insert(format!("{name}_im"), v.im);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    identity: IdentityId,
    inputs: Inputs,
    lhs_re: f64,
    lhs_im: f64,
    rhs_re: f64,
    rhs_im: f64,
    abs_residual: f64,
    rel_residual: f64,
    tolerance: f64,
    passed: bool,
    flags: Vec<Flag>,
}

/// `(|lhs - rhs|, relative residual)`: relative to `|rhs|` when `|rhs| > tolerance`, else to `scale`.
pub(crate) fn residuals(lhs: Complex64, rhs: Complex64, scale: f64, tolerance: f64) -> (f64, f64) {
    let abs = (lhs - rhs).norm();
    let rel = if rhs.norm() > tolerance {
        abs / rhs.norm()
    } else if scale > 0.0 {
        abs / scale
    } else {
        abs
    };
    (abs, rel)
}

impl VerificationReport {
    /// `scale` is the magnitude an expected-zero result is measured against,
    /// normally `max(|lhs|, |rhs|, integrand max × interval length)`.
    pub fn new(
        identity: IdentityId,
        inputs: Inputs,
        lhs: Complex64,
        rhs: Complex64,
        scale: f64,
        tolerance: f64,
        mut flags: Vec<Flag>,
    ) -> Self {
        let (abs_residual, rel_residual) = residuals(lhs, rhs, scale, tolerance);
        flags.dedup();
        let passed = rel_residual.is_finite() && rel_residual <= tolerance && flags.is_empty();
        VerificationReport {
            identity,
            inputs,
            lhs_re: lhs.re,
            lhs_im: lhs.im,
            rhs_re: rhs.re,
            rhs_im: rhs.im,
            abs_residual,
            rel_residual,
            tolerance,
            passed,
            flags,
        }
    }

    /// A report for inputs the checker rejected.
    pub(crate) fn rejected(identity: IdentityId, inputs: Inputs, tolerance: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self::new(
            identity,
            inputs,
            zero,
            zero,
            0.0,
            tolerance,
            vec![Flag::DomainError],
        )
    }

    pub fn identity(&self) -> IdentityId {
        self.identity
    }

    pub fn inputs(&self) -> &Inputs {
        &self.inputs
    }

    pub fn lhs(&self) -> Complex64 {
        Complex64::new(self.lhs_re, self.lhs_im)
    }

    pub fn rhs(&self) -> Complex64 {
        Complex64::new(self.rhs_re, self.rhs_im)
    }

    pub fn abs_residual(&self) -> f64 {
        self.abs_residual
    }

    pub fn rel_residual(&self) -> f64 {
        self.rel_residual
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }
}
