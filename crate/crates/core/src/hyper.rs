//! Basic hypergeometric series.
//!
//! ```text
//! r+1φr(a_1..a_{r+1}; b_1..b_r; q, z) = Σ_k (a_1,…,a_{r+1};q)_k / (q,b_1,…,b_r;q)_k · z^k
//! ```
//!
//! Terms are generated by the ratio recurrence
//! `t_{k+1}/t_k = z ∏(1 - a_i q^k) / ((1 - q^{k+1}) ∏(1 - b_j q^k))`.

use num_complex::Complex64;

use crate::error::{QError, Result};
use crate::qcore::{qpoch_infinite, QBase, TruncationPolicy};
use crate::SINGULAR_THRESHOLD;

/// Consecutive small terms required before a series is considered summed.
const SMALL_TERM_RUN: usize = 3;

/// Minimum run of growing terms that flags divergence.
const MIN_GROWTH_RUN: usize = 20;

/// Returns the smallest `m` with `|1 - c q^m| < tol`, scanning only while `|c q^m| ≥ 1/2`.
fn inverse_power_index(c: Complex64, q: QBase, tol: f64, cap: usize) -> Option<usize> {
    let mut cqm = c;
    for m in 0..cap {
        if (1.0 - cqm).norm() < tol {
            return Some(m);
        }
        if cqm.norm() < 0.5 {
            return None;
        }
        cqm *= q.get();
    }
    None
}

/// Parameters of an `r+1φr` series.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSpec {
    numerators: Vec<Complex64>,
    denominators: Vec<Complex64>,
    q: QBase,
    z: Complex64,
    terminates_after: Option<usize>,
}

impl PhiSpec {
    pub fn new(
        numerators: Vec<Complex64>,
        denominators: Vec<Complex64>,
        q: QBase,
        z: Complex64,
    ) -> Result<Self> {
        if numerators.len() != denominators.len() + 1 {
            return Err(QError::domain(format!(
                "r+1φr needs one more numerator than denominators, got {} and {}",
                numerators.len(),
                denominators.len()
            )));
        }
        for (j, &b) in denominators.iter().enumerate() {
            if let Some(m) = inverse_power_index(b, q, SINGULAR_THRESHOLD, 10_000) {
                return Err(QError::domain(format!(
                    "denominator parameter b_{} equals q^-{m}",
                    j + 1
                )));
            }
        }
        let terminates_after = numerators
            .iter()
            .filter_map(|&a| inverse_power_index(a, q, SINGULAR_THRESHOLD, 10_000))
            .min();
        if terminates_after.is_none() && z.norm() >= 1.0 {
            return Err(QError::domain(format!(
                "non-terminating series needs |z| < 1, got |z| = {}",
                z.norm()
            )));
        }
        Ok(PhiSpec {
            numerators,
            denominators,
            q,
            z,
            terminates_after,
        })
    }

    pub fn numerators(&self) -> &[Complex64] {
        &self.numerators
    }

    pub fn denominators(&self) -> &[Complex64] {
        &self.denominators
    }

    pub fn q(&self) -> QBase {
        self.q
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// Index of the last nonzero term when some numerator is `q^{-m}`.
    pub fn terminates_after(&self) -> Option<usize> {
        self.terminates_after
    }

    /// The series terms `t_0, t_1, …` (infinite unless the series terminates).
    pub fn terms(&self) -> PhiTerms<'_> {
        PhiTerms {
            spec: self,
            k: 0,
            term: Complex64::new(1.0, 0.0),
            qk: Complex64::new(1.0, 0.0),
            done: false,
        }
    }
}

/// Iterator over the terms of a [`PhiSpec`] series.
pub struct PhiTerms<'a> {
    spec: &'a PhiSpec,
    k: usize,
    term: Complex64,
    qk: Complex64,
    done: bool,
}

impl Iterator for PhiTerms<'_> {
    type Item = Complex64;

    fn next(&mut self) -> Option<Complex64> {
        if self.done {
            return None;
        }
        let out = self.term;
        if self.spec.terminates_after == Some(self.k) || out == Complex64::new(0.0, 0.0) {
            self.done = true;
            return Some(out);
        }
        let q = self.spec.q.get();
        let mut ratio = self.spec.z / (1.0 - self.qk * q);
        for &a in &self.spec.numerators {
            ratio *= 1.0 - a * self.qk;
        }
        for &b in &self.spec.denominators {
            ratio /= 1.0 - b * self.qk;
        }
        self.term *= ratio;
        self.qk *= q;
        self.k += 1;
        Some(out)
    }
}

/// A summed series and the number of terms used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: Complex64,
    pub terms: usize,
}

pub fn phi_series_detail(spec: &PhiSpec, policy: &TruncationPolicy) -> Result<SeriesSum> {
    let growth_limit = MIN_GROWTH_RUN.max(spec.denominators.len());
    let mut sum = Complex64::new(0.0, 0.0);
    let mut small_run = 0usize;
    let mut growth_run = 0usize;
    let mut prev_mag = f64::INFINITY;
    for (k, term) in spec.terms().enumerate() {
        if k >= policy.max_terms {
            return Err(QError::TruncationExceeded { terms: k });
        }
        sum += term;
        let mag = term.norm();
        if mag <= policy.rel_tol * sum.norm() {
            small_run += 1;
            if small_run >= SMALL_TERM_RUN {
                return Ok(SeriesSum {
                    value: sum,
                    terms: k + 1,
                });
            }
        } else {
            small_run = 0;
        }
        if mag > prev_mag {
            growth_run += 1;
            if growth_run >= growth_limit {
                return Err(QError::DivergentSeries { run: growth_run });
            }
        } else {
            growth_run = 0;
        }
        prev_mag = mag;
    }
    // iterator only ends on exact termination
    let terms = spec.terminates_after.map_or(1, |m| m + 1);
    Ok(SeriesSum { value: sum, terms })
}

/// `r+1φr` evaluated to the policy's relative tolerance.
pub fn phi_series(spec: &PhiSpec, policy: &TruncationPolicy) -> Result<Complex64> {
    phi_series_detail(spec, policy).map(|s| s.value)
}

/// Expands `r+1Wr(a1; rest; q, z)` into its `r+1φr` parameter lists.
///
/// Numerators `a1, q√a1, -q√a1, rest…`; denominators `√a1, -√a1, q a1 / rest_i…`.
/// The principal square root is used; the series is unchanged under `√a1 → -√a1`.
pub fn very_well_poised_spec(
    a1: Complex64,
    rest: &[Complex64],
    q: QBase,
    z: Complex64,
) -> Result<PhiSpec> {
    if rest.iter().any(|a| *a == Complex64::new(0.0, 0.0)) {
        return Err(QError::domain(
            "very-well-poised parameters must be nonzero",
        ));
    }
    let root = a1.sqrt();
    let qv = q.get();
    let mut numerators = vec![a1, qv * root, -qv * root];
    numerators.extend_from_slice(rest);
    let mut denominators = vec![root, -root];
    denominators.extend(rest.iter().map(|&a| qv * a1 / a));
    PhiSpec::new(numerators, denominators, q, z)
}

pub fn very_well_poised(
    a1: Complex64,
    rest: &[Complex64],
    q: QBase,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    phi_series(&very_well_poised_spec(a1, rest, q, z)?, policy)
}

/// Closed form of `6W5(a; b, c, d; q, aq/(bcd))`:
/// `(aq, aq/bc, aq/bd, aq/cd;q)_∞ / (aq/b, aq/c, aq/d, aq/bcd;q)_∞`.
pub fn rogers_6w5_rhs(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    q: QBase,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    if b == zero || c == zero || d == zero {
        return Err(QError::domain("Rogers 6φ5 needs b, c, d nonzero"));
    }
    let aq = a * q.get();
    let z = aq / (b * c * d);
    if z.norm() >= 1.0 {
        return Err(QError::domain(format!(
            "Rogers 6φ5 needs |aq/bcd| < 1, got {}",
            z.norm()
        )));
    }
    let mut num = Complex64::new(1.0, 0.0);
    for arg in [aq, aq / (b * c), aq / (b * d), aq / (c * d)] {
        num *= qpoch_infinite(arg, q, policy)?;
    }
    let mut den = Complex64::new(1.0, 0.0);
    for (label, arg) in [
        ("(aq/b;q)_∞", aq / b),
        ("(aq/c;q)_∞", aq / c),
        ("(aq/d;q)_∞", aq / d),
        ("(aq/bcd;q)_∞", z),
    ] {
        let p = qpoch_infinite(arg, q, policy)?;
        if p.norm() < SINGULAR_THRESHOLD {
            return Err(QError::near_singular(label, p.norm()));
        }
        den *= p;
    }
    Ok(num / den)
}
