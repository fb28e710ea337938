//! q-Pochhammer symbols and q-binomial coefficients over complex scalars.
//!
//! ```text
//! (a;q)_0 = 1,   (a;q)_n = ∏_{k=0}^{n-1} (1 - a q^k),   (a;q)_∞ = ∏_{k≥0} (1 - a q^k)
//! ```
//!
//! Infinite products are truncated at the first `k` with `|a|·|q|^k < rel_tol`; the
//! neglected factors then contribute a relative error of order `rel_tol / (1 - |q|)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};

/// A factor `1 - a q^k` smaller than this in magnitude is treated as an exact zero.
pub const ZERO_FACTOR_THRESHOLD: f64 = 1e-15;

/// The base `q` of all products and series, `|q| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Complex64", into = "Complex64")]
pub struct QBase(Complex64);

impl QBase {
    pub fn new(q: Complex64) -> Result<Self> {
        if !(q.re.is_finite() && q.im.is_finite()) {
            return Err(QError::domain("q must be finite"));
        }
        if q.norm() >= 1.0 {
            return Err(QError::domain(format!(
                "|q| < 1 required, got |q| = {}",
                q.norm()
            )));
        }
        Ok(QBase(q))
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(Complex64::new(q, 0.0))
    }

    #[inline]
    pub fn get(self) -> Complex64 {
        self.0
    }

    #[inline]
    pub fn modulus(self) -> f64 {
        self.0.norm()
    }

    /// `q^n` for a nonnegative integer `n`.
    #[inline]
    pub fn pow(self, n: usize) -> Complex64 {
        self.0.powu(n as u32)
    }
}

impl TryFrom<Complex64> for QBase {
    type Error = QError;
    fn try_from(q: Complex64) -> Result<Self> {
        QBase::new(q)
    }
}

impl From<QBase> for Complex64 {
    fn from(q: QBase) -> Complex64 {
        q.0
    }
}

/// Controls truncation of infinite products and series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            rel_tol: 1e-14,
            max_terms: 10_000,
        }
    }
}

impl TruncationPolicy {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(QError::domain(format!(
                "rel_tol must be positive, got {rel_tol}"
            )));
        }
        if max_terms == 0 {
            return Err(QError::domain("max_terms must be at least 1"));
        }
        Ok(TruncationPolicy { rel_tol, max_terms })
    }
}

/// Order of a q-Pochhammer symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PochOrder {
    Finite(usize),
    Infinite,
}

/// An evaluated infinite product together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfiniteProduct {
    pub value: Complex64,
    /// Number of factors multiplied in.
    pub terms: usize,
    /// Set when some factor fell below [`ZERO_FACTOR_THRESHOLD`] and the value was reported as 0.
    pub near_singular: bool,
}

/// `(a;q)_n`, the exact finite product.
pub fn qpoch_finite(a: Complex64, q: QBase, n: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut aqk = a;
    for _ in 0..n {
        acc *= 1.0 - aqk;
        aqk *= q.get();
    }
    acc
}

/// `(a;q)_∞` with truncation metadata.
pub fn qpoch_infinite_detail(
    a: Complex64,
    q: QBase,
    policy: &TruncationPolicy,
) -> Result<InfiniteProduct> {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut aqk = a;
    let mut k = 0usize;
    loop {
        if aqk.norm() < policy.rel_tol {
            return Ok(InfiniteProduct {
                value: acc,
                terms: k,
                near_singular: false,
            });
        }
        if k >= policy.max_terms {
            return Err(QError::TruncationExceeded { terms: k });
        }
        let factor = 1.0 - aqk;
        if factor.norm() < ZERO_FACTOR_THRESHOLD {
            return Ok(InfiniteProduct {
                value: Complex64::new(0.0, 0.0),
                terms: k + 1,
                near_singular: true,
            });
        }
        acc *= factor;
        aqk *= q.get();
        k += 1;
    }
}

/// `(a;q)_∞`.
pub fn qpoch_infinite(a: Complex64, q: QBase, policy: &TruncationPolicy) -> Result<Complex64> {
    qpoch_infinite_detail(a, q, policy).map(|p| p.value)
}

/// `(a_1, …, a_r; q)_n = ∏_i (a_i;q)_n`, with `n` finite or infinite.
pub fn qpoch_multi(
    args: &[Complex64],
    q: QBase,
    order: PochOrder,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    if args.is_empty() {
        return Err(QError::domain("qpoch_multi needs at least one parameter"));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for &a in args {
        acc *= match order {
            PochOrder::Finite(n) => qpoch_finite(a, q, n),
            PochOrder::Infinite => qpoch_infinite(a, q, policy)?,
        };
    }
    Ok(acc)
}

/// Gaussian binomial `[n k]_q = (q;q)_n / ((q;q)_k (q;q)_{n-k})`.
pub fn qbinom(n: usize, k: usize, q: QBase) -> Result<Complex64> {
    if k > n {
        return Err(QError::domain(format!(
            "q-binomial needs k <= n, got n={n}, k={k}"
        )));
    }
    let k = k.min(n - k);
    // ∏_{i=1}^{k} (1 - q^{n-k+i}) / (1 - q^i)
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 1..=k {
        acc *= (1.0 - q.pow(n - k + i)) / (1.0 - q.pow(i));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn q(v: f64) -> QBase {
        QBase::real(v).unwrap()
    }

    #[test]
    fn qbase_rejects_unit_disc_boundary() {
        assert!(QBase::real(1.0).is_err());
        assert!(QBase::real(-1.2).is_err());
        assert!(QBase::new(Complex64::new(0.6, 0.8)).is_err());
        assert!(QBase::real(0.99).is_ok());
        assert!(QBase::real(f64::NAN).is_err());
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy::new(0.0, 10).is_err());
        assert!(TruncationPolicy::new(1e-10, 0).is_err());
        let p = TruncationPolicy::default();
        assert_eq!(p.rel_tol, 1e-14);
        assert_eq!(p.max_terms, 10_000);
    }

    #[test]
    fn finite_product_examples() {
        assert_eq!(qpoch_finite(c(0.7), q(0.5), 0), c(1.0));
        assert_eq!(qpoch_finite(c(0.0), q(0.5), 5), c(1.0));
        assert!((qpoch_finite(c(0.5), q(0.5), 2) - c(0.375)).norm() < 1e-16);
    }

    #[test]
    fn infinite_product_examples() {
        let pol = TruncationPolicy::default();
        assert_eq!(qpoch_infinite(c(0.0), q(0.5), &pol).unwrap(), c(1.0));

        let d = qpoch_infinite_detail(c(1.0), q(0.5), &pol).unwrap();
        assert_eq!(d.value, c(0.0));
        assert!(d.near_singular);

        // reference: partial products until |a q^k| < 1e-16
        let mut oracle = 1.0f64;
        let mut t = 0.5f64;
        while t >= 1e-16 {
            oracle *= 1.0 - t;
            t *= 0.5;
        }
        let v = qpoch_infinite(c(0.5), q(0.5), &pol).unwrap();
        assert!((v.re - oracle).abs() < 1e-13);
        assert!((v.re - 0.2887880951).abs() < 1e-10);
    }

    #[test]
    fn infinite_product_truncation_exceeded() {
        let pol = TruncationPolicy::new(1e-14, 5).unwrap();
        assert_eq!(
            qpoch_infinite(c(0.5), q(0.9), &pol),
            Err(QError::TruncationExceeded { terms: 5 })
        );
    }

    #[test]
    fn multi_symbol_products() {
        let pol = TruncationPolicy::default();
        let qq = q(0.5);
        assert_eq!(
            qpoch_multi(&[c(0.0), c(0.0)], qq, PochOrder::Infinite, &pol).unwrap(),
            c(1.0)
        );
        let a = Complex64::new(0.3, -0.2);
        assert_eq!(
            qpoch_multi(&[a], qq, PochOrder::Finite(7), &pol).unwrap(),
            qpoch_finite(a, qq, 7)
        );
        let single = qpoch_infinite(c(0.5), qq, &pol).unwrap();
        let both = qpoch_multi(&[c(0.5), c(0.5)], qq, PochOrder::Infinite, &pol).unwrap();
        assert!((both - single * single).norm() < 1e-15);
        assert!(qpoch_multi(&[], qq, PochOrder::Infinite, &pol).is_err());
    }

    #[test]
    fn qbinom_examples() {
        assert_eq!(qbinom(4, 0, q(0.5)).unwrap(), c(1.0));
        assert!((qbinom(2, 1, q(0.5)).unwrap() - c(1.5)).norm() < 1e-15);
        let qq = QBase::new(Complex64::new(0.3, 0.4)).unwrap();
        assert!((qbinom(5, 2, qq).unwrap() - qbinom(5, 3, qq).unwrap()).norm() < 1e-14);
        assert!(matches!(qbinom(2, 3, q(0.5)), Err(QError::Domain(_))));
    }

    #[test]
    fn qbinom_matches_pochhammer_quotient() {
        let qq = QBase::new(Complex64::new(-0.4, 0.3)).unwrap();
        let qc = qq.get();
        for n in 0..12 {
            for k in 0..=n {
                let quotient = qpoch_finite(qc, qq, n)
                    / (qpoch_finite(qc, qq, k) * qpoch_finite(qc, qq, n - k));
                let b = qbinom(n, k, qq).unwrap();
                assert!((b - quotient).norm() <= 1e-13 * quotient.norm().max(1.0));
            }
        }
    }
}
