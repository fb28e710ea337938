//! The four-parameter q-orthogonal functions and everything attached to them.
//!
//! `C_n^{(α,β,γ,δ)}(e^{iθ};q)` is the coefficient of `t^n` in
//!
//! ```text
//! (α t e^{iθ}, β t e^{-iθ};q)_∞ / (γ t e^{iθ}, δ t e^{-iθ};q)_∞
//! ```
//!
//! Applying the q-binomial theorem to each factor pair gives the finite double sum
//!
//! ```text
//! C_n = Σ_{k=0}^{n} (α/γ;q)_k (β/δ;q)_{n-k} / ((q;q)_k (q;q)_{n-k}) · γ^k δ^{n-k} e^{i(2k-n)θ}
//! ```
//!
//! which is what [`big_c_eval`] computes. `Φ_n^{(α,β,γ,δ)}(x,y|q)` has the same structure in
//! powers of `γx` and `δy`, scaled by `(q;q)_n`; [`phi_eval`] evaluates it through q-binomial
//! coefficients so the two routes share no intermediate arrays.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::qcore::{qbinom, qpoch_finite, qpoch_infinite, QBase, TruncationPolicy};
use crate::SINGULAR_THRESHOLD;

/// `(α, β, γ, δ)` with `γ, δ ≠ 0`, `|α/γ| < 1`, `|β/δ| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSet4 {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl ParamSet4 {
    pub fn new(
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        delta: Complex64,
    ) -> Result<Self> {
        if gamma.norm() == 0.0 || delta.norm() == 0.0 {
            return Err(QError::domain("γ and δ must be nonzero"));
        }
        let p = ParamSet4 {
            alpha,
            beta,
            gamma,
            delta,
        };
        if p.alpha_ratio().norm() >= 1.0 {
            return Err(QError::domain(format!(
                "|α/γ| < 1 required, got {}",
                p.alpha_ratio().norm()
            )));
        }
        if p.beta_ratio().norm() >= 1.0 {
            return Err(QError::domain(format!(
                "|β/δ| < 1 required, got {}",
                p.beta_ratio().norm()
            )));
        }
        Ok(p)
    }

    pub fn real(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let c = |v| Complex64::new(v, 0.0);
        Self::new(c(alpha), c(beta), c(gamma), c(delta))
    }

    /// `(aγ, aδ, γ, δ)`, the family attached to a single parameter `a`.
    pub fn reduced(a: Complex64, gamma: Complex64, delta: Complex64) -> Result<Self> {
        Self::new(a * gamma, a * delta, gamma, delta)
    }

    /// `α/γ`
    pub fn alpha_ratio(&self) -> Complex64 {
        self.alpha / self.gamma
    }

    /// `β/δ`
    pub fn beta_ratio(&self) -> Complex64 {
        self.beta / self.delta
    }

    /// `(β, α, δ, γ)`: the parameters seen from `θ → -θ`.
    pub fn mirrored(&self) -> Self {
        ParamSet4 {
            alpha: self.beta,
            beta: self.alpha,
            gamma: self.delta,
            delta: self.gamma,
        }
    }
}

/// The pair `(a, b)` of the bi-orthogonal families `(aγ,aδ,γ,δ)` and `(bγ,bδ,γ,δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    pub a: Complex64,
    pub b: Complex64,
}

impl ReducedParams {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        if a.norm() >= 1.0 || b.norm() >= 1.0 {
            return Err(QError::domain(format!(
                "|a| < 1 and |b| < 1 required, got |a| = {}, |b| = {}",
                a.norm(),
                b.norm()
            )));
        }
        Ok(ReducedParams { a, b })
    }
}

/// A point `x = e^{iθ}`, `y = e^{-iθ}` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvaluationPoint {
    theta: f64,
}

impl EvaluationPoint {
    /// `theta` is reduced into `[0, 2π)`.
    pub fn new(theta: f64) -> Self {
        EvaluationPoint {
            theta: theta.rem_euclid(2.0 * PI),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn x(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    pub fn y(&self) -> Complex64 {
        Complex64::from_polar(1.0, -self.theta)
    }
}

/// `c_k = (ratio;q)_k / (q;q)_k · scale^k` for `k = 0..=n`, the q-binomial-theorem coefficients
/// of `(ratio·scale·u;q)_∞ / (scale·u;q)_∞`.
pub fn binomial_series_coeffs(
    ratio: Complex64,
    scale: Complex64,
    q: QBase,
    n: usize,
) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = Complex64::new(1.0, 0.0);
    let mut qk = Complex64::new(1.0, 0.0);
    out.push(c);
    for _ in 0..n {
        c *= (1.0 - ratio * qk) / (1.0 - qk * q.get()) * scale;
        qk *= q.get();
        out.push(c);
    }
    out
}

/// Precomputed coefficient arrays for evaluating `C_n` at many angles.
#[derive(Debug, Clone)]
pub struct BigCFamily {
    left: Vec<Complex64>,
    right: Vec<Complex64>,
}

impl BigCFamily {
    pub fn new(p: &ParamSet4, q: QBase, max_degree: usize) -> Self {
        BigCFamily {
            left: binomial_series_coeffs(p.alpha_ratio(), p.gamma, q, max_degree),
            right: binomial_series_coeffs(p.beta_ratio(), p.delta, q, max_degree),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.left.len() - 1
    }

    /// Coefficient of `e^{i(2k-n)θ}` in `C_n`, for `k = 0..=n`.
    pub fn coefficients(&self, n: usize) -> Vec<Complex64> {
        assert!(
            n <= self.max_degree(),
            "degree {n} exceeds precomputed {}",
            self.max_degree()
        );
        (0..=n).map(|k| self.left[k] * self.right[n - k]).collect()
    }

    pub fn eval(&self, n: usize, theta: f64) -> Complex64 {
        assert!(
            n <= self.max_degree(),
            "degree {n} exceeds precomputed {}",
            self.max_degree()
        );
        let w2 = Complex64::from_polar(1.0, 2.0 * theta);
        let mut w = Complex64::from_polar(1.0, -(n as f64) * theta);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=n {
            acc += self.left[k] * self.right[n - k] * w;
            w *= w2;
        }
        acc
    }
}

/// `C_n^{(α,β,γ,δ)}(e^{iθ};q)`.
pub fn big_c_eval(n: usize, pt: EvaluationPoint, p: &ParamSet4, q: QBase) -> Complex64 {
    BigCFamily::new(p, q, n).eval(n, pt.theta())
}

/// Coefficients of `e^{i(2k-n)θ}`, `k = 0..=n`, in `C_n^{(α,β,γ,δ)}`.
pub fn big_c_coefficients(n: usize, p: &ParamSet4, q: QBase) -> Vec<Complex64> {
    BigCFamily::new(p, q, n).coefficients(n)
}

/// `Φ_n^{(α,β,γ,δ)}(x,y|q) = Σ_k [n k]_q (α/γ;q)_k (β/δ;q)_{n-k} (γx)^k (δy)^{n-k}`.
pub fn phi_eval(n: usize, x: Complex64, y: Complex64, p: &ParamSet4, q: QBase) -> Complex64 {
    let gx = p.gamma * x;
    let dy = p.delta * y;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let binom = qbinom(n, k, q).expect("k <= n");
        acc += binom
            * qpoch_finite(p.alpha_ratio(), q, k)
            * qpoch_finite(p.beta_ratio(), q, n - k)
            * gx.powu(k as u32)
            * dy.powu((n - k) as u32);
    }
    acc
}

/// Continuous q-ultraspherical (Rogers) polynomial `C_n(cos θ; β|q)` via its explicit cosine sum.
pub fn cq_ultraspherical(n: usize, theta: f64, beta: Complex64, q: QBase) -> Complex64 {
    let qc = q.get();
    (0..=n)
        .map(|k| {
            let w = qpoch_finite(beta, q, k) * qpoch_finite(beta, q, n - k)
                / (qpoch_finite(qc, q, k) * qpoch_finite(qc, q, n - k));
            w * ((n as f64 - 2.0 * k as f64) * theta).cos()
        })
        .sum()
}

/// Coefficients `(β;q)_k (β;q)_{n-k} / ((q;q)_k (q;q)_{n-k})` of `cos((n-2k)θ)`.
pub fn cq_ultraspherical_coefficients(n: usize, beta: Complex64, q: QBase) -> Vec<Complex64> {
    binomial_series_coeffs(beta, Complex64::new(1.0, 0.0), q, n)
        .iter()
        .zip(
            binomial_series_coeffs(beta, Complex64::new(1.0, 0.0), q, n)
                .iter()
                .rev(),
        )
        .map(|(l, r)| l * r)
        .collect()
}

/// The orthogonality weight
///
/// ```text
/// ω(cos θ|q) = (γ/δ e^{2iθ}, δ/γ e^{-2iθ};q)_∞ / (α/δ e^{2iθ}, β/γ e^{-2iθ};q)_∞
/// ```
pub fn weight_omega(
    pt: EvaluationPoint,
    p: &ParamSet4,
    q: QBase,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    weight_at(pt.theta(), p, q, policy)
}

pub(crate) fn weight_at(
    theta: f64,
    p: &ParamSet4,
    q: QBase,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    let e2 = Complex64::from_polar(1.0, 2.0 * theta);
    let e2inv = e2.conj();
    let den_a = qpoch_infinite(p.alpha / p.delta * e2, q, policy)?;
    if den_a.norm() < SINGULAR_THRESHOLD {
        return Err(QError::near_singular("(α/δ e^{2iθ};q)_∞", den_a.norm()));
    }
    let den_b = qpoch_infinite(p.beta / p.gamma * e2inv, q, policy)?;
    if den_b.norm() < SINGULAR_THRESHOLD {
        return Err(QError::near_singular("(β/γ e^{-2iθ};q)_∞", den_b.norm()));
    }
    let num = qpoch_infinite(p.gamma / p.delta * e2, q, policy)?
        * qpoch_infinite(p.delta / p.gamma * e2inv, q, policy)?;
    Ok(num / (den_a * den_b))
}

/// `h_n(a|q) = (q,a²;q)_∞ (q;q)_n (1-aq^n) / (2π (a,aq;q)_∞ (a²;q)_n (1-a))`.
pub fn h_norm(n: usize, a: Complex64, q: QBase, policy: &TruncationPolicy) -> Result<Complex64> {
    if a.norm() >= 1.0 {
        return Err(QError::domain(format!(
            "h_n(a|q) needs |a| < 1, got {}",
            a.norm()
        )));
    }
    let qc = q.get();
    let a_inf = qpoch_infinite(a, q, policy)?;
    if a_inf.norm() < SINGULAR_THRESHOLD {
        return Err(QError::near_singular("(a;q)_∞", a_inf.norm()));
    }
    let aq_inf = qpoch_infinite(a * qc, q, policy)?;
    if aq_inf.norm() < SINGULAR_THRESHOLD {
        return Err(QError::near_singular("(aq;q)_∞", aq_inf.norm()));
    }
    let a2 = a * a;
    let num = qpoch_infinite(qc, q, policy)?
        * qpoch_infinite(a2, q, policy)?
        * qpoch_finite(qc, q, n)
        * (1.0 - a * q.pow(n));
    let den = 2.0 * PI * a_inf * aq_inf * qpoch_finite(a2, q, n) * (1.0 - a);
    Ok(num / den)
}

/// Diagonal value of the full-circle orthogonality relation:
///
/// ```text
/// 2π (α/γ, β/δ;q)_∞ / (q, αβ/γδ;q)_∞ · (1/(1-αq^n/γ) + 1/(1-βq^n/δ)) · (αβ/γδ;q)_n (γδ)^n / (q;q)_n
/// ```
pub fn diag_rhs_thm11(
    n: usize,
    p: &ParamSet4,
    q: QBase,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    let (ra, rb) = (p.alpha_ratio(), p.beta_ratio());
    let ab = ra * rb;
    let qc = q.get();
    let q_inf = qpoch_infinite(qc, q, policy)?;
    let ab_inf = qpoch_infinite(ab, q, policy)?;
    if (q_inf * ab_inf).norm() < SINGULAR_THRESHOLD {
        return Err(QError::near_singular(
            "(q, αβ/γδ;q)_∞",
            (q_inf * ab_inf).norm(),
        ));
    }
    let prefactor = 2.0 * PI * qpoch_infinite(ra, q, policy)? * qpoch_infinite(rb, q, policy)?
        / (q_inf * ab_inf);
    let qn = q.pow(n);
    let pair = 1.0 / (1.0 - ra * qn) + 1.0 / (1.0 - rb * qn);
    let gd = p.gamma * p.delta;
    Ok(prefactor * pair * qpoch_finite(ab, q, n) * gd.powu(n as u32) / qpoch_finite(qc, q, n))
}

/// Coefficients expressing `C_m^{(bγ,bδ,γ,δ)}` in the family `C_n^{(aγ,aδ,γ,δ)}`, indexed by `n = 0..=m`.
///
/// For `n ≡ m (mod 2)`, with `j = (m-n)/2` and `s = (m+n)/2`:
///
/// ```text
/// (1 - a q^n) (b/a;q)_j (b;q)_s / ((q;q)_j (a;q)_{s+1}) · (aγδ)^j
/// ```
///
/// and 0 otherwise.
pub fn connection_coeffs(
    m: usize,
    r: &ReducedParams,
    gamma_delta: Complex64,
    q: QBase,
) -> Result<Vec<Complex64>> {
    let a = r.a;
    if a.norm() == 0.0 {
        return Err(QError::domain("connection coefficients need a ≠ 0"));
    }
    let qc = q.get();
    let out = (0..=m)
        .map(|n| {
            if !(m - n).is_multiple_of(2) {
                return Complex64::new(0.0, 0.0);
            }
            let j = (m - n) / 2;
            let s = (m + n) / 2;
            (1.0 - a * q.pow(n)) * qpoch_finite(r.b / a, q, j) * qpoch_finite(r.b, q, s)
                / (qpoch_finite(qc, q, j) * qpoch_finite(a, q, s + 1))
                * (a * gamma_delta).powu(j as u32)
        })
        .collect();
    Ok(out)
}

/// `|C_n^{(α,β,γ,δ)}(1;q)|^{1/n}`, whose limsup is `max{|γ|, |δ|}`.
pub fn growth_root(n: usize, p: &ParamSet4, q: QBase) -> Result<f64> {
    if n == 0 {
        return Err(QError::domain("growth_root needs n >= 1"));
    }
    let value = big_c_eval(n, EvaluationPoint::new(0.0), p, q);
    Ok(value.norm().powf(1.0 / n as f64))
}
