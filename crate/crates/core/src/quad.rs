//! Quadrature for 2π-periodic integrands and the Jackson q-integral.
//!
//! The equispaced rule is spectrally accurate for periodic analytic integrands. On `[0, 2π]`
//! it is the plain trapezoid rule. On `[0, π]` the samples are still taken on `[0, 2π)`; the
//! integrand's discrete Fourier coefficients `c_k` are integrated term by term,
//!
//! ```text
//! ∫_0^π f ≈ π c_0 + Σ_{k odd} 2i c_k / k
//! ```
//!
//! which is exact for trigonometric polynomials of degree below `N/2` and does not assume
//! any symmetry of `f` about `π/2`.
//!
//! Both rules refine by doubling the node count and reuse the previous samples.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{QError, Result};
use crate::qcore::{qpoch_finite, qpoch_infinite, QBase, TruncationPolicy};
use crate::qfun::ParamSet4;
use crate::SINGULAR_THRESHOLD;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub max_nodes: usize,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes: 256,
            max_nodes: 8192,
            rel_tol: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn new(nodes: usize, max_nodes: usize, rel_tol: f64) -> Result<Self> {
        if nodes < 16 {
            return Err(QError::domain(format!(
                "quadrature needs at least 16 nodes, got {nodes}"
            )));
        }
        if max_nodes < nodes {
            return Err(QError::domain(format!(
                "max_nodes {max_nodes} is below nodes {nodes}"
            )));
        }
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(QError::domain(format!(
                "quadrature rel_tol must be positive, got {rel_tol}"
            )));
        }
        Ok(QuadratureSpec {
            nodes,
            max_nodes,
            rel_tol,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Interval {
    /// `[0, 2π]`
    FullPeriod,
    /// `[0, π]`
    HalfPeriod,
}

impl Interval {
    pub fn length(self) -> f64 {
        match self {
            Interval::FullPeriod => 2.0 * PI,
            Interval::HalfPeriod => PI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub nodes: usize,
    /// False when `max_nodes` was reached before two successive estimates agreed.
    pub converged: bool,
    /// Difference between the last two estimates.
    pub delta: f64,
    /// Largest integrand magnitude seen on the nodes.
    pub integrand_max: f64,
}

impl QuadResult {
    /// `integrand_max × interval length`, the natural size of an integral that is expected to vanish.
    pub fn integrand_scale(&self, interval: Interval) -> f64 {
        self.integrand_max * interval.length()
    }
}

fn half_period_rule(samples: &[Complex64], planner: &mut FftPlanner<f64>) -> Complex64 {
    let n = samples.len();
    let mut buf = samples.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    let inv_n = 1.0 / n as f64;
    let mut acc = buf[0] * inv_n * PI;
    for (idx, coeff) in buf.iter().enumerate().skip(1) {
        // the Nyquist bin of an even-length transform has no odd partner; its ± halves cancel
        if 2 * idx == n {
            continue;
        }
        let k = if 2 * idx < n {
            idx as i64
        } else {
            idx as i64 - n as i64
        };
        if k % 2 != 0 {
            acc += coeff * inv_n * Complex64::new(0.0, 2.0 / k as f64);
        }
    }
    acc
}

fn apply_rule(
    samples: &[Complex64],
    interval: Interval,
    planner: &mut FftPlanner<f64>,
) -> Complex64 {
    match interval {
        Interval::FullPeriod => {
            samples.iter().sum::<Complex64>() * (2.0 * PI / samples.len() as f64)
        }
        Interval::HalfPeriod => half_period_rule(samples, planner),
    }
}

/// Integrates a fallible integrand over `[0, 2π]` or `[0, π]` with node doubling.
pub fn try_periodic_integral<F>(
    mut f: F,
    interval: Interval,
    spec: &QuadratureSpec,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut planner = FftPlanner::new();
    let mut n = spec.nodes;
    let mut fmax = 0.0f64;
    let mut samples = Vec::with_capacity(n);
    for j in 0..n {
        let v = f(2.0 * PI * j as f64 / n as f64)?;
        fmax = fmax.max(v.norm());
        samples.push(v);
    }
    let mut estimate = apply_rule(&samples, interval, &mut planner);
    let mut delta = f64::INFINITY;
    while 2 * n <= spec.max_nodes {
        let mut refined = Vec::with_capacity(2 * n);
        for (j, &old) in samples.iter().enumerate() {
            refined.push(old);
            let v = f(PI * (2 * j + 1) as f64 / n as f64)?;
            fmax = fmax.max(v.norm());
            refined.push(v);
        }
        samples = refined;
        n *= 2;
        let next = apply_rule(&samples, interval, &mut planner);
        delta = (next - estimate).norm();
        estimate = next;
        let scale = estimate.norm().max(fmax * interval.length());
        if delta <= spec.rel_tol * scale {
            return Ok(QuadResult {
                value: estimate,
                nodes: n,
                converged: true,
                delta,
                integrand_max: fmax,
            });
        }
    }
    Ok(QuadResult {
        value: estimate,
        nodes: n,
        converged: false,
        delta,
        integrand_max: fmax,
    })
}

/// Infallible-integrand form of [`try_periodic_integral`].
pub fn periodic_integral<F>(mut f: F, interval: Interval, spec: &QuadratureSpec) -> QuadResult
where
    F: FnMut(f64) -> Complex64,
{
    try_periodic_integral(|t| Ok(f(t)), interval, spec).expect("integrand cannot fail")
}

/// Endpoints of a Jackson integral; nodes are `b q^n` and `a q^n`, `n ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QLattice {
    pub a: Complex64,
    pub b: Complex64,
    pub q: QBase,
}

impl QLattice {
    pub fn new(a: Complex64, b: Complex64, q: QBase) -> Self {
        QLattice { a, b, q }
    }
}

fn jackson_half<F>(
    f: &mut F,
    end: Complex64,
    q: QBase,
    policy: &TruncationPolicy,
) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    if end == Complex64::new(0.0, 0.0) {
        return Ok(end);
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    let mut small_run = 0;
    for _ in 0..policy.max_terms {
        let term = qn * f(end * qn)?;
        sum += term;
        if term.norm() <= policy.rel_tol * sum.norm() {
            small_run += 1;
            if small_run >= 3 {
                return Ok((1.0 - q.get()) * end * sum);
            }
        } else {
            small_run = 0;
        }
        qn *= q.get();
    }
    Err(QError::TruncationExceeded {
        terms: policy.max_terms,
    })
}

/// `∫_a^b f(z) d_q z = (1-q) b Σ q^n f(b q^n) - (1-q) a Σ q^n f(a q^n)`.
pub fn jackson_integral<F>(
    mut f: F,
    lattice: &QLattice,
    policy: &TruncationPolicy,
) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let upper = jackson_half(&mut f, lattice.b, lattice.q, policy)?;
    let lower = jackson_half(&mut f, lattice.a, lattice.q, policy)?;
    Ok(upper - lower)
}

fn nonsingular(value: Complex64, what: &str) -> Result<Complex64> {
    if value.norm() < SINGULAR_THRESHOLD {
        Err(QError::near_singular(what, value.norm()))
    } else {
        Ok(value)
    }
}

/// `Φ_n^{(α,β,γ,δ)}(x,y|q)` through its q-integral representation
///
/// ```text
/// (αβ/γδ;q)_n (α/γ, β/δ, βy/γx, αx/δy;q)_∞ / ((1-q) δy (q, αβ/γδ, γx/δy, qδy/γx;q)_∞)
///   · ∫_{γx}^{δy} (qz/γx, qz/δy;q)_∞ z^n / (βz/γδx, αz/γδy;q)_∞ d_q z
/// ```
pub fn phi_qintegral_repr(
    n: usize,
    x: Complex64,
    y: Complex64,
    p: &ParamSet4,
    q: QBase,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    let gx = p.gamma * x;
    let dy = p.delta * y;
    if gx.norm() == 0.0 || dy.norm() == 0.0 {
        return Err(QError::domain(
            "q-integral representation needs γx ≠ 0 and δy ≠ 0",
        ));
    }
    let (ra, rb) = (p.alpha_ratio(), p.beta_ratio());
    let ab = ra * rb;
    let qc = q.get();
    let inf = |a: Complex64| qpoch_infinite(a, q, policy);

    let numerator = qpoch_finite(ab, q, n)
        * inf(ra)?
        * inf(rb)?
        * inf(p.beta * y / gx)?
        * inf(p.alpha * x / dy)?;
    let mut denominator = nonsingular((1.0 - qc) * dy, "(1-q)δy")?;
    denominator *= nonsingular(inf(qc)?, "(q;q)_∞")?;
    denominator *= nonsingular(inf(ab)?, "(αβ/γδ;q)_∞")?;
    denominator *= nonsingular(inf(gx / dy)?, "(γx/δy;q)_∞")?;
    denominator *= nonsingular(inf(qc * dy / gx)?, "(qδy/γx;q)_∞")?;

    let integrand = |z: Complex64| -> Result<Complex64> {
        let d1 = nonsingular(inf(rb * z / gx)?, "(βz/γδx;q)_∞")?;
        let d2 = nonsingular(inf(ra * z / dy)?, "(αz/γδy;q)_∞")?;
        Ok(inf(qc * z / gx)? * inf(qc * z / dy)? * z.powu(n as u32) / (d1 * d2))
    };
    let integral = jackson_integral(integrand, &QLattice::new(gx, dy, q), policy)?;
    Ok(numerator / denominator * integral)
}
