use std::f64::consts::PI;

use num_complex::Complex64;

use super::report::{residuals, Flag, IdentityId, Inputs, VerificationReport};
use super::CheckConfig;
use crate::error::{QError, Result};
use crate::hyper::{phi_series, rogers_6w5_rhs, very_well_poised, PhiSpec};
use crate::qcore::{qpoch_finite, qpoch_infinite, QBase, TruncationPolicy};
use crate::qfun::{
    big_c_eval, connection_coeffs, cq_ultraspherical, diag_rhs_thm11, growth_root, h_norm,
    phi_eval, weight_at, BigCFamily, EvaluationPoint, ParamSet4, ReducedParams,
};
use crate::quad::{phi_qintegral_repr, try_periodic_integral, Interval, QuadResult};
use crate::SINGULAR_THRESHOLD;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Collects flags while turning numerical errors into placeholder values.
#[derive(Default)]
struct Flags(Vec<Flag>);

impl Flags {
    /// Domain errors propagate; numerical errors become a flag and a zero value.
    fn absorb(&mut self, r: Result<Complex64>) -> Result<Complex64> {
        match r {
            Ok(v) if v.re.is_finite() && v.im.is_finite() => Ok(v),
            Ok(_) => {
                self.0.push(Flag::NoConvergence);
                Ok(ZERO)
            }
            Err(e) => match Flag::from_error(&e) {
                Some(f) => {
                    self.0.push(f);
                    Ok(ZERO)
                }
                None => Err(e),
            },
        }
    }

    /// Integral value and the magnitude it is measured against.
    fn quadrature(
        &mut self,
        r: Result<QuadResult>,
        interval: Interval,
    ) -> Result<(Complex64, f64)> {
        match r {
            Ok(res) => {
                if !res.converged {
                    self.0.push(Flag::NoConvergence);
                }
                let v = self.absorb(Ok(res.value))?;
                Ok((v, res.integrand_scale(interval)))
            }
            Err(e) => self.absorb(Err(e)).map(|v| (v, 0.0)),
        }
    }
}

fn base_inputs(p: &ParamSet4, q: QBase) -> Inputs {
    Inputs::new()
        .complex("alpha", p.alpha)
        .complex("beta", p.beta)
        .complex("gamma", p.gamma)
        .complex("delta", p.delta)
        .complex("q", q.get())
}

fn reduced_inputs(r: &ReducedParams, gamma: Complex64, delta: Complex64, q: QBase) -> Inputs {
    Inputs::new()
        .complex("a", r.a)
        .complex("b", r.b)
        .complex("gamma", gamma)
        .complex("delta", delta)
        .complex("q", q.get())
}

fn scale_of(lhs: Complex64, rhs: Complex64, integrand: f64) -> f64 {
    lhs.norm().max(rhs.norm()).max(integrand)
}

fn finish(
    id: IdentityId,
    inputs: Inputs,
    lhs: Complex64,
    rhs: Complex64,
    integrand: f64,
    cfg: &CheckConfig,
    flags: Flags,
) -> VerificationReport {
    let scale = scale_of(lhs, rhs, integrand);
    VerificationReport::new(id, inputs, lhs, rhs, scale, cfg.tolerance_for(id), flags.0)
}

/// `∏ (num_i;q)_∞ / ∏ (den_i;q)_∞`, failing on a vanishing denominator.
fn product_ratio(
    num: &[Complex64],
    den: &[(Complex64, &str)],
    q: QBase,
    policy: &TruncationPolicy,
) -> Result<Complex64> {
    let mut value = Complex64::new(1.0, 0.0);
    for &(arg, label) in den {
        let d = qpoch_infinite(arg, q, policy)?;
        if d.norm() < SINGULAR_THRESHOLD {
            return Err(QError::near_singular(label, d.norm()));
        }
        value /= d;
    }
    for &arg in num {
        value *= qpoch_infinite(arg, q, policy)?;
    }
    Ok(value)
}

/// Full-circle orthogonality: `∫_0^{2π} C_m C_n ω dθ` against the diagonal closed form.
pub fn check_thm_1_1(
    p: &ParamSet4,
    q: QBase,
    m: usize,
    n: usize,
    cfg: &CheckConfig,
) -> Result<VerificationReport> {
    let id = IdentityId::Thm11;
    let inputs = base_inputs(p, q).real("m", m as f64).real("n", n as f64);
    let mut flags = Flags::default();

    let family = BigCFamily::new(p, q, m.max(n));
    let integrand =
        |t: f64| Ok(family.eval(m, t) * family.eval(n, t) * weight_at(t, p, q, &cfg.trunc)?);
    let (lhs, integrand_scale) = flags.quadrature(
        try_periodic_integral(integrand, Interval::FullPeriod, &cfg.quad),
        Interval::FullPeriod,
    )?;
    let rhs = if m == n {
        flags.absorb(diag_rhs_thm11(n, p, q, &cfg.trunc))?
    } else {
        ZERO
    };
    Ok(finish(id, inputs, lhs, rhs, integrand_scale, cfg, flags))
}

/// The seven-parameter q-beta integral.
pub fn check_thm_1_2(
    p: &ParamSet4,
    s: Complex64,
    t: Complex64,
    q: QBase,
    cfg: &CheckConfig,
) -> Result<VerificationReport> {
    let id = IdentityId::Thm12;
    let bounds = [
        ("|q|", q.modulus()),
        ("|α/γ|", p.alpha_ratio().norm()),
        ("|β/δ|", p.beta_ratio().norm()),
        ("|γs|", (p.gamma * s).norm()),
        ("|γt|", (p.gamma * t).norm()),
        ("|δs|", (p.delta * s).norm()),
        ("|δt|", (p.delta * t).norm()),
    ];
    if let Some((name, v)) = bounds.iter().find(|(_, v)| *v >= 1.0) {
        return Err(QError::domain(format!(
            "hypothesis max{{|q|,|α/γ|,|β/δ|,|γs|,|γt|,|δs|,|δt|}} < 1 violated: {name} = {v}"
        )));
    }
    let inputs = base_inputs(p, q).complex("s", s).complex("t", t);
    let mut flags = Flags::default();
    let pol = &cfg.trunc;

    let integrand = |th: f64| {
        let e = Complex64::from_polar(1.0, th);
        let ei = e.conj();
        let e2 = e * e;
        let e2i = ei * ei;
        product_ratio(
            &[
                p.alpha * t * e,
                p.beta * t * ei,
                p.alpha * s * e,
                p.beta * s * ei,
                p.gamma / p.delta * e2,
                p.delta / p.gamma * e2i,
            ],
            &[
                (p.gamma * t * e, "(γt e^{iθ};q)_∞"),
                (p.delta * t * ei, "(δt e^{-iθ};q)_∞"),
                (p.gamma * s * e, "(γs e^{iθ};q)_∞"),
                (p.delta * s * ei, "(δs e^{-iθ};q)_∞"),
                (p.alpha / p.delta * e2, "(α/δ e^{2iθ};q)_∞"),
                (p.beta / p.gamma * e2i, "(β/γ e^{-2iθ};q)_∞"),
            ],
            q,
            pol,
        )
    };
    let (lhs, integrand_scale) = flags.quadrature(
        try_periodic_integral(integrand, Interval::FullPeriod, &cfg.quad),
        Interval::FullPeriod,
    )?;
    let rhs = flags.absorb(thm_1_2_series(p, s * t, q, pol))?;
    Ok(finish(id, inputs, lhs, rhs, integrand_scale, cfg, flags))
}

fn thm_1_2_series(
    p: &ParamSet4,
    st: Complex64,
    q: QBase,
    pol: &TruncationPolicy,
) -> Result<Complex64> {
    let (ra, rb) = (p.alpha_ratio(), p.beta_ratio());
    let ab = ra * rb;
    let qc = q.get();
    let prefactor =
        2.0 * PI * product_ratio(&[ra, rb], &[(qc, "(q;q)_∞"), (ab, "(αβ/γδ;q)_∞")], q, pol)?;
    let w = p.gamma * p.delta * st;

    let mut sum = ZERO;
    // (αβ/γδ;q)_n / (q;q)_n · w^n
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    let mut small_run = 0;
    for k in 0..pol.max_terms {
        let term = (1.0 / (1.0 - ra * qn) + 1.0 / (1.0 - rb * qn)) * coeff;
        sum += term;
        if term.norm() <= pol.rel_tol * sum.norm() {
            small_run += 1;
            if small_run >= 3 {
                return Ok(prefactor * sum);
            }
        } else {
            small_run = 0;
        }
        coeff *= (1.0 - ab * qn) / (1.0 - qn * qc) * w;
        qn *= qc;
        if k > 0 && coeff == ZERO {
            return Ok(prefactor * sum);
        }
    }
    Err(QError::TruncationExceeded {
        terms: pol.max_terms,
    })
}

/// Half-circle bi-orthogonality of the families `(bγ,bδ,γ,δ)` and `(aγ,aδ,γ,δ)`.
///
/// Requires `m ≥ n` whenever `m ≡ n (mod 2)` and a weight free of poles on the circle.
pub fn check_thm_1_3(
    r: &ReducedParams,
    gamma: Complex64,
    delta: Complex64,
    q: QBase,
    m: usize,
    n: usize,
    cfg: &CheckConfig,
) -> Result<VerificationReport> {
    let id = IdentityId::Thm13;
    let same_parity = (m + n).is_multiple_of(2);
    if same_parity && m < n {
        return Err(QError::domain(format!(
            "closed form needs m >= n when m ≡ n (mod 2): Pochhammer index (m-n)/2 < 0 for m={m}, n={n}"
        )));
    }
    if r.a.norm() == 0.0 {
        return Err(QError::domain("closed form divides by a: a ≠ 0 required"));
    }
    let pa = ParamSet4::reduced(r.a, gamma, delta)?;
    let pb = ParamSet4::reduced(r.b, gamma, delta)?;
    let (u, v) = ((r.a * gamma / delta).norm(), (r.a * delta / gamma).norm());
    if u >= 1.0 || v >= 1.0 {
        return Err(QError::domain(format!(
            "weight needs |aγ/δ| < 1 and |aδ/γ| < 1, got {u} and {v}"
        )));
    }
    let inputs = reduced_inputs(r, gamma, delta, q)
        .real("m", m as f64)
        .real("n", n as f64);
    let mut flags = Flags::default();

    let fb = BigCFamily::new(&pb, q, m);
    let fa = BigCFamily::new(&pa, q, n);
    let integrand = |t: f64| Ok(fb.eval(m, t) * fa.eval(n, t) * weight_at(t, &pa, q, &cfg.trunc)?);
    let (lhs, integrand_scale) = flags.quadrature(
        try_periodic_integral(integrand, Interval::HalfPeriod, &cfg.quad),
        Interval::HalfPeriod,
    )?;

    let rhs = if !same_parity {
        ZERO
    } else {
        let (a, b) = (r.a, r.b);
        let j = (m - n) / 2;
        let s = (m + n) / 2;
        let gd = gamma * delta;
        let h = flags.absorb(h_norm(n, a, q, &cfg.trunc))?;
        let num = gd.powu(n as u32)
            * (1.0 - a * q.pow(n))
            * qpoch_finite(b / a, q, j)
            * qpoch_finite(b, q, s)
            * (a * gd).powu(j as u32);
        let den = (1.0 - a) * h * qpoch_finite(q.get(), q, j) * qpoch_finite(a * q.get(), q, s);
        if den.norm() < SINGULAR_THRESHOLD {
            flags.0.push(Flag::NearSingular);
            ZERO
        } else {
            num / den
        }
    };
    Ok(finish(id, inputs, lhs, rhs, integrand_scale, cfg, flags))
}

/// `Φ_n(e^{iθ}, e^{-iθ}) = (q;q)_n C_n(e^{iθ})`.
pub fn check_prop_2_1_2(
    n: usize,
    theta: f64,
    p: &ParamSet4,
    q: QBase,
    cfg: &CheckConfig,
) -> Result<VerificationReport> {
    let id = IdentityId::Prop212;
    let pt = EvaluationPoint::new(theta);
    let inputs = base_inputs(p, q)
        .real("n", n as f64)
        .real("theta", pt.theta());
    let mut flags = Flags::default();
    let lhs = flags.absorb(Ok(phi_eval(n, pt.x(), pt.y(), p, q)))?;
    let rhs = flags.absorb(Ok(qpoch_finite(q.get(), q, n) * big_c_eval(n, pt, p, q)))?;
    Ok(finish(id, inputs, lhs, rhs, 0.0, cfg, flags))
}

/// `|C_n(1)|^{1/n}` against its limit `max{|γ|, |δ|}`.
pub fn check_prop_2_1_3(
    n: usize,
    p: &ParamSet4,
    q: QBase,
    cfg: &CheckConfig,
) -> Result<VerificationReport> {
    let id = IdentityId::Prop213;
    let inputs = base_inputs(p, q).real("n", n as f64);
    let mut flags = Flags::default();
    let lhs = flags.absorb(growth_root(n, p, q).map(|v| Complex64::new(v, 0.0)))?;
    let rhs = Complex64::new(p.gamma.norm().max(p.delta.norm()), 0.0);
    Ok(finish(id, inputs, lhs, rhs, 0.0, cfg, flags))
}

/// Partial sums reported by [`check_prop_2_2`] are taken up to this index.
pub const MAJORANT_CUTOFF: usize = 200;
const MAJORANT_MAX_INDEX: usize = 2000;

/// Absolute convergence of `Σ_n |C_{n+k}(1) C_n(1)| |(q;q)_{n+k}/(αβ/γδ;q)_{n+k}| |t|^n`
/// at `|t| = 0.9 / max{|γ|, |δ|}`: the tail after the cutoff must be negligible.
///
/// LHS is the partial sum through [`MAJORANT_CUTOFF`], RHS the sum continued until its terms
/// fall below the truncation tolerance.
pub fn check_prop_2_2(
    k: usize,
    p: &ParamSet4,
    q: QBase,
    cfg: &CheckConfig,
) -> Result<VerificationReport> {
    let id = IdentityId::Prop22;
    let inputs = base_inputs(p, q).real("k", k as f64);
    let mut flags = Flags::default();
    let t = 0.9 / p.gamma.norm().max(p.delta.norm());
    let ab = p.alpha_ratio() * p.beta_ratio();
    let qc = q.get();
    let pol = &cfg.trunc;

    let limit = MAJORANT_MAX_INDEX.min(pol.max_terms.max(MAJORANT_CUTOFF + 1));
    let family = BigCFamily::new(p, q, limit + k);
    // |(q;q)_{n+k} / (αβ/γδ;q)_{n+k}|, advanced one index per step
    let mut ratio = (qpoch_finite(qc, q, k) / qpoch_finite(ab, q, k)).norm();
    let mut tn = 1.0;
    let (mut partial, mut sum) = (0.0f64, 0.0f64);
    let mut small_run = 0;
    let mut converged = false;
    for n in 0..=limit {
        let term = (family.eval(n + k, 0.0) * family.eval(n, 0.0)).norm() * ratio * tn;
        if !term.is_finite() {
            break;
        }
        sum += term;
        if n <= MAJORANT_CUTOFF {
            partial = sum;
        } else if term <= pol.rel_tol * sum {
            small_run += 1;
            if small_run >= 3 {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
        let idx = n + k;
        ratio *= ((1.0 - q.pow(idx + 1)) / (1.0 - ab * q.pow(idx))).norm();
        tn *= t;
    }
    if !converged {
        flags.0.push(Flag::NoConvergence);
    }
    let lhs = flags.absorb(Ok(Complex64::new(partial, 0.0)))?;
    let rhs = flags.absorb(Ok(Complex64::new(sum, 0.0)))?;
    Ok(finish(id, inputs.real("t", t), lhs, rhs, 0.0, cfg, flags))
}

/// Jackson-integral representation of `Φ_n(x, y)` against the finite sum.
pub fn check_prop_2_4(
    n: usize,
    x: Complex64,
    y: Complex64,
    p: &ParamSet4,
    q: QBase,
    cfg: &CheckConfig,
) -> Result<VerificationReport> {
    let id = IdentityId::Prop24;
    let inputs = base_inputs(p, q)
        .real("n", n as f64)
        .complex("x", x)
        .complex("y", y);
    let mut flags = Flags::default();
    let lhs = flags.absorb(phi_qintegral_repr(n, x, y, p, q, &cfg.trunc))?;
    let rhs = flags.absorb(Ok(phi_eval(n, x, y, p, q)))?;
    Ok(finish(id, inputs, lhs, rhs, 0.0, cfg, flags))
}

/// `θ_j = 2πj/16`, the default evaluation grid of [`check_prop_3_1`].
pub fn default_thetas() -> Vec<f64> {
    (0..16).map(|j| 2.0 * PI * j as f64 / 16.0).collect()
}

/// Pointwise connection formula `C_m^{(bγ,bδ,γ,δ)} = Σ_n c_{m,n} C_n^{(aγ,aδ,γ,δ)}`.
///
/// The report carries the point with the largest residual.
pub fn check_prop_3_1(
    r: &ReducedParams,
    gamma: Complex64,
    delta: Complex64,
    q: QBase,
    m: usize,
    thetas: &[f64],
    cfg: &CheckConfig,
) -> Result<VerificationReport> {
    let id = IdentityId::Prop31;
    if thetas.is_empty() {
        return Err(QError::domain("at least one evaluation angle required"));
    }
    let tol = cfg.tolerance_for(id);
    let pa = ParamSet4::reduced(r.a, gamma, delta)?;
    let pb = ParamSet4::reduced(r.b, gamma, delta)?;
    let coeffs = connection_coeffs(m, r, gamma * delta, q)?;
    let fa = BigCFamily::new(&pa, q, m);
    let fb = BigCFamily::new(&pb, q, m);

    let mut worst: Option<(f64, f64, Complex64, Complex64, f64)> = None;
    for &th in thetas {
        let lhs = fb.eval(m, th);
        let terms: Vec<Complex64> = coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * fa.eval(n, th))
            .collect();
        let rhs: Complex64 = terms.iter().sum();
        let scale = scale_of(lhs, rhs, terms.iter().map(|t| t.norm()).sum());
        let (_, rel) = residuals(lhs, rhs, scale, tol);
        if worst.is_none_or(|w| rel > w.1 || rel.is_nan()) {
            worst = Some((th, rel, lhs, rhs, scale));
        }
    }
    let (th, _, lhs, rhs, scale) = worst.expect("thetas is nonempty");
    let mut flags = Flags::default();
    let lhs = flags.absorb(Ok(lhs))?;
    let rhs = flags.absorb(Ok(rhs))?;
    let inputs = reduced_inputs(r, gamma, delta, q)
        .real("m", m as f64)
        .real("theta", th)
        .real("points", thetas.len() as f64);
    Ok(VerificationReport::new(
        id, inputs, lhs, rhs, scale, tol, flags.0,
    ))
}

/// Rogers' `6φ5` sum: the very-well-poised series against its product form.
pub fn check_rogers_6w5(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    q: QBase,
    cfg: &CheckConfig,
) -> Result<VerificationReport> {
    let id = IdentityId::Rogers6W5;
    let inputs = Inputs::new()
        .complex("a", a)
        .complex("b", b)
        .complex("c", c)
        .complex("d", d)
        .complex("q", q.get());
    let mut flags = Flags::default();
    let rhs = flags.absorb(rogers_6w5_rhs(a, b, c, d, q, &cfg.trunc))?;
    let z = a * q.get() / (b * c * d);
    let lhs = flags.absorb(very_well_poised(a, &[b, c, d], q, z, &cfg.trunc))?;
    Ok(finish(id, inputs, lhs, rhs, 0.0, cfg, flags))
}

/// `1φ0(a;—;q,z) = (az;q)_∞ / (z;q)_∞`.
pub fn check_qbinomial(
    a: Complex64,
    z: Complex64,
    q: QBase,
    cfg: &CheckConfig,
) -> Result<VerificationReport> {
    let id = IdentityId::QBinomial;
    if z.norm() >= 1.0 {
        return Err(QError::domain(format!(
            "q-binomial theorem needs |z| < 1, got {}",
            z.norm()
        )));
    }
    let inputs = Inputs::new()
        .complex("a", a)
        .complex("z", z)
        .complex("q", q.get());
    let mut flags = Flags::default();
    let spec = PhiSpec::new(vec![a], vec![], q, z)?;
    let lhs = flags.absorb(phi_series(&spec, &cfg.trunc))?;
    let rhs = flags.absorb(product_ratio(&[a * z], &[(z, "(z;q)_∞")], q, &cfg.trunc))?;
    Ok(finish(id, inputs, lhs, rhs, 0.0, cfg, flags))
}

/// `∫_0^π C_m(cos θ;β|q) C_n(cos θ;β|q) W_β dθ = δ_{mn} / h_n(β|q)`, with `W_β = ω^{(β,β,1,1)}`.
pub fn check_ultra_ortho(
    beta: Complex64,
    q: QBase,
    m: usize,
    n: usize,
    cfg: &CheckConfig,
) -> Result<VerificationReport> {
    let id = IdentityId::UltraOrtho;
    let one = Complex64::new(1.0, 0.0);
    let p = ParamSet4::new(beta, beta, one, one)?;
    let inputs = Inputs::new()
        .complex("beta", beta)
        .complex("q", q.get())
        .real("m", m as f64)
        .real("n", n as f64);
    let mut flags = Flags::default();
    let integrand = |t: f64| {
        Ok(cq_ultraspherical(m, t, beta, q)
            * cq_ultraspherical(n, t, beta, q)
            * weight_at(t, &p, q, &cfg.trunc)?)
    };
    let (lhs, integrand_scale) = flags.quadrature(
        try_periodic_integral(integrand, Interval::HalfPeriod, &cfg.quad),
        Interval::HalfPeriod,
    )?;
    let rhs = if m == n {
        let h = flags.absorb(h_norm(n, beta, q, &cfg.trunc))?;
        if h.norm() < SINGULAR_THRESHOLD {
            flags.0.push(Flag::NearSingular);
            ZERO
        } else {
            1.0 / h
        }
    } else {
        ZERO
    };
    Ok(finish(id, inputs, lhs, rhs, integrand_scale, cfg, flags))
}
