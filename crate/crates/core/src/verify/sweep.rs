use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::*;
use super::report::{IdentityId, Inputs, VerificationReport};
use super::CheckConfig;
use crate::error::{QError, Result};
use crate::qcore::QBase;
use crate::qfun::{ParamSet4, ReducedParams};

/// Ranges a sweep draws from. Each identity reads the fields it needs:
///
/// - `q`: the real base
/// - `ratio`: moduli of `α/γ`, `β/δ`; of `a`, `b`; of `β` (ultraspherical); of the Rogers `a`; of the q-binomial `a`
/// - `scale`: moduli of `γ`, `δ`; of `x`, `y`; of the Rogers `b`, `c`, `d`
/// - `aux`: `|s|·max{|γ|,|δ|}` and `|t|·max{|γ|,|δ|}`; `|z|`; the Rogers bound on `|aq/bcd|`
/// - `phase`: arguments of all complex draws
/// - `weight_bound`: upper bound on `|α/δ|`, `|β/γ|` (or `|aγ/δ|`, `|aδ/γ|`) keeping the weight pole-free
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamBox {
    pub q: (f64, f64),
    pub ratio: (f64, f64),
    pub scale: (f64, f64),
    pub aux: (f64, f64),
    pub phase: (f64, f64),
    pub weight_bound: Option<f64>,
}

impl ParamBox {
    pub fn default_for(id: IdentityId) -> Self {
        let full = (0.0, 2.0 * PI);
        let base = ParamBox {
            q: (0.1, 0.7),
            ratio: (0.0, 0.6),
            scale: (0.5, 1.5),
            aux: (0.0, 0.7),
            phase: full,
            weight_bound: Some(0.9),
        };
        match id {
            IdentityId::Thm11 | IdentityId::Prop212 | IdentityId::Prop24 => base,
            IdentityId::Thm12 => ParamBox {
                ratio: (0.0, 0.7),
                ..base
            },
            IdentityId::Thm13 | IdentityId::Prop31 => ParamBox {
                ratio: (0.05, 0.7),
                ..base
            },
            IdentityId::Prop213 => ParamBox {
                phase: (0.0, 0.0),
                weight_bound: None,
                ..base
            },
            IdentityId::Prop22 => ParamBox {
                scale: (0.5, 0.8),
                weight_bound: None,
                ..base
            },
            IdentityId::Rogers6W5 => ParamBox {
                ratio: (0.05, 0.9),
                scale: (0.2, 1.5),
                aux: (0.0, 0.7),
                weight_bound: None,
                ..base
            },
            IdentityId::QBinomial => ParamBox {
                ratio: (0.0, 1.5),
                weight_bound: None,
                ..base
            },
            IdentityId::UltraOrtho => ParamBox {
                phase: (0.0, 0.0),
                weight_bound: None,
                ..base
            },
        }
    }

    fn validate(&self) -> Result<()> {
        let ranges = [
            ("q", self.q),
            ("ratio", self.ratio),
            ("scale", self.scale),
            ("aux", self.aux),
            ("phase", self.phase),
        ];
        for (name, (lo, hi)) in ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(QError::domain(format!(
                    "{name} range [{lo}, {hi}] is empty or not finite"
                )));
            }
        }
        if self.q.0.abs().max(self.q.1.abs()) >= 1.0 {
            return Err(QError::domain("q range must lie inside (-1, 1)"));
        }
        if self.ratio.0 < 0.0 || self.scale.0 < 0.0 || self.aux.0 < 0.0 {
            return Err(QError::domain("modulus ranges must be nonnegative"));
        }
        Ok(())
    }
}

/// A seeded batch of random checks of one identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub seed: u64,
    pub draws: usize,
    pub param_box: ParamBox,
    pub m_max: usize,
    pub n_max: usize,
}

impl SweepSpec {
    /// Default box and degree caps for `id`.
    pub fn new(id: IdentityId, seed: u64, draws: usize) -> Self {
        let (m_max, n_max) = match id {
            IdentityId::Thm11 => (6, 6),
            IdentityId::Thm13 | IdentityId::UltraOrtho => (5, 5),
            IdentityId::Prop212 => (12, 12),
            IdentityId::Prop213 => (200, 200),
            IdentityId::Prop22 => (3, 3),
            IdentityId::Prop24 => (10, 10),
            IdentityId::Prop31 => (6, 6),
            _ => (0, 0),
        };
        SweepSpec {
            seed,
            draws,
            param_box: ParamBox::default_for(id),
            m_max,
            n_max,
        }
    }
}

/// One concrete set of checker inputs.
#[derive(Debug, Clone, PartialEq)]
pub enum Case {
    Thm11 {
        p: ParamSet4,
        q: QBase,
        m: usize,
        n: usize,
    },
    Thm12 {
        p: ParamSet4,
        s: Complex64,
        t: Complex64,
        q: QBase,
    },
    Thm13 {
        r: ReducedParams,
        gamma: Complex64,
        delta: Complex64,
        q: QBase,
        m: usize,
        n: usize,
    },
    Prop212 {
        n: usize,
        theta: f64,
        p: ParamSet4,
        q: QBase,
    },
    Prop213 {
        n: usize,
        p: ParamSet4,
        q: QBase,
    },
    Prop22 {
        k: usize,
        p: ParamSet4,
        q: QBase,
    },
    Prop24 {
        n: usize,
        x: Complex64,
        y: Complex64,
        p: ParamSet4,
        q: QBase,
    },
    Prop31 {
        r: ReducedParams,
        gamma: Complex64,
        delta: Complex64,
        q: QBase,
        m: usize,
        thetas: Vec<f64>,
    },
    Rogers6W5 {
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
        q: QBase,
    },
    QBinomial {
        a: Complex64,
        z: Complex64,
        q: QBase,
    },
    UltraOrtho {
        beta: Complex64,
        q: QBase,
        m: usize,
        n: usize,
    },
}

impl Case {
    pub fn identity(&self) -> IdentityId {
        match self {
            Case::Thm11 { .. } => IdentityId::Thm11,
            Case::Thm12 { .. } => IdentityId::Thm12,
            Case::Thm13 { .. } => IdentityId::Thm13,
            Case::Prop212 { .. } => IdentityId::Prop212,
            Case::Prop213 { .. } => IdentityId::Prop213,
            Case::Prop22 { .. } => IdentityId::Prop22,
            Case::Prop24 { .. } => IdentityId::Prop24,
            Case::Prop31 { .. } => IdentityId::Prop31,
            Case::Rogers6W5 { .. } => IdentityId::Rogers6W5,
            Case::QBinomial { .. } => IdentityId::QBinomial,
            Case::UltraOrtho { .. } => IdentityId::UltraOrtho,
        }
    }

    pub fn run(&self, cfg: &CheckConfig) -> Result<VerificationReport> {
        match self {
            Case::Thm11 { p, q, m, n } => check_thm_1_1(p, *q, *m, *n, cfg),
            Case::Thm12 { p, s, t, q } => check_thm_1_2(p, *s, *t, *q, cfg),
            Case::Thm13 {
                r,
                gamma,
                delta,
                q,
                m,
                n,
            } => check_thm_1_3(r, *gamma, *delta, *q, *m, *n, cfg),
            Case::Prop212 { n, theta, p, q } => check_prop_2_1_2(*n, *theta, p, *q, cfg),
            Case::Prop213 { n, p, q } => check_prop_2_1_3(*n, p, *q, cfg),
            Case::Prop22 { k, p, q } => check_prop_2_2(*k, p, *q, cfg),
            Case::Prop24 { n, x, y, p, q } => check_prop_2_4(*n, *x, *y, p, *q, cfg),
            Case::Prop31 {
                r,
                gamma,
                delta,
                q,
                m,
                thetas,
            } => check_prop_3_1(r, *gamma, *delta, *q, *m, thetas, cfg),
            Case::Rogers6W5 { a, b, c, d, q } => check_rogers_6w5(*a, *b, *c, *d, *q, cfg),
            Case::QBinomial { a, z, q } => check_qbinomial(*a, *z, *q, cfg),
            Case::UltraOrtho { beta, q, m, n } => check_ultra_ortho(*beta, *q, *m, *n, cfg),
        }
    }

    /// Parameter record used when the checker rejects the case.
    fn inputs(&self) -> Inputs {
        let p4 = |p: &ParamSet4, q: &QBase| {
            Inputs::new()
                .complex("alpha", p.alpha)
                .complex("beta", p.beta)
                .complex("gamma", p.gamma)
                .complex("delta", p.delta)
                .complex("q", q.get())
        };
        match self {
            Case::Thm11 { p, q, m, n } => p4(p, q).real("m", *m as f64).real("n", *n as f64),
            Case::Thm12 { p, s, t, q } => p4(p, q).complex("s", *s).complex("t", *t),
            Case::Thm13 {
                r,
                gamma,
                delta,
                q,
                m,
                n,
            } => Inputs::new()
                .complex("a", r.a)
                .complex("b", r.b)
                .complex("gamma", *gamma)
                .complex("delta", *delta)
                .complex("q", q.get())
                .real("m", *m as f64)
                .real("n", *n as f64),
            Case::Prop212 { n, theta, p, q } => p4(p, q).real("n", *n as f64).real("theta", *theta),
            Case::Prop213 { n, p, q } => p4(p, q).real("n", *n as f64),
            Case::Prop22 { k, p, q } => p4(p, q).real("k", *k as f64),
            Case::Prop24 { n, x, y, p, q } => p4(p, q)
                .real("n", *n as f64)
                .complex("x", *x)
                .complex("y", *y),
            Case::Prop31 {
                r,
                gamma,
                delta,
                q,
                m,
                ..
            } => Inputs::new()
                .complex("a", r.a)
                .complex("b", r.b)
                .complex("gamma", *gamma)
                .complex("delta", *delta)
                .complex("q", q.get())
                .real("m", *m as f64),
            Case::Rogers6W5 { a, b, c, d, q } => Inputs::new()
                .complex("a", *a)
                .complex("b", *b)
                .complex("c", *c)
                .complex("d", *d)
                .complex("q", q.get()),
            Case::QBinomial { a, z, q } => Inputs::new()
                .complex("a", *a)
                .complex("z", *z)
                .complex("q", q.get()),
            Case::UltraOrtho { beta, q, m, n } => Inputs::new()
                .complex("beta", *beta)
                .complex("q", q.get())
                .real("m", *m as f64)
                .real("n", *n as f64),
        }
    }
}

const MAX_ATTEMPTS: usize = 10_000;
const MARGIN: f64 = 0.05;

/// Random-number stream of draw `index`, independent of every other draw.
fn draw_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

fn polar(rng: &mut ChaCha8Rng, modulus: (f64, f64), phase: (f64, f64)) -> Complex64 {
    let r = uniform(rng, modulus);
    Complex64::from_polar(r, uniform(rng, phase))
}

fn degree(rng: &mut ChaCha8Rng, max: usize) -> usize {
    rng.random_range(0..=max)
}

/// `min_k |1 - x q^k|` over the factors with `|x q^k| ≥ 1/2`: how close `(x;q)_∞` is to a zero.
fn zero_distance(x: Complex64, q: QBase) -> f64 {
    let mut best = f64::INFINITY;
    let mut xk = x;
    while xk.norm() >= 0.5 {
        best = best.min((1.0 - xk).norm());
        xk *= q.get();
    }
    best
}

/// `min_m |1 - x q^m|` over `m ≥ 0`, including inverse powers: how close `x` is to `q^{-m}`.
fn lattice_distance(x: Complex64, q: QBase) -> f64 {
    let mut best = (1.0 - x).norm();
    let mut xk = x;
    for _ in 0..200 {
        xk *= q.get();
        best = best.min((1.0 - xk).norm());
        if xk.norm() < 0.5 {
            break;
        }
    }
    best
}

fn params4(rng: &mut ChaCha8Rng, bx: &ParamBox) -> Result<ParamSet4> {
    let gamma = polar(rng, bx.scale, bx.phase);
    let delta = polar(rng, bx.scale, bx.phase);
    let alpha = polar(rng, bx.ratio, bx.phase) * gamma;
    let beta = polar(rng, bx.ratio, bx.phase) * delta;
    ParamSet4::new(alpha, beta, gamma, delta)
}

fn weight_ok(p: &ParamSet4, bx: &ParamBox) -> bool {
    match bx.weight_bound {
        Some(w) => (p.alpha / p.delta).norm() <= w && (p.beta / p.gamma).norm() <= w,
        None => true,
    }
}

/// Draws one case for `id` from `spec`'s box using the stream of draw `index`.
pub fn sample_case(id: IdentityId, spec: &SweepSpec, index: usize) -> Result<Case> {
    let bx = &spec.param_box;
    bx.validate()?;
    let mut rng = draw_rng(spec.seed, index);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(case) = try_sample(id, spec, &mut rng)? {
            return Ok(case);
        }
    }
    Err(QError::domain(format!(
        "parameter box for {id} admits no valid draw"
    )))
}

fn try_sample(id: IdentityId, spec: &SweepSpec, rng: &mut ChaCha8Rng) -> Result<Option<Case>> {
    let bx = &spec.param_box;
    let q = QBase::real(uniform(rng, bx.q))?;
    let case = match id {
        IdentityId::Thm11 => {
            let p = params4(rng, bx)?;
            if !weight_ok(&p, bx) {
                return Ok(None);
            }
            Case::Thm11 {
                p,
                q,
                m: degree(rng, spec.m_max),
                n: degree(rng, spec.n_max),
            }
        }
        IdentityId::Thm12 => {
            let p = params4(rng, bx)?;
            if !weight_ok(&p, bx) {
                return Ok(None);
            }
            let big = p.gamma.norm().max(p.delta.norm());
            let s = polar(rng, bx.aux, bx.phase) / big;
            let t = polar(rng, bx.aux, bx.phase) / big;
            Case::Thm12 { p, s, t, q }
        }
        IdentityId::Thm13 | IdentityId::Prop31 => {
            let a = polar(rng, bx.ratio, bx.phase);
            let b = polar(rng, bx.ratio, bx.phase);
            let gamma = polar(rng, bx.scale, bx.phase);
            let delta = polar(rng, bx.scale, bx.phase);
            let r = ReducedParams::new(a, b)?;
            if a.norm() == 0.0 {
                return Ok(None);
            }
            if let Some(w) = bx.weight_bound {
                if (a * gamma / delta).norm() > w || (a * delta / gamma).norm() > w {
                    return Ok(None);
                }
            }
            if id == IdentityId::Thm13 {
                let (x, y) = (degree(rng, spec.m_max), degree(rng, spec.n_max));
                let (m, n) = if (x + y) % 2 == 0 && x < y {
                    (y, x)
                } else {
                    (x, y)
                };
                Case::Thm13 {
                    r,
                    gamma,
                    delta,
                    q,
                    m,
                    n,
                }
            } else {
                Case::Prop31 {
                    r,
                    gamma,
                    delta,
                    q,
                    m: degree(rng, spec.m_max),
                    thetas: default_thetas(),
                }
            }
        }
        IdentityId::Prop212 => {
            let p = params4(rng, bx)?;
            Case::Prop212 {
                n: degree(rng, spec.n_max),
                theta: rng.random_range(0.0..2.0 * PI),
                p,
                q,
            }
        }
        IdentityId::Prop213 => Case::Prop213 {
            n: spec.n_max.max(1),
            p: params4(rng, bx)?,
            q,
        },
        IdentityId::Prop22 => Case::Prop22 {
            k: degree(rng, spec.m_max),
            p: params4(rng, bx)?,
            q,
        },
        IdentityId::Prop24 => {
            let p = params4(rng, bx)?;
            let x = polar(rng, bx.scale, bx.phase);
            let y = polar(rng, bx.scale, bx.phase);
            let (gx, dy) = (p.gamma * x, p.delta * y);
            let ratios = [
                gx / dy,
                q.get() * dy / gx,
                p.beta * y / gx,
                p.alpha * x / dy,
            ];
            if ratios.iter().any(|&r| zero_distance(r, q) < MARGIN) {
                return Ok(None);
            }
            Case::Prop24 {
                n: degree(rng, spec.n_max),
                x,
                y,
                p,
                q,
            }
        }
        IdentityId::Rogers6W5 => {
            let a = polar(rng, bx.ratio, bx.phase);
            let b = polar(rng, bx.scale, bx.phase);
            let c = polar(rng, bx.scale, bx.phase);
            let d = polar(rng, bx.scale, bx.phase);
            let aq = a * q.get();
            let z = aq / (b * c * d);
            if z.norm() > bx.aux.1 || z.norm() < bx.aux.0 {
                return Ok(None);
            }
            let root = a.sqrt();
            let denominators = [root, -root, aq / b, aq / c, aq / d];
            if denominators
                .iter()
                .any(|&x| lattice_distance(x, q) < MARGIN)
            {
                return Ok(None);
            }
            Case::Rogers6W5 { a, b, c, d, q }
        }
        IdentityId::QBinomial => Case::QBinomial {
            a: polar(rng, bx.ratio, bx.phase),
            z: polar(rng, bx.aux, bx.phase),
            q,
        },
        IdentityId::UltraOrtho => {
            let beta = polar(rng, bx.ratio, bx.phase);
            if beta.norm() >= 1.0 {
                return Ok(None);
            }
            Case::UltraOrtho {
                beta,
                q,
                m: degree(rng, spec.m_max),
                n: degree(rng, spec.n_max),
            }
        }
    };
    Ok(Some(case))
}

/// Runs `spec.draws` seeded checks of `id` in parallel; reports come back in draw order.
///
/// A draw whose inputs the checker rejects yields a failed report flagged
/// [`super::Flag::DomainError`]; only an unusable box is an error.
pub fn run_sweep(
    id: IdentityId,
    spec: &SweepSpec,
    cfg: &CheckConfig,
) -> Result<Vec<VerificationReport>> {
    spec.param_box.validate()?;
    (0..spec.draws)
        .into_par_iter()
        .map(|i| {
            let case = sample_case(id, spec, i)?;
            Ok(case.run(cfg).unwrap_or_else(|_| {
                VerificationReport::rejected(id, case.inputs(), cfg.tolerance_for(id))
            }))
        })
        .collect()
}
