use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use qortho::hyper::{phi_series_detail, rogers_6w5_rhs, very_well_poised, PhiSpec};
use qortho::qfun::{
    big_c_eval, cq_ultraspherical, cq_ultraspherical_coefficients, phi_eval, weight_omega,
    BigCFamily, EvaluationPoint, ParamSet4,
};
use qortho::quad::{jackson_integral, periodic_integral, Interval, QLattice, QuadratureSpec};
use qortho::{qbinom, qpoch_finite, qpoch_infinite, QBase, TruncationPolicy};

fn polar(r: f64, phi: f64) -> Complex64 {
    Complex64::from_polar(r, phi)
}

fn complex_in(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo..=hi, 0.0..2.0 * PI).prop_map(|(r, p)| polar(r, p))
}

fn real_q() -> impl Strategy<Value = QBase> {
    (0.05f64..0.8).prop_map(|v| QBase::real(v).unwrap())
}

fn complex_q() -> impl Strategy<Value = QBase> {
    complex_in(0.05, 0.8).prop_map(|v| QBase::new(v).unwrap())
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1e-300)
}

/// `(α,β,γ,δ)` with `|α/γ|, |β/δ| ≤ 0.6` and `|γ|, |δ| ∈ [0.5, 1.5]`.
fn params() -> impl Strategy<Value = ParamSet4> {
    (
        complex_in(0.0, 0.6),
        complex_in(0.0, 0.6),
        complex_in(0.5, 1.5),
        complex_in(0.5, 1.5),
    )
        .prop_map(|(ra, rb, g, d)| ParamSet4::new(ra * g, rb * d, g, d).unwrap())
}

/// Coefficients of `t^0..=t^n` in `(x t;q)_∞` (Euler) or `1/(x t;q)_∞`.
fn euler_series(x: Complex64, q: Complex64, n: usize, inverse: bool) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut qq = Complex64::new(1.0, 0.0); // (q;q)_k
    for k in 0..=n {
        if k > 0 {
            qq *= 1.0 - q.powu(k as u32);
        }
        let mut c = x.powu(k as u32) / qq;
        if !inverse {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            c *= sign * q.powu((k * k.saturating_sub(1) / 2) as u32);
        }
        out.push(c);
    }
    out
}

fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    (0..a.len())
        .map(|n| (0..=n).map(|k| a[k] * b[n - k]).sum())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn finite_product_recursion(a in complex_in(0.0, 3.0), q in complex_q(), n in 0usize..50) {
        let next = qpoch_finite(a, q, n + 1);
        let step = qpoch_finite(a, q, n) * (1.0 - a * q.pow(n));
        prop_assert!((next - step).norm() <= 1e-13 * next.norm().max(1e-300) || next == step);
    }

    #[test]
    fn infinite_product_splits(a in complex_in(0.0, 0.9), q in complex_q(), n in 0usize..20) {
        let pol = TruncationPolicy::default();
        let whole = qpoch_infinite(a, q, &pol).unwrap();
        let split = qpoch_finite(a, q, n) * qpoch_infinite(a * q.pow(n), q, &pol).unwrap();
        prop_assert!(close(whole, split, pol.rel_tol * 10.0), "{whole} vs {split}");
    }

    #[test]
    fn qbinom_pascal_recurrence(q in complex_q(), n in 1usize..30, k in 1usize..30) {
        prop_assume!(k < n);
        let lhs = qbinom(n, k, q).unwrap();
        let rhs = qbinom(n - 1, k - 1, q).unwrap() + q.pow(k) * qbinom(n - 1, k, q).unwrap();
        prop_assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn q_binomial_theorem(a in complex_in(0.0, 1.5), q in real_q(), z in complex_in(0.0, 0.7)) {
        let pol = TruncationPolicy::default();
        let series = phi_series_detail(&PhiSpec::new(vec![a], vec![], q, z).unwrap(), &pol).unwrap().value;
        let product = qpoch_infinite(a * z, q, &pol).unwrap() / qpoch_infinite(z, q, &pol).unwrap();
        prop_assert!(close(series, product, 1e-11), "{series} vs {product}");
    }

    #[test]
    fn stopped_sums_are_cauchy(
        nums in proptest::collection::vec(complex_in(0.0, 1.2), 3),
        dens in proptest::collection::vec(complex_in(0.0, 0.9), 2),
        q in real_q(),
        z in complex_in(0.0, 0.8),
    ) {
        let pol = TruncationPolicy::default();
        let spec = PhiSpec::new(nums, dens, q, z).unwrap();
        let stopped = phi_series_detail(&spec, &pol).unwrap();
        let extended: Complex64 = spec.terms().take(stopped.terms + 10).sum();
        prop_assert!((extended - stopped.value).norm() <= 10.0 * pol.rel_tol * stopped.value.norm().max(1e-300));
    }

    #[test]
    fn ultraspherical_three_term_recurrence(beta in -0.9f64..0.9, q in real_q(), theta in 0.0..PI) {
        let b = Complex64::new(beta, 0.0);
        let x2 = 2.0 * theta.cos();
        for n in 1..30usize {
            let qv = q.get().re;
            let lhs = (1.0 - qv.powi(n as i32 + 1)) * cq_ultraspherical(n + 1, theta, b, q);
            let rhs = x2 * (1.0 - beta * qv.powi(n as i32)) * cq_ultraspherical(n, theta, b, q)
                - (1.0 - beta * beta * qv.powi(n as i32 - 1)) * cq_ultraspherical(n - 1, theta, b, q);
            let scale = (n - 1..=n + 1)
                .map(|k| cq_ultraspherical_coefficients(k, b, q).iter().map(|c| c.norm()).sum::<f64>())
                .fold(1.0, f64::max);
            prop_assert!((lhs - rhs).norm() <= 4e-12 * scale, "n={n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 50, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn rogers_summation(
        a in complex_in(0.05, 0.9),
        b in complex_in(0.3, 1.5),
        c in complex_in(0.3, 1.5),
        d in complex_in(0.3, 1.5),
        q in real_q(),
    ) {
        let pol = TruncationPolicy::default();
        let aq = a * q.get();
        let z = aq / (b * c * d);
        prop_assume!(z.norm() <= 0.7);
        for x in [a.sqrt(), -a.sqrt(), aq / b, aq / c, aq / d] {
            // keep every denominator parameter away from q^{-m}
            let mut xm = x;
            let mut dist = (1.0 - xm).norm();
            while xm.norm() >= 0.5 {
                xm *= q.get();
                dist = dist.min((1.0 - xm).norm());
            }
            prop_assume!(dist >= 0.05);
        }
        let lhs = very_well_poised(a, &[b, c, d], q, z, &pol).unwrap();
        let rhs = rogers_6w5_rhs(a, b, c, d, q, &pol).unwrap();
        prop_assert!((lhs / rhs - 1.0).norm() <= 1e-9, "{lhs} vs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn generating_function_coefficients(p in params(), q in complex_q(), theta in 0.0..2.0 * PI) {
        let n = 8;
        let pt = EvaluationPoint::new(theta);
        let (e, ei, qc) = (pt.x(), pt.y(), q.get());
        let series = series_mul(
            &series_mul(&euler_series(p.alpha * e, qc, n, false), &euler_series(p.beta * ei, qc, n, false)),
            &series_mul(&euler_series(p.gamma * e, qc, n, true), &euler_series(p.delta * ei, qc, n, true)),
        );
        for (k, expected) in series.iter().enumerate() {
            let got = big_c_eval(k, pt, &p, q);
            let scale = expected.norm().max(p.gamma.norm().max(p.delta.norm()).powi(k as i32) * 1e-3);
            prop_assert!((got - expected).norm() <= 1e-11 * scale, "n={k}: {got} vs {expected}");
        }
    }

    #[test]
    fn phi_on_the_circle_is_scaled_big_c(p in params(), q in complex_q(), theta in 0.0..2.0 * PI, n in 0usize..=12) {
        let pt = EvaluationPoint::new(theta);
        let lhs = phi_eval(n, pt.x(), pt.y(), &p, q);
        let rhs = qpoch_finite(q.get(), q, n) * big_c_eval(n, pt, &p, q);
        prop_assert!(close(lhs, rhs, 1e-12) || (lhs - rhs).norm() < 1e-300);
    }

    #[test]
    fn nonnegative_coefficients_bound(
        ra in 0.0f64..0.95, rb in 0.0f64..0.95, g in 0.3f64..2.0, d in 0.3f64..2.0,
        q in real_q(), theta in 0.0..2.0 * PI, n in 0usize..=12,
    ) {
        let p = ParamSet4::real(ra * g, rb * d, g, d).unwrap();
        let at_theta = big_c_eval(n, EvaluationPoint::new(theta), &p, q).norm();
        let at_one = big_c_eval(n, EvaluationPoint::new(0.0), &p, q);
        prop_assert!(at_one.im.abs() <= 1e-13 * at_one.re.abs().max(1.0));
        prop_assert!(at_theta <= at_one.re * (1.0 + 1e-13));
    }

    #[test]
    fn real_parameters_give_conjugate_symmetry(
        ra in -0.9f64..0.9, rb in -0.9f64..0.9, g in 0.3f64..2.0, d in 0.3f64..2.0,
        q in real_q(), theta in 0.0..2.0 * PI, n in 0usize..=12,
    ) {
        let p = ParamSet4::real(ra * g, rb * d, g, d).unwrap();
        let plus = big_c_eval(n, EvaluationPoint::new(theta), &p, q);
        let minus = big_c_eval(n, EvaluationPoint::new(-theta), &p, q);
        prop_assert!((plus.conj() - minus).norm() <= 1e-13 * plus.norm().max(1.0));
        // the real case: equal ratios and γ = δ
        let sym = ParamSet4::real(ra * g, ra * g, g, g).unwrap();
        let triangle: f64 = BigCFamily::new(&sym, q, n).coefficients(n).iter().map(|c| c.norm()).sum();
        prop_assert!(big_c_eval(n, EvaluationPoint::new(theta), &sym, q).im.abs() <= 1e-13 * triangle.max(1.0));
    }

    #[test]
    fn jackson_integral_is_linear(
        a in complex_in(0.1, 2.0), b in complex_in(0.1, 2.0), q in real_q(), c in complex_in(0.0, 3.0),
    ) {
        let pol = TruncationPolicy::default();
        let lattice = QLattice::new(a, b, q);
        let f = |z: Complex64| (z * 0.3).exp();
        let g = |z: Complex64| z * z - 1.0;
        let combined = jackson_integral(|z| Ok(c * f(z) + g(z)), &lattice, &pol).unwrap();
        let separate = c * jackson_integral(|z| Ok(f(z)), &lattice, &pol).unwrap()
            + jackson_integral(|z| Ok(g(z)), &lattice, &pol).unwrap();
        prop_assert!((combined - separate).norm() <= 1e-13 * combined.norm().max(1.0));
    }

    #[test]
    fn quadrature_settles_by_128_nodes(p in params(), q in (0.1f64..0.7).prop_map(|v| QBase::real(v).unwrap())) {
        // aliasing error decays like max(|α/δ|, |β/γ|)^{N/2}
        prop_assume!((p.alpha / p.delta).norm() <= 0.6 && (p.beta / p.gamma).norm() <= 0.6);
        let pol = TruncationPolicy::default();
        let f = |t: f64| weight_omega(EvaluationPoint::new(t), &p, q, &pol).unwrap();
        let coarse = periodic_integral(f, Interval::FullPeriod, &QuadratureSpec::new(128, 128, 1e-10).unwrap());
        let fine = periodic_integral(f, Interval::FullPeriod, &QuadratureSpec::new(256, 256, 1e-10).unwrap());
        let scale = coarse.integrand_scale(Interval::FullPeriod);
        prop_assert!((coarse.value - fine.value).norm() <= 1e-10 * scale, "{} vs {}", coarse.value, fine.value);
    }
}
