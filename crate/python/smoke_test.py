"""Smoke test for the `qortho` extension module.

Build first:  pip install --no-build-isolation -e crates/python
Run:          python3 python/smoke_test.py
"""

import cmath
import json
import math

import mpmath

import qortho


def close(a, b, tol):
    return abs(complex(a) - complex(b)) <= tol * max(1.0, abs(complex(b)))


def main():
    q = 0.5

    assert close(qortho.qpoch(0.3 + 0.1j, q, 7), mpmath.qp(0.3 + 0.1j, q, 7), 1e-14)
    assert close(qortho.qpoch(0.3, q), mpmath.qp(0.3, q), 1e-14)
    assert close(qortho.qbinom(5, 2, q), (1 - q**5) * (1 - q**4) / ((1 - q) * (1 - q**2)), 1e-14)

    value, terms = qortho.phi_series([0.3], [], q, 0.4)
    assert terms > 0
    assert close(value, mpmath.qp(0.3 * 0.4, q) / mpmath.qp(0.4, q), 1e-13)

    a, b, c, d = 0.2, 0.5, 0.6, 0.7
    lhs = qortho.very_well_poised(a, [b, c, d], q, a * q / (b * c * d))
    assert close(lhs, qortho.rogers_6w5_rhs(a, b, c, d, q), 1e-12)

    assert close(qortho.cq_ultraspherical(1, 0.0, 0.3, q), 2.8, 1e-14)

    p = qortho.ParamSet4(0.2, 0.1, 0.8, 0.9)
    assert close(p.alpha_ratio(), 0.25, 1e-15)
    assert p.mirrored().alpha == p.beta
    theta = 0.7
    coeffs = qortho.big_c_coefficients(3, p, q)
    series = sum(ck * cmath.exp(1j * (2 * k - 3) * theta) for k, ck in enumerate(coeffs))
    assert close(qortho.big_c(3, theta, p, q), series, 1e-13)
    x = cmath.exp(1j * theta)
    assert close(qortho.phi(3, x, 1 / x, p, q), mpmath.qp(q, q, 3) * series, 1e-12)
    assert qortho.growth_root(2, p, q) > 0
    assert qortho.weight(theta, p, q).real > 0

    try:
        qortho.ParamSet4(0.2, 0.1, 0.0, 0.9)
    except ValueError:
        pass
    else:
        raise AssertionError("gamma = 0 accepted")

    report = qortho.check_orthogonality(p, q, 0, 1)
    assert report.passed and bool(report), report
    assert report.rel_residual <= report.tolerance == 1e-8
    assert json.loads(report.to_json())["identity"] == "THM_1_1"
    assert report.inputs["gamma_re"] == 0.8

    half = qortho.check_half_circle(0.3, 0.5, 1.0, 1.0, q, 2, 1)
    assert half.passed, half

    reports = qortho.sweep("QBINOMIAL", seed=42, draws=8)
    again = qortho.sweep("QBINOMIAL", seed=42, draws=8)
    assert len(reports) == 8 and all(reports)
    assert [r.to_json() for r in reports] == [r.to_json() for r in again]
    assert set(qortho.identities()) >= {"THM_1_1", "ROGERS_6W5"}

    for name in ("qpoch", "phi_series", "check_orthogonality", "sweep"):
        assert callable(getattr(qortho, name))
    assert issubclass(qortho.ConvergenceError, ArithmeticError)
    assert math.isfinite(qortho.h_norm(2, 0.3, q).real)

    print("qortho smoke test: ok")


if __name__ == "__main__":
    main()
