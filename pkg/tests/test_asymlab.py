import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abheat import asymlab as A

# nested mpmath quadrature of the canonical integrand at eps = 1e-3 (20 digits)
V_CANONICAL_1E3 = 1.5836011413778690776
# Gamma(-0.3) int (1 + 0.5 e^{-u})^0.3 exp(-e^u) e^{0.6 u}/(1 + e^u) du, mpmath
K_CANONICAL = -9.57583632414222456224
# Z -> 0 limit: Gamma(-0.3) e Gamma(0.6) Gamma(0.4, 1), mpmath
K_Z0 = -4.64176342511284265506


def test_case_validation():
    with pytest.raises(ValueError):
        A.AsymCase(1, 1, 0.5, 0.6, 0.3)
    with pytest.raises(ValueError):
        A.AsymCase(-1, 1, 0.5, 0.3, 0.6)
    with pytest.raises(ValueError):
        A.AsymCase(1, 1, 0.5, 0.3, 0.6, phi1=math.pi)
    with pytest.raises(ValueError):
        A.AsymCase(1, 1, 0.5, 0.3, 0.6, ladder=(1e-3, 1e-2))


def test_v_integral_oracle():
    v = A.v_integral(A.CANONICAL, 1e-3)
    assert abs(v - V_CANONICAL_1E3) < 1e-9 * V_CANONICAL_1E3


def test_v_integral_finite_at_zero():
    v = A.v_integral(A.CANONICAL, 0.0)
    assert np.isfinite(v) and v.real > 0


def test_monotone_damping():
    vals = [abs(A.v_integral(A.CANONICAL, e)) for e in (1e-4, 1e-3, 1e-2, 1e-1)]
    assert all(v2 <= v1 + 1e-12 for v1, v2 in zip(vals, vals[1:]))


def test_difference_matches_direct():
    e = 1e-2
    d = A.v_difference(A.CANONICAL, e)
    direct = A.v_integral(A.CANONICAL, e) - A.v_integral(A.CANONICAL, 0.0)
    assert abs(d - direct) < 1e-8 * abs(d)


def test_leading_coefficient_oracle():
    assert abs(A.leading_coefficient(A.CANONICAL) - K_CANONICAL) < 1e-11 * abs(K_CANONICAL)


def test_leading_coefficient_single_integral_limit():
    k = A.leading_coefficient(A.AsymCase(1, 1, 1e-12, 0.3, 0.6))
    assert abs(k - K_Z0) < 1e-5 * abs(K_Z0)


def test_proposition_canonical():
    r = A.proposition_check()
    assert r.coefficient_error < 0.02
    assert abs(r.exponent - 0.3) < 0.05
    assert r.residual_exponent >= 0.6 - 0.05


def test_proposition_close_exponents():
    r = A.proposition_check(A.AsymCase(1, 1, 0.5, 0.55, 0.6))
    assert r.coefficient_error < 0.05


def test_proposition_with_phases():
    r = A.proposition_check(A.AsymCase(1, 1, 0.5, 0.3, 0.6, 0.7, -1.1))
    assert r.coefficient_error < 0.05
    assert abs(r.exponent - 0.3) < 0.05


def test_proposition_rejects_short_ladder():
    with pytest.raises(ValueError):
        A.proposition_check(A.AsymCase(1, 1, 0.5, 0.3, 0.6, ladder=(1e-2, 5e-3, 2e-3)))


def test_fit_ladder_recovers_powers():
    eps = np.array([1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    vals = -2.0 * eps ** 0.3 + 0.5 * eps ** 0.6 + 0.1 * eps
    fit = A.fit_ladder(eps, vals, (0.3, 0.6, 1.0))
    assert abs(fit.leading + 2.0) < 1e-10
    assert abs(fit.coefficients[1] - 0.5) < 1e-8


def test_fit_ladder_rejects_non_monotone():
    with pytest.raises(ArithmeticError):
        A.fit_ladder([1e-2, 1e-3, 1e-4], [1.0, 2.0, 0.5], (0.3,))


@pytest.mark.parametrize("which", ["1", "4", "5", "7", "7b"])
def test_asymptotic_steps(which):
    r = A.step_checks(which)
    assert r.residual < 0.05
    assert abs(r.exponent - r.expected) < 0.05


def test_step1_coefficient():
    assert A.step_checks("1").residual < 0.02


def test_step3_leading_terms():
    r = A.step_checks("3")
    assert r.residual < 1e-3
    assert abs(r.exponent - r.expected) < 0.05


def test_step8_order_eps():
    r = A.step_checks("8")
    assert abs(r.exponent - 1.0) < 0.05
    assert r.residual < 1e-3


def test_exact_steps():
    assert A.step_checks("2").residual < 1e-7
    assert A.step_checks("6").residual < 1e-9


def test_unknown_step():
    with pytest.raises(ValueError):
        A.step_checks("9")


def test_quadrant_sum():
    err, tol = A.quadrant_sum_check(A.CANONICAL, 1e-3)
    assert err <= tol


def test_random_exact_identities():
    rng = np.random.default_rng(11)
    for _ in range(20):
        s, n = rng.uniform(0.1, 0.9, 2)
        if abs(s - n) < 0.05:
            n = s - 0.1 if s > 0.5 else s + 0.1
        a, b = rng.uniform(0.5, 2, 2)
        e = rng.uniform(0.01, 0.5)
        q, c = A.step2_quadrature(a, b, s, n, e), A.step2_closed(a, b, s, n, e)
        assert abs(q - c) < 1e-7 * abs(c)
        q, c = A.step6_sides(rng.uniform(0.2, 3), rng.uniform(0.2, 3),
                             rng.uniform(-0.8, 2), rng.uniform(-1, 1))
        assert abs(q - c) < 1e-7 * abs(c)
        nu = rng.uniform(0.1, 1.5)
        sg = nu + rng.uniform(0.1, 1.5)
        bb = rng.uniform(0.5, 2)
        q, c = A.beta_2f1_sides(nu, sg, bb, bb * rng.uniform(0.2, 1.8))
        assert abs(q - c) < 1e-7 * abs(c)


def test_laplace_integral_reference_points():
    assert A.appendix_c_identity(0.2, 0.6, 0.5, 1.0) < 1e-7
    assert A.appendix_c_identity(0.2, 0.6, 0.5, 0.0) < 1e-8


def test_laplace_integral_random():
    rng = np.random.default_rng(7)
    n = 0
    while n < 20:
        a = rng.uniform(0.05, 0.85)
        b = rng.uniform(a + 0.05, 0.95)
        c = rng.uniform(0.1, 0.9) * np.exp(1j * rng.uniform(-2.5, 2.5))
        z = rng.uniform(0, 3) + 1j * rng.uniform(-2, 2)
        if abs(np.angle(c) + np.angle(z)) >= math.pi - 0.1:
            continue
        n += 1
        assert A.appendix_c_identity(a, b, c, z) < 1e-6


@settings(max_examples=15, deadline=None)
@given(st.floats(0.05, 0.8), st.floats(0.05, 0.9), st.floats(0.1, 0.9), st.floats(0.0, 3.0))
def test_laplace_integral_real_c_is_real(a, gap, c, z):
    b = a + gap * (1 - a)
    lhs, rhs = A.appendix_c_parts(a, b, c, z)
    assert abs(lhs.imag) < 1e-10 and abs(rhs.imag) < 1e-10


def test_laplace_integral_domain():
    with pytest.raises(ValueError):
        A.appendix_c_identity(0.6, 0.2, 0.5, 1.0)
    with pytest.raises(ValueError):
        A.appendix_c_identity(0.2, 0.6, 1.5, 1.0)
    with pytest.raises(ValueError):
        A.appendix_c_identity(0.2, 0.6, 0.5, -1.0)
    with pytest.raises(ValueError):
        A.appendix_c_identity(0.2, 0.6, 0.5 * np.exp(2.5j), 0.5 + 1.5j)
