import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abheat import ab1, quad
from abheat.landau import ModelParams, plane_kernel_polar

P = ModelParams(4.0, 0.4)
# one-solenoid kernel at (w, a, r, theta, r0, t) = (4, 0.4, 0.9, 0.6, 0.7, 0.8):
# mpmath quadrature of the closed integral form (30 digits)
KERNEL_REF = 0.069223698880464246669 - 0.066696448879207393389j


def rel(a, b):
    return abs(a - b) / abs(b)


def test_integral_form_against_mpmath():
    assert rel(ab1.ab1_kernel_integral(0.9, 0.6, 0.7, 0.8, P), KERNEL_REF) < 1e-12


def test_expansion_against_mpmath():
    sel = ab1.Ab1EvalSelector("eigen_expansion", 40, (-60, 60))
    assert rel(ab1.ab1_kernel_expansion(0.9, 0.6, 0.7, 0.8, P, sel), KERNEL_REF) < 1e-6


def test_selector_validation():
    with pytest.raises(ValueError):
        ab1.Ab1EvalSelector("bogus")
    with pytest.raises(ValueError):
        ab1.Ab1EvalSelector(m_window=(1, 5))
    with pytest.raises(ValueError):
        ab1.ab1_kernel_integral(0.9, math.pi, 0.7, 0.8, P)


def test_cross_form_sample():
    for (r, th, r0, t) in [(0.3, -2.0, 1.5, 0.3), (1.2, 2.8, 0.6, 0.8), (0.9, 0.6, 0.3, 0.3)]:
        a = ab1.ab1_kernel_integral(r, th, r0, t, P)
        b = ab1.ab1_kernel_expansion(r, th, r0, t, P)
        assert rel(b, a) < 1e-6


def test_expansion_tail_is_small():
    _, tail = ab1.ab1_kernel_expansion(0.9, 0.6, 0.7, 0.8, P, return_tail=True)
    assert tail < 1e-8


@settings(max_examples=15, deadline=None)
@given(st.floats(0.3, 1.5), st.floats(0.3, 1.5), st.floats(-2.8, 2.8), st.floats(0.2, 1.0))
def test_hermiticity(r, r0, th, t):
    a = ab1.ab1_kernel_integral(r, th, r0, t, P)
    b = ab1.ab1_kernel_integral(r0, -th, r, t, P)
    assert abs(a - np.conj(b)) < 1e-11 * max(1.0, abs(a))


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 1.5), st.floats(0.1, 2.0))
def test_diagonal_positive(r, t):
    v = ab1.ab1_kernel_integral(r, 0.0, r, t, P)
    assert v.real > 0 and abs(v.imag) < 1e-12 * v.real


def test_vanishing_flux_limit():
    p = ModelParams(4.0, 1e-9)
    v = ab1.ab1_kernel_integral(0.9, 0.6, 0.7, 0.8, p)
    pk = plane_kernel_polar(0.9, 0.6, 0.7, 0.0, 0.8, 4.0)
    assert abs(v - pk) < 1e-8


def test_lowest_eigenvalue():
    assert abs(ab1.mode_energy(0, 0, P) - 0.9 * 4.0) < 1e-15


def test_mode_orthonormality():
    def inner(m1, m2):
        # angular integral is 2 pi delta_{m1 m2}; check radial parts with it
        f = lambda r: (ab1.mode_function(0, m1, r, 0.0, P)
                       * np.conj(ab1.mode_function(0, m2, r, 0.0, P)) * r)
        res = quad.integrate_segment(np.vectorize(f), 0.0, 8.0, lo_exp=2 * 0.4 + 1)
        return 2 * math.pi * res.value
    assert abs(inner(0, 0) - 1.0) < 1e-8
    assert abs(inner(1, 1) - 1.0) < 1e-8
    th = np.linspace(-math.pi, math.pi, 257)[:-1]
    ang = np.mean(np.exp(1j * (0 - 1) * th)) * 2 * math.pi
    assert abs(ang) < 1e-12


def test_long_time_expansion_at_wt20():
    t = 20.0 / 4.0
    exp = ab1.ab1_kernel_expansion(0.9, 0.6, 0.7, t, P)
    asy = ab1.ab1_asymptotic(0.9, 0.6, 0.7, t, P)
    assert abs(exp - asy) < 1e-8 * abs(asy)


def test_asymptotic_remainder_rate():
    wt = np.array([8.0, 10.0, 12.0, 14.0, 16.0])
    t = wt / 4.0
    rem = [abs(ab1.ab1_kernel_integral(0.9, 0.6, 0.7, tt, P)
               - ab1.ab1_asymptotic(0.9, 0.6, 0.7, tt, P)) for tt in t]
    slope = -np.polyfit(t, np.log(rem), 1)[0]
    assert abs(slope / 6.0 - 1) < 0.05


def test_second_coefficient_is_psi1_dyad():
    from abheat.eigen import psi1
    from abheat.landau import BiPolarPoint
    r, th, r0 = 0.9, 0.6, 0.7
    dyad = ab1.bound_state_dyad(r, th, r0, P)
    x = BiPolarPoint.from_polar_a(r, th, 1.0)
    x0 = BiPolarPoint.from_polar_a(r0, 0.0, 1.0)
    ref = complex(psi1(x, P)) * np.conj(complex(psi1(x0, P)))
    assert abs(dyad - ref) < 1e-14


def test_lll_identity():
    assert ab1.lll_projection_identity(1.0, 0.3, 0.4) < 1e-9
    rng = np.random.default_rng(11)
    for _ in range(10):
        rho, phi, a = rng.uniform(0.1, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(0.05, 0.95)
        assert ab1.lll_projection_identity(rho, phi, a) < 1e-9


def test_lll_identity_real_on_axis():
    assert abs(ab1.lll_identity_lhs(1.0, 0.0, 0.4).imag) < 1e-12
    assert abs(ab1.lll_series(1.0, 0.0, 0.4).imag) < 1e-12


def test_lll_series_small_rho_scaling():
    a = 0.4
    s1 = abs(ab1.lll_series(1e-4, 0.3, a))
    s2 = abs(ab1.lll_series(2e-4, 0.3, a))
    assert abs(math.log(s2 / s1) / math.log(2) - (1 - a)) < 1e-3
