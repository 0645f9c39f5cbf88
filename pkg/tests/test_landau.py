import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abheat import eigen, landau, quad
from abheat.landau import BiPolarPoint, ModelParams

P = ModelParams(4.0, 0.4, 0.7, 1.0)
coords = st.floats(-1.5, 1.5)


def test_model_params_invariants():
    with pytest.raises(ValueError):
        ModelParams(0.0, 0.4)
    with pytest.raises(ValueError):
        ModelParams(4.0, 1.0)
    with pytest.raises(ValueError):
        ModelParams(4.0, 0.4, 0.7, -1.0)
    with pytest.raises(ValueError):
        ModelParams(4.0, 0.5, 0.5).require_distinct()
    with pytest.raises(ValueError):
        ModelParams(4.0, 0.7, 0.4).require_ordered()
    p = ModelParams.from_D(4.0, 3.5, 0.4, 0.7)
    assert abs(p.D - 3.5) < 1e-14


def test_from_physical():
    # e = -1, Phi = 0.4 * 2 pi hbar c / |e|  ->  alpha = 0.4
    p = ModelParams.from_physical(-1.0, 4.0, 1.0, 1.0, 1.0, 0.4 * 2 * math.pi,
                                  0.7 * 2 * math.pi, 1.0)
    assert abs(p.omega_c - 4.0) < 1e-15
    assert abs(p.alpha - 0.4) < 1e-12 and abs(p.beta - 0.7) < 1e-12


@settings(max_examples=60, deadline=None)
@given(coords, coords)
def test_bipolar_identity(x1, x2):
    R = 0.9
    p = BiPolarPoint(x1, x2, R)
    lhs = p.r_a * np.exp(1j * p.theta_a)
    rhs = R - p.r_b * np.exp(1j * p.theta_b)
    assert abs(lhs - rhs) < 1e-13
    assert -math.pi < p.theta_a <= math.pi and -math.pi < p.theta_b <= math.pi


def test_bipolar_cut_conventions():
    R = 1.0
    seg = BiPolarPoint(0.4, 0.0, R)
    assert seg.theta_a == 0.0 and seg.theta_b == 0.0
    assert BiPolarPoint(-0.5, 0.0, R).theta_a == math.pi
    assert BiPolarPoint(1.5, 0.0, R).theta_b == math.pi
    # the upper side of L_b is approached from x2 -> 0+, where theta_b -> -pi+
    assert BiPolarPoint(1.5, 1e-9, R).theta_b < -math.pi + 1e-8


def test_plane_kernel_diagonal():
    x = BiPolarPoint(0.3, -0.2, 1.0)
    v = landau.plane_kernel(x, x, 0.5, P)
    assert abs(v - 4.0 / (4 * math.pi * math.sinh(1.0))) < 1e-14


def test_landau_trace():
    # levels (n + 1/2) w with areal degeneracy w/(2 pi)
    w, t = 4.0, 0.5
    x = BiPolarPoint(0.3, -0.2, 1.0)
    trace = sum(w / (2 * math.pi) * math.exp(-(n + 0.5) * w * t) for n in range(200))
    assert abs(landau.plane_kernel(x, x, t, P) - trace) < 1e-12


@settings(max_examples=40, deadline=None)
@given(coords, coords, coords, coords, st.floats(0.05, 3.0))
def test_plane_kernel_hermitian(a, b, c, d, t):
    x, y = BiPolarPoint(a, b, 1.0), BiPolarPoint(c, d, 1.0)
    assert abs(landau.plane_kernel(x, y, t, P) - np.conj(landau.plane_kernel(y, x, t, P))) < 1e-13


def test_plane_kernel_rejects_bad_time():
    x = BiPolarPoint(0.3, -0.2, 1.0)
    with pytest.raises(ValueError):
        landau.plane_kernel(x, x, 0.0, P)


def test_polar_form_matches_cartesian():
    r, th, r0, th0, t = 0.9, 0.7, 0.6, -0.4, 0.35
    x = BiPolarPoint.from_polar_a(r, th, 1.0)
    x0 = BiPolarPoint.from_polar_a(r0, th0, 1.0)
    pol = landau.plane_kernel_polar(r, th, r0, th0, t, 4.0)
    assert abs(pol - landau.plane_kernel(x, x0, t, P)) < 1e-14


def test_spatial_integral_closed_form():
    # the magnetic kernel is not stochastic: int p_t(x, x0) dx = sech(h) exp(-w tanh(h)|x0|^2/4)
    w, t = 4.0, 0.5
    h = 0.5 * w * t
    for x0 in ((0.0, 0.0), (0.4, -0.3)):
        f = lambda u, v: landau.plane_kernel_xy(u, v, x0[0], x0[1], t, w)
        res = quad.integrate_box(f, 2, quad.QuadSpec(rel_tol=1e-11, dim=2),
                                 bounds=[(x0[0] - 6, x0[0] + 6), (x0[1] - 6, x0[1] + 6)])
        ref = math.exp(-w * math.tanh(h) * (x0[0] ** 2 + x0[1] ** 2) / 4) / math.cosh(h)
        assert abs(res.value - ref) < 1e-8


def test_semigroup():
    w, t, s = 4.0, 0.5, 0.2
    x, x0 = (0.3, 0.1), (-0.2, 0.25)
    f = lambda u, v: (landau.plane_kernel_xy(x[0], x[1], u, v, s, w)
                      * landau.plane_kernel_xy(u, v, x0[0], x0[1], t - s, w))
    res = quad.integrate_box(f, 2, quad.QuadSpec(rel_tol=1e-11, dim=2),
                             bounds=[(-5, 5), (-5, 5)])
    ref = landau.plane_kernel_xy(x[0], x[1], x0[0], x0[1], t, w)
    assert abs(res.value - ref) < 1e-9 * abs(ref)


def test_heat_equation_residual():
    w, t = 4.0, 0.5
    y = (0.2, -0.3)
    h = 1e-3 / math.sqrt(w)
    dt = 1e-4
    for pt in ((0.5, 0.4), (-0.3, 0.6), (0.1, -0.2)):
        x = BiPolarPoint(pt[0], pt[1], 1.0)
        func = lambda p: landau.plane_kernel_xy(p.x1, p.x2, y[0], y[1], t, w)
        hf, f0 = eigen.apply_hamiltonian(func, x, P, h)
        dft = (landau.plane_kernel_xy(pt[0], pt[1], y[0], y[1], t + dt, w)
               - landau.plane_kernel_xy(pt[0], pt[1], y[0], y[1], t - dt, w)) / (2 * dt)
        assert abs(dft + hf) / abs(f0) < 1e-4


def test_gauge_shift():
    x, x0 = BiPolarPoint(0.3, -0.2, 1.0), BiPolarPoint(-0.5, 0.7, 1.0)
    v = 0.3 + 0.1j
    assert landau.gauge_shift(v, x, x0, (0.0, 0.0), P) == v
    y = (0.4, -0.9)
    s = landau.gauge_shift(v, x, x0, y, P)
    assert abs(abs(s) - abs(v)) < 1e-15
    back = landau.gauge_shift(s, x, x0, (-y[0], -y[1]), P)
    assert abs(back - v) < 1e-15


def test_gauge_shift_moves_origin():
    # p_t(x - y, x0 - y) = gauge factor * p_t(x, x0)
    w, t = 4.0, 0.4
    x, x0, y = (0.3, 0.5), (-0.2, 0.1), (0.7, -0.4)
    base = landau.plane_kernel_xy(x[0], x[1], x0[0], x0[1], t, w)
    moved = landau.plane_kernel_xy(x[0] - y[0], x[1] - y[1], x0[0] - y[0], x0[1] - y[1], t, w)
    xb, x0b = BiPolarPoint(*x, 1.0), BiPolarPoint(*x0, 1.0)
    assert abs(landau.gauge_shift(base, xb, x0b, y, P) - moved) < 1e-14


def test_cover_kernel_forms_agree():
    d = landau.covering_kernel_direct(1.0, 2.0, 0.8, 0.0, 0.5, P).value
    e = landau.covering_kernel_decomposed(1.0, 2.0, 0.8, 0.0, 0.5, P).value
    assert abs(d - e) < 1e-8 * abs(e)


def test_cover_kernel_forms_agree_beyond_pi():
    d = landau.covering_kernel_1(0.7, 4.5, 0.9, 0.0, 0.3, P, "direct")
    e = landau.covering_kernel_1(0.7, 4.5, 0.9, 0.0, 0.3, P, "decomposed")
    assert abs(d - e) < 1e-8 * abs(e)


def test_cover_kernel_first_term_is_plane_kernel():
    r, th, r0, t = 0.05, 0.0, 0.04, 0.5
    v = landau.covering_kernel_1(r, th, r0, 0.0, t, P)
    pk = landau.plane_kernel_polar(r, th, r0, 0.0, t, 4.0)
    assert abs(v - pk) < abs(pk)


def test_periodization_symmetric_sum_is_real():
    s = landau.periodization_sum(0.8, 0.0, 0.8, 0.5, P, 10)
    assert abs(s.imag) < 1e-14 * abs(s)


def test_periodization_decreases():
    r15 = landau.periodization_check(1.0, 0.5, 1.0, 0.5, P, 15)
    r25 = landau.periodization_check(1.0, 0.5, 1.0, 0.5, P, 25)
    assert r25 < r15


def test_periodization_residual_is_the_omitted_tail():
    res = landau.periodization_check(1.0, 0.5, 1.0, 0.5, P, 20)
    tail = landau.periodization_tail(1.0, 0.5, 1.0, 0.5, P, 20)
    # the tail formula is the leading large-N term; its relative correction is O(N^-2)
    assert abs(res - tail) < 1e-3 * tail


@pytest.mark.xfail(strict=True, reason="omitted tail of the periodized sum decays only "
                                       "like 1/N; at N = 20 it is ~1.6e-5")
def test_periodization_residual_below_1e8_at_N20():
    assert landau.periodization_check(1.0, 0.5, 1.0, 0.5, P, 20) < 1e-8
