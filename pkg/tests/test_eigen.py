import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from abheat import eigen
from abheat.landau import BiPolarPoint, ModelParams

FIG2 = ModelParams.from_D(4.0, 3.5, 0.4, 0.7)
FIG1 = ModelParams(4.0, 0.4, 0.7, 1.0)


def test_energy_e1():
    assert abs(eigen.energy_e1(FIG2) - 0.9 * 4.0) < 1e-15


def test_psi1_norm():
    assert abs(eigen.psi1_radial_norm(FIG1) - 1.0) < 1e-8


def test_psi1_vanishes_at_a():
    assert abs(complex(eigen.psi1(BiPolarPoint(0.0, 0.0, 1.0), FIG1))) == 0.0


def test_psi1_ring_maximum():
    r = np.linspace(0.05, 1.5, 2901)
    d = np.abs(np.asarray(eigen.psi1(BiPolarPoint(r, np.full_like(r, 0.3), 1.0), FIG1))) ** 2
    rr = np.hypot(r, 0.3)
    # along any ray the maximum sits at r_a = sqrt(2 alpha / w)
    th = np.linspace(-3.0, 3.0, 7)
    for t in th:
        pts = BiPolarPoint(r * math.cos(t), r * math.sin(t), 1.0)
        d = np.abs(np.asarray(eigen.psi1(pts, FIG1))) ** 2
        assert abs(r[np.argmax(d)] - math.sqrt(0.2)) < 1e-3
    assert rr.size == d.size


def test_psi2_vanishes_at_b():
    b = BiPolarPoint(FIG2.R, 0.0, FIG2.R)
    assert abs(complex(eigen.psi2_tilde(b, FIG2))) < 1e-10


def test_phi_forms_agree():
    R = FIG2.R
    rng = np.random.default_rng(5)
    rb = R * rng.uniform(0.05, 0.9, 20)
    th = rng.uniform(-math.pi / 2, math.pi / 2, 20)
    pts = BiPolarPoint.from_polar_b(rb, th, R)
    fi = np.asarray(eigen.phi_integral(pts, FIG2))
    fh = np.asarray(eigen.phi_hypergeometric(pts, FIG2))
    assert np.max(np.abs(fi - fh) / np.abs(fh)) < 1e-6


@settings(max_examples=12, deadline=None)
@given(st.floats(0.02, 0.9), st.floats(0.05, 0.95), st.floats(0.05, 0.9), st.floats(-3.0, 3.0))
def test_phi_forms_agree_across_fluxes(a, gap, rb, th):
    b = a + gap * (1 - a)
    if not (a < b < 1):
        return
    p = ModelParams.from_D(4.0, 3.5, a, b)
    x = BiPolarPoint.from_polar_b(rb * p.R, th, p.R)
    fi = complex(eigen.phi_integral(x, p))
    fh = complex(eigen.phi_hypergeometric(x, p))
    assert abs(fi - fh) < 1e-9 * abs(fi)


def test_phi_is_a_small_correction():
    R = FIG2.R
    x = BiPolarPoint(0.3 * R, 0.4 * R, R)
    v = complex(eigen.phi(x, FIG2))
    assert abs(v) > 0 and abs(v) < abs(complex(eigen.psi1(x, FIG2)))


def test_phi_on_lb_independent_of_contour_shift():
    x1 = FIG2.R * np.array([1.2, 1.7, 2.5])
    a = eigen.phi_on_lb(x1, FIG2, shift=0.3)
    b = eigen.phi_on_lb(x1, FIG2, shift=0.7)
    assert np.max(np.abs(a - b) / np.abs(a)) < 1e-10


def test_psi2_on_lb_is_upper_side_limit():
    R = FIG2.R
    x1 = np.array([1.5 * R])
    on = eigen.psi2_tilde_on_lb(x1, FIG2)[0]
    near = [complex(eigen.psi2_tilde(BiPolarPoint(x1[0], d, R), FIG2)) for d in (1e-3, 5e-4)]
    # linear extrapolation of the one-sided values to x2 = 0+
    extrap = 2 * near[1] - near[0]
    assert abs(extrap - on) < 1e-5 * abs(on)


def test_eigen_residual_psi2():
    R = FIG2.R
    rng = np.random.default_rng(21)
    n = 0
    while n < 10:
        x1, x2 = rng.uniform(-1.5, 2.5) * R, rng.uniform(-1.5, 1.5) * R
        if abs(x2) < 0.05 * R:
            continue
        assert eigen.eigen_residual(BiPolarPoint(x1, x2, R), FIG2) < 1e-4
        n += 1


def test_eigen_residual_psi1_and_detuned_control():
    R = FIG2.R
    x = BiPolarPoint(0.3 * R, 0.4 * R, R)
    assert eigen.eigen_residual(x, FIG2, which="psi1") < 1e-4
    det = eigen.eigen_residual(x, FIG2, which="psi1", energy=(FIG2.alpha + 1.5) * FIG2.omega_c)
    assert det > 0.1


def test_eigen_residual_rejects_cut_points():
    R = FIG2.R
    with pytest.raises(ValueError):
        eigen.eigen_residual(BiPolarPoint(-0.5 * R, 0.0, R), FIG2)


def test_g_identities():
    r1, r2 = eigen.g_identity_residuals(0.8 + 0.3j, FIG2)
    assert r1 < 1e-6 and r2 < 1e-6
    d1, d2 = eigen.g_identity_residuals(0.8 + 0.3j, FIG2, alpha_rhs=FIG2.alpha + 0.2)
    assert d1 > 0.1 and d2 > 0.1


def test_g_identities_independent_zbar():
    r1, r2 = eigen.g_identity_residuals(0.5 + 0.2j, FIG2, zbar=0.3 - 0.6j)
    assert r1 < 1e-6 and r2 < 1e-6


def test_lb_jump_linear_in_delta():
    r_b = 0.5 * FIG2.R
    d1 = eigen.lb_jump_defect(r_b, 1e-3, FIG2)
    d2 = eigen.lb_jump_defect(r_b, 5e-4, FIG2)
    assert abs(d1 / d2 - 2.0) < 0.05
    g1 = eigen.lb_jump_defect(r_b, 1e-3, FIG2, derivative=True)
    g2 = eigen.lb_jump_defect(r_b, 5e-4, FIG2, derivative=True)
    assert abs(g1 / g2 - 2.0) < 0.1


def test_la_defect_scaling():
    d10 = eigen.la_defect(ModelParams.from_D(4.0, 10.0, 0.4, 0.7))
    d20 = eigen.la_defect(ModelParams.from_D(4.0, 20.0, 0.4, 0.7))
    pred = eigen.la_defect_prediction(10.0, 20.0, 0.4, 0.7)
    q = (d10 / d20) / pred
    assert 1 / 3 < q < 3


def test_psi2_norm_at_D10():
    p = ModelParams.from_D(4.0, 10.0, 0.4, 0.7)
    assert abs(eigen.psi2_norm(p) - 1.0) < 10 * math.exp(-5.0)


def test_density_grid_psi1():
    g = eigen.density_grid("psi1", FIG1, 161, 161, 4.0)
    assert abs(g.norm() - 1.0) < 1e-3
    assert abs(math.hypot(*g.argmax()) - math.sqrt(0.8)) < math.hypot(*g.spacing)


def test_density_grid_psi2_flags_and_zero_at_b():
    g = eigen.density_grid("psi2", FIG2, 41, 41, 4.0, center=(0.0, 0.0))
    s = math.sqrt(FIG2.omega_c)
    j0 = int(np.argmin(np.abs(g.xi2)))
    assert g.xi2[j0] == 0.0
    assert g.flags[j0].any() and not g.flags[j0 + 1].any()
    assert np.all(np.isfinite(g.density))
    ib = np.argmin(np.abs(g.xi1 - FIG2.R * s))
    gb = eigen.density_grid("psi2", FIG2, 16, 16, 1.0,
                            center=(FIG2.R * s - 0.5 * (2.0 / 15), 0.0))
    assert ib >= 0 and gb.density.min() >= 0.0


def test_density_grid_validation():
    with pytest.raises(ValueError):
        eigen.density_grid("psi1", FIG1, 8, 8, 3.0)
    with pytest.raises(ValueError):
        eigen.density_grid("psi3", FIG1, 20, 20, 3.0)


def test_density_grid_threads_identical():
    a = eigen.density_grid("psi2", FIG2, 21, 17, 3.0)
    b = eigen.density_grid("psi2", FIG2, 21, 17, 3.0, workers=3)
    assert np.array_equal(a.density, b.density)
