"""Verification suites: identity residuals and cross-form comparisons.

Each suite returns a list of :class:`Check` rows (name, value, tolerance,
passed).  A check passes when ``value <= tol`` (or ``value >= tol`` for
checks marked ``lower_bound``).  The suites back the ``verify`` CLI
subcommand; they use moderate sample sizes so that ``verify all`` finishes
in a few minutes.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List

import numpy as np

from . import ab1, ab2, asymlab, eigen, landau, shift, specfun
from .landau import BiPolarPoint, ModelParams


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float
    lower_bound: bool = False

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        return self.value >= self.tol if self.lower_bound else self.value <= self.tol

    def as_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _rel(a, b) -> float:
    return float(abs(a - b) / abs(b))


# ---------------------------------------------------------------------------
# specfun
# ---------------------------------------------------------------------------

def suite_specfun() -> List[Check]:
    out = []
    out.append(Check("gamma(0.5) = sqrt(pi)", _rel(specfun.gamma(0.5), math.sqrt(math.pi)), 1e-14))
    z = -0.4
    refl = math.pi / (math.sin(math.pi * z) * specfun.gamma(1 - z))
    out.append(Check("gamma reflection at -0.4", _rel(specfun.gamma(z), refl), 1e-13))

    n, s, x = 2, 0.5, 1.0
    lag = sum(math.gamma(n + s + 1) / (math.gamma(n - k + 1) * math.gamma(s + k + 1))
              * (-x) ** k / math.factorial(k) for k in range(n + 1))
    out.append(Check("laguerre(2, 0.5, 1) coefficient sum",
                     _rel(specfun.laguerre(n, s, x), lag), 1e-14))

    xb, zb = 1.3, 0.2
    gsum = sum(math.exp(zb * k) * specfun.bessel_i(abs(k), xb) for k in range(-30, 31))
    out.append(Check("Bessel generating sum", _rel(gsum, math.exp(xb * math.cosh(zb))), 1e-13))

    a_, b_, c_, sg = 0.7, 1.2, 0.5, 0.8
    nn = np.arange(300)
    lag_a = specfun.laguerre_table(299, np.array([sg]), a_)[:, 0]
    lag_b = specfun.laguerre_table(299, np.array([sg]), b_)[:, 0]
    lhs = float(np.sum(np.exp(-c_ * nn + specfun.log_gamma(nn + 1.0)
                              - specfun.log_gamma(nn + sg + 1.0)) * lag_a * lag_b))
    q = 1 - math.exp(-c_)
    rhs = (math.exp(sg * c_ / 2) / ((a_ * b_) ** (sg / 2) * q)
           * math.exp(-(a_ + b_) * math.exp(-c_) / q)
           * specfun.bessel_i(sg, 2 * math.sqrt(a_ * b_) * math.exp(-c_ / 2) / q))
    out.append(Check("Poisson kernel (300 terms)", _rel(lhs, rhs), 1e-8))

    a, b, c, zz = 1.0, 0.3, 1.7, 0.5
    out.append(Check("Euler transformation (second form)",
                     _rel(specfun.hyp2f1(a, b, c, zz),
                          (1 - zz) ** (c - a - b) * specfun.hyp2f1(c - a, c - b, c, zz)), 1e-12))
    zz = 0.3
    out.append(Check("Euler transformation (first form)",
                     _rel(specfun.hyp2f1(a, b, c, zz),
                          (1 - zz) ** (-a) * specfun.hyp2f1(a, c - b, c, zz / (zz - 1))), 1e-12))
    a, b, c, zz = 0.3, 0.7, 1.6, 0.4
    g = specfun.gamma
    rhs = (g(c) * g(c - a - b) / (g(c - a) * g(c - b)) * specfun.hyp2f1(a, b, a + b - c + 1, zz)
           + zz ** (c - a - b) * g(c) * g(a + b - c) / (g(a) * g(b))
           * specfun.hyp2f1(c - a, c - b, c - a - b + 1, zz))
    out.append(Check("2F1 transformation z -> 1 - z",
                     _rel(specfun.hyp2f1(a, b, c, 1 - zz), rhs), 1e-9))
    a, b, zz = 0.4, 0.7, 0.5
    res = abs(-b * specfun.hyp2f1(1, 1 + b - a, 2 + b, zz)
              - (1 - zz) * specfun.hyp2f1(2, 1 + b - a, 2 + b, zz)
              + (1 + b) * specfun.hyp2f1(1, b - a, 1 + b, zz))
    out.append(Check("2F1 contiguous relation", float(res), 1e-10))
    a, c, xx = -0.4, 0.3, 1.5
    res = abs(specfun.hyp1f1(a, c, xx) - (1 - xx / c) * specfun.hyp1f1(a + 1, c + 1, xx)
              - (a + 1) * xx / (c * (c + 1)) * specfun.hyp1f1(a + 2, c + 2, xx))
    out.append(Check("1F1 contiguous relation", float(res), 1e-10))
    a, c, zu = -0.4, 0.3, 1.2
    res = abs(specfun.hyp_u(a, c, zu) - zu ** (1 - c) * specfun.hyp_u(1 + a - c, 2 - c, zu))
    out.append(Check("U self-consistency", float(res), 1e-10))
    out.append(Check("U(0, c, z) = 1", float(abs(specfun.hyp_u(0.0, 0.3, 1.7) - 1)), 1e-12))
    out.extend(incomplete_gamma_checks())
    return out


def incomplete_gamma_forms(sigma: float, r: float):
    """The three expressions for Gamma(sigma, r): the e^{-r}-weighted series,
    the alternating series and the 1F1 form (summed to 120 terms)."""
    g = specfun.gamma(sigma)
    m = np.arange(120)
    logt = (m + sigma) * math.log(r) - np.array([specfun.log_gamma(k + sigma + 1.0) for k in m])
    sgn = np.array([1.0 if specfun.gamma(k + sigma + 1.0) > 0 else -1.0 for k in m])
    f1 = g * (1.0 - math.exp(-r) * float(np.sum(sgn * np.exp(logt))))
    k = np.arange(120)
    lt = (k + sigma) * math.log(r) - np.array([math.lgamma(kk + 1.0) for kk in k])
    f2 = g - float(np.sum((-1.0) ** k * np.exp(lt) / (k + sigma)))
    f3 = g - specfun.hyp1f1(sigma, 1 + sigma, -r).real * r ** sigma / sigma
    return f1, f2, f3


def incomplete_gamma_checks() -> List[Check]:
    """Absolute agreement of the three forms with inc_gamma_upper.

    The series forms obtain Gamma(sigma, r) as the difference of two numbers
    of size Gamma(sigma); near r = 10 that costs ~e^r digits relative to the
    (small) result, so the agreement is measured absolutely.
    """
    worst = 0.0
    for sg in (-0.7, -0.3, 0.4, 1.6):
        for r in (0.1, 0.5, 1.0, 2.5, 4.0, 6.0, 9.0, 9.9):
            ref = specfun.inc_gamma_upper(sg, r)
            worst = max(worst, *(abs(f - ref) for f in incomplete_gamma_forms(sg, r)))
    return [Check("incomplete gamma: three forms agree (absolute)", worst, 1e-10)]


# ---------------------------------------------------------------------------
# landau
# ---------------------------------------------------------------------------

def suite_landau() -> List[Check]:
    out = []
    p = ModelParams(4.0, 0.4, 0.7, 1.0)
    t = 0.5
    x = BiPolarPoint(0.3, -0.2, 1.0)
    out.append(Check("plane kernel diagonal",
                     _rel(landau.plane_kernel(x, x, t, p),
                          4.0 / (4 * math.pi * math.sinh(1.0))), 1e-14))
    y = BiPolarPoint(-0.5, 0.7, 1.0)
    out.append(Check("plane kernel hermiticity",
                     float(abs(landau.plane_kernel(x, y, t, p)
                               - np.conj(landau.plane_kernel(y, x, t, p)))), 1e-15))
    # Landau levels (n + 1/2) w, each of areal degeneracy w/(2 pi)
    w = 4.0
    trace = w * math.exp(-w * t / 2) / (2 * math.pi * (1 - math.exp(-w * t)))
    out.append(Check("Landau trace sum", _rel(landau.plane_kernel(x, x, t, p), trace), 1e-12))
    d = landau.covering_kernel_direct(1.0, 2.0, 0.8, 0.0, 0.5, p).value
    e = landau.covering_kernel_decomposed(1.0, 2.0, 0.8, 0.0, 0.5, p).value
    out.append(Check("cover kernel: direct vs decomposed", _rel(d, e), 1e-8))
    res = landau.periodization_check(1.0, 0.5, 1.0, 0.5, p, 20)
    tail = landau.periodization_tail(1.0, 0.5, 1.0, 0.5, p, 20)
    out.append(Check("periodization residual matches tail (N = 20)",
                     abs(res - tail) / tail, 0.05))
    r15 = landau.periodization_check(1.0, 0.5, 1.0, 0.5, p, 15)
    r25 = landau.periodization_check(1.0, 0.5, 1.0, 0.5, p, 25)
    out.append(Check("periodization residual decreases (N = 15 -> 25)", r25 / r15, 1.0))
    v = 0.3 + 0.1j
    yy = (0.4, -0.9)
    back = landau.gauge_shift(landau.gauge_shift(v, x, y, yy, p), x, y, (-yy[0], -yy[1]), p)
    out.append(Check("gauge shift round trip", float(abs(back - v)), 1e-15))
    return out


# ---------------------------------------------------------------------------
# ab1
# ---------------------------------------------------------------------------

def suite_ab1() -> List[Check]:
    out = []
    p = ModelParams(4.0, 0.4)
    worst = 0.0
    for (r, th, r0, t) in [(0.9, 0.6, 0.7, 0.8), (0.5, -2.0, 1.2, 0.3), (1.4, 2.8, 0.3, 0.8)]:
        a = ab1.ab1_kernel_integral(r, th, r0, t, p)
        b = ab1.ab1_kernel_expansion(r, th, r0, t, p)
        worst = max(worst, _rel(b, a))
    out.append(Check("integral vs eigen expansion (3 points)", worst, 1e-6))
    a = ab1.ab1_kernel_integral(0.9, 0.6, 0.7, 0.8, p)
    b = ab1.ab1_kernel_integral(0.7, -0.6, 0.9, 0.8, p)
    out.append(Check("hermiticity", _rel(np.conj(b), a), 1e-12))
    out.append(Check("lowest-Landau projection identity",
                     ab1.lll_projection_identity(1.0, 0.3, 0.4), 1e-9))
    wt = np.array([8.0, 10.0, 12.0])
    t = wt / p.omega_c
    rem = [abs(ab1.ab1_kernel_integral(0.9, 0.6, 0.7, tt, p)
               - ab1.ab1_asymptotic(0.9, 0.6, 0.7, tt, p)) for tt in t]
    slope = -np.polyfit(t, np.log(rem), 1)[0]
    out.append(Check("asymptotic remainder decay rate / (3 w/2)",
                     abs(slope / (1.5 * p.omega_c) - 1), 0.05))
    return out


# ---------------------------------------------------------------------------
# ab2
# ---------------------------------------------------------------------------

def suite_ab2() -> List[Check]:
    out = []
    tr = ab2.time_transform_check(1.2, (0.5, 1.0, 0.7), (0.3, -0.4), 4.0)
    out.append(Check("time transform: sum of times", tr.sum_residual, 1e-12))
    out.append(Check("time transform: round trip", tr.roundtrip, 1e-10))
    out.append(Check("time transform: Jacobian (finite differences)", tr.jacobian_rel, 1e-6))
    out.append(Check("time transform: coth identity", tr.coth_rel, 1e-10))
    out.append(Check("winding sum (|k| <= 2000)",
                     ab2.winding_sum_check(0.4, 0.3 + 0.2j, K=2000), 1e-7))
    p = ModelParams.from_D(4.0, 8.0, 0.4, 0.7)
    x0 = BiPolarPoint(0.2 * p.R, 0.0, p.R)
    x = BiPolarPoint(-0.1 * p.R, 0.2 * p.R, p.R)
    t = 0.8
    kv = ab2.ab2_kernel(x, x0, t, p, n_max=1)
    one = ab1.ab1_kernel_integral(x.r_a, x.theta_a - x0.theta_a, x0.r_a, t,
                                  ModelParams(p.omega_c, p.alpha))
    near = kv.terms["I"] + kv.terms["a"]
    out.append(Check("single-vortex reduction vs one-solenoid kernel", _rel(near, one), 1e-10))
    out.append(Check("far-vortex term / kernel", abs(kv.terms["b"]) / abs(one),
                     math.exp(-p.D / 8)))
    return out


# ---------------------------------------------------------------------------
# eigen
# ---------------------------------------------------------------------------

def suite_eigen() -> List[Check]:
    out = []
    p = ModelParams.from_D(4.0, 3.5, 0.4, 0.7)
    R = p.R
    out.append(Check("psi1 norm", abs(eigen.psi1_radial_norm(p) - 1), 1e-8))
    b = BiPolarPoint(R, 0.0, R)
    out.append(Check("psi2(b) = 0", abs(eigen.psi2_tilde(b, p)), 1e-10))
    rng = np.random.default_rng(7)
    rb = R * rng.uniform(0.1, 0.85, 8)
    th = rng.uniform(-1.4, 1.4, 8)
    pts = BiPolarPoint.from_polar_b(rb, th, R)
    fi = eigen.phi_integral(pts, p)
    fh = eigen.phi_hypergeometric(pts, p)
    out.append(Check("phi: integral vs hypergeometric form",
                     float(np.max(np.abs(fi - fh) / np.abs(fh))), 1e-6))
    worst = 0.0
    for (x1, x2) in [(0.3, 0.4), (0.9, 0.5), (1.4, -0.6), (-0.4, 0.7), (0.5, -0.3)]:
        worst = max(worst, eigen.eigen_residual(BiPolarPoint(x1 * R, x2 * R, R), p))
    out.append(Check("eigenvalue residual of psi2 (5 points)", worst, 1e-4))
    det = eigen.eigen_residual(BiPolarPoint(0.3 * R, 0.4 * R, R), p, which="psi1",
                               energy=(p.alpha + 1.5) * p.omega_c)
    out.append(Check("detuned-energy control", det, 0.1, lower_bound=True))
    g1r, g2r = eigen.g_identity_residuals(0.8 + 0.3j, p)
    out.append(Check("g1 identity", g1r, 1e-6))
    out.append(Check("g2 identity", g2r, 1e-6))
    return out


# ---------------------------------------------------------------------------
# shift
# ---------------------------------------------------------------------------

def suite_shift() -> List[Check]:
    out = []
    p = ModelParams.from_D(4.0, 20.0, 0.4, 0.7)
    r = shift.shift_result(p)
    out.append(Check("boundary vs closed shift at D = 20", r.relative_gap, 10 / 20))
    out.append(Check("Im / |.| of boundary shift at D = 20",
                     abs(r.deltaE_boundary.imag) / abs(r.deltaE_boundary), 0.1))
    slope = shift.log_slope(4.0, 0.4, 0.7, [20, 30, 40, 50, 60])
    out.append(Check("log|Delta E| slope / (-1/2)", abs(slope / -0.5 - 1), 0.02))
    return out


# ---------------------------------------------------------------------------
# appendices
# ---------------------------------------------------------------------------

def suite_appendix_a() -> List[Check]:
    return suite_specfun()


def suite_appendix_b() -> List[Check]:
    out = []
    pr = asymlab.proposition_check(asymlab.CANONICAL)
    out.append(Check("Proposition: coefficient", pr.coefficient_error, 0.02))
    out.append(Check("Proposition: exponent - alpha",
                     abs(pr.exponent - asymlab.CANONICAL.alpha), 0.05))
    out.append(Check("Proposition: residual exponent",
                     pr.residual_exponent, asymlab.CANONICAL.beta - 0.05, lower_bound=True))
    for key in ("1", "4", "5", "7", "7b"):
        rep = asymlab.step_checks(key)
        out.append(Check(f"step {key}: coefficient", rep.residual, 0.05))
        out.append(Check(f"step {key}: exponent", abs(rep.exponent - rep.expected), 0.05))
    rep = asymlab.step_checks("2")
    out.append(Check("step 2: closed form", rep.residual, 1e-7))
    rep = asymlab.step_checks("3")
    out.append(Check("step 3: remainder exponent", abs(rep.exponent - 1.0), 0.05))
    rep = asymlab.step_checks("6")
    out.append(Check("step 6: closed form", rep.residual, 1e-9))
    rep = asymlab.step_checks("8")
    out.append(Check("step 8: exponent", abs(rep.exponent - 1.0), 0.05))
    diff, tol = asymlab.quadrant_sum_check(asymlab.CANONICAL, 1e-3)
    out.append(Check("quadrant decomposition", diff, tol))
    return out


def suite_appendix_c() -> List[Check]:
    out = []
    a, b, c = 0.2, 0.6, 0.5
    lhs, rhs = asymlab.appendix_c_parts(a, b, c, 1.0)
    out.append(Check("Laplace-type identity at z = 1", abs(lhs - rhs), 1e-7))
    out.append(Check("z = 0 case", asymlab.appendix_c_identity(a, b, c, 0.0), 1e-8))
    out.append(Check("reality for real c", max(abs(lhs.imag), abs(rhs.imag)), 1e-10))
    q, cl = asymlab.beta_2f1_sides(0.4, 1.7, 1.0, 1.5)
    out.append(Check("Beta-2F1 evaluation", _rel(q, cl), 1e-7))
    return out


def suite_appendix() -> List[Check]:
    return ([Check("A: " + c.name, c.value, c.tol, c.lower_bound) for c in suite_appendix_a()]
            + [Check("B: " + c.name, c.value, c.tol, c.lower_bound) for c in suite_appendix_b()]
            + [Check("C: " + c.name, c.value, c.tol, c.lower_bound) for c in suite_appendix_c()])


SUITES: Dict[str, Callable[[], List[Check]]] = {
    "specfun": suite_specfun,
    "landau": suite_landau,
    "ab1": suite_ab1,
    "ab2": suite_ab2,
    "eigen": suite_eigen,
    "shift": suite_shift,
    "appendix": suite_appendix,
}

APPENDIX_PARTS: Dict[str, Callable[[], List[Check]]] = {
    "A": suite_appendix_a, "B": suite_appendix_b, "C": suite_appendix_c,
}


def run_suite(name: str) -> List[Check]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return SUITES[name]()


__all__ = ["Check", "SUITES", "APPENDIX_PARTS", "run_suite"]
