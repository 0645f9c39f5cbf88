"""Numerical checks of the small-epsilon expansion of a damped double integral
and of the closed-form evaluation of a Laplace-type integral.

The double integral is

    I(eps) = int int V(eps, u1, u2) du1 du2,
    V = exp(-(X e^{u1} + Y e^{u2} + Z e^{u1+u2})
            - 2 eps (X cosh u1 + Y cosh u2 + Z cosh(u1+u2)))
        * e^{a u1 + b u2} / ((1 + e^{u1 + i phi1})(1 + e^{u2 + i phi2})),

with I(eps) - I(0) = Gamma(-a) K1 eps^a + O(eps^b), where
K1 = int (X + Z e^{-u})^a exp(-Y e^u) e^{b u}/(1 + e^{u + i phi2}) du.

Differences I(eps) - I(0) are integrated directly with the integrand
V(0) * expm1(-2 eps (...)), which avoids cancellation.  Expansion
coefficients and exponents are extracted from epsilon ladders by linear
least squares on the expected powers and by two-point log-ratios.

The eight intermediate lemmas used in the expansion are checked one by one
(``step_checks``) and the Laplace-type integral identity, including its
z = 0 case and the Beta-function/2F1 evaluation it rests on, is checked by
quadrature against its closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.special import beta as beta_fn

from . import quad, specfun

DEFAULT_LADDER = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8)
# the tiny absolute floor only matters where inner integrals are ~1e-200
_BOX_SPEC = quad.QuadSpec(rel_tol=1e-10, abs_tol=1e-20, dim=2)
_LINE_SPEC = quad.QuadSpec(rel_tol=1e-12, abs_tol=0.0)
_TAIL = 38.0  # e^{-38} ~ 3e-17: exponent budget for truncating e^{-s u} tails


@dataclass(frozen=True)
class AsymCase:
    X: float
    Y: float
    Z: float
    alpha: float
    beta: float
    phi1: float = 0.0
    phi2: float = 0.0
    ladder: Tuple[float, ...] = DEFAULT_LADDER

    def __post_init__(self):
        if not (self.X > 0 and self.Y > 0 and self.Z > 0):
            raise ValueError("X, Y, Z must be positive")
        if not (0 < self.alpha < self.beta < 1):
            raise ValueError("need 0 < alpha < beta < 1")
        for ph in (self.phi1, self.phi2):
            if not abs(ph) < math.pi:
                raise ValueError("phases must lie in (-pi, pi)")
        lad = tuple(float(e) for e in self.ladder)
        if any(e <= 0 for e in lad):
            raise ValueError("ladder entries must be positive")
        if any(e2 >= e1 for e1, e2 in zip(lad[:-1], lad[1:])):
            raise ValueError("ladder must be strictly decreasing")


CANONICAL = AsymCase(1.0, 1.0, 0.5, 0.3, 0.6, 0.0, 0.0)


# ---------------------------------------------------------------------------
# the integrand and the whole-plane integral
# ---------------------------------------------------------------------------

def _v0(case: AsymCase, u1, u2):
    e1, e2 = np.exp(u1), np.exp(u2)
    return (np.exp(-(case.X * e1 + case.Y * e2 + case.Z * e1 * e2)
                   + case.alpha * u1 + case.beta * u2)
            / ((1.0 + e1 * np.exp(1j * case.phi1)) * (1.0 + e2 * np.exp(1j * case.phi2))))


def _damp_arg(case: AsymCase, u1, u2):
    return (case.X * np.cosh(u1) + case.Y * np.cosh(u2) + case.Z * np.cosh(u1 + u2))


def v_function(case: AsymCase, eps: float, u1, u2):
    """V(eps, u1, u2)."""
    return _v0(case, u1, u2) * np.exp(-2 * eps * _damp_arg(case, u1, u2))


def _dv(case: AsymCase, eps: float, s1: float = 1.0, s2: float = 1.0):
    """Integrand of I(eps) - I(0) (eps > 0) or of I(0) (eps = 0), with the
    sign flips u_j -> s_j u_j applied."""
    if eps == 0.0:
        return lambda u1, u2: _v0(case, s1 * u1, s2 * u2)
    return lambda u1, u2: (_v0(case, s1 * u1, s2 * u2)
                           * np.expm1(-2 * eps * _damp_arg(case, s1 * u1, s2 * u2)))


def _axis_bounds(rate: float, coef: float, eps: float):
    """(lo, hi) for an axis with e^{rate u} decay on the left and
    exp(-coef e^u) decay on the right."""
    lo = -(_TAIL / rate + (math.log(1.0 / eps) if eps > 0 else 0.0) + 5.0)
    hi = math.log(60.0 / coef) + 2.0
    return lo, max(hi, 2.0)


def _box(f, bounds, points, spec):
    return quad.integrate_box(f, 2, spec, bounds=bounds, points=points)


def v_integral_result(case: AsymCase, eps: float, difference: bool = False,
                      spec: quad.QuadSpec = _BOX_SPEC) -> quad.QuadResult:
    """I(eps) (or I(eps) - I(0) when ``difference``) over the whole plane."""
    if eps < 0:
        raise ValueError("eps must be non-negative")
    if difference and eps == 0.0:
        return quad.QuadResult(0j, 0.0, 0, 0.0)
    b1 = _axis_bounds(case.alpha, case.X, eps)
    b2 = _axis_bounds(case.beta, case.Y, eps)
    pts1 = (0.0,) + ((math.log(eps),) if eps > 0 else ())
    pts2 = (0.0,) + ((math.log(eps),) if eps > 0 else ())
    if difference:
        f = _dv(case, eps)
    else:
        def f(u1, u2):
            return v_function(case, eps, u1, u2)
    return _box(f, [b1, b2], [pts1, pts2], spec)


def v_integral(case: AsymCase, eps: float,
               spec: quad.QuadSpec = _BOX_SPEC) -> complex:
    """int int V(eps, u1, u2) du1 du2."""
    return v_integral_result(case, eps, False, spec).value


def v_difference(case: AsymCase, eps: float,
                 spec: quad.QuadSpec = _BOX_SPEC) -> complex:
    """I(eps) - I(0), integrated directly."""
    return v_integral_result(case, eps, True, spec).value


def leading_coefficient(case: AsymCase, spec: quad.QuadSpec = _LINE_SPEC) -> complex:
    """Gamma(-a) int (X + Z e^{-u})^a exp(-Y e^u) e^{b u}/(1 + e^{u + i phi2}) du."""
    a, b = case.alpha, case.beta
    eph = np.exp(1j * case.phi2)

    def f(u):
        lg = np.logaddexp(math.log(case.X), math.log(case.Z) - u)
        return np.exp(a * lg - case.Y * np.exp(u) + b * u) / (1.0 + np.exp(u) * eph)
    res = quad.integrate_line(f, spec, decay=(b - a, None), points=(0.0,))
    return complex(specfun.gamma(-a) * res.value)


# ---------------------------------------------------------------------------
# ladder fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LadderFit:
    """Fit of a ladder of differences d(eps) by sum_k c_k eps^{p_k}.

    ``coefficients`` are the least-squares c_k; ``slopes`` the two-point
    log-ratio exponents of |d| between consecutive ladder entries;
    ``residual_slope`` the two-point exponent of d - c_0 eps^{p_0} between
    the two smallest entries.
    """

    eps: Tuple[float, ...]
    values: Tuple[complex, ...]
    powers: Tuple[float, ...]
    coefficients: Tuple[complex, ...]
    slopes: Tuple[float, ...]
    residual_slope: float

    @property
    def leading(self) -> complex:
        return self.coefficients[0]

    @property
    def exponent(self) -> float:
        """Two-point exponent at the small-eps end of the ladder."""
        return self.slopes[-1]


def fit_ladder(eps: Sequence[float], values: Sequence[complex],
               powers: Sequence[float]) -> LadderFit:
    eps = np.asarray(eps, dtype=float)
    vals = np.asarray(values, dtype=complex)
    if eps.size < max(2, len(powers)):
        raise ValueError("ladder too short for the fit")
    if np.any(np.diff(eps) >= 0):
        raise ValueError("ladder must be strictly decreasing")
    mags = np.abs(vals)
    if np.any(mags == 0) or np.any(np.diff(mags) > 0):
        raise ArithmeticError("ladder differences are not monotone")
    # scale columns so the least-squares problem is well conditioned
    A = np.stack([eps ** p for p in powers], axis=1)
    scale = np.max(np.abs(A), axis=0)
    coef, *_ = np.linalg.lstsq((A / scale).astype(complex), vals, rcond=None)
    coef = coef / scale
    le = np.log(eps)
    slopes = np.diff(np.log(mags)) / np.diff(le)
    resid = vals - coef[0] * eps ** powers[0]
    rs = float(np.log(abs(resid[-1]) / abs(resid[-2])) / (le[-1] - le[-2]))
    return LadderFit(tuple(eps.tolist()), tuple(vals.tolist()), tuple(powers),
                     tuple(complex(c) for c in coef), tuple(slopes.tolist()), rs)


@dataclass(frozen=True)
class PropositionReport:
    """``residual_exponent`` is the two-point exponent of
    I(eps) - I(0) - predicted * eps^alpha at the small-eps end."""

    fit: LadderFit
    predicted: complex
    coefficient_error: float
    exponent: float
    residual_exponent: float


def proposition_check(case: AsymCase = CANONICAL,
                      spec: quad.QuadSpec = _BOX_SPEC) -> PropositionReport:
    """Fit I(eps) - I(0) on the ladder by K eps^a + M eps^b + N eps and compare
    K with the predicted coefficient."""
    lad = case.ladder
    if len(lad) < 3 or lad[0] / lad[-1] < 100 or lad[0] > 1e-2:
        raise ValueError("ladder must span at least two decades below 1e-2")
    vals = [v_difference(case, e, spec) for e in lad]
    fit = fit_ladder(lad, vals, (case.alpha, case.beta, 1.0))
    pred = leading_coefficient(case)
    # the remainder after the predicted leading term should scale as eps^beta
    eps = np.asarray(lad)
    resid = np.abs(np.asarray(vals) - pred * eps ** case.alpha)
    rs = float(np.log(resid[-1] / resid[-2]) / np.log(eps[-1] / eps[-2]))
    return PropositionReport(fit, pred, abs(fit.leading - pred) / abs(pred),
                             fit.exponent, rs)


# ---------------------------------------------------------------------------
# the lemmas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepReport:
    """Outcome of one lemma check.

    ``residual`` is a relative error (exact identities) or the relative
    coefficient error (asymptotic statements).  For asymptotic statements
    ``exponent`` is the fitted leading exponent and ``expected`` the claimed
    one.
    """

    step: str
    residual: float
    exponent: Optional[float] = None
    expected: Optional[float] = None
    details: Dict[str, object] = field(default_factory=dict)


def _line(f, lo, hi, spec=_LINE_SPEC, points=()):
    v, e, _ = quad.integrate_line_vector(quad._wrap1(f), spec, lo, hi, points)
    return complex(v[0])


# Step 1 ---------------------------------------------------------------------

def step1_difference(X: float, alpha: float, phi: float, eps: float) -> complex:
    """int (exp(-X e^u - 2 eps X cosh u) - exp(-X e^u)) e^{a u}/(1 + e^{u+i phi}) du."""
    eph = np.exp(1j * phi)

    def f(u):
        return (np.exp(-X * np.exp(u) + alpha * u) / (1.0 + np.exp(u) * eph)
                * np.expm1(-2 * eps * X * np.cosh(u)))
    lo = -(_TAIL / alpha + math.log(1.0 / eps) + 5.0)
    hi = max(math.log(60.0 / X) + 2.0, 2.0)
    return _line(f, lo, hi, points=(0.0, math.log(eps)))


def step1_check(X: float = 1.0, alpha: float = 0.4, phi: float = 0.3,
                ladder: Sequence[float] = DEFAULT_LADDER) -> StepReport:
    vals = [step1_difference(X, alpha, phi, e) for e in ladder]
    fit = fit_ladder(ladder, vals, (alpha, 1.0))
    pred = specfun.gamma(-alpha) * X ** alpha
    return StepReport("1", abs(fit.leading - pred) / abs(pred), fit.exponent,
                      alpha, {"fit": fit, "predicted": pred})


# Step 2 ---------------------------------------------------------------------

def step2_closed(a: float, b: float, sigma: float, nu: float, eps: float,
                 terms: int = 80) -> float:
    """(a^{nu-sigma} G(-nu) eps^nu - b^{sigma-nu} G(-sigma) eps^sigma)/(sigma-nu)
    + a^{-sigma} b^{-nu} sum_k (-1)^k (a b eps)^k/(k! (k-sigma)(k-nu))."""
    if sigma == nu:
        raise ValueError("sigma = nu only as a limit")
    first = ((a ** (nu - sigma) * specfun.gamma(-nu) * eps ** nu
              - b ** (sigma - nu) * specfun.gamma(-sigma) * eps ** sigma)
             / (sigma - nu))
    x = a * b * eps
    k = np.arange(terms)
    logt = k * math.log(x) - np.array([math.lgamma(kk + 1) for kk in k])
    series = np.sum((-1.0) ** k * np.exp(logt) / ((k - sigma) * (k - nu)))
    # remainder bound of the alternating tail (terms decrease once k > x)
    return float(first + a ** (-sigma) * b ** (-nu) * series)


def step2_quadrature(a: float, b: float, sigma: float, nu: float, eps: float) -> float:
    """int_a^inf int_b^inf e^{-eps t1 t2} t1^{-1-sigma} t2^{-1-nu} dt1 dt2.

    The inner t1-integral is (eps t2)^sigma Gamma(-sigma, eps a t2); the outer
    one is done by quadrature in s = ln(t2/b).
    """
    def f(s):
        t2 = b * np.exp(s)
        inner = np.array([(eps * t) ** sigma * specfun.inc_gamma_upper(-sigma, eps * a * t)
                          for t in np.atleast_1d(t2)])
        return inner * t2 ** (-nu)
    hi = math.log(80.0 / (eps * a * b)) + 2.0
    return _line(f, 0.0, hi).real


def step2_check(a: float = 1.0, b: float = 1.0, sigma: float = 0.6,
                nu: float = 0.3, eps: float = 0.05) -> StepReport:
    q = step2_quadrature(a, b, sigma, nu, eps)
    c = step2_closed(a, b, sigma, nu, eps)
    return StepReport("2", abs(q - c) / abs(c), details={"quadrature": q, "closed": c})


# Step 3 ---------------------------------------------------------------------

def step3_quadrature(X, Y, Z, alpha, beta, eps) -> float:
    """int_0^inf int_0^inf exp(-eps (X e^{u1} + Y e^{u2} + Z e^{u1+u2})) e^{-a u1 - b u2}."""
    def f(u1, u2):
        e1, e2 = np.exp(u1), np.exp(u2)
        return np.exp(-eps * (X * e1 + Y * e2 + Z * e1 * e2) - alpha * u1 - beta * u2)
    h1 = math.log(60.0 / (eps * X)) + 2.0
    h2 = math.log(60.0 / (eps * Y)) + 2.0
    return _box(f, [(0.0, h1), (0.0, h2)], None, _BOX_SPEC).value.real


def step3_leading(X, Y, Z, alpha, beta, eps) -> float:
    """1/(a b) + G(-a)(X+Z)^a/(b-a) 2F1(1,-a;1-a+b;X/(X+Z)) eps^a + (a <-> b, X <-> Y)."""
    t_a = (specfun.gamma(-alpha) * (X + Z) ** alpha / (beta - alpha)
           * specfun.hyp2f1(1.0, -alpha, 1 - alpha + beta, X / (X + Z)).real)
    t_b = (specfun.gamma(-beta) * (Y + Z) ** beta / (alpha - beta)
           * specfun.hyp2f1(1.0, -beta, 1 + alpha - beta, Y / (Y + Z)).real)
    return 1.0 / (alpha * beta) + t_a * eps ** alpha + t_b * eps ** beta


def step3_check(X=1.0, Y=1.0, Z=0.5, alpha=0.3, beta=0.6,
                ladder: Sequence[float] = (1e-2, 1e-3, 1e-4, 1e-5)) -> StepReport:
    """Remainder after the three leading terms; its exponent should be 1."""
    rem = [step3_quadrature(X, Y, Z, alpha, beta, e) - step3_leading(X, Y, Z, alpha, beta, e)
           for e in ladder]
    le = np.log(ladder)
    slopes = np.diff(np.log(np.abs(rem))) / np.diff(le)
    rel = abs(rem[-1]) / step3_leading(X, Y, Z, alpha, beta, ladder[-1])
    return StepReport("3", float(rel), float(slopes[-1]), 1.0,
                      {"remainders": rem, "slopes": slopes.tolist()})


# Step 4 ---------------------------------------------------------------------

def _step4_F(t, sigma):
    return (1.0 + t) ** (-sigma)


def step4_difference(a, b, gamma_, sigma, eps) -> float:
    """LHS - a^{-g}/g int_b^inf F, with F(t) = (1 + t)^{-sigma}; the inner
    t1-integral is (eps t2)^g Gamma(-g, eps a t2)."""
    def f(s):
        t2 = b * np.exp(s)
        inner = np.array([(eps * t) ** gamma_ * specfun.inc_gamma_upper(-gamma_, eps * a * t)
                          - a ** (-gamma_) / gamma_ for t in np.atleast_1d(t2)])
        return inner * _step4_F(t2, sigma) * t2
    hi = math.log(1.0 / eps) + _TAIL / (sigma - 1.0) + 5.0
    return _line(f, 0.0, hi, points=(math.log(1.0 / (eps * a * b)),)).real


def step4_check(a=1.0, b=1.0, gamma_=0.4, sigma=3.0,
                ladder: Sequence[float] = DEFAULT_LADDER) -> StepReport:
    if not sigma > 2:
        raise ValueError("this lemma is stated for sigma > 2")
    vals = [step4_difference(a, b, gamma_, sigma, e) for e in ladder]
    fit = fit_ladder(ladder, vals, (gamma_, 1.0))
    mom = _line(lambda s: _step4_F(b * np.exp(s), sigma) * (b * np.exp(s)) ** (1 + gamma_),
                0.0, _TAIL / (sigma - 1 - gamma_) + 5.0).real
    pred = specfun.gamma(-gamma_) * mom
    return StepReport("4", abs(fit.leading - pred) / abs(pred), fit.exponent,
                      gamma_, {"fit": fit, "predicted": pred})


# Step 5 ---------------------------------------------------------------------

def step5_difference(X, Z, alpha, sigma, eps) -> float:
    """LHS - (1/a) int F with F(u) = e^{-sigma u}; inner u1-integral is
    (eps W)^a Gamma(-a, eps W), W = X + Z e^{u2}."""
    def f(u2):
        W = X + Z * np.exp(u2)
        inner = np.array([(eps * w) ** alpha * specfun.inc_gamma_upper(-alpha, eps * w)
                          - 1.0 / alpha for w in np.atleast_1d(W)])
        return inner * np.exp(-sigma * u2)
    hi = _TAIL / (sigma - alpha) + 5.0
    return _line(f, 0.0, hi).real


def step5_check(X=1.0, Z=0.5, alpha=0.3, sigma=1.5,
                ladder: Sequence[float] = DEFAULT_LADDER) -> StepReport:
    if not sigma > 1:
        raise ValueError("this lemma is stated for sigma > 1")
    vals = [step5_difference(X, Z, alpha, sigma, e) for e in ladder]
    fit = fit_ladder(ladder, vals, (alpha, 1.0))
    mom = _line(lambda u: (Z * np.exp(u) + X) ** alpha * np.exp(-sigma * u),
                0.0, _TAIL / (sigma - alpha) + 5.0).real
    pred = specfun.gamma(-alpha) * mom
    return StepReport("5", abs(fit.leading - pred) / abs(pred), fit.exponent,
                      alpha, {"fit": fit, "predicted": pred})


# Step 6 ---------------------------------------------------------------------

def step6_sides(X, Z, c, d) -> Tuple[float, float]:
    """int_0^1 (X t + Z)^d t^c dt and (X+Z)^d/(1+c) 2F1(1, -d; c+2; X/(X+Z))."""
    if not (X > 0 and Z > 0 and c > -1):
        raise ValueError("need X, Z > 0 and c > -1")
    # t = e^{-v} turns the endpoint power law into exponential decay
    spec = quad.QuadSpec(rel_tol=1e-13, abs_tol=0.0)
    q = _line(lambda v: (X * np.exp(-v) + Z) ** d * np.exp(-(1.0 + c) * v),
              0.0, _TAIL / (1.0 + c) + 5.0, spec).real
    closed = ((X + Z) ** d / (1 + c)
              * specfun.hyp2f1(1.0, -d, c + 2.0, X / (X + Z)).real)
    return q, closed


def step6_check(X=1.0, Z=0.5, c=0.2, d=0.4) -> StepReport:
    q, cl = step6_sides(X, Z, c, d)
    return StepReport("6", abs(q - cl) / abs(cl), details={"quadrature": q, "closed": cl})


# quadrant integrals (Steps 7, 8 and the mixed quadrant) ----------------------

_QUADRANT_SIGNS = {"++": (1.0, 1.0), "--": (-1.0, -1.0), "-+": (-1.0, 1.0),
                   "+-": (1.0, -1.0)}


def quadrant_integral(case: AsymCase, eps: float, quadrant: str,
                      difference: bool = False,
                      spec: quad.QuadSpec = _BOX_SPEC) -> complex:
    """int_0^inf int_0^inf V(eps, s1 u1, s2 u2) du1 du2 for quadrant "s1s2".

    With ``difference`` the eps = 0 value is subtracted inside the integrand.
    """
    s1, s2 = _QUADRANT_SIGNS[quadrant]
    if difference and eps == 0.0:
        return 0j

    def ext(rate, coef, sign):
        if sign > 0:
            return max(math.log(60.0 / coef) + 2.0, 2.0)
        return _TAIL / rate + (math.log(1.0 / eps) if eps > 0 else 0.0) + 5.0
    b1 = (0.0, ext(case.alpha, case.X, s1))
    b2 = (0.0, ext(case.beta, case.Y, s2))
    pts = [((math.log(1.0 / eps),) if (eps > 0 and s < 0) else ()) for s in (s1, s2)]
    pts = [tuple(p for p in pp if lo < p < hi) for pp, (lo, hi) in zip(pts, (b1, b2))]
    if difference:
        f = _dv(case, eps, s1, s2)
    else:
        def f(u1, u2):
            return v_function(case, eps, s1 * u1, s2 * u2)
    return _box(f, [b1, b2], pts, spec).value


def minusminus_coefficient(case: AsymCase) -> complex:
    """Gamma(-a) int_0^inf (Z e^u + X)^a exp(-Y e^{-u}) e^{-b u}/(1 + e^{-u+i phi2}) du."""
    a, b = case.alpha, case.beta
    eph = np.exp(1j * case.phi2)

    def f(u):
        return ((case.Z * np.exp(u) + case.X) ** a * np.exp(-case.Y * np.exp(-u) - b * u)
                / (1.0 + np.exp(-u) * eph))
    return complex(specfun.gamma(-a) * _line(f, 0.0, _TAIL / (b - a) + 5.0))


def minusplus_coefficient(case: AsymCase) -> complex:
    """Gamma(-a) int_0^inf (Z e^{-u} + X)^a exp(-Y e^u) e^{b u}/(1 + e^{u+i phi2}) du."""
    a, b = case.alpha, case.beta
    eph = np.exp(1j * case.phi2)

    def f(u):
        return ((case.Z * np.exp(-u) + case.X) ** a * np.exp(-case.Y * np.exp(u) + b * u)
                / (1.0 + np.exp(u) * eph))
    return complex(specfun.gamma(-a) * _line(f, 0.0, max(math.log(60.0 / case.Y) + 2.0, 2.0)))


def step7_check(case: AsymCase = CANONICAL) -> StepReport:
    """Quadrant u1, u2 < 0: eps^alpha coefficient and exponent."""
    vals = [quadrant_integral(case, e, "--", True) for e in case.ladder]
    fit = fit_ladder(case.ladder, vals, (case.alpha, case.beta, 1.0))
    pred = minusminus_coefficient(case)
    return StepReport("7", abs(fit.leading - pred) / abs(pred), fit.exponent,
                      case.alpha, {"fit": fit, "predicted": pred})


def minusplus_check(case: AsymCase = CANONICAL) -> StepReport:
    """Quadrant u1 < 0 < u2: eps^alpha coefficient with an O(eps) remainder."""
    vals = [quadrant_integral(case, e, "-+", True) for e in case.ladder]
    fit = fit_ladder(case.ladder, vals, (case.alpha, 1.0))
    pred = minusplus_coefficient(case)
    return StepReport("7b", abs(fit.leading - pred) / abs(pred), fit.exponent,
                      case.alpha, {"fit": fit, "predicted": pred})


def step8_check(case: AsymCase = CANONICAL) -> StepReport:
    """Quadrant u1, u2 > 0: the difference is O(eps) (exponent 1)."""
    vals = [quadrant_integral(case, e, "++", True) for e in case.ladder]
    fit = fit_ladder(case.ladder, vals, (1.0,))
    # relative deviation of d/eps from its small-eps value
    ratios = np.abs(np.asarray(vals) / np.asarray(case.ladder))
    return StepReport("8", float(abs(ratios[-1] - ratios[-2]) / ratios[-1]),
                      fit.exponent, 1.0, {"fit": fit})


def quadrant_sum_check(case: AsymCase, eps: float) -> Tuple[float, float]:
    """|sum of the four quadrant integrals - whole-plane integral| and the
    combined error estimate."""
    parts = [quadrant_integral(case, eps, q) for q in ("++", "--", "-+", "+-")]
    whole = v_integral_result(case, eps)
    tol = 4 * _BOX_SPEC.rel_tol * abs(whole.value) + whole.err_estimate
    return abs(sum(parts) - whole.value), tol


STEP_CHECKS: Dict[str, Callable[[], StepReport]] = {
    "1": step1_check, "2": step2_check, "3": step3_check, "4": step4_check,
    "5": step5_check, "6": step6_check, "7": step7_check, "7b": minusplus_check,
    "8": step8_check,
}


def step_checks(which: str) -> StepReport:
    """Run the check of lemma ``which`` ("1".."8", or "7b" for the mixed quadrant)."""
    if which not in STEP_CHECKS:
        raise ValueError(f"unknown step {which!r}")
    return STEP_CHECKS[which]()


# ---------------------------------------------------------------------------
# the Laplace-type integral
# ---------------------------------------------------------------------------

def _check_c(alpha, beta, c):
    if not alpha < beta < 1:
        raise ValueError("need alpha < beta < 1")
    if not (0 < abs(c) < 1):
        raise ValueError("need 0 < |c| < 1")
    if np.imag(c) == 0 and np.real(c) < 0:
        raise ValueError("need |arg c| < pi")


def int_u_lhs(alpha, beta, c, z, spec=_LINE_SPEC) -> complex:
    """int_0^inf (t + c)^a t^{b-a-1} e^{-z t}/(1 + t) dt."""
    _check_c(alpha, beta, c)
    if np.real(z) < 0:
        raise ValueError("need Re z >= 0")
    c = complex(c)

    def f(t):
        return (np.exp(alpha * np.log(t + c)) * t ** (beta - alpha - 1.0)
                * np.exp(-z * t) / (1.0 + t))
    # t^{b-2} is the decay envelope for every Re z >= 0; for small z the
    # exponential cut-off only sets in at t ~ 1/z, so the algebraic map is kept
    return quad.integrate_segment(f, 0.0, np.inf, spec, lo_exp=beta - alpha - 1.0,
                                  hi_exp=beta - 2.0).value


def int_f0_rhs(alpha, beta, c) -> complex:
    """pi/sin(pi b) ((1-c)^a - G(b-a)/(G(-a) G(1+b)) 2F1(1, b-a; 1+b; c) c^b)."""
    _check_c(alpha, beta, c)
    c = complex(c)
    k = specfun.gamma(beta - alpha) / (specfun.gamma(-alpha) * specfun.gamma(1 + beta))
    return complex(math.pi / math.sin(math.pi * beta)
                   * (np.exp(alpha * np.log(1 - c))
                      - k * specfun.hyp2f1(1.0, beta - alpha, 1 + beta, c)
                      * np.exp(beta * np.log(c))))


def int_u_rhs(alpha, beta, c, z, spec=_LINE_SPEC) -> complex:
    """int_F0 e^z - G(b-a) z^{1-b} int_0^1 e^{z t} U(-a, 1-b; c z (1-t)) (1-t)^{-b} dt."""
    _check_c(alpha, beta, c)
    if np.real(z) < 0:
        raise ValueError("need Re z >= 0")
    if z != 0 and not abs(np.angle(c) + np.angle(z)) < math.pi:
        # U(-a, 1-b; c z s) would be evaluated across its branch cut
        raise ValueError("need |arg c + arg z| < pi")
    base = int_f0_rhs(alpha, beta, c) * np.exp(z)
    if z == 0:
        return complex(base)
    c, z = complex(c), complex(z)

    # integrate in s = 1 - t so that the U argument keeps full precision, then
    # s = v^k with k = 3/(1 - b): s^{-b} ds = k v^2 dv, and the s^b part of U
    # becomes v^{3b/(1-b)}, which carries no endpoint cusp after the v^2 factor
    k = 3.0 / (1.0 - beta)

    def f(v):
        s = v ** k
        return (np.exp(z * (1.0 - s)) * specfun.hyp_u(-alpha, 1.0 - beta, c * z * s)
                * (k * v ** 2))
    integ = quad.integrate_segment(f, 0.0, 1.0, spec).value
    return complex(base - specfun.gamma(beta - alpha) * np.exp((1 - beta) * np.log(z))
                   * integ)


def appendix_c_identity(alpha, beta, c, z) -> float:
    """|LHS - RHS| of the Laplace-type integral identity."""
    return abs(int_u_lhs(alpha, beta, c, z) - int_u_rhs(alpha, beta, c, z))


def appendix_c_parts(alpha, beta, c, z) -> Tuple[complex, complex]:
    return int_u_lhs(alpha, beta, c, z), int_u_rhs(alpha, beta, c, z)


def beta_2f1_sides(nu, sigma, b, g) -> Tuple[float, float]:
    """int_0^inf x^{nu-1}(b+x)^{1-sigma}/(g+x) dx and
    b^{1-sigma} g^{nu-1} B(nu, sigma-nu) 2F1(sigma-1, nu; sigma; 1 - g/b)
    for real b, g > 0 with |1 - g/b| < 1 and 0 < nu < sigma."""
    if not (0 < nu < sigma):
        raise ValueError("need 0 < nu < sigma")
    if not (b > 0 and g > 0 and abs(1 - g / b) < 1):
        raise ValueError("need b, g > 0 and |1 - g/b| < 1")
    # x = e^v: exponential decay e^{nu v} and e^{(nu - sigma) v} at both ends
    def f(v):
        x = np.exp(v)
        return x ** nu * (b + x) ** (1.0 - sigma) / (g + x)
    lo = math.log(min(b, g)) - _TAIL / nu - 5.0
    hi = math.log(max(b, g)) + _TAIL / (sigma - nu) + 5.0
    q = _line(f, lo, hi, points=(math.log(b), math.log(g))).real
    closed = (b ** (1 - sigma) * g ** (nu - 1) * beta_fn(nu, sigma - nu)
              * specfun.hyp2f1(sigma - 1.0, nu, sigma, 1 - g / b).real)
    return q, float(closed)
