"""Heat kernel of one Aharonov-Bohm solenoid in a uniform magnetic field.

Three evaluations of p_t^(alpha)(r, theta; r0, 0):

* ``ab1_kernel_integral``: the closed form "polar plane kernel minus
  sin(pi alpha)/pi times a single u-integral";
* ``ab1_kernel_expansion``: the truncated eigenfunction expansion over the
  modes f_{n,m} = C_n(m+alpha) r^|p| L_n^|p|(w r^2/2) e^{-w r^2/4} e^{i p theta};
* ``ab1_asymptotic``: the two leading long-time orders (lowest-Landau
  projection times e^{-wt/2} and the bound-state dyad times e^{-(alpha+1/2)wt}).

The angle theta is measured from the direction of x0 and the cut sits at
|theta| = pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import quad, specfun
from .landau import ModelParams, plane_kernel_polar

DEFAULT_N_MAX = 40
DEFAULT_M_WINDOW = (-80, 40)


@dataclass(frozen=True)
class Ab1EvalSelector:
    form: str = "integral"
    n_max: int = DEFAULT_N_MAX
    m_window: tuple = DEFAULT_M_WINDOW

    def __post_init__(self):
        if self.form not in ("integral", "eigen_expansion", "asymptotic_2term"):
            raise ValueError("unknown form")
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")
        lo, hi = self.m_window
        if not (lo <= 0 <= hi):
            raise ValueError("m_window must contain 0")


def _check(r, theta, r0, t):
    if r <= 0 or r0 <= 0:
        raise ValueError("r and r0 must be positive")
    if t <= 0:
        raise ValueError("t must be positive")
    if not abs(theta) < math.pi:
        raise ValueError("|theta| = pi lies on the cut")


def ab1_correction(r, theta, r0, t, params: ModelParams,
                   spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> quad.QuadResult:
    """The flux correction -sin(pi a)/pi * pref * int exp(-x cosh(u + wt/2))
    e^{a(u + i theta)}/(1 + e^{u + i theta}) du."""
    _check(r, theta, r0, t)
    w, a = params.omega_c, params.alpha
    h = 0.5 * w * t
    s = math.sinh(h)
    xarg = w * r * r0 / (2 * s)
    log_pref = (math.log(w / (4 * math.pi * s))
                - 0.25 * w * (r * r + r0 * r0) / math.tanh(h))
    eith = np.exp(1j * theta)

    def f(u):
        # combine the Gaussian prefactor with the cosh damping to avoid underflow
        return np.exp(log_pref - xarg * np.cosh(u + h) + a * (u + 1j * theta)) \
            / (1.0 + np.exp(u) * eith)

    res = quad.integrate_line(f, spec, points=(0.0, -h))
    c = -math.sin(math.pi * a) / math.pi
    return quad.QuadResult(c * res.value, abs(c) * res.err_estimate,
                           res.evaluations, abs(c) * res.truncation_bound)


def ab1_kernel_integral(r, theta, r0, t, params: ModelParams,
                        spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> complex:
    """One-solenoid heat kernel from its closed integral form (theta0 = 0)."""
    _check(r, theta, r0, t)
    base = complex(plane_kernel_polar(r, theta, r0, 0.0, t, params.omega_c))
    return base + ab1_correction(r, theta, r0, t, params, spec).value


# ---------------------------------------------------------------------------
# eigenfunction expansion
# ---------------------------------------------------------------------------

def mode_energy(n, m, params: ModelParams):
    """lambda_{n,m} = ((p + |p| + 1)/2 + n) omega_c with p = m + alpha."""
    p = np.asarray(m, dtype=float) + params.alpha
    return ((p + np.abs(p) + 1.0) / 2.0 + np.asarray(n)) * params.omega_c


def log_mode_norm(n, p, omega):
    """log C_n(p), C_n(p) = (w/2)^{(|p|+1)/2} (n!/(pi Gamma(n+|p|+1)))^{1/2}."""
    ap = np.abs(p)
    return (0.5 * (ap + 1.0) * math.log(omega / 2.0)
            + 0.5 * (gammaln(np.asarray(n) + 1.0) - math.log(math.pi)
                     - gammaln(np.asarray(n) + ap + 1.0)))


def mode_radial(n_max, p, r, omega):
    """Radial profiles C_n(p) r^|p| L_n^|p|(w r^2/2) e^{-w r^2/4}, n = 0..n_max.

    ``p`` is a 1-D array; returns shape (n_max+1, len(p)).
    """
    p = np.asarray(p, dtype=float)
    ap = np.abs(p)
    xx = 0.5 * omega * r * r
    lag = specfun.laguerre_table(n_max, ap, xx)
    n = np.arange(n_max + 1)[:, None]
    logc = log_mode_norm(n, p[None, :], omega)
    return lag * np.exp(logc + ap * math.log(r) - 0.25 * omega * r * r)


def mode_function(n, m, r, theta, params: ModelParams):
    """f_{n,m}(r, theta) (single mode)."""
    p = m + params.alpha
    rad = mode_radial(n, np.array([p]), r, params.omega_c)[n, 0]
    return rad * np.exp(1j * p * theta)


def ab1_kernel_expansion(r, theta, r0, t, params: ModelParams,
                         sel: Ab1EvalSelector = Ab1EvalSelector("eigen_expansion"),
                         return_tail: bool = False):
    """Truncated eigenfunction expansion sum e^{-t lambda} f(r,theta) conj f(r0,0).

    With ``return_tail=True`` also returns the magnitude of the outermost
    retained terms (last n row, both m edges) as a truncation proxy.
    """
    if r <= 0 or r0 <= 0 or t <= 0:
        raise ValueError("r, r0 and t must be positive")
    w = params.omega_c
    m = np.arange(sel.m_window[0], sel.m_window[1] + 1)
    p = m + params.alpha
    n = np.arange(sel.n_max + 1)[:, None]
    lam = mode_energy(n, m[None, :], params)
    terms = (np.exp(-t * lam) * mode_radial(sel.n_max, p, r, w)
             * mode_radial(sel.n_max, p, r0, w) * np.exp(1j * p * theta)[None, :])
    # fixed-order reduction: sum over n first, then over m
    value = complex(terms.sum(axis=0).sum())
    if return_tail:
        tail = float(np.abs(terms[-1]).sum() + np.abs(terms[:, 0]).sum()
                     + np.abs(terms[:, -1]).sum())
        return value, tail
    return value


# ---------------------------------------------------------------------------
# long-time asymptotics
# ---------------------------------------------------------------------------

def lll_projection(r, theta, r0, params: ModelParams,
                   spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> complex:
    """Coefficient of e^{-w t/2}: the lowest-Landau-level projection kernel."""
    w, a = params.omega_c, params.alpha
    g = -0.25 * w * (r * r + r0 * r0)
    rho = 0.5 * w * r * r0
    first = w / (2 * math.pi) * np.exp(g + rho * np.exp(-1j * theta))
    eith = np.exp(1j * theta)

    def f(u):
        return np.exp(g - rho * np.exp(u) + a * (u + 1j * theta)) / (1.0 + np.exp(u) * eith)

    res = quad.integrate_line(f, spec, decay=(a, None), points=(0.0,))
    return complex(first - math.sin(math.pi * a) * w / (2 * math.pi ** 2) * res.value)


def bound_state_dyad(r, theta, r0, params: ModelParams) -> complex:
    """Coefficient of e^{-(alpha+1/2) w t}: psi_1(r, theta) conj(psi_1(r0, 0))."""
    w, a = params.omega_c, params.alpha
    return complex(w / (2 * math.pi * math.gamma(1 + a))
                   * math.exp(-0.25 * w * (r * r + r0 * r0))
                   * (0.5 * w * r * r0) ** a * np.exp(1j * a * theta))


def ab1_asymptotic(r, theta, r0, t, params: ModelParams,
                   spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> complex:
    """Two leading long-time orders of the one-solenoid kernel."""
    _check(r, theta, r0, t)
    w, a = params.omega_c, params.alpha
    return (math.exp(-0.5 * w * t) * lll_projection(r, theta, r0, params, spec)
            + math.exp(-(a + 0.5) * w * t) * bound_state_dyad(r, theta, r0, params))


def lll_series(rho, phi, alpha, terms: int = 200) -> complex:
    """sum_{m>=1} rho^{m-alpha} e^{i m phi}/Gamma(m+1-alpha), summed to convergence."""
    total = 0j
    small = 0
    for m in range(1, terms + 1):
        term = np.exp((m - alpha) * math.log(rho) - math.lgamma(m + 1 - alpha)
                      + 1j * m * phi)
        total += term
        if abs(term) <= 1e-17 * abs(total):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
    return complex(total)


def lll_identity_lhs(rho, phi, alpha, spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> complex:
    """exp(rho e^{i phi}) e^{i alpha phi} - sin(pi alpha)/pi int exp(-rho e^u)
    e^{alpha u}/(1 + e^{u - i phi}) du."""
    emi = np.exp(-1j * phi)

    def f(u):
        return np.exp(-rho * np.exp(u) + alpha * u) / (1.0 + np.exp(u) * emi)

    res = quad.integrate_line(f, spec, decay=(alpha, None), points=(0.0,))
    return complex(np.exp(rho * np.exp(1j * phi) + 1j * alpha * phi)
                   - math.sin(math.pi * alpha) / math.pi * res.value)


def lll_projection_identity(rho, phi, alpha,
                            spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> float:
    """|LHS - RHS| of the lowest-Landau series identity."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    if not abs(phi) < math.pi:
        raise ValueError("phi must lie in (-pi, pi)")
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    return abs(lll_identity_lhs(rho, phi, alpha, spec) - lll_series(rho, phi, alpha))
