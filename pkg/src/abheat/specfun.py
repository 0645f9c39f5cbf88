"""Special functions used by the kernel and eigenfunction formulas.

Hypergeometric-type functions are summed from their defining series with a
three-consecutive-small-terms stopping rule; Laguerre polynomials use the
three-term recurrence; the upper incomplete gamma function switches between
its power series and Legendre's continued fraction.  Gamma functions and the
modified Bessel function I_nu are taken from ``scipy.special`` behind the
domain checks below.

All array-valued functions broadcast over their last (argument) input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from . import quad


@dataclass(frozen=True)
class SpecFunConfig:
    series_tol: float = 1e-16
    max_terms: int = 5000
    recurrence_switch: float = 12.0

    def __post_init__(self):
        if not (0.0 < self.series_tol < 1e-3):
            raise ValueError("series_tol must lie in (0, 1e-3)")
        if self.max_terms < 64:
            raise ValueError("max_terms must be at least 64")
        if self.recurrence_switch <= 0:
            raise ValueError("recurrence_switch must be positive")


DEFAULT = SpecFunConfig()


class SeriesError(ArithmeticError):
    pass


def _is_pole(z) -> bool:
    return float(z) <= 0.0 and float(z) == math.floor(float(z))


# ---------------------------------------------------------------------------
# gamma
# ---------------------------------------------------------------------------

def gamma(z):
    """Gamma function of a real argument (scalar or array)."""
    z = np.asarray(z, dtype=float)
    if np.any((z <= 0) & (z == np.floor(z))):
        raise ValueError("gamma has poles at non-positive integers")
    out = _sp.gamma(z)
    return float(out) if out.ndim == 0 else out


def log_gamma(z):
    """log|Gamma(z)| of a real argument (scalar or array)."""
    z = np.asarray(z, dtype=float)
    if np.any((z <= 0) & (z == np.floor(z))):
        raise ValueError("gamma has poles at non-positive integers")
    out = _sp.gammaln(z)
    return float(out) if out.ndim == 0 else out


def rgamma(z):
    """1/Gamma(z), zero at the poles."""
    out = _sp.rgamma(np.asarray(z, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Laguerre
# ---------------------------------------------------------------------------

def laguerre_table(n_max: int, sigma, x):
    """All L_k^sigma(x) for k = 0..n_max by the three-term recurrence.

    ``sigma`` and ``x`` broadcast; the result has shape
    ``(n_max + 1,) + broadcast_shape``.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    sigma = np.asarray(sigma, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(sigma <= -1.0):
        raise ValueError("Laguerre order sigma must exceed -1")
    shape = np.broadcast(sigma, x).shape
    out = np.empty((n_max + 1,) + shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 + sigma - x
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1 + sigma - x) * out[k]
                      - (k + sigma) * out[k - 1]) / (k + 1)
    return out


def laguerre(n: int, sigma, x):
    """Generalised Laguerre polynomial L_n^sigma(x)."""
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    out = laguerre_table(int(n), sigma, x)[int(n)]
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# modified Bessel function
# ---------------------------------------------------------------------------

def bessel_i(nu, x):
    """Modified Bessel function I_nu(x) for nu >= 0 and x > 0."""
    nu = np.asarray(nu, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(nu < 0):
        raise ValueError("bessel_i needs nu >= 0 (use |p| for negative orders)")
    if np.any(x <= 0):
        raise ValueError("bessel_i needs x > 0")
    out = _sp.iv(nu, x)
    if np.any(np.isinf(out)):
        raise OverflowError("I_nu(x) exceeds the floating-point range")
    return float(out) if out.ndim == 0 else out


def bessel_i_scaled(nu, x):
    """exp(-x) I_nu(x) (no overflow for large x)."""
    nu = np.asarray(nu, dtype=float)
    x = np.asarray(x, dtype=float)
    if np.any(nu < 0) or np.any(x <= 0):
        raise ValueError("bessel_i_scaled needs nu >= 0, x > 0")
    return _sp.ive(nu, x)


# ---------------------------------------------------------------------------
# generic series driver
# ---------------------------------------------------------------------------

def _sum_series(first, ratio, z, cfg: SpecFunConfig):
    """Sum sum_k t_k with t_0 = first and t_{k+1} = t_k * ratio(k) * z.

    Works elementwise on the complex array ``z``; an element is done once
    three consecutive terms are below ``series_tol`` times its running sum.
    """
    z = np.asarray(z, dtype=complex)
    term = np.full(z.shape, first, dtype=complex)
    total = term.copy()
    small = np.zeros(z.shape, dtype=int)
    active = np.ones(z.shape, dtype=bool)
    for k in range(cfg.max_terms):
        term = term * (ratio(k) * z)
        total = total + term
        tiny = np.abs(term) <= cfg.series_tol * np.abs(total)
        small = np.where(tiny, small + 1, 0)
        active = small < 3
        if not active.any():
            return total
    raise SeriesError("series did not converge within max_terms")


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------

def hyp2f1(a, b, c, z, cfg: SpecFunConfig = DEFAULT):
    """Gauss series 2F1(a, b; c; z) for |z| < 1 (z real or complex)."""
    if _is_pole(c):
        raise ValueError("2F1 undefined for c a non-positive integer")
    zz = np.asarray(z, dtype=complex)
    if np.any(np.abs(zz) >= 1.0):
        raise ValueError("hyp2f1 requires |z| < 1")

    def ratio(k):
        return (a + k) * (b + k) / ((c + k) * (k + 1.0))
    out = _sum_series(1.0, ratio, zz, cfg)
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Kummer function
# ---------------------------------------------------------------------------

def _kummer_series(a, c, z, cfg):
    def ratio(k):
        return (a + k) / ((c + k) * (k + 1.0))
    return _sum_series(1.0, ratio, z, cfg)


def hyp1f1(a, c, z, cfg: SpecFunConfig = DEFAULT):
    """Kummer's function 1F1(a; c; z) = M(a, c, z) for complex z.

    The series is summed directly for |z| <= recurrence_switch and for
    Re z >= 0; beyond the switch with Re z < 0 Kummer's transformation
    M(a, c, z) = e^z M(c - a, c, -z) avoids the cancellation.
    """
    if _is_pole(c):
        raise ValueError("1F1 undefined for c a non-positive integer")
    zz = np.asarray(z, dtype=complex)
    flip = (np.abs(zz) > cfg.recurrence_switch) & (zz.real < 0)
    out = np.empty(zz.shape, dtype=complex)
    if np.any(~flip):
        out[~flip] = _kummer_series(a, c, zz[~flip], cfg)
    if np.any(flip):
        zf = zz[flip]
        out[flip] = np.exp(zf) * _kummer_series(c - a, c, -zf, cfg)
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Tricomi function
# ---------------------------------------------------------------------------

def _u_two_term(a, c, z, cfg):
    m1 = _kummer_series(a, c, z, cfg)
    m2 = _kummer_series(1.0 + a - c, 2.0 - c, z, cfg)
    pref = math.pi / math.sin(math.pi * c)
    return pref * (m1 * rgamma(c) * rgamma(1.0 + a - c)
                   - z ** (1.0 - c) * m2 * rgamma(a) * rgamma(2.0 - c))


def _u_integral(a, c, z, spec):
    """U(a, c, z) = Gamma(a)^-1 int_0^inf e^{-zt} t^{a-1} (1+t)^{c-a-1} dt."""
    z = np.atleast_1d(z)
    out = np.empty(z.shape, dtype=complex)
    for i, zi in enumerate(z):
        def f(t, zi=zi):
            return np.exp(-zi * t) * t ** (a - 1.0) * (1.0 + t) ** (c - a - 1.0)
        res = quad.integrate_segment(f, 0.0, np.inf, spec,
                                     lo_exp=min(a - 1.0, 0.0))
        out[i] = res.value
    return out * rgamma(a)


def _hyp_u_noninteger(a, c, z, cfg):
    zz = np.asarray(z, dtype=complex)
    far = (np.abs(zz) > cfg.recurrence_switch) & (zz.real > 0)
    out = np.empty(zz.shape, dtype=complex)
    if np.any(~far):
        out[~far] = _u_two_term(a, c, zz[~far], cfg)
    if np.any(far):
        spec = quad.QuadSpec(rel_tol=1e-13, abs_tol=0.0)
        zf = zz[far]
        if a > 0:
            out[far] = _u_integral(a, c, zf, spec)
        elif 1.0 + a - c > 0:
            out[far] = zf ** (1.0 - c) * _u_integral(1.0 + a - c, 2.0 - c, zf, spec)
        else:
            out[far] = _u_two_term(a, c, zf, cfg)
    return out


def hyp_u(a, c, z, cfg: SpecFunConfig = DEFAULT):
    """Tricomi's confluent hypergeometric function U(a, c, z).

    Uses the two-term Kummer combination

        U = pi/sin(pi c) [M(a,c,z)/(G(c)G(1+a-c)) - z^{1-c} M(1+a-c,2-c,z)/(G(a)G(2-c))]

    for moderate |z|.  For large |z| with Re z > 0 the integral
    representation (after the transformation U(a,c,z) = z^{1-c}
    U(1+a-c,2-c,z) when a <= 0) is used instead.  Integer c is handled by
    averaging c +/- 1e-6.  Principal branches, |arg z| < pi.  At z = 0 the
    finite limit G(1-c)/G(1+a-c) is returned when c < 1.
    """
    zz = np.asarray(z, dtype=complex)
    zero = zz == 0
    if np.any(zero) and not float(c) < 1.0:
        raise ValueError("hyp_u is singular at z = 0 for c >= 1")
    if np.any((zz.imag == 0) & (zz.real < 0)):
        raise ValueError("hyp_u requires |arg z| < pi")
    out = np.empty(zz.shape, dtype=complex)
    nz = ~zero
    if np.any(nz):
        if float(c) == math.floor(float(c)):
            d = 1e-6
            out[nz] = 0.5 * (_hyp_u_noninteger(a, c + d, zz[nz], cfg)
                             + _hyp_u_noninteger(a, c - d, zz[nz], cfg))
        else:
            out[nz] = _hyp_u_noninteger(a, c, zz[nz], cfg)
    if np.any(zero):
        out[zero] = gamma(1.0 - c) * rgamma(1.0 + a - c)
    return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# incomplete gamma
# ---------------------------------------------------------------------------

def _inc_gamma_series(sigma, r):
    """Gamma(sigma) - sum_k (-1)^k r^{k+sigma} / (k! (k+sigma))."""
    total = 0.0
    term = 1.0
    k = 0
    small = 0
    while True:
        contrib = term / (k + sigma)
        total += contrib
        if abs(contrib) <= 1e-17 * abs(total):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        k += 1
        term *= -r / k
        if k > 10000:
            raise SeriesError("incomplete gamma series did not converge")
    return gamma(sigma) - r ** sigma * total


def _inc_gamma_cf(sigma, r):
    """Legendre continued fraction (modified Lentz) for Gamma(sigma, r)."""
    tiny = 1e-300
    b = r + 1.0 - sigma
    cc = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - sigma)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        cc = b + an / cc
        if abs(cc) < tiny:
            cc = tiny
        d = 1.0 / d
        delta = d * cc
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    else:
        raise SeriesError("incomplete gamma continued fraction did not converge")
    return math.exp(-r + sigma * math.log(r)) * h


def inc_gamma_upper(sigma: float, r: float) -> float:
    """Upper incomplete gamma function Gamma(sigma, r) for real sigma, r >= 0."""
    if _is_pole(sigma):
        raise ValueError("Gamma(sigma, r) is not defined here for sigma in {0,-1,...}")
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0.0:
        if sigma <= 0:
            raise ValueError("Gamma(sigma, 0) diverges for sigma <= 0")
        return gamma(sigma)
    if r < 1.5 + max(sigma, 0.0):
        return _inc_gamma_series(sigma, r)
    return _inc_gamma_cf(sigma, r)
