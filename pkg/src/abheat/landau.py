"""Uniform-field building blocks.

Model parameters and the bipolar point geometry with its cut conventions,
the plane heat kernel in Cartesian and polar form, the heat kernel on the
universal cover of the once-punctured plane, the gauge rule for moving the
origin, and the periodization check that sums covering-space translates back
to the plane kernel.

Conventions (hbar = mu = 1): the magnetic Hamiltonian is

    H_B = -1/2 [(d_1 - i w x_2/2)^2 + (d_2 + i w x_1/2)^2],   w = omega_c,

vortex ``a`` sits at the origin and vortex ``b`` at ``(R, 0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import quad, specfun

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# parameters and geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelParams:
    """Cyclotron frequency, flux parameters and vortex separation."""

    omega_c: float
    alpha: float
    beta: float = 0.5
    R: float = 1.0

    def __post_init__(self):
        if not self.omega_c > 0:
            raise ValueError("omega_c must be positive")
        if not self.R > 0:
            raise ValueError("R must be positive")
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"{name} must lie in (0, 1)")

    @classmethod
    def from_D(cls, omega_c: float, D: float, alpha: float, beta: float):
        """Parameters with the vortex separation fixed by D = omega_c R^2."""
        if not D > 0:
            raise ValueError("D must be positive")
        return cls(omega_c, alpha, beta, math.sqrt(D / omega_c))

    @classmethod
    def from_physical(cls, e: float, B: float, mu: float, hbar: float,
                      c: float, phi_a: float, phi_b: float, R: float):
        """Fold physical constants into (omega_c, alpha, beta, R).

        alpha = -e Phi_A/(2 pi hbar c) (mod 1) and likewise beta; lengths are
        rescaled to units with hbar = mu = 1 at fixed omega_c.
        """
        omega_c = abs(e) * B / (mu * c)
        alpha = (-e * phi_a / (TWO_PI * hbar * c)) % 1.0
        beta = (-e * phi_b / (TWO_PI * hbar * c)) % 1.0
        length_unit = math.sqrt(hbar / mu)
        return cls(omega_c, alpha, beta, R / length_unit)

    @property
    def D(self) -> float:
        return self.omega_c * self.R ** 2

    @property
    def a(self):
        return (0.0, 0.0)

    @property
    def b(self):
        return (self.R, 0.0)

    def require_distinct(self):
        if self.alpha == self.beta:
            raise ValueError("two-solenoid formulas need alpha != beta")

    def require_ordered(self):
        if not self.alpha < self.beta:
            raise ValueError("this quantity needs 0 < alpha < beta < 1")


def wrap_angle(theta):
    """Map angles to (-pi, pi]; exactly -pi (and +pi) map to +pi."""
    th = np.mod(np.asarray(theta, dtype=float) + math.pi, TWO_PI) - math.pi
    th = np.where(th <= -math.pi, th + TWO_PI, th)
    return float(th) if th.ndim == 0 else th


def wedge(x, y) -> float:
    """x ^ y = x_1 y_2 - x_2 y_1."""
    return x[0] * y[1] - x[1] * y[0]


class BiPolarPoint:
    """A plane point with polar coordinates about both vortices.

    ``theta_a = atan2(x2, x1)`` (cut L_a on the negative x axis) and
    ``theta_b = wrap(atan2(x2, x1 - R) - pi)`` (cut L_b on x1 > R), both in
    (-pi, pi] with the value pi on the cuts.  They satisfy
    ``r_a e^{i theta_a} = R - r_b e^{i theta_b}``.  Fields may be numpy arrays.
    At a vortex the corresponding angle is set to 0.
    """

    __slots__ = ("x1", "x2", "R", "r_a", "theta_a", "r_b", "theta_b")

    def __init__(self, x1, x2, R: float):
        x1 = np.asarray(x1, dtype=float) + 0.0
        x2 = np.asarray(x2, dtype=float) + 0.0  # turns -0.0 into 0.0
        self.x1, self.x2, self.R = x1, x2, float(R)
        self.r_a = np.hypot(x1, x2)
        self.theta_a = np.where(self.r_a > 0,
                                wrap_angle(np.arctan2(x2, x1)), 0.0)
        self.r_b = np.hypot(x1 - R, x2)
        self.theta_b = np.where(self.r_b > 0,
                                wrap_angle(np.arctan2(x2, x1 - R) - math.pi),
                                0.0)
        if self.theta_a.ndim == 0:
            self.x1, self.x2 = float(x1), float(x2)
            self.r_a, self.theta_a = float(self.r_a), float(self.theta_a)
            self.r_b, self.theta_b = float(self.r_b), float(self.theta_b)

    @classmethod
    def from_polar_a(cls, r_a, theta_a, R):
        return cls(r_a * np.cos(theta_a), r_a * np.sin(theta_a), R)

    @classmethod
    def from_polar_b(cls, r_b, theta_b, R):
        """Point with x - b = -r_b e^{i theta_b}."""
        return cls(R - r_b * np.cos(theta_b), -r_b * np.sin(theta_b), R)

    @property
    def x(self):
        return (self.x1, self.x2)

    @property
    def z(self):
        """z = (r_b/R) e^{i theta_b}; then 1 - z = (r_a/R) e^{i theta_a}."""
        return (self.r_b / self.R) * np.exp(1j * self.theta_b)

    def __repr__(self):
        return f"BiPolarPoint(x1={self.x1!r}, x2={self.x2!r}, R={self.R!r})"


def oriented_angle(p, c, q) -> float:
    """Angle from the ray c->p to the ray c->q, in (-pi, pi]."""
    h0 = math.atan2(p[1] - c[1], p[0] - c[0])
    h1 = math.atan2(q[1] - c[1], q[0] - c[0])
    return wrap_angle(h1 - h0)


# ---------------------------------------------------------------------------
# plane kernel
# ---------------------------------------------------------------------------

def _check_t(t):
    if not np.all(np.asarray(t) > 0):
        raise ValueError("t must be positive")


def plane_kernel_xy(x1, x2, y1, y2, t, omega):
    """Vectorised plane heat kernel p_t(x, y) in Cartesian coordinates."""
    _check_t(t)
    h = 0.5 * omega * t
    d2 = (x1 - y1) ** 2 + (x2 - y2) ** 2
    w = x1 * y2 - x2 * y1
    return (omega / (4 * math.pi * np.sinh(h))
            * np.exp(-0.25 * omega * d2 / np.tanh(h) + 0.5j * omega * w))


def plane_kernel(x: BiPolarPoint, x0: BiPolarPoint, t: float,
                 params: ModelParams) -> complex:
    """p_t(x, x0) = w/(4 pi sinh(wt/2)) exp(-w|x-x0|^2 coth(wt/2)/4 + i w x^x0/2)."""
    return complex(plane_kernel_xy(x.x1, x.x2, x0.x1, x0.x2, t, params.omega_c))


def plane_kernel_polar(r, theta, r0, theta0, t, omega):
    """Plane kernel written in polar coordinates about the origin."""
    _check_t(t)
    h = 0.5 * omega * t
    s = np.sinh(h)
    return (omega / (4 * math.pi * s)
            * np.exp(-0.25 * omega * (r ** 2 + r0 ** 2) / np.tanh(h)
                     + omega * r * r0 * np.cosh(h - 1j * (theta - theta0))
                     / (2 * s)))


def gauge_shift(value: complex, x, x0, y, params: ModelParams) -> complex:
    """Kernel value after moving the coordinate origin to ``y``.

    Multiplies by e^{i w y^x/2} e^{-i w y^x0/2}.
    """
    xx = x.x if isinstance(x, BiPolarPoint) else x
    xx0 = x0.x if isinstance(x0, BiPolarPoint) else x0
    w = params.omega_c
    return value * np.exp(0.5j * w * (wedge(y, xx) - wedge(y, xx0)))


# ---------------------------------------------------------------------------
# universal-cover kernel
# ---------------------------------------------------------------------------

def _cover_scales(r, r0, t, omega):
    h = 0.5 * omega * t
    s = math.sinh(h)
    pref = (omega / (4 * math.pi * s)
            * math.exp(-0.25 * omega * (r ** 2 + r0 ** 2) / math.tanh(h)))
    xarg = omega * r * r0 / (2 * s)
    return h, pref, xarg


def covering_kernel_direct(r, theta, r0, theta0, t, params: ModelParams,
                           spec: quad.QuadSpec = quad.DEFAULT_SPEC):
    """Cover kernel from its p-integral over Bessel functions.

    p~ = pref * int_R exp((-w t/2 + i(theta - theta0)) p) I_|p|(x) dp with
    x = w r r0/(2 sinh(w t/2)).  Returns a QuadResult.
    """
    if r <= 0 or r0 <= 0:
        raise ValueError("r and r0 must be positive")
    _check_t(t)
    h, pref, xarg = _cover_scales(r, r0, t, params.omega_c)
    dth = theta - theta0
    log_pref = math.log(pref)

    def f(p):
        ap = np.abs(p)
        # e^{x} is folded into the log to keep the scaled Bessel in range
        return np.exp(log_pref + xarg - h * p + 1j * dth * p) \
            * specfun.bessel_i_scaled(ap, xarg)

    # the integrand is a product of e^{-hp} and a super-exponentially decaying
    # Bessel profile; its bulk sits within a few multiples of x of the origin
    res = quad.integrate_line(f, spec.with_(u_max=max(spec.u_max, 4 * xarg + 40)),
                              points=(0.0,))
    return res


def covering_kernel_decomposed(r, theta, r0, theta0, t, params: ModelParams,
                               spec: quad.QuadSpec = quad.DEFAULT_SPEC):
    """Cover kernel split into the plane kernel and a smooth remainder.

    p~ = Theta(pi - |dtheta|) p_t(polar) + pref/(2 pi i) int exp(-x cosh u)
         [1/(u - w t/2 + i(dtheta + pi)) - 1/(u - w t/2 + i(dtheta - pi))] du.
    Returns a QuadResult.
    """
    if r <= 0 or r0 <= 0:
        raise ValueError("r and r0 must be positive")
    _check_t(t)
    h, pref, xarg = _cover_scales(r, r0, t, params.omega_c)
    dth = theta - theta0
    if abs(abs(dth) - math.pi) < 1e-12:
        raise ValueError("decomposition is singular at |theta - theta0| = pi")
    first = 0j
    if abs(dth) < math.pi:
        first = complex(plane_kernel_polar(r, theta, r0, theta0, t,
                                           params.omega_c))

    def f(u):
        s = u - h
        return np.exp(-xarg * np.cosh(u)) * (1.0 / (s + 1j * (dth + math.pi))
                                             - 1.0 / (s + 1j * (dth - math.pi)))

    res = quad.integrate_line(f, spec, points=(h,))
    val = first + pref * res.value / (2j * math.pi)
    scale = pref / (2 * math.pi)
    return quad.QuadResult(val, scale * res.err_estimate, res.evaluations,
                           scale * res.truncation_bound)


def covering_kernel_1(r, theta, r0, theta0, t, params: ModelParams,
                      form: str = "decomposed",
                      spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> complex:
    """Heat kernel on the universal cover of the punctured plane.

    ``theta`` is an unrestricted real angle.  ``form`` selects the Bessel
    p-integral (``"direct"``) or the plane-kernel-plus-remainder split
    (``"decomposed"``).
    """
    if form == "direct":
        return covering_kernel_direct(r, theta, r0, theta0, t, params, spec).value
    if form == "decomposed":
        return covering_kernel_decomposed(r, theta, r0, theta0, t, params,
                                          spec).value
    raise ValueError("form must be 'direct' or 'decomposed'")


def periodization_sum(r, theta, r0, t, params: ModelParams, N: int,
                      alpha: Optional[float] = None, form: str = "decomposed",
                      spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> complex:
    """sum_{|n|<=N} e^{2 pi i alpha n} p~(r, theta - 2 pi n; r0, 0).

    With ``alpha=None`` (no flux) the phases are 1.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    total = 0j
    # fixed summation order: n = 0, then +-1, +-2, ... (pairs)
    for n in [0] + [k for m in range(1, N + 1) for k in (m, -m)]:
        phase = 1.0 if alpha is None else np.exp(2j * math.pi * alpha * n)
        total += phase * covering_kernel_1(r, theta - TWO_PI * n, r0, 0.0, t,
                                           params, form, spec)
    return total


def periodization_check(r, theta, r0, t, params: ModelParams, N: int,
                        form: str = "decomposed",
                        spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> float:
    """|sum_{|n|<=N} p~(r, theta + 2 pi n; r0, 0) - p_t(polar)|."""
    if not (-math.pi < theta <= math.pi):
        raise ValueError("theta must lie in (-pi, pi]")
    s = periodization_sum(r, theta, r0, t, params, N, None, form, spec)
    exact = complex(plane_kernel_polar(r, theta, r0, 0.0, t, params.omega_c))
    return abs(s - exact)


def periodization_tail(r, theta, r0, t, params: ModelParams, N: int) -> float:
    """Leading asymptotic size of the omitted terms |n| > N.

    For |theta + 2 pi n| -> infinity the cover kernel behaves like
    pref * 2 K_0(x) / (theta + 2 pi n)^2, so the omitted sum is
    pref * 2 K_0(x) [psi'(a+) + psi'(a-)]/(4 pi^2) with trigamma psi'.
    """
    from scipy.special import k0, polygamma
    h, pref, xarg = _cover_scales(r, r0, t, params.omega_c)
    a_plus = (theta + TWO_PI * (N + 1)) / TWO_PI
    a_minus = (-theta + TWO_PI * (N + 1)) / TWO_PI
    s = (polygamma(1, a_plus) + polygamma(1, a_minus)) / (4 * math.pi ** 2)
    return float(pref * 2 * k0(xarg) * s)
