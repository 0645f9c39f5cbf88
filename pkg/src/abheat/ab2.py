"""Heat kernel of two Aharonov-Bohm solenoids in a uniform magnetic field.

The kernel is a sum over alternating vortex sequences (c_1, ..., c_n):

* term I   -- the plane kernel (empty sequence);
* term II  -- one single-vortex u-integral per vortex (n = 1);
* term III -- an n-dimensional u-integral per alternating path (n >= 2).

Also provided: the time-coordinate transform that turns the iterated time
convolution into the u-variables, with residual checks of its inverse,
Jacobian and the coth-to-cosh-pair identity, and a spot check of the
winding-number summation identity that collapses the sum over windings.

Geometry: the vortices are a = (0, 0) and b = (R, 0); the cuts run along the
x_1 axis outwards from each vortex.  Each kernel argument must lie either in
the open upper half-plane or on the open segment between the vortices, so
the straight segment between the two points meets no cut.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import quad
from .landau import (BiPolarPoint, ModelParams, oriented_angle, plane_kernel,
                     wedge)

MAX_PATH_LENGTH = 4
# exponent margin used to cut the u-axes where the cosh damping is negligible
_CUT_MARGIN = 100.0


# ---------------------------------------------------------------------------
# paths and geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AltPath:
    """Alternating vortex sequence such as ``("a", "b", "a")``."""

    seq: Tuple[str, ...]

    def __post_init__(self):
        if len(self.seq) < 1:
            raise ValueError("a path needs at least one vortex")
        for c in self.seq:
            if c not in ("a", "b"):
                raise ValueError("vortex labels must be 'a' or 'b'")
        for c1, c2 in zip(self.seq[:-1], self.seq[1:]):
            if c1 == c2:
                raise ValueError("consecutive vortices must differ")

    @property
    def n(self) -> int:
        return len(self.seq)

    def sigma(self, j: int, params: ModelParams) -> float:
        """Flux parameter of the j-th vortex (1-based)."""
        return params.alpha if self.seq[j - 1] == "a" else params.beta

    def sigmas(self, params: ModelParams) -> List[float]:
        return [self.sigma(j, params) for j in range(1, self.n + 1)]

    def reversed(self) -> "AltPath":
        return AltPath(tuple(reversed(self.seq)))

    @property
    def label(self) -> str:
        return "".join(self.seq)


def alt_paths(n: int) -> List[AltPath]:
    """The two alternating paths of length n (starting at a, then at b)."""
    if n < 1:
        raise ValueError("path length must be at least 1")
    out = []
    for start in ("a", "b"):
        other = "b" if start == "a" else "a"
        out.append(AltPath(tuple(start if j % 2 == 0 else other
                                 for j in range(n))))
    return out


def _vortex(label: str, params: ModelParams):
    return params.a if label == "a" else params.b


@dataclass(frozen=True)
class PathGeometry:
    """Leg lengths r_0..r_n and the end angles theta0 (at c_1), theta (at c_n)."""

    radii: Tuple[float, ...]
    theta0: float
    theta: float

    @property
    def r0(self) -> float:
        return self.radii[0]

    @property
    def r(self) -> float:
        return self.radii[-1]


def path_geometry(x: BiPolarPoint, x0: BiPolarPoint, path: AltPath,
                  params: ModelParams) -> PathGeometry:
    pts = [_vortex(c, params) for c in path.seq]
    r0 = math.dist(x0.x, pts[0])
    r = math.dist(x.x, pts[-1])
    radii = (r0,) + (params.R,) * (path.n - 1) + (r,)
    if path.n == 1:
        th = oriented_angle(x0.x, pts[0], x.x)
        return PathGeometry(radii, th, th)
    theta0 = oriented_angle(x0.x, pts[0], pts[1])
    theta = oriented_angle(pts[-2], pts[-1], x.x)
    return PathGeometry(radii, theta0, theta)


def _on_segment(p: BiPolarPoint) -> bool:
    return p.x2 == 0.0 and 0.0 < p.x1 < p.R


def check_geometry(x: BiPolarPoint, x0: BiPolarPoint, params: ModelParams):
    """Both points on the open segment ab or in the open upper half-plane."""
    for name, p in (("x", x), ("x0", x0)):
        if abs(p.R - params.R) > 1e-12 * params.R:
            raise ValueError(f"{name} was built for a different vortex distance")
        if not (_on_segment(p) or p.x2 > 0.0):
            raise ValueError(f"{name} must lie in the upper half-plane or on "
                             "the open segment between the vortices")


# ---------------------------------------------------------------------------
# terms
# ---------------------------------------------------------------------------

def _half_width(c: float) -> float:
    """|h + u| beyond which c (cosh(h + u) - 1) exceeds the cut margin."""
    return math.acosh(1.0 + _CUT_MARGIN / c) + 1.0


def ab2_term_I(x: BiPolarPoint, x0: BiPolarPoint, t: float,
               params: ModelParams) -> complex:
    """The plane kernel p_t(x, x0)."""
    check_geometry(x, x0, params)
    return plane_kernel(x, x0, t, params)


def ab2_term_II_result(x: BiPolarPoint, x0: BiPolarPoint, t: float,
                       params: ModelParams, vortex: str,
                       spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> quad.QuadResult:
    check_geometry(x, x0, params)
    if t <= 0:
        raise ValueError("t must be positive")
    path = AltPath((vortex,))
    geo = path_geometry(x, x0, path, params)
    th = geo.theta
    if abs(th) >= math.pi:
        raise ValueError("the points are collinear through the vortex")
    sigma = path.sigma(1, params)
    w = params.omega_c
    c = _vortex(vortex, params)
    h = 0.5 * w * t
    s = math.sinh(h)
    r, r0 = geo.r, geo.r0
    if r == 0.0 or r0 == 0.0:
        raise ValueError("kernel arguments must not sit on a vortex")
    X = w * r * r0 / (2 * s)
    log_pref = (math.log(w / (4 * math.pi ** 2 * s))
                - 0.25 * w * (r * r + r0 * r0) / math.tanh(h))
    phase = np.exp(0.5j * w * wedge((x.x1 - x0.x1, x.x2 - x0.x2), c))
    eith = np.exp(1j * th)

    def f(u):
        return np.exp(log_pref - X * np.cosh(u + h) + sigma * (u + 1j * th)) \
            / (1.0 + np.exp(u) * eith)

    res = quad.integrate_line(f, spec, points=(0.0, -h), center=-h)
    k = -math.sin(math.pi * sigma) * phase
    return quad.QuadResult(complex(k * res.value), abs(k) * res.err_estimate,
                           res.evaluations, abs(k) * res.truncation_bound)


def ab2_term_II(x: BiPolarPoint, x0: BiPolarPoint, t: float,
                params: ModelParams, vortex: str,
                spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> complex:
    """Single-vortex term for ``vortex`` in {'a', 'b'}."""
    return ab2_term_II_result(x, x0, t, params, vortex, spec).value


def ab2_term_III_result(x: BiPolarPoint, x0: BiPolarPoint, t: float,
                        params: ModelParams, path: AltPath,
                        spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> quad.QuadResult:
    check_geometry(x, x0, params)
    if t <= 0:
        raise ValueError("t must be positive")
    n = path.n
    if n < 2:
        raise ValueError("term III needs a path of length at least 2")
    if n > MAX_PATH_LENGTH:
        raise ValueError(f"path length above {MAX_PATH_LENGTH} is not supported")
    geo = path_geometry(x, x0, path, params)
    if abs(geo.theta) >= math.pi or abs(geo.theta0) >= math.pi:
        raise ValueError("the points are collinear through a vortex")
    radii = np.array(geo.radii)
    if np.any(radii == 0.0):
        raise ValueError("kernel arguments must not sit on a vortex")
    sig = path.sigmas(params)
    w = params.omega_c
    h = 0.5 * w * t
    s = math.sinh(h)
    g = w / (2 * s)
    log_pref = (math.log(w / (4 * math.pi ** (n + 1) * s))
                - 0.25 * w * float(np.sum(radii ** 2)) / math.tanh(h))
    cn = _vortex(path.seq[-1], params)
    c1 = _vortex(path.seq[0], params)
    phase = np.exp(0.5j * w * (wedge(x.x, cn) + wedge(c1, x0.x)))
    k = (-1) ** n * float(np.prod(np.sin(np.pi * np.array(sig)))) * phase
    e0 = np.exp(1j * geo.theta0)
    e1 = np.exp(1j * geo.theta)
    pairs = [(j, kk, g * radii[j] * radii[kk])
             for j in range(n + 1) for kk in range(j + 1, n + 1)]

    def f(*u):
        # partial sums S_k = u_1 + ... + u_k (S_0 = 0)
        S = [0.0]
        for uj in u:
            S.append(S[-1] + uj)
        expo = log_pref
        for j, kk, cjk in pairs:
            expo = expo - cjk * np.cosh(h + (S[kk] - S[j]))
        expo = expo + sig[0] * (u[0] + 1j * geo.theta0) \
            + sig[-1] * (u[-1] + 1j * geo.theta)
        for j in range(1, n - 1):
            expo = expo + sig[j] * u[j]
        den = (1.0 + np.exp(u[0]) * e0) * (1.0 + np.exp(u[-1]) * e1)
        for j in range(1, n - 1):
            den = den * (1.0 + np.exp(u[j]))
        return np.exp(expo) / den

    # axis j is damped at least by the adjacent pair (j-1, j)
    bounds = []
    for j in range(1, n + 1):
        W = _half_width(g * radii[j - 1] * radii[j])
        bounds.append((-h - W, -h + W))
    points = [tuple(p for p in (0.0, -h) if lo < p < hi) for lo, hi in bounds]
    res = quad.integrate_box(f, n, spec.with_(dim=n), bounds=bounds,
                             points=points)
    return quad.QuadResult(complex(k * res.value), abs(k) * res.err_estimate,
                           res.evaluations, abs(k) * res.truncation_bound)


def ab2_term_III(x: BiPolarPoint, x0: BiPolarPoint, t: float,
                 params: ModelParams, path: AltPath,
                 spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> complex:
    """Multi-vortex term for an alternating path of length 2..4."""
    return ab2_term_III_result(x, x0, t, params, path, spec).value


# ---------------------------------------------------------------------------
# full kernel
# ---------------------------------------------------------------------------

@dataclass
class KernelValue:
    """Kernel value with its per-term breakdown.

    ``terms`` maps ``"I"``, ``"a"``, ``"b"``, ``"ab"``, ``"ba"``, ... to
    values; ``errors`` holds the matching quadrature error estimates;
    ``tail`` is |sum of the terms of the longest retained length|.
    """

    value: complex
    terms: Dict[str, complex] = field(default_factory=dict)
    errors: Dict[str, float] = field(default_factory=dict)
    tail: float = 0.0
    n_max: int = 1

    def length_total(self, n: int) -> complex:
        if n == 0:
            return self.terms["I"]
        return sum((v for k, v in self.terms.items() if k != "I" and len(k) == n),
                   0j)


def ab2_kernel(x: BiPolarPoint, x0: BiPolarPoint, t: float,
               params: ModelParams, n_max: int = 2,
               spec: quad.QuadSpec = quad.DEFAULT_SPEC,
               workers: int = 1) -> KernelValue:
    """Two-solenoid kernel truncated at path length ``n_max`` (1..4).

    Path terms are independent; with ``workers > 1`` they are evaluated in a
    thread pool and reduced in a fixed order.
    """
    if not (1 <= n_max <= MAX_PATH_LENGTH):
        raise ValueError(f"n_max must lie in 1..{MAX_PATH_LENGTH}")
    params.require_distinct()
    check_geometry(x, x0, params)
    paths = [p for n in range(1, n_max + 1) for p in alt_paths(n)]

    def one(p: AltPath) -> quad.QuadResult:
        if p.n == 1:
            return ab2_term_II_result(x, x0, t, params, p.seq[0], spec)
        return ab2_term_III_result(x, x0, t, params, p, spec)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(one, paths))
    else:
        results = [one(p) for p in paths]
    terms = {"I": ab2_term_I(x, x0, t, params)}
    errors = {"I": 0.0}
    for p, res in zip(paths, results):
        terms[p.label] = res.value
        errors[p.label] = res.total_error
    total = 0j
    for key in terms:  # insertion order: I, then by length, a-start first
        total += terms[key]
    out = KernelValue(total, terms, errors, 0.0, n_max)
    out.tail = abs(out.length_total(n_max))
    return out


def long_time_coefficient(x: BiPolarPoint, x0: BiPolarPoint,
                          params: ModelParams, wt: Sequence[float] = (14.0, 16.0, 18.0),
                          n_max: int = 2,
                          spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> complex:
    """Coefficient of e^{-(alpha+1/2) w t} in the truncated kernel.

    The rescaled kernel e^{w t/2} K(t) is fitted at the given values of w t by
    L + C e^{-alpha w t} + B e^{-beta w t} (least squares when more than three
    times are given); returns C.
    """
    w = params.omega_c
    wt = np.asarray(wt, dtype=float)
    if wt.size < 3:
        raise ValueError("need at least three times")
    F = np.array([ab2_kernel(x, x0, s / w, params, n_max, spec).value * math.exp(0.5 * s)
                  for s in wt])
    A = np.stack([np.ones_like(wt), np.exp(-params.alpha * wt),
                  np.exp(-params.beta * wt)], axis=1).astype(complex)
    coef, *_ = np.linalg.lstsq(A, F, rcond=None)
    return complex(coef[1])


# ---------------------------------------------------------------------------
# time-coordinate transform
# ---------------------------------------------------------------------------

def transform_T(u, radii):
    """T_j(u) = sum_{k<=j} (r_k/r_0) exp(-(u_1 + ... + u_k)), j = 0..n."""
    u = np.asarray(u, dtype=float)
    radii = np.asarray(radii, dtype=float)
    S = np.cumsum(u)
    return np.concatenate([[0.0], np.cumsum(radii[1:] / radii[0] * np.exp(-S))])


def times_from_u(t: float, radii, u, omega: float) -> np.ndarray:
    """(t_0, ..., t_n) for given u; t_0 from its own closed form.

    t_j = (1/w) ln[(1 + T_j + q (T_n - T_j)) / (1 + T_{j-1} + q (T_n - T_{j-1}))],
    q = e^{-w t}, and t_0 = (1/w) ln[(e^{w t} + T_n)/(1 + T_n)].
    """
    T = transform_T(u, radii)
    q = math.exp(-omega * t)
    Tn = T[-1]
    num = 1.0 + T[1:] + q * (Tn - T[1:])
    den = 1.0 + T[:-1] + q * (Tn - T[:-1])
    tj = np.log(num / den) / omega
    t0 = (omega * t + math.log1p(Tn * q) - math.log1p(Tn)) / omega
    return np.concatenate([[t0], tj])


def u_from_times(times, radii, omega: float) -> np.ndarray:
    """u_j = ln(r_j sinh(w t_{j-1}/2) / (r_{j-1} sinh(w t_j/2))) - w(t_{j-1}+t_j)/2."""
    times = np.asarray(times, dtype=float)
    radii = np.asarray(radii, dtype=float)
    sh = np.sinh(0.5 * omega * times)
    return (np.log(radii[1:] * sh[:-1] / (radii[:-1] * sh[1:]))
            - 0.5 * omega * (times[:-1] + times[1:]))


def jacobian_closed(t: float, times, omega: float) -> float:
    """(w/2)^n sinh(w t/2) / prod_{j=0..n} sinh(w t_j/2)."""
    times = np.asarray(times, dtype=float)
    n = times.size - 1
    return ((0.5 * omega) ** n * math.sinh(0.5 * omega * t)
            / float(np.prod(np.sinh(0.5 * omega * times))))


def jacobian_fd(t: float, times, radii, omega: float, h: float = 1e-5) -> float:
    """det(du/d(t_1..t_n)) by central differences, t_0 = t - t_1 - ... - t_n."""
    times = np.asarray(times, dtype=float)
    n = times.size - 1

    def fwd(tt):
        full = np.concatenate([[t - tt.sum()], tt])
        return u_from_times(full, radii, omega)

    base = times[1:].copy()
    J = np.empty((n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        J[:, k] = (fwd(base + e) - fwd(base - e)) / (2 * h)
    return float(np.linalg.det(J))


def coth_pair_sides(t: float, radii, u, omega: float) -> Tuple[float, float]:
    """Both sides of sum r_j^2 coth(w t_j/2) = coth(w t/2) sum r_j^2
    + (2/sinh(w t/2)) sum_{j<k} r_j r_k cosh(w t/2 + u_{j+1} + ... + u_k)."""
    radii = np.asarray(radii, dtype=float)
    times = times_from_u(t, radii, u, omega)
    lhs = float(np.sum(radii ** 2 / np.tanh(0.5 * omega * times)))
    h = 0.5 * omega * t
    S = np.concatenate([[0.0], np.cumsum(u)])
    n = radii.size - 1
    pair = sum(radii[j] * radii[k] * math.cosh(h + S[k] - S[j])
               for j in range(n + 1) for k in range(j + 1, n + 1))
    rhs = float(np.sum(radii ** 2)) / math.tanh(h) + 2.0 * pair / math.sinh(h)
    return lhs, rhs


@dataclass(frozen=True)
class TransformResiduals:
    times: Tuple[float, ...]
    sum_residual: float
    roundtrip: float
    jacobian_rel: float
    coth_rel: float


def time_transform_check(t: float, radii: Sequence[float], u: Sequence[float],
                         omega: float, h: float = 1e-5) -> TransformResiduals:
    """Residuals of the four transform identities at one point."""
    radii = np.asarray(radii, dtype=float)
    u = np.asarray(u, dtype=float)
    if t <= 0:
        raise ValueError("t must be positive")
    if np.any(radii <= 0):
        raise ValueError("leg lengths must be positive")
    if radii.size != u.size + 1 or u.size < 1:
        raise ValueError("need n >= 1 u-values and n + 1 leg lengths")
    times = times_from_u(t, radii, u, omega)
    sum_res = abs(float(times.sum()) - t)
    roundtrip = float(np.max(np.abs(u_from_times(times, radii, omega) - u)))
    jc = jacobian_closed(t, times, omega)
    jf = jacobian_fd(t, times, radii, omega, h)
    lhs, rhs = coth_pair_sides(t, radii, u, omega)
    return TransformResiduals(tuple(times.tolist()), sum_res, roundtrip,
                              abs(abs(jf) - jc) / jc, abs(lhs - rhs) / abs(rhs))


# ---------------------------------------------------------------------------
# winding-number summation identity
# ---------------------------------------------------------------------------

def winding_sum(alpha: float, z: complex, K: int) -> complex:
    """sum_{|k|<=K} e^{-2 pi i alpha k} (1/(z + i(2k+1)pi) - 1/(z + i(2k-1)pi))."""
    k = np.arange(-K, K + 1)
    terms = np.exp(-2j * math.pi * alpha * k) * (
        1.0 / (z + 1j * (2 * k + 1) * math.pi) - 1.0 / (z + 1j * (2 * k - 1) * math.pi))
    # symmetric order: k = 0, then pairs +-k
    order = np.argsort(np.abs(k), kind="stable")
    return complex(np.sum(terms[order]))


def winding_closed(alpha: float, z: complex) -> complex:
    """(2/i) sin(pi alpha) e^{alpha z}/(1 + e^z)."""
    return complex(-2j * math.sin(math.pi * alpha) * np.exp(alpha * z)
                   / (1.0 + np.exp(z)))


def winding_sum_check(alpha: float, z: complex, K: int = 200) -> float:
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    return abs(winding_sum(alpha, z, K) - winding_closed(alpha, z))
