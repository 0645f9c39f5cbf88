"""Approximate lowest eigenfunction above the first Landau level.

* ``psi1``            -- the normalized one-solenoid bound state about vortex a;
* ``phi_integral``    -- the correction phi as a single u-integral;
* ``phi_hypergeometric`` -- phi through (1-z)^alpha, 2F1 and a U-integral,
  valid for r_b < R;
* ``psi2_tilde``      -- psi1 + phi with automatic choice of the phi form;
* ``eigen_residual``  -- |(H_B - E_1) psi| / (E_1 |psi|) by 4th-order finite
  differences;
* ``g_identity_residuals`` -- the rescaled differential identities satisfied by
  the two building blocks g_1, g_2 of phi.

All functions accept a ``BiPolarPoint`` whose fields may be numpy arrays.
Integrals for many points are computed on one shared adaptive partition, so
the quadrature error varies smoothly from point to point (which keeps finite
difference stencils clean).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quad, specfun
from .landau import BiPolarPoint, ModelParams

HYP_FORM_RADIUS = 0.95  # phi_hypergeometric is used for r_b < 0.95 R
_BATCH = 512
_PHI_SPEC = quad.QuadSpec(rel_tol=1e-13, abs_tol=0.0)


def energy_e1(params: ModelParams) -> float:
    """E_1 = (alpha + 1/2) omega_c."""
    return (params.alpha + 0.5) * params.omega_c


def _norm_const(params: ModelParams) -> float:
    return math.sqrt(params.omega_c / (2 * math.pi * math.gamma(1 + params.alpha)))


def _as_arrays(x: BiPolarPoint):
    return tuple(np.atleast_1d(np.asarray(v, dtype=float))
                 for v in (x.x1, x.x2, x.r_a, x.theta_a, x.r_b, x.theta_b))


def _shape_out(x: BiPolarPoint, vals):
    if np.ndim(x.r_a) == 0:
        return complex(vals[0])
    return vals.reshape(np.shape(x.r_a))


# ---------------------------------------------------------------------------
# psi1
# ---------------------------------------------------------------------------

def psi1(x: BiPolarPoint, params: ModelParams):
    """sqrt(w/(2 pi G(1+a))) e^{-w r_a^2/4} (sqrt(w/2) r_a)^a e^{i a theta_a}."""
    w, a = params.omega_c, params.alpha
    r = np.asarray(x.r_a, dtype=float)
    th = np.asarray(x.theta_a, dtype=float)
    val = (_norm_const(params) * np.exp(-0.25 * w * r * r)
           * (math.sqrt(0.5 * w) * r) ** a * np.exp(1j * a * th))
    return complex(val) if val.ndim == 0 else val


def psi1_radial_norm(params: ModelParams,
                     spec: quad.QuadSpec = quad.DEFAULT_SPEC) -> float:
    """2 pi int_0^inf |psi1|^2 r dr by quadrature."""
    w, a = params.omega_c, params.alpha
    c = _norm_const(params) ** 2 * (0.5 * w) ** a

    def f(r):
        return 2 * math.pi * c * r ** (2 * a + 1) * np.exp(-0.5 * w * r * r)
    return quad.integrate_segment(f, 0.0, np.inf, spec).value.real


# ---------------------------------------------------------------------------
# phi, integral form
# ---------------------------------------------------------------------------

def _phi_prefactor(x1, x2, r_b, params):
    """Gaussian and gauge factor -sqrt(..) sin(pi b)/pi e^{-w(R^2+r_b^2)/4 + i w x^b/2}."""
    w, R = params.omega_c, params.R
    wedge_xb = -R * x2  # x ^ b with b = (R, 0)
    return (-_norm_const(params) * math.sin(math.pi * params.beta) / math.pi
            * np.exp(-0.25 * w * (R * R + r_b * r_b) + 0.5j * w * wedge_xb))


def _w_integrals(r_b, th_b, params: ModelParams, spec: quad.QuadSpec):
    """int (sqrt(w/2)(R + r_b e^{-u}))^a exp(-w R r_b e^u/2) e^{b(u+i th)}/(1+e^{u+i th}) du
    for arrays of (r_b > 0, |th| < pi), on one shared partition.

    Returns (values, error estimates, truncation bounds).
    """
    w, a, b, R = params.omega_c, params.alpha, params.beta, params.R
    if not b > a:
        raise ValueError("the integral form of phi needs alpha < beta")
    Y = 0.5 * w * R * r_b
    lsw = 0.5 * math.log(0.5 * w)
    log_rb = np.log(r_b)
    eith = np.exp(1j * th_b)

    def fv(u):
        u = u[None, :]
        # log(R + r_b e^{-u}) computed without overflow for u -> -inf
        lg = np.logaddexp(math.log(R), log_rb[:, None] - u)
        expo = a * (lsw + lg) - Y[:, None] * np.exp(u) + b * (u + 1j * th_b[:, None])
        return np.exp(expo) / (1.0 + np.exp(u) * eith[:, None])

    # right edge: e^{-Y e^u} below e^{-60} for every point
    hi = float(np.max(np.log((60.0 + b * 40.0) / Y)))
    hi = max(hi, 2.0)
    # left edge: tail e^{(b-a)u} (times the point's scale) below ~1e-16
    peak = float(np.min(np.minimum(0.0, np.log(1.0 / Y))))
    lo = peak - 37.0 / (b - a) - 5.0
    vals, errs, _ = quad.integrate_line_vector(fv, spec, lo, hi, points=(0.0,))
    left = np.abs(fv(np.array([lo]))[:, 0]) / (b - a)
    right = np.abs(fv(np.array([hi]))[:, 0])
    return vals, errs, left + right


def _phi_at_b(params: ModelParams, spec: quad.QuadSpec) -> complex:
    """phi(b): the u-integral reduces to int e^{b u}/(1+e^u) du (computed)."""
    w, a, b, R = params.omega_c, params.alpha, params.beta, params.R

    def f(u):
        return np.exp(b * u) / (1.0 + np.exp(u))
    res = quad.integrate_line(f, spec, decay=(b, 1.0 - b), points=(0.0,))
    pref = _phi_prefactor(R, 0.0, 0.0, params)
    return complex(pref * (math.sqrt(0.5 * w) * R) ** a * res.value)


def phi_on_lb(x1, params: ModelParams, shift: float = 0.5,
              spec: quad.QuadSpec = _PHI_SPEC) -> np.ndarray:
    """phi on the upper side of L_b (x2 -> 0+, theta_b -> -pi) for x1 > R.

    On the cut the pole of 1/(1 + e^{u + i theta_b}) reaches the real axis
    from below; every other factor is analytic for |Im u| < pi, so the
    one-sided limit is the same integral along Im u = ``shift`` > 0.
    """
    params.require_ordered()
    w, a, b, R = params.omega_c, params.alpha, params.beta, params.R
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    if np.any(x1 <= R):
        raise ValueError("L_b is the half-line x1 > R")
    if not 0 < shift < 1.0:
        raise ValueError("shift must lie in (0, 1)")
    r_b = x1 - R
    Y = 0.5 * w * R * r_b
    lsw = 0.5 * math.log(0.5 * w)
    log_rb = np.log(r_b)

    def fv(v):
        u = v[None, :] + 1j * shift
        # log(R + r_b e^{-u}) = -u + log(r_b + R e^u)
        lg = -u + np.log(r_b[:, None] + R * np.exp(u))
        expo = a * (lsw + lg) - Y[:, None] * np.exp(u) + b * (u - 1j * math.pi)
        return np.exp(expo) / (1.0 - np.exp(u))

    hi = max(float(np.max(np.log((60.0 + b * 40.0) / (Y * math.cos(shift))))), 2.0)
    peak = float(np.min(np.minimum(0.0, -log_rb)))
    lo = peak - 37.0 / (b - a) - 5.0
    vals, _, _ = quad.integrate_line_vector(fv, spec, lo, hi, points=(0.0,))
    return _phi_prefactor(x1, np.zeros_like(x1), r_b, params) * vals


def psi2_tilde_on_lb(x1, params: ModelParams) -> np.ndarray:
    """psi1 + phi on the upper side of L_b."""
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    p1 = np.atleast_1d(psi1(BiPolarPoint(x1, np.zeros_like(x1), params.R), params))
    return p1 + phi_on_lb(x1, params)


def phi_integral(x: BiPolarPoint, params: ModelParams,
                 spec: quad.QuadSpec = _PHI_SPEC):
    """phi from its single u-integral (valid off the cut L_b)."""
    params.require_ordered()
    x1, x2, _, _, r_b, th_b = _as_arrays(x)
    if np.any(np.abs(th_b) >= math.pi):
        raise ValueError("the integral form of phi is not defined on L_b")
    out = np.empty(r_b.shape, dtype=complex)
    at_b = r_b == 0.0
    if np.any(at_b):
        out[at_b] = _phi_at_b(params, spec)
    idx = np.nonzero(~at_b)[0]
    for s in range(0, idx.size, _BATCH):
        sel = idx[s:s + _BATCH]
        vals, _, _ = _w_integrals(r_b[sel], th_b[sel], params, spec)
        out[sel] = _phi_prefactor(x1[sel], x2[sel], r_b[sel], params) * vals
    return _shape_out(x, out)


# ---------------------------------------------------------------------------
# phi, hypergeometric form
# ---------------------------------------------------------------------------

def _u_integrals(r_b, th_b, params: ModelParams, spec: quad.QuadSpec):
    """int_0^1 U(-a, 1-b, D r_b^2 t/(2R^2)) e^{-D zbar t/2} t^{-b} dt.

    Near t = 0 the integrand behaves like t^{-b} and t^0 (the two Kummer
    terms of U).  The substitution t = s^k, k = 3/(1-b), turns these into
    s^2 and s^{2 + 3b/(1-b)}, smooth enough for Gauss-Kronrod panels for
    every b in (0, 1).
    """
    a, b, D, R = params.alpha, params.beta, params.D, params.R
    k = 3.0 / (1.0 - b)
    q = D * r_b ** 2 / (2 * R * R)
    zbar = (r_b / R) * np.exp(-1j * th_b)

    def fv(s):
        t = s ** k
        U = specfun.hyp_u(-a, 1.0 - b, np.outer(q, t))
        U = np.reshape(U, (q.size, t.size))
        return U * np.exp(-0.5 * D * np.outer(zbar, t)) * (k * s ** 2)

    vals, errs, _ = quad.integrate_line_vector(fv, spec, 0.0, 1.0)
    return vals, errs


def phi_hypergeometric(x: BiPolarPoint, params: ModelParams,
                       spec: quad.QuadSpec = _PHI_SPEC):
    """phi in the hypergeometric form, for r_b < R and |theta_b| < pi."""
    params.require_ordered()
    w, a, b, D, R = params.omega_c, params.alpha, params.beta, params.D, params.R
    x1, x2, r_a, th_a, r_b, th_b = _as_arrays(x)
    if np.any(r_b >= R):
        raise ValueError("the hypergeometric form needs r_b < R")
    if np.any(np.abs(th_b) >= math.pi):
        raise ValueError("the hypergeometric form is not defined on L_b")
    out = np.empty(r_b.shape, dtype=complex)
    c_f = math.gamma(b - a) / (math.gamma(-a) * math.gamma(b + 1))
    c_u = math.sin(math.pi * b) * math.gamma(b - a) / math.pi
    pref0 = -_norm_const(params) * (math.sqrt(0.5 * w) * R) ** a
    at_b = r_b == 0.0
    if np.any(at_b):
        # z = 0: only (1 - z)^alpha survives
        out[at_b] = pref0 * math.exp(-0.25 * w * R * R)
    idx = np.nonzero(~at_b)[0]
    for s in range(0, idx.size, _BATCH):
        sel = idx[s:s + _BATCH]
        rb, tb = r_b[sel], th_b[sel]
        z = (rb / R) * np.exp(1j * tb)
        log_z = np.log(rb / R) + 1j * tb
        one_minus_z_a = np.exp(a * (np.log(r_a[sel] / R) + 1j * th_a[sel]))
        f21 = specfun.hyp2f1(1.0, b - a, b + 1.0, z)
        uint, _ = _u_integrals(rb, tb, params, spec)
        dz = np.exp((1.0 - b) * (np.log(0.5 * D * rb / R) - 1j * tb))
        bracket = (one_minus_z_a - c_f * np.atleast_1d(f21) * np.exp(b * log_z)
                   - c_u * dz * uint)
        gauss = np.exp(-0.25 * w * (R * R + rb * rb) + 0.5 * w * R * rb * np.cos(tb))
        out[sel] = pref0 * gauss * bracket
    return _shape_out(x, out)


# ---------------------------------------------------------------------------
# psi2 tilde
# ---------------------------------------------------------------------------

def phi(x: BiPolarPoint, params: ModelParams, form: str = "auto",
        spec: quad.QuadSpec = _PHI_SPEC):
    """phi with ``form`` in {"auto", "integral", "hypergeometric"}.

    "auto" uses the hypergeometric form where r_b < 0.95 R and the integral
    form elsewhere.
    """
    if form == "integral":
        return phi_integral(x, params, spec)
    if form == "hypergeometric":
        return phi_hypergeometric(x, params, spec)
    if form != "auto":
        raise ValueError("unknown phi form")
    x1, x2 = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (x.x1, x.x2))
    r_b = np.atleast_1d(np.asarray(x.r_b, dtype=float))
    near = r_b < HYP_FORM_RADIUS * params.R
    out = np.empty(r_b.shape, dtype=complex)
    if np.any(near):
        out[near] = np.atleast_1d(phi_hypergeometric(
            BiPolarPoint(x1[near], x2[near], params.R), params, spec))
    if np.any(~near):
        out[~near] = np.atleast_1d(phi_integral(
            BiPolarPoint(x1[~near], x2[~near], params.R), params, spec))
    return _shape_out(x, out)


def psi2_tilde(x: BiPolarPoint, params: ModelParams, form: str = "auto",
               spec: quad.QuadSpec = _PHI_SPEC):
    """psi1 + phi."""
    return psi1(x, params) + phi(x, params, form, spec)


@dataclass(frozen=True)
class WaveSample:
    point: BiPolarPoint
    psi1: complex
    phi: complex

    @property
    def psi2_tilde(self) -> complex:
        return self.psi1 + self.phi


def wave_sample(x: BiPolarPoint, params: ModelParams, form: str = "auto") -> WaveSample:
    return WaveSample(x, psi1(x, params), phi(x, params, form))


# ---------------------------------------------------------------------------
# eigenvalue-equation residual
# ---------------------------------------------------------------------------

# 4th-order central-difference weights for first and second derivatives
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_OFF = np.array([-2, -1, 0, 1, 2])


def _form_for(x: BiPolarPoint, params: ModelParams) -> str:
    return "hypergeometric" if x.r_b < HYP_FORM_RADIUS * params.R else "integral"


def apply_hamiltonian(func, x: BiPolarPoint, params: ModelParams, h: float):
    """(H_B f)(x) for a callable f(BiPolarPoint) -> array, by 4th-order stencils.

    H_B = -1/2 Laplacian + i(w/2)(x_2 d_1 - x_1 d_2) + w^2 |x|^2/8.
    Returns (H f(x), f(x)).
    """
    w = params.omega_c
    x1, x2 = float(x.x1), float(x.x2)
    p1 = np.concatenate([x1 + h * _OFF, np.full(5, x1)])
    p2 = np.concatenate([np.full(5, x2), x2 + h * _OFF])
    vals = np.asarray(func(BiPolarPoint(p1, p2, params.R)))
    v1, v2 = vals[:5], vals[5:]
    f0 = v1[2]
    d11 = (_D2 @ v1) / h ** 2
    d22 = (_D2 @ v2) / h ** 2
    d1 = (_D1 @ v1) / h
    d2 = (_D1 @ v2) / h
    hf = (-0.5 * (d11 + d22) + 0.5j * w * (x2 * d1 - x1 * d2)
          + 0.125 * w * w * (x1 * x1 + x2 * x2) * f0)
    return complex(hf), complex(f0)


def _check_interior(x: BiPolarPoint, params: ModelParams, h: float):
    R = params.R
    margin = 5 * h
    if x.r_a <= margin or x.r_b <= margin:
        raise ValueError("point too close to a vortex")
    if abs(x.x2) <= margin and (x.x1 < 0 or x.x1 > R):
        raise ValueError("point too close to a cut")


def eigen_residual(x: BiPolarPoint, params: ModelParams, h: float = None,
                   which: str = "psi2", energy: float = None,
                   floor: float = 0.0) -> float:
    """|(H_B psi)(x) - E psi(x)| / (E |psi(x)| + floor).

    ``which`` is "psi2" (psi1 + phi) or "psi1"; ``energy`` defaults to E_1;
    ``h`` defaults to 1e-3 in the dimensionless unit xi = sqrt(w) x.
    """
    if h is None:
        h = 1e-3 / math.sqrt(params.omega_c)
    _check_interior(x, params, h)
    E = energy_e1(params) if energy is None else energy
    if which == "psi1":
        def func(p):
            return psi1(p, params)
    elif which == "psi2":
        form = _form_for(x, params)

        def func(p):
            return psi2_tilde(p, params, form)
    else:
        raise ValueError("which must be 'psi1' or 'psi2'")
    hf, f0 = apply_hamiltonian(func, x, params, h)
    return abs(hf - E * f0) / (E * abs(f0) + floor)


# ---------------------------------------------------------------------------
# g_1, g_2 identities (z and zbar independent)
# ---------------------------------------------------------------------------

_G_SPEC = quad.QuadSpec(rel_tol=1e-14, abs_tol=0.0)


def _g_integral(kernel, zbars, spec):
    """int_0^{zbar/2} kernel(t) dt for several zbar, parametrized t = (zbar/2) s."""
    zbars = np.asarray(zbars, dtype=complex)

    def fv(s):
        t = np.outer(0.5 * zbars, s)
        return kernel(t) * (0.5 * zbars)[:, None]
    vals, _, _ = quad.integrate_line_vector(fv, spec, 0.0, 1.0)
    return vals


def g1(z, zbar, D: float, alpha: float, beta: float, spec=_G_SPEC):
    """int_0^{zbar/2} 1F1(-a; 1-b; z t/D) e^{-t} t^{-b} dt (arrays broadcast)."""
    z, zbar = np.broadcast_arrays(np.asarray(z, complex), np.asarray(zbar, complex))
    zf, wf = z.ravel(), zbar.ravel()
    k = 1.0 / (1.0 - beta)

    # t = (zbar/2) s^k removes the t^{-b} singularity:
    # int_0^1 1F1(.., z (zbar/2) s^k / D) e^{-(zbar/2) s^k} (zbar/2)^{1-b} k ds
    def fv(s):
        sk = s ** k
        arg = np.outer(zf * wf / (2 * D), sk)
        m = np.reshape(specfun.hyp1f1(-alpha, 1.0 - beta, arg), arg.shape)
        return (m * np.exp(-np.outer(0.5 * wf, sk)) * k
                * np.exp((1.0 - beta) * np.log(0.5 * wf))[:, None])
    vals, _, _ = quad.integrate_line_vector(fv, spec, 0.0, 1.0)
    return vals.reshape(z.shape)


def g2(z, zbar, D: float, alpha: float, beta: float, spec=_G_SPEC):
    """2F1(1, b-a; 1+b; z/D) z^b - z^b int_0^{zbar/2} 1F1(b-a; 1+b; z t/D) e^{-t} dt."""
    z, zbar = np.broadcast_arrays(np.asarray(z, complex), np.asarray(zbar, complex))
    zf, wf = z.ravel(), zbar.ravel()
    if np.any(np.abs(zf) >= D):
        raise ValueError("g2 needs |z| < D")

    def fv(s):
        arg = np.outer(zf * wf / (2 * D), s)
        m = np.reshape(specfun.hyp1f1(beta - alpha, 1.0 + beta, arg), arg.shape)
        return m * np.exp(-np.outer(0.5 * wf, s)) * (0.5 * wf)[:, None]
    integ, _, _ = quad.integrate_line_vector(fv, spec, 0.0, 1.0)
    zb = np.exp(beta * np.log(zf))
    f21 = np.atleast_1d(specfun.hyp2f1(1.0, beta - alpha, 1.0 + beta, zf / D))
    return (f21 * zb - zb * integ).reshape(z.shape)


def _g_operator(gfun, z, w, D, h):
    """(2 d^2/dz dw + (1 - z/D) d/dz) g and g, by Richardson-extrapolated
    central differences in the two independent complex variables."""
    def ops(hh):
        # stencil: (z+h,w) (z-h,w) (z,w) (z+h,w+h) (z+h,w-h) (z-h,w+h) (z-h,w-h)
        dz = np.array([hh, -hh, 0.0, hh, hh, -hh, -hh])
        dw = np.array([0.0, 0.0, 0.0, hh, -hh, hh, -hh])
        v = gfun(z + dz, w + dw)
        gz = (v[0] - v[1]) / (2 * hh)
        gzw = (v[3] - v[4] - v[5] + v[6]) / (4 * hh * hh)
        return gz, gzw, v[2]
    gz1, gzw1, g0 = ops(h)
    gz2, gzw2, _ = ops(0.5 * h)
    gz = (4 * gz2 - gz1) / 3
    gzw = (4 * gzw2 - gzw1) / 3
    return 2 * gzw + (1 - z / D) * gz, g0


def g_identity_residuals(z: complex, params: ModelParams = None, *, D: float = None,
                         alpha: float = None, beta: float = None,
                         zbar: complex = None, alpha_rhs: float = None,
                         h: float = 1e-3):
    """Relative residuals of -(2 d^2/dz dzbar + (1 - z/D) d/dz) g_j = (alpha/D) g_j.

    Parameters default to those of ``params``; ``zbar`` defaults to conj(z);
    ``alpha_rhs`` replaces alpha on the right-hand side only (sensitivity
    control).  Returns (res_1, res_2) normalized by |alpha g_j / D|.
    """
    if params is not None:
        D = params.D if D is None else D
        alpha = params.alpha if alpha is None else alpha
        beta = params.beta if beta is None else beta
    if D is None or alpha is None or beta is None:
        raise ValueError("need D, alpha and beta")
    if zbar is None:
        zbar = np.conj(z)
    if abs(z) >= D:
        raise ValueError("need |z| < D")
    a_rhs = alpha if alpha_rhs is None else alpha_rhs
    out = []
    for gfun in (g1, g2):
        def f(zz, ww, gfun=gfun):
            return gfun(zz, ww, D, alpha, beta)
        lhs, g0 = _g_operator(f, complex(z), complex(zbar), D, h)
        out.append(float(abs(-lhs - a_rhs / D * g0) / abs(alpha / D * g0)))
    return tuple(out)


# ---------------------------------------------------------------------------
# boundary conditions and normalization
# ---------------------------------------------------------------------------

def lb_jump_defect(r_b: float, delta: float, params: ModelParams,
                   derivative: bool = False, h: float = 1e-4) -> float:
    """|psi(theta_b = pi - d) - e^{2 pi i b} psi(theta_b = -pi + d)| (or of d/dtheta_b)."""
    R = params.R

    def f(th):
        return psi2_tilde(BiPolarPoint.from_polar_b(r_b, th, R), params,
                          "hypergeometric")
    ph = np.exp(2j * math.pi * params.beta)
    if not derivative:
        return abs(f(math.pi - delta) - ph * f(-math.pi + delta))
    th_p = np.array([math.pi - delta - h, math.pi - delta + h])
    th_m = np.array([-math.pi + delta - h, -math.pi + delta + h])
    vp = f(th_p)
    vm = f(th_m)
    dp = (vp[1] - vp[0]) / (2 * h)
    dm = (vm[1] - vm[0]) / (2 * h)
    return abs(dp - ph * dm)


def la_defect(params: ModelParams, xi_a=None) -> float:
    """Relative L_a boundary defect max|phi (1 - e^{2 pi i a})| / max|psi2|.

    psi1 satisfies the L_a condition exactly and phi is continuous across
    L_a, so the defect of psi1 + phi is phi (1 - e^{2 pi i alpha}).  Sampled
    on L_a at xi_a = sqrt(w) r_a.
    """
    if xi_a is None:
        xi_a = np.linspace(0.2, 3.0, 15)
    r_a = np.asarray(xi_a, dtype=float) / math.sqrt(params.omega_c)
    pts = BiPolarPoint(-r_a, np.zeros_like(r_a), params.R)
    ph = phi_integral(pts, params)
    ps = psi1(pts, params) + ph
    jump = abs(1 - np.exp(2j * math.pi * params.alpha))
    return float(np.max(np.abs(ph)) * jump / np.max(np.abs(ps)))


def la_defect_prediction(D1: float, D2: float, alpha: float, beta: float) -> float:
    """Predicted ratio (D1/D2)^{a-b} e^{-(D1-D2)/2} of the L_a defects."""
    return (D1 / D2) ** (alpha - beta) * math.exp(-(D1 - D2) / 2)


def psi2_norm(params: ModelParams, n_r: int = 160, n_theta: int = 256,
              r_max_xi: float = 9.0) -> float:
    """||psi1 + phi||^2 on a polar grid about vortex a.

    Gauss-Legendre in s with r = r_max s^2 (smooths the r^{2 alpha} cusp) and
    the trapezoidal rule in theta_a.
    """
    w = params.omega_c
    r_max = r_max_xi / math.sqrt(w)
    s, ws = np.polynomial.legendre.leggauss(n_r)
    s = 0.5 * (s + 1)
    ws = 0.5 * ws
    r = r_max * s * s
    jac = 2 * r_max * s
    th = -math.pi + (np.arange(n_theta) + 0.5) * (2 * math.pi / n_theta)
    rr, tt = np.meshgrid(r, th, indexing="ij")
    pts = BiPolarPoint(rr * np.cos(tt), rr * np.sin(tt), params.R)
    # points exactly on L_b are moved to the branch value theta_b = pi, which
    # the integral form rejects; the half-cell theta offset avoids them.
    dens = np.abs(psi2_tilde(pts, params)) ** 2
    integrand = dens * rr
    return float(np.sum((integrand * (ws * jac)[:, None])) * (2 * math.pi / n_theta))


# ---------------------------------------------------------------------------
# density grids
# ---------------------------------------------------------------------------

MIN_GRID_RESOLUTION = 16
_trapz = getattr(np, "trapezoid", None) or np.trapz


@dataclass(frozen=True)
class FieldGrid:
    """|psi|^2 sampled on a Cartesian grid in xi = sqrt(omega_c) x.

    ``density[j, i]`` is the probability density per unit xi-area at
    (xi1[i], xi2[j]), i.e. |psi(x)|^2 / omega_c, so that the grid integral
    approximates the norm.  ``flags`` marks samples on a cut (evaluated as
    the limit from the upper side, x2 -> 0+) or at a vortex.
    """

    mode: str
    xi1: np.ndarray
    xi2: np.ndarray
    density: np.ndarray
    flags: np.ndarray

    @property
    def spacing(self):
        return float(self.xi1[1] - self.xi1[0]), float(self.xi2[1] - self.xi2[0])

    def norm(self) -> float:
        """Trapezoidal integral of the density over the grid."""
        return float(_trapz(_trapz(self.density, self.xi1, axis=1), self.xi2))

    def argmax(self):
        j, i = np.unravel_index(np.argmax(self.density), self.density.shape)
        return float(self.xi1[i]), float(self.xi2[j])

    def rows(self):
        """(xi1, xi2, density) triples, xi2-major, in grid order."""
        for j, y in enumerate(self.xi2):
            for i, x in enumerate(self.xi1):
                yield float(x), float(y), float(self.density[j, i])


def _density_row(mode: str, x1: np.ndarray, x2: float, params: ModelParams):
    R = params.R
    y = np.full_like(x1, x2)
    on_lb = (x2 == 0.0) & (x1 > R)
    on_la = (x2 == 0.0) & (x1 < 0.0)
    at_vortex = (x2 == 0.0) & ((x1 == 0.0) | (x1 == R))
    flags = on_lb | on_la | at_vortex
    if mode == "psi1":
        return np.abs(np.asarray(psi1(BiPolarPoint(x1, y, R), params))) ** 2, flags
    dens = np.empty(x1.shape)
    off = ~on_lb
    if np.any(off):
        dens[off] = np.abs(np.atleast_1d(psi2_tilde(BiPolarPoint(x1[off], y[off], R),
                                                    params))) ** 2
    if np.any(on_lb):
        dens[on_lb] = np.abs(psi2_tilde_on_lb(x1[on_lb], params)) ** 2
    return dens, flags


def density_grid(mode: str, params: ModelParams, nx: int, ny: int, extent: float,
                 center=None, workers: int = 1) -> FieldGrid:
    """Density of psi1 or psi2-tilde on [c1 - e, c1 + e] x [c2 - e, c2 + e] (xi units).

    ``center`` defaults to the image of a for psi1 and to the midpoint of
    a and b for psi2.  Rows are evaluated concurrently with ``workers``
    threads and assembled in row order.
    """
    if mode not in ("psi1", "psi2"):
        raise ValueError("mode must be 'psi1' or 'psi2'")
    if min(nx, ny) < MIN_GRID_RESOLUTION:
        raise ValueError(f"grid resolution must be at least {MIN_GRID_RESOLUTION}")
    if not extent > 0:
        raise ValueError("extent must be positive")
    if mode == "psi2":
        params.require_ordered()
    s = math.sqrt(params.omega_c)
    if center is None:
        center = (0.0, 0.0) if mode == "psi1" else (0.5 * params.R * s, 0.0)
    xi1 = center[0] + np.linspace(-extent, extent, nx)
    xi2 = center[1] + np.linspace(-extent, extent, ny)
    # snap values within rounding of the cut line / vortices onto them
    xi2 = np.where(np.abs(xi2) < 1e-12 * extent, 0.0, xi2)
    x1 = xi1 / s

    def row(j):
        return _density_row(mode, x1, float(xi2[j]) / s, params)

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(workers) as ex:
            out = list(ex.map(row, range(ny)))
    else:
        out = [row(j) for j in range(ny)]
    dens = np.stack([o[0] for o in out]) / params.omega_c
    flags = np.stack([o[1] for o in out])
    return FieldGrid(mode, xi1, xi2, dens, flags)
