"""Energy shift E_2 - E_1 caused by the second solenoid.

* ``delta_e_closed``   -- the closed asymptotic formula
  -sin(pi a) sin(pi b)/pi^2 Gamma(b - a) (D/2)^{a-b} e^{-D/2} omega_c;
* ``delta_e_boundary`` -- the Green-identity boundary integral along the
  upper side of the cut L_a with the exact correction phi;
* ``delta_e_reduced``  -- the same boundary integral after phi is replaced by
  its near-cut approximation and the normal derivatives by their leading
  terms (the last step before the closed formula);
* ``delta_e_table``    -- rows (D, closed, boundary, relative gap).

Units hbar = mu = 1; energies are returned in absolute units (omega_c sets the
scale).  On L_a(+) (theta_a = pi) the outward normal derivative including the
vector potential is (1/r_a) d/dtheta_a + i (omega_c/2) r_a.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from . import quad
from .eigen import energy_e1, phi_integral, psi1
from .landau import BiPolarPoint, ModelParams

_SHIFT_SPEC = quad.QuadSpec(rel_tol=1e-9, abs_tol=0.0)


@dataclass(frozen=True)
class ShiftResult:
    E1: float
    deltaE_closed: float
    deltaE_boundary: complex
    D: float

    @property
    def E2(self) -> float:
        return self.E1 + self.deltaE_closed

    @property
    def relative_gap(self) -> float:
        return abs(self.deltaE_boundary - self.deltaE_closed) / abs(self.deltaE_closed)


def delta_e_closed(params: ModelParams) -> float:
    """Closed asymptotic energy shift."""
    params.require_ordered()
    a, b, D = params.alpha, params.beta, params.D
    return (-math.sin(math.pi * a) * math.sin(math.pi * b) / math.pi ** 2
            * math.gamma(b - a) * (D / 2) ** (a - b) * math.exp(-D / 2)
            * params.omega_c)


def cutoff_radius(params: ModelParams) -> float:
    """Upper end 10 R/sqrt(D) + 5 R of the radial integral along L_a."""
    return 10 * params.R / math.sqrt(params.D) + 5 * params.R


def _phi_normal(r_a, params: ModelParams, dtheta: float = 1e-3):
    """phi on L_a(+) and (1/r_a) d phi/d theta_a by a 4th-order stencil.

    phi is smooth across L_a, so the stencil straddles the cut.  All stencil
    points are integrated on one shared partition.
    """
    r_a = np.asarray(r_a, dtype=float)
    offs = np.array([-2, -1, 0, 1, 2]) * dtheta
    th = math.pi + offs
    rr = np.repeat(r_a, 5)
    tt = np.tile(th, r_a.size)
    vals = np.asarray(phi_integral(BiPolarPoint(rr * np.cos(tt), rr * np.sin(tt),
                                                params.R), params))
    vals = vals.reshape(r_a.size, 5)
    d1 = vals @ (np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0) / dtheta
    return vals[:, 2], d1 / r_a


def boundary_integrand(r_a, params: ModelParams):
    """-phi conj(N psi1) + conj(psi1) N phi on theta_a = pi (N: magnetic normal derivative)."""
    w, a = params.omega_c, params.alpha
    r_a = np.atleast_1d(np.asarray(r_a, dtype=float))
    pts = BiPolarPoint(-r_a, np.zeros_like(r_a), params.R)
    p1 = np.asarray(psi1(pts, params))
    n_psi1 = p1 * (1j * a / r_a + 0.5j * w * r_a)
    ph, dph = _phi_normal(r_a, params)
    n_phi = dph + 0.5j * w * r_a * ph
    return -ph * np.conj(n_psi1) + np.conj(p1) * n_phi


def delta_e_boundary_result(params: ModelParams,
                            spec: quad.QuadSpec = _SHIFT_SPEC) -> quad.QuadResult:
    """Boundary formula with the quadrature error estimate of its integral."""
    params.require_ordered()
    a = params.alpha
    res = quad.integrate_segment(lambda r: boundary_integrand(r, params), 0.0,
                                 cutoff_radius(params), spec, lo_exp=a - 1.0)
    c = 0.5 * (1 - np.exp(2j * math.pi * a))
    return quad.QuadResult(complex(c * res.value), abs(c) * res.err_estimate,
                           res.evaluations, abs(c) * res.truncation_bound)


def delta_e_boundary(params: ModelParams,
                     spec: quad.QuadSpec = _SHIFT_SPEC) -> complex:
    """(1/2)(1 - e^{2 pi i a}) int_0^inf boundary_integrand dr_a (complex)."""
    return complex(delta_e_boundary_result(params, spec).value)


def phi_near_cut(x: BiPolarPoint, params: ModelParams):
    """Large-D approximation of phi in the vicinity of L_a."""
    params.require_ordered()
    a, b, D, R = params.alpha, params.beta, params.D, params.R
    r_b = np.asarray(x.r_b, dtype=float)
    th_b = np.asarray(x.theta_b, dtype=float)
    c = (-math.sqrt(D / (2 * math.pi * math.gamma(a + 1))) * math.sin(math.pi * b)
         / (math.pi * R) * math.gamma(b - a) * (D / 2) ** ((a - b) / 2))
    val = (c * np.exp(-D / (4 * R * R) * (R * R + r_b * r_b)
                      + 0.5j * D / R * r_b * np.sin(th_b))
           * (math.sqrt(D / 2) * r_b / R) ** (2 * a - b) * np.exp(1j * b * th_b))
    return complex(val) if val.ndim == 0 else val


def reduced_integrand(r_a, params: ModelParams):
    """Integrand of the fully reduced boundary formula (before r_a = 2 R x/D)."""
    a, D, R = params.alpha, params.D, params.R
    r_a = np.asarray(r_a, dtype=float)
    r_b = R + r_a
    s = math.sqrt(D / 2)
    return (np.exp(-D * r_a ** 2 / (2 * R * R) - D * r_a / (2 * R))
            * (s * r_b / R) ** (2 * a - params.beta)
            * (s * r_a / R + a * (s * r_a / R) ** -1 + s * r_b / R)
            * (s * r_a / R) ** a)


def delta_e_reduced(params: ModelParams,
                    spec: quad.QuadSpec = _SHIFT_SPEC) -> complex:
    """Boundary formula with phi and the normal derivatives at leading order."""
    params.require_ordered()
    w, a, b, D, R = params.omega_c, params.alpha, params.beta, params.D, params.R
    pref = (1j / (2 * R) * math.sqrt(D / 2)
            * (np.exp(-1j * math.pi * a) - np.exp(1j * math.pi * a))
            * (-w) / (2 * math.pi * math.gamma(a + 1)) * math.sin(math.pi * b) / math.pi
            * math.gamma(b - a) * (D / 2) ** ((a - b) / 2) * math.exp(-D / 2))
    res = quad.integrate_segment(lambda r: reduced_integrand(r, params), 0.0,
                                 cutoff_radius(params), spec, lo_exp=a - 1.0)
    return complex(pref * res.value)


def normal_derivative_ratio(r_a, params: ModelParams):
    """(N phi)/phi on L_a(+) and its leading approximation i D r_b/(2 R^2)."""
    w, D, R = params.omega_c, params.D, params.R
    r_a = np.atleast_1d(np.asarray(r_a, dtype=float))
    ph, dph = _phi_normal(r_a, params)
    exact = (dph + 0.5j * w * r_a * ph) / ph
    approx = 1j * D * (R + r_a) / (2 * R * R)
    return exact, approx


def shift_result(params: ModelParams) -> ShiftResult:
    return ShiftResult(energy_e1(params), delta_e_closed(params),
                       delta_e_boundary(params), params.D)


@dataclass(frozen=True)
class ShiftRow:
    D: float
    closed: float
    boundary: complex
    gap: float
    err: float = float("nan")


def delta_e_table(omega_c: float, alpha: float, beta: float,
                  D_list: Sequence[float], boundary: bool = True) -> List[ShiftRow]:
    """One row per D; asserts that |Delta E| decreases along the (sorted) list."""
    D_list = [float(d) for d in D_list]
    if not D_list or any(d <= 0 for d in D_list):
        raise ValueError("D values must be positive")
    if any(d2 <= d1 for d1, d2 in zip(D_list[:-1], D_list[1:])):
        raise ValueError("D values must be strictly increasing")
    rows = []
    for D in D_list:
        p = ModelParams.from_D(omega_c, D, alpha, beta)
        c = delta_e_closed(p)
        if boundary:
            res = delta_e_boundary_result(p)
            bval, err = complex(res.value), res.total_error
            gap = abs(bval - c) / abs(c)
        else:
            bval, err, gap = complex("nan"), float("nan"), float("nan")
        rows.append(ShiftRow(D, c, bval, gap, err))
    for r1, r2 in zip(rows[:-1], rows[1:]):
        if not abs(r2.closed) < abs(r1.closed):
            raise ArithmeticError("|Delta E| is not decreasing in D")
    return rows


def log_slope(omega_c: float, alpha: float, beta: float,
              D_values: Sequence[float]) -> float:
    """Least-squares slope of log|Delta E_closed| against D."""
    D_values = np.asarray(D_values, dtype=float)
    y = [math.log(abs(delta_e_closed(ModelParams.from_D(omega_c, D, alpha, beta))))
         for D in D_values]
    return float(np.polyfit(D_values, y, 1)[0])


__all__ = ["ShiftResult", "ShiftRow", "delta_e_closed", "delta_e_boundary",
           "delta_e_boundary_result",
           "delta_e_reduced", "delta_e_table", "phi_near_cut", "shift_result",
           "normal_derivative_ratio", "boundary_integrand", "reduced_integrand",
           "log_slope", "cutoff_radius"]
