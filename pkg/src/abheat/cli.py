"""Command-line interface.

Subcommands::

    abheat density --mode psi1|psi2 --grid NX,NY,EXTENT [--output F.csv]
    abheat kernel one --r R --theta TH --r0 R0 --t T
    abheat kernel two --x X --y Y --x0 X0 --y0 Y0 --t T --nmax N
    abheat shift --alpha A --beta B --D D [--table D1,D2,...]
    abheat verify specfun|landau|ab1|ab2|eigen|shift|appendix|all [--which A|B|C]

Every command accepts ``--config FILE``: a text file of ``key = value``
lines (``#`` starts a comment).  Keys are the long flag names with dashes
replaced by underscores; flags given on the command line override the file.
The resolved configuration is echoed into every output.  Outputs contain no
timestamps, so identical configurations give byte-identical files.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Dict, List, Optional, Sequence

from . import __version__, ab1, ab2, eigen, quad, shift, verify
from .landau import BiPolarPoint, ModelParams

# Figure parameters: omega_c = 4, alpha = 0.4 for psi1; D = 3.5, beta = 0.7 for psi2.
FIGURE_DEFAULTS = {"omega_c": 4.0, "alpha": 0.4, "beta": 0.7, "D": 3.5}

_COMMON_DEFAULTS = {"rel_tol": 1e-10, "abs_tol": 1e-14, "format": "json",
                    "output": "-", "workers": 1}

_DEFAULTS = {
    "density": {**FIGURE_DEFAULTS, "mode": "psi1", "grid": None, "meta": None,
                "format": "csv", "output": "-", "workers": 1},
    "kernel one": {"omega_c": 4.0, "alpha": 0.4, "r": 1.0, "theta": 0.5,
                   "r0": 0.8, "t": 0.3, "n_max": ab1.DEFAULT_N_MAX,
                   "m_min": ab1.DEFAULT_M_WINDOW[0], "m_max": ab1.DEFAULT_M_WINDOW[1]},
    "kernel two": {**FIGURE_DEFAULTS, "x": 0.3, "y": 0.2, "x0": 0.6, "y0": 0.25,
                   "t": 0.3, "nmax": 2},
    "shift": {"omega_c": 4.0, "alpha": 0.4, "beta": 0.7, "D": 20.0,
              "table": None, "no_boundary": False},
    "verify": {"suite": "all", "which": None, "format": "csv"},
}

# Keys that are parsed as floats / ints when read from a config file.
_FLOAT_KEYS = {"omega_c", "alpha", "beta", "D", "R", "rel_tol", "abs_tol", "r",
               "theta", "r0", "t", "x", "y", "x0", "y0"}
_INT_KEYS = {"n_max", "m_min", "m_max", "nmax", "workers"}
_BOOL_KEYS = {"no_boundary"}


class ConfigError(ValueError):
    """Invalid configuration (bad key, value or combination)."""


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def read_config_file(path: str) -> Dict[str, object]:
    """Parse ``key = value`` lines; blank lines and ``#`` comments are ignored."""
    out: Dict[str, object] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            out[key] = _coerce(key, value)
    return out


def _coerce(key: str, value: str):
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc
    if key in _BOOL_KEYS:
        if value.lower() in ("1", "true", "yes", "on"):
            return True
        if value.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"bad boolean for {key}: {value!r}")
    return value


def resolve_config(command: str, args: argparse.Namespace) -> Dict[str, object]:
    """Defaults < config file < command-line flags."""
    cfg = {**_COMMON_DEFAULTS, **_DEFAULTS[command]}
    if getattr(args, "config", None):
        file_cfg = read_config_file(args.config)
        unknown = sorted(set(file_cfg) - set(cfg) - {"R"})
        if unknown:
            raise ConfigError(f"unknown config keys for {command!r}: {', '.join(unknown)}")
        cfg.update(file_cfg)
    for key, value in vars(args).items():
        if key in ("config", "command", "kernel_form", "func") or value is None:
            continue
        if key in _BOOL_KEYS and value is False:
            continue
        cfg[key] = value
    cfg["command"] = command
    return cfg


def _params(cfg) -> ModelParams:
    beta = cfg.get("beta", 0.5)
    if cfg.get("R") is not None:
        return ModelParams(cfg["omega_c"], cfg["alpha"], beta, cfg["R"])
    if cfg.get("D") is not None:
        return ModelParams.from_D(cfg["omega_c"], cfg["D"], cfg["alpha"], beta)
    return ModelParams(cfg["omega_c"], cfg["alpha"], beta)


def _spec(cfg) -> quad.QuadSpec:
    return quad.QuadSpec(rel_tol=cfg["rel_tol"], abs_tol=cfg["abs_tol"])


def _cplx(z: complex) -> Dict[str, float]:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _public(cfg) -> Dict[str, object]:
    return {k: cfg[k] for k in sorted(cfg)}


def _emit(text: str, path: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _csv_text(header: Sequence[str], rows: Sequence[Sequence], cfg=None) -> str:
    buf = io.StringIO()
    if cfg is not None:
        for k, v in _public(cfg).items():
            buf.write(f"# {k} = {v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):  # includes numpy float64
        return repr(float(v))
    return v


def parse_grid(text: str):
    """'NX,NY,EXTENT' -> (int, int, float)."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 3:
        raise ConfigError("grid must be 'NX,NY,EXTENT'")
    try:
        nx, ny, ext = int(parts[0]), int(parts[1]), float(parts[2])
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}") from exc
    if min(nx, ny) < eigen.MIN_GRID_RESOLUTION:
        raise ConfigError(f"grid resolution must be at least {eigen.MIN_GRID_RESOLUTION}")
    if not ext > 0:
        raise ConfigError("grid extent must be positive")
    return nx, ny, ext


def parse_list(text) -> List[float]:
    try:
        return [float(s) for s in str(text).split(",") if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_density(cfg) -> int:
    mode = cfg["mode"]
    if mode not in ("psi1", "psi2"):
        raise ConfigError("mode must be psi1 or psi2")
    if cfg["grid"] is None:
        cfg["grid"] = "101,101,6" if mode == "psi1" else "101,101,5"
    nx, ny, ext = parse_grid(cfg["grid"])
    params = _params(cfg)
    grid = eigen.density_grid(mode, params, nx, ny, ext, workers=int(cfg["workers"]))
    text = _csv_text(("xi1", "xi2", "density"), list(grid.rows()))
    _emit(text, cfg["output"])

    s = math.sqrt(params.omega_c)
    xi_a, xi_b = (0.0, 0.0), (params.R * s, 0.0)
    a_pt = BiPolarPoint(0.0, 0.0, params.R)
    b_pt = BiPolarPoint(params.R, 0.0, params.R)
    if mode == "psi1":
        dens_a = abs(complex(eigen.psi1(a_pt, params))) ** 2 / params.omega_c
        dens_b = abs(complex(eigen.psi1(b_pt, params))) ** 2 / params.omega_c
        row_err = 0.0  # closed form
    else:
        dens_a = abs(complex(eigen.psi2_tilde(a_pt, params))) ** 2 / params.omega_c
        dens_b = abs(complex(eigen.psi2_tilde(b_pt, params))) ** 2 / params.omega_c
        row_err = eigen._PHI_SPEC.rel_tol
    flagged = [[int(i), int(j)] for j, i in zip(*grid.flags.nonzero())]
    arg = grid.argmax()
    meta = {
        "config": _public(cfg),
        "D": params.D, "R": params.R,
        "columns": ["xi1", "xi2", "density"],
        "density_units": "probability per unit xi-area, xi = sqrt(omega_c) x",
        "grid": {"nx": nx, "ny": ny, "extent": ext,
                 "spacing": list(grid.spacing),
                 "xi1_range": [float(grid.xi1[0]), float(grid.xi1[-1])],
                 "xi2_range": [float(grid.xi2[0]), float(grid.xi2[-1])]},
        "norm_trapezoid": grid.norm(),
        "argmax": list(arg), "argmax_radius": math.hypot(*arg),
        "density_at_a": dens_a, "density_at_b": dens_b,
        "row_relative_error_estimate": row_err,
        "geometry": {"a": list(xi_a), "b": list(xi_b),
                     "cut_a": {"from": list(xi_a), "direction": [-1.0, 0.0]},
                     "cut_b": {"from": list(xi_b), "direction": [1.0, 0.0]}},
        "flag_meaning": "sample on a cut (upper-side limit) or at a vortex",
        "flagged_samples_ij": flagged,
    }
    meta_path = cfg["meta"]
    if meta_path is None and cfg["output"] not in (None, "-"):
        meta_path = str(cfg["output"]) + ".meta.json"
    if meta_path is not None:
        _emit(_dumps(meta), meta_path)
    return 0


def cmd_kernel_one(cfg) -> int:
    params = ModelParams(cfg["omega_c"], cfg["alpha"])
    r, th, r0, t = cfg["r"], cfg["theta"], cfg["r0"], cfg["t"]
    spec = _spec(cfg)
    corr = ab1.ab1_correction(r, th, r0, t, params, spec)
    integral = ab1.ab1_kernel_integral(r, th, r0, t, params, spec)
    sel = ab1.Ab1EvalSelector("eigen_expansion", int(cfg["n_max"]),
                              (int(cfg["m_min"]), int(cfg["m_max"])))
    expansion, tail = ab1.ab1_kernel_expansion(r, th, r0, t, params, sel, return_tail=True)
    diff = integral - expansion
    out = {
        "config": _public(cfg),
        "integral": _cplx(integral),
        "integral_error_estimate": corr.total_error,
        "expansion": _cplx(expansion),
        "expansion_tail": tail,
        "difference": _cplx(diff),
        "abs_difference": abs(diff),
        "rel_difference": abs(diff) / abs(integral) if integral != 0 else float("inf"),
    }
    _emit(_dumps(out), cfg["output"])
    return 0


def cmd_kernel_two(cfg) -> int:
    params = _params(cfg)
    params.require_distinct()
    x = BiPolarPoint(cfg["x"], cfg["y"], params.R)
    x0 = BiPolarPoint(cfg["x0"], cfg["y0"], params.R)
    kv = ab2.ab2_kernel(x, x0, cfg["t"], params, int(cfg["nmax"]), _spec(cfg),
                        workers=int(cfg["workers"]))
    out = {
        "config": _public(cfg),
        "D": params.D, "R": params.R,
        "value": _cplx(kv.value),
        "terms": {k: {**_cplx(v), "err": kv.errors[k]} for k, v in kv.terms.items()},
        "length_totals": {str(n): _cplx(kv.length_total(n)) for n in range(kv.n_max + 1)},
        "tail": kv.tail,
        "error_estimate": sum(kv.errors.values()),
    }
    _emit(_dumps(out), cfg["output"])
    return 0


def cmd_shift(cfg) -> int:
    w, a, b = cfg["omega_c"], cfg["alpha"], cfg["beta"]
    D_list = parse_list(cfg["table"]) if cfg["table"] is not None else [cfg["D"]]
    rows = shift.delta_e_table(w, a, b, D_list, boundary=not cfg["no_boundary"])
    e1 = eigen.energy_e1(ModelParams.from_D(w, D_list[0], a, b))
    header = ("D", "E1", "E1_over_omega_c", "deltaE_closed", "deltaE_closed_over_omega_c",
              "E2", "E2_over_omega_c", "deltaE_boundary_re", "deltaE_boundary_im",
              "relative_gap", "boundary_error_estimate")
    table = [(r.D, e1, e1 / w, r.closed, r.closed / w, e1 + r.closed, (e1 + r.closed) / w,
              r.boundary.real, r.boundary.imag, r.gap, r.err) for r in rows]
    if cfg["format"] == "csv":
        text = _csv_text(header, table, cfg)
    else:
        text = _dumps({"config": _public(cfg),
                       "rows": [dict(zip(header, row)) for row in table]})
    _emit(text, cfg["output"])
    return 0


def cmd_verify(cfg) -> int:
    suite = cfg["suite"]
    which = cfg["which"]
    if which is not None and suite != "appendix":
        raise ConfigError("--which applies to the appendix suite only")
    if suite == "all":
        names = list(verify.SUITES)
    elif suite in verify.SUITES:
        names = [suite]
    else:
        raise ConfigError(f"unknown suite {suite!r}")
    rows = []
    for name in names:
        if name == "appendix" and which is not None:
            if which not in verify.APPENDIX_PARTS:
                raise ConfigError("--which must be A, B or C")
            checks = verify.APPENDIX_PARTS[which]()
            label = f"appendix-{which}"
        else:
            checks = verify.run_suite(name)
            label = name
        rows.extend((label, c) for c in checks)
    failures = int(sum(not c.passed for _, c in rows))
    header = ("suite", "check", "value", "tol", "lower_bound", "passed")
    table = [(s, c.name, float(c.value), float(c.tol),
              bool(c.lower_bound), bool(c.passed))
             for s, c in rows]
    if cfg["format"] == "json":
        text = _dumps({"config": _public(cfg), "failures": failures,
                       "checks": [dict(zip(header, r)) for r in table]})
    else:
        text = _csv_text(header, table, cfg)
    _emit(text, cfg["output"])
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, fmt: bool = True):
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--output", "-o", help="output path ('-' for stdout)")
    if fmt:
        p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--rel-tol", dest="rel_tol", type=float, help="quadrature relative tolerance")
    p.add_argument("--abs-tol", dest="abs_tol", type=float, help="quadrature absolute tolerance")
    p.add_argument("--workers", type=int, help="threads for independent sub-tasks")


def _add_params(p: argparse.ArgumentParser, beta: bool = True, geometry: bool = True):
    p.add_argument("--omega-c", dest="omega_c", type=float, help="cyclotron frequency")
    p.add_argument("--alpha", type=float, help="flux parameter of vortex a")
    if beta:
        p.add_argument("--beta", type=float, help="flux parameter of vortex b")
    if geometry:
        p.add_argument("--D", dest="D", type=float, help="omega_c R^2")
        p.add_argument("--R", dest="R", type=float, help="vortex separation (overrides D)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abheat",
        description="Heat kernels and bound states with Aharonov-Bohm solenoids "
                    "in a uniform magnetic field (units hbar = mu = 1).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="|psi|^2 on a grid in xi = sqrt(omega_c) x (CSV)")
    p.add_argument("--mode", choices=("psi1", "psi2"))
    p.add_argument("--grid", help="NX,NY,EXTENT (grid half-width in xi units)")
    p.add_argument("--meta", help="metadata JSON path (default: OUTPUT.meta.json)")
    _add_params(p)
    _add_common(p, fmt=False)
    p.set_defaults(func=cmd_density, command="density")

    pk = sub.add_parser("kernel", help="heat kernel values (JSON)")
    ksub = pk.add_subparsers(dest="kernel_form", required=True)
    k1 = ksub.add_parser("one", help="one solenoid: integral and eigen-expansion forms")
    k1.add_argument("--r", type=float)
    k1.add_argument("--theta", type=float)
    k1.add_argument("--r0", type=float)
    k1.add_argument("--t", type=float)
    k1.add_argument("--n-max", dest="n_max", type=int)
    k1.add_argument("--m-min", dest="m_min", type=int)
    k1.add_argument("--m-max", dest="m_max", type=int)
    _add_params(k1, beta=False, geometry=False)
    _add_common(k1, fmt=False)
    k1.set_defaults(func=cmd_kernel_one, command="kernel one")
    k2 = ksub.add_parser("two", help="two solenoids: per-path term breakdown")
    k2.add_argument("--x", type=float, help="first coordinate of x")
    k2.add_argument("--y", type=float, help="second coordinate of x")
    k2.add_argument("--x0", type=float, help="first coordinate of x0")
    k2.add_argument("--y0", type=float, help="second coordinate of x0")
    k2.add_argument("--t", type=float)
    k2.add_argument("--nmax", type=int, help=f"longest path length (1..{ab2.MAX_PATH_LENGTH})")
    _add_params(k2)
    _add_common(k2, fmt=False)
    k2.set_defaults(func=cmd_kernel_two, command="kernel two")

    ps = sub.add_parser("shift", help="energy shift E2 - E1 (JSON or CSV)")
    _add_params(ps, geometry=False)
    ps.add_argument("--D", dest="D", type=float, help="omega_c R^2")
    ps.add_argument("--table", help="comma-separated increasing D values")
    ps.add_argument("--no-boundary", dest="no_boundary", action="store_true",
                    help="skip the boundary-integral cross-check")
    _add_common(ps)
    ps.set_defaults(func=cmd_shift, command="shift")

    pv = sub.add_parser("verify", help="identity and cross-form suites (exit 1 on failure)")
    pv.add_argument("suite", nargs="?",
                    choices=tuple(verify.SUITES) + ("all",))
    pv.add_argument("--which", choices=("A", "B", "C"), help="appendix part")
    _add_common(pv)
    pv.set_defaults(func=cmd_verify, command="verify")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func = args.func
    try:
        cfg = resolve_config(args.command, args)
        return func(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"abheat: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
