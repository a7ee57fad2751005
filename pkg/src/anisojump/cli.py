"""Command-line front end.

Commands:
    verify-relations   manufactured-solution check of the interface relations
    rotate-tensor      rotate a tensor into a frame and print the invariants
    convergence        run the demonstration solver over a grid sequence
    oracle-fuzz        randomized closed-form vs primitive-system comparison

Configuration comes from an optional TOML file (--config) plus flags;
flags win.  Unknown config keys are rejected.  Exit codes: 0 pass,
1 verification failure, 2 configuration or I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ImportError:  # python < 3.11
    import tomli as tomllib

from .errors import AnisoJumpError, ConfigError
from .geometry import Circle, Ellipse, ParametricCurve
from .jumps import STATE_COMPONENTS
from .ledger import DEFAULT_SEED, fuzz_deviations
from .manufactured import (CASE_NAMES, AnalyticField, ManufacturedCase,
                           get_case, variable_tensor_family,
                           verify_theorem_at)
from .solver import convergence_study, solve_case
from .svg import loglog_svg, _fit_slope
from .tensors import AnisoTensor, rotate_to_local

FUZZ_TOL = 1e-10
_TOP_KEYS = {"seed", "out", "strict_paper", "case", "points", "draws",
             "n", "corrections", "curve", "tensor", "field"}
_CURVE_KEYS = {"kind", "center", "radius", "semi_axes", "rotation",
               "csv", "minus_inside"}
_TENSOR_KEYS = {"a11", "a12", "a22", "sigma", "family"}
_FIELD_KEYS = {"poly"}


def load_config(path) -> dict:
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc
    _reject_unknown(cfg, _TOP_KEYS, "top level")
    if "curve" in cfg:
        _reject_unknown(cfg["curve"], _CURVE_KEYS, "curve")
    for side in ("plus", "minus"):
        if "tensor" in cfg and side in cfg["tensor"]:
            _reject_unknown(cfg["tensor"][side], _TENSOR_KEYS,
                            f"tensor.{side}")
        if "field" in cfg and side in cfg["field"]:
            _reject_unknown(cfg["field"][side], _FIELD_KEYS, f"field.{side}")
    return cfg


def _reject_unknown(table, allowed, where):
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def _poly_field(terms) -> AnalyticField:
    """Polynomial sum c * x^i * y^j from [[i, j, c], ...] terms."""
    terms = [(int(i), int(j), float(c)) for i, j, c in terms]

    def value(x, y):
        return sum(c * x ** i * y ** j for i, j, c in terms)

    def grad(x, y):
        gx = sum(c * i * x ** (i - 1) * y ** j for i, j, c in terms if i > 0)
        gy = sum(c * j * x ** i * y ** (j - 1) for i, j, c in terms if j > 0)
        return np.array([gx, gy])

    def hess(x, y):
        hxx = sum(c * i * (i - 1) * x ** (i - 2) * y ** j
                  for i, j, c in terms if i > 1)
        hyy = sum(c * j * (j - 1) * x ** i * y ** (j - 2)
                  for i, j, c in terms if j > 1)
        hxy = sum(c * i * j * x ** (i - 1) * y ** (j - 1)
                  for i, j, c in terms if i > 0 and j > 0)
        return np.array([[hxx, hxy], [hxy, hyy]])

    return AnalyticField(value=value, grad=grad, hess=hess)


def _curve_from_config(table):
    kind = table.get("kind")
    minus_inside = bool(table.get("minus_inside", True))
    if kind == "circle":
        return Circle(tuple(table.get("center", (0.0, 0.0))),
                      float(table.get("radius", 1.0)), minus_inside)
    if kind == "ellipse":
        return Ellipse(tuple(table.get("center", (0.0, 0.0))),
                       tuple(table.get("semi_axes", (1.0, 1.0))),
                       float(table.get("rotation", 0.0)), minus_inside)
    if kind == "parametric":
        if "csv" not in table:
            raise ConfigError("parametric curve needs a 'csv' sample file")
        try:
            samples = np.loadtxt(table["csv"], delimiter=",")
        except OSError as exc:
            raise ConfigError(f"cannot read curve CSV: {exc}") from exc
        return ParametricCurve(samples, minus_inside)
    raise ConfigError(f"unknown curve kind {kind!r}")


def _tensor_from_config(table, side):
    if "family" in table:
        try:
            return variable_tensor_family(table["family"])
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
    try:
        return AnisoTensor(float(table["a11"]), float(table["a12"]),
                           float(table["a22"]),
                           sigma=float(table.get("sigma", 0.0)))
    except KeyError as exc:
        raise ConfigError(f"tensor.{side} missing entry {exc}") from exc


def case_from_config(cfg) -> ManufacturedCase:
    """Registry case by name, or a custom case assembled from tables."""
    custom = any(k in cfg for k in ("curve", "tensor", "field"))
    if not custom:
        name = cfg.get("case", "coupled_circle")
        try:
            return get_case(name)
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
    for key in ("curve", "tensor", "field"):
        if key not in cfg:
            raise ConfigError(f"custom case needs a [{key}] table")
    for side in ("plus", "minus"):
        if side not in cfg["tensor"] or side not in cfg["field"]:
            raise ConfigError(f"custom case needs tensor.{side} and "
                              f"field.{side}")
    return ManufacturedCase(
        name=cfg.get("case", "custom"),
        u_plus=_poly_field(cfg["field"]["plus"]["poly"]),
        u_minus=_poly_field(cfg["field"]["minus"]["poly"]),
        tensor_plus=_tensor_from_config(cfg["tensor"]["plus"], "plus"),
        tensor_minus=_tensor_from_config(cfg["tensor"]["minus"], "minus"),
        curve=_curve_from_config(cfg["curve"]))


def _out_dir(args, cfg) -> Path:
    out = Path(args.out or cfg.get("out", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str):
    path.write_text(text, newline="\n")
    print(f"wrote {path}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_verify_relations(args, cfg) -> int:
    case = get_case(args.case) if args.case else case_from_config(cfg)
    n_points = int(args.points or cfg.get("points", 64))
    strict = args.strict_paper or bool(cfg.get("strict_paper", False))
    tol = 1e-7 if case.is_variable else 1e-8
    out = _out_dir(args, cfg)

    ts = np.linspace(0.0, case.curve.period, n_points, endpoint=False)
    header = (["t"] + [f"closed_{c}" for c in STATE_COMPONENTS]
              + [f"oracle_{c}" for c in STATE_COMPONENTS]
              + [f"closed_vs_oracle_{c}" for c in STATE_COMPONENTS])
    lines = [",".join(header)]
    max_residual = 0.0
    dev_vs_oracle = np.zeros(6)
    for t in ts:
        rep = verify_theorem_at(case, t, strict_paper=strict)
        max_residual = max(max_residual, rep.max_residual)
        dev_vs_oracle = np.maximum(dev_vs_oracle,
                                   np.abs(rep.closed_vs_oracle))
        row = ([f"{t:.12e}"]
               + [f"{r:.12e}" for r in rep.closed_vs_analytic]
               + [f"{r:.12e}" for r in rep.oracle_vs_analytic]
               + [f"{r:.12e}" for r in rep.closed_vs_oracle])
        lines.append(",".join(row))
    _write(out / f"relations_{case.name}.csv", "\n".join(lines) + "\n")

    passed = max_residual < tol
    mode = "strict-paper" if strict else "reconciled"
    print(f"case={case.name} mode={mode} points={n_points} "
          f"max_residual={max_residual:.3e} tol={tol:.1e} "
          f"{'PASS' if passed else 'FAIL'}")
    if strict:
        for name, dev in zip(STATE_COMPONENTS, dev_vs_oracle):
            if dev > FUZZ_TOL:
                print(f"  as-printed relation diverges from oracle in "
                      f"{name}: max |dev| = {dev:.3e}")
    return 0 if passed else 1


def cmd_rotate_tensor(args, cfg) -> int:
    if args.a11 is not None:
        tensor = AnisoTensor(args.a11, args.a12, args.a22)
    elif "tensor" in cfg and "plus" in cfg["tensor"]:
        tensor = _tensor_from_config(cfg["tensor"]["plus"], "plus")
    else:
        raise ConfigError("give --a11/--a12/--a22 or a [tensor.plus] table")
    theta = float(args.theta)
    loc = rotate_to_local(tensor, theta)
    m11, m12, m22 = tensor.entries()
    det_in, tr_in = m11 * m22 - m12 * m12, m11 + m22
    print(f"theta = {theta:.12g}")
    print(f"a11 = {loc.a11:.12e}")
    print(f"a12 = {loc.a12:.12e}")
    print(f"a22 = {loc.a22:.12e}")
    print(f"det: in={det_in:.12e} out={loc.det:.12e} "
          f"drift={abs(loc.det - det_in):.3e}")
    print(f"trace: in={tr_in:.12e} out={loc.trace:.12e} "
          f"drift={abs(loc.trace - tr_in):.3e}")
    print(f"spd preserved: {loc.a11 > 0 and loc.det > 0}")
    return 0


def cmd_convergence(args, cfg) -> int:
    case = get_case(args.case) if args.case else case_from_config(cfg)
    n_list = args.n or cfg.get("n") or [16, 32, 64]
    n_list = sorted(int(n) for n in n_list)
    corrections = not args.no_corrections and cfg.get("corrections", True)
    out = _out_dir(args, cfg)

    rows = convergence_study(case, n_list, corrections=corrections)
    lines = ["n,h,max_err,l2_err,order"]
    for r in rows:
        lines.append(f"{r['n']},{r['h']:.12e},{r['max_err']:.12e},"
                     f"{r['l2_err']:.12e},{r['order']:.6f}")
    _write(out / f"convergence_{case.name}.csv", "\n".join(lines) + "\n")

    hs = [r["h"] for r in rows]
    errs = [r["max_err"] for r in rows]
    svg = loglog_svg(hs, errs, title=f"{case.name} convergence",
                     xlabel="h", ylabel="max error")
    _write(out / f"convergence_{case.name}.svg", svg)

    # solution and error field on the finest grid
    grid, u = solve_case(case, n_list[-1], corrections=corrections)
    minus = grid.minus_mask()
    sol_lines = ["x,y,u,error"]
    for ix in range(grid.n + 1):
        for iy in range(grid.n + 1):
            f_ = case.u_minus if minus[ix, iy] else case.u_plus
            err = u[ix, iy] - f_(grid.xs[ix], grid.ys[iy])
            sol_lines.append(f"{grid.xs[ix]:.12e},{grid.ys[iy]:.12e},"
                             f"{u[ix, iy]:.12e},{err:.12e}")
    _write(out / f"solution_{case.name}.csv", "\n".join(sol_lines) + "\n")

    slope, _ = _fit_slope(hs, errs)
    for r in rows:
        print(f"n={r['n']:5d} h={r['h']:.4e} max_err={r['max_err']:.4e} "
              f"l2_err={r['l2_err']:.4e} order={r['order']:.2f}")
    print(f"fitted slope = {slope:.3f}")
    return 0


def cmd_oracle_fuzz(args, cfg) -> int:
    draws = int(args.draws or cfg.get("draws", 200))
    seed = int(args.seed if args.seed is not None
               else cfg.get("seed", DEFAULT_SEED))
    strict = args.strict_paper or bool(cfg.get("strict_paper", False))
    out = _out_dir(args, cfg)

    worst = fuzz_deviations(draws, seed, strict_paper=strict)
    mode = "strict-paper" if strict else "reconciled"
    lines = ["component,max_rel_deviation"]
    for name, dev in zip(STATE_COMPONENTS, worst):
        lines.append(f"{name},{dev:.12e}")
    _write(out / f"oracle_fuzz_{mode}.csv", "\n".join(lines) + "\n")

    passed = bool(np.max(worst) < FUZZ_TOL)
    print(f"mode={mode} draws={draws} seed={seed} "
          f"max_rel_deviation={np.max(worst):.3e} "
          f"{'PASS' if passed else 'FAIL'}")
    for name, dev in zip(STATE_COMPONENTS, worst):
        flag = "  FAIL" if dev >= FUZZ_TOL else ""
        print(f"  {name}: {dev:.3e}{flag}")
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anisojump",
        description="interface jump relations for anisotropic elliptic "
                    "problems: verification, rotation, convergence, fuzz")
    parser.add_argument("--config", help="TOML configuration file")
    parser.add_argument("--out", help="output directory (default '.')")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-relations",
                       help="manufactured-solution relation check")
    p.add_argument("--case", choices=CASE_NAMES)
    p.add_argument("--points", type=int)
    p.add_argument("--strict-paper", action="store_true")
    p.set_defaults(func=cmd_verify_relations)

    p = sub.add_parser("rotate-tensor", help="rotate a tensor into a frame")
    p.add_argument("--a11", type=float)
    p.add_argument("--a12", type=float)
    p.add_argument("--a22", type=float)
    p.add_argument("--theta", type=float, required=True)
    p.set_defaults(func=cmd_rotate_tensor)

    p = sub.add_parser("convergence", help="solver convergence study")
    p.add_argument("--case", choices=CASE_NAMES)
    p.add_argument("--n", type=int, action="append",
                   help="grid resolution, repeatable")
    p.add_argument("--no-corrections", action="store_true",
                   help="ablation: drop the interface corrections")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("oracle-fuzz",
                       help="randomized closed-form vs 6x6-solve comparison")
    p.add_argument("--draws", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--strict-paper", action="store_true")
    p.set_defaults(func=cmd_oracle_fuzz)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else {}
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except AnisoJumpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
