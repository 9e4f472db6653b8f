"""porosym command line: tables, classify, verify, simulate, export.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import numgrid as ng
from .liealg import AlgebraElement, classify
from .solutions import FAMILIES
from .suites import (
    Report, Status, adjoint_cells, check_adjoint_tables, check_commutation, check_invariants,
    commutation_cells, invariant_rows, load_expectations, round_trip, run_scope,
)
from .symexpr import DomainError, EvalError, eval_numeric, to_text

__all__ = ["Report", "Status", "main"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- tables

def _grid_rows(cells: dict, corner: str) -> list:
    rows = [[corner] + [f"X{j}" for j in range(1, 6)]]
    for i in range(1, 6):
        rows.append([f"X{i}"] + [cells[(i, j)].label() for j in range(1, 6)])
    return rows


def table_rows(which: str) -> list:
    if which == "commutation":
        return _grid_rows(commutation_cells(), "[Xi,Xj]")
    if which == "adjoint":
        return _grid_rows(adjoint_cells(), "Ad(exp(eps Xi)) Xj")
    rows = [["element", "K", "M", "N", "P", "Q", "R", "S", "T"]]
    for label, _alpha, K, *rest in invariant_rows():
        rows.append([label, to_text(K)] + [str(v) for v in rest])
    return rows


def render_rows(rows: list, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue().rstrip("\n")
    if fmt == "json":
        head, *body = rows
        return json.dumps([dict(zip(head, r)) for r in body], indent=2)
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows)


TABLE_CHECKS = {"commutation": check_commutation, "adjoint": check_adjoint_tables,
                "invariants": check_invariants}


def cmd_tables(args) -> int:
    print(render_rows(table_rows(args.which), args.format))
    if not args.check:
        return EXIT_OK
    return _finish(TABLE_CHECKS[args.which](), args, to_stdout=args.format == "text")


# ---------------------------------------------------------------- classify

def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {s!r}") from None


def cmd_classify(args) -> int:
    alpha = [_fraction(a) for a in args.alpha]
    theta = _fraction(args.theta)
    if not 0 < theta < 1:
        raise UsageError("theta must lie in (0, 1)")
    if not any(alpha):
        raise UsageError("the zero element has no class")
    a = AlgebraElement.of(*alpha)
    c = classify(a, theta)
    out = {"case": c.case, "representative": c.label, "scale": str(c.scale),
           "eps": [to_text(e) for e in c.eps], "gamma": str(c.gamma)}
    code = EXIT_OK
    if args.verify:
        _, listed, agree = round_trip(a, theta)
        out["round_trip"] = "pass" if listed and agree else "fail"
        code = EXIT_OK if listed and agree else EXIT_FAIL
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        print(f"case {out['case']}: {a.label()} ~ {out['representative']}")
        print(f"  scale {out['scale']}, gamma {out['gamma']}")
        print("  eps = (" + ", ".join(out["eps"]) + ")")
        if args.verify:
            print(f"  round-trip {out['round_trip']}")
    return code


# ---------------------------------------------------------------- verify

def _finish(rep: Report, args, to_stdout: bool = True) -> int:
    expected = load_expectations()
    if getattr(args, "format", "text") == "json" and to_stdout:
        print(rep.to_json())
    else:
        print(rep.render(), file=sys.stdout if to_stdout else sys.stderr)
    bad = rep.failures(expected)
    for c in bad:
        print(f"unexpected {c.status.value}: {c.name}", file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_verify(args) -> int:
    if args.h not in ("0", "symbolic"):
        raise UsageError("--h is 0 or symbolic")
    rep = run_scope(args.scope, seed=args.seed, h_zero=args.h == "0")
    return _finish(rep, args)


# ---------------------------------------------------------------- simulate

DEFAULT_PARAMS = {
    "S2": {},
    "S3": {"alpha2": 1.0, "alpha4": 0.5, "alpha5": 1.5, "d1": 1.0, "d2": 2.0},
    "S4": {"c3": 1.0, "c4": 1.0, "c5": 1.0},
    "S5": {"c1": 1.0, "c3": 1.0, "c4": 1.0, "c5": 1.0},
    "S1": {}, "S6": {"c1": 1.0, "c2": 1.0, "c4": 1.0, "c5": 1.0},
}


def _params(items) -> dict:
    out = {}
    for it in items or ():
        if "=" not in it:
            raise UsageError(f"--param expects name=value, got {it!r}")
        k, v = it.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError:
            raise UsageError(f"--param {k}: not a number") from None
    return out


def _write_field(path: Path, grid: ng.Grid2D, values: np.ndarray) -> None:
    X, Y = grid.mesh()
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "phi"])
        for x, y, v in zip(X.ravel(), Y.ravel(), values.ravel()):
            w.writerow([f"{x:.10g}", f"{y:.10g}", f"{v:.16g}"])


def cmd_simulate(args) -> int:
    fid = args.family
    fam = FAMILIES[fid]
    params = {**DEFAULT_PARAMS.get(fid, {}), **_params(args.param)}
    h = float(fam.fixed.get("h", args.h))
    try:
        cfg = ng.SimConfig(dt=args.dt, steps=args.steps, h=h, theta=args.theta,
                           boundary="dirichlet", params=params)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if fid == "S3":
        grid = ng.Grid2D.box(1.0, 2.0, 1.0, 2.0, args.n)
    else:
        grid = ng.Grid2D.annulus(args.n)
    try:
        if args.dt_sweep:
            f0 = ng.sample(fid, grid, args.t0, params, h=h, theta=args.theta)
            dt = args.dt or 0.5 * ng.stable_dt(f0.values, grid, cfg.safety)
            res = ng.dt_convergence(fid, grid, cfg, args.t0, args.t0 + args.steps * dt, dt)
            order = math.log2(res["ratio"]) if 0 < res["ratio"] < math.inf else float("nan")
            print(f"{fid} dt sweep: err(dt)={res['err_dt']:.3e} err(dt/2)={res['err_half']:.3e} "
                  f"ratio={res['ratio']:.3f} observed order={order:.2f}")
            return EXIT_OK if 1.6 <= res["ratio"] <= 2.4 else EXIT_FAIL
        rep = ng.run_steps(fid, grid, cfg, args.t0)
    except ng.InadmissibleFamily as e:
        print(f"cannot simulate {fid}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ng.StabilityError as e:
        print(f"stability failure: {e}", file=sys.stderr)
        return EXIT_FAIL
    initial = ng.sample(fid, grid, args.t0, params, h=h, theta=args.theta)
    drift = float(np.max(np.abs(rep.final.values - initial.values)))
    print(f"{fid}: {rep.steps} steps of dt={rep.dt:.3e} on {grid.nx}x{grid.ny}; "
          f"Linf error {rep.linf_error:.3e}, L2 error {rep.l2_error:.3e}, max change {drift:.3e}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_field(out / f"{fid}_initial.csv", grid, initial.values)
        _write_field(out / f"{fid}_final.csv", grid, rep.final.values)
        _write_field(out / f"{fid}_exact.csv", grid, rep.exact.values)
    return EXIT_OK


# ---------------------------------------------------------------- export

@dataclass(frozen=True)
class Panel:
    name: str
    family: str
    params: dict
    sweep: tuple = ()          # (name, values) swept in long format
    line: tuple = ()           # (fixed coordinate, value); the other coordinate is sampled


_BOX = np.linspace(-5.0, 5.0, 40)  # 40 nodes keep the origin off the grid
_THETAS2 = (0.055, 0.555, 0.955)

FIGURES = {
    "F1": (Panel("a_surface_t10", "S1", {"t": 10.0}),
           Panel("b_contour_t10", "S1", {"t": 10.0}),
           Panel("c_x2_time", "S1", {}, ("t", (1.0, 2.0, 3.0, 4.0, 5.0)), ("x", 2.0))),
    "F2": tuple(Panel(f"{p}_theta{th}", "S2", {"theta": th, "h": 2.0})
                for p, th in zip("abc", _THETAS2))
        + tuple(Panel(f"{p}_contour_theta{th}", "S2", {"theta": th, "h": 2.0})
                for p, th in zip("def", _THETAS2))
        + (Panel("g_x5_theta", "S2", {"h": 2.0}, ("theta", _THETAS2), ("x", 5.0)),
           Panel("h_x5_h", "S2", {"theta": 0.555}, ("h", (1.0, 2.0, 3.0, 4.0)), ("x", 5.0))),
    "F3": tuple(Panel(f"{p}_t{t:g}", "S3", {"alpha2": 1.0, "alpha4": 1.0, "alpha5": 0.0,
                                             "d1": 1.0, "d2": 1.0, "t": t})
                for p, t in (("a", 1.0), ("b", 10.0))),
    "F4": (Panel("a_surface", "S4", {"c3": 1.0, "c4": 1.0, "c5": 1.0, "h": 2.0, "theta": 0.555}),
           Panel("b_contour", "S4", {"c3": 1.0, "c4": 1.0, "c5": 1.0, "h": 2.0, "theta": 0.555}),
           Panel("c_y1_h", "S4", {"c3": 1.0, "c4": 1.0, "c5": 1.0, "theta": 0.555},
                 ("h", (1.0, 2.0, 3.0, 4.0)), ("y", 1.0)),
           Panel("d_y1_theta", "S4", {"c3": 1.0, "c4": 1.0, "c5": 1.0, "h": 2.0},
                 ("theta", (0.2, 0.4, 0.6, 0.8)), ("y", 1.0))),
    "F5": (Panel("a_surface_t1", "S5", {"c1": 1.0, "c3": 1.0, "c4": 1.0, "c5": 1.0,
                                        "t": 1.0, "theta": 0.5}),
           Panel("b_contour_t1", "S5", {"c1": 1.0, "c3": 1.0, "c4": 1.0, "c5": 1.0,
                                        "t": 1.0, "theta": 0.5}),
           Panel("c_y0_time", "S5", {"c1": 1.0, "c3": 1.0, "c4": 1.0, "c5": 1.0, "theta": 0.5},
                 ("t", (1.0, 2.0, 3.0, 4.0)), ("y", 0.0)),
           Panel("d_y0_theta", "S5", {"c1": 1.0, "c3": 1.0, "c4": 1.0, "c5": 1.0, "t": 1.0},
                 ("theta", (0.1, 0.3, 0.5, 0.7, 0.9)), ("y", 0.0))),
    "F6": (Panel("a_surface_t1", "S6", {"c1": 1.0, "c2": 1.0, "c4": 1.0, "c5": 1.0,
                                        "t": 1.0, "theta": 0.5}),
           Panel("b_contour_t1", "S6", {"c1": 1.0, "c2": 1.0, "c4": 1.0, "c5": 1.0,
                                        "t": 1.0, "theta": 0.5}),
           Panel("c_x2_time", "S6", {"c1": 1.0, "c2": 1.0, "c4": 1.0, "c5": 1.0, "theta": 0.9},
                 ("t", (1.0, 2.0, 3.0, 4.0)), ("x", 2.0))),
}


def panel_rows(panel: Panel) -> list:
    """Header plus rows for one panel; raises DomainError/EvalError on bad points."""
    fam = FAMILIES[panel.family]
    base = {"t": 1.0, "theta": 0.5, "h": 0.0, **{k: float(v) for k, v in fam.fixed.items()},
            **panel.params}
    if not panel.line:
        X, Y = np.meshgrid(_BOX, _BOX, indexing="ij")
        phi = np.broadcast_to(eval_numeric(fam.phi, {**base, "x": X, "y": Y}), X.shape)
        rows = [["x", "y", "phi"]]
        rows += [[f"{x:.10g}", f"{y:.10g}", f"{v:.16g}"]
                 for x, y, v in zip(X.ravel(), Y.ravel(), phi.ravel())]
        return rows
    fixed, val = panel.line
    free = "y" if fixed == "x" else "x"
    sname, svals = panel.sweep
    rows = [[sname, free, "phi"]]
    for s in svals:
        at = {**base, sname: s, fixed: val, free: _BOX}
        phi = np.broadcast_to(eval_numeric(fam.phi, at), _BOX.shape)
        rows += [[f"{s:g}", f"{c:.10g}", f"{v:.16g}"] for c, v in zip(_BOX, phi)]
    return rows


def cmd_export(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    code = EXIT_OK
    for panel in FIGURES[args.figure]:
        path = out / f"{args.figure}_{panel.name}.csv"
        try:
            with np.errstate(invalid="raise"):
                rows = panel_rows(panel)
        except (DomainError, EvalError, FloatingPointError) as e:
            print(f"{path.name}: not written, {panel.family} has no real values here ({e})",
                  file=sys.stderr)
            code = EXIT_FAIL
            continue
        with path.open("w", newline="") as fh:
            csv.writer(fh).writerows(rows)
        print(f"wrote {path} ({len(rows) - 1} rows)")
    return code


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="porosym", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for randomized zero testing")
    sub = p.add_subparsers(dest="cmd", required=True)

    t = sub.add_parser("tables", help="emit a computed table")
    t.add_argument("which", choices=["commutation", "adjoint", "invariants"])
    t.add_argument("--check", action="store_true", help="compare with the published table")
    t.add_argument("--format", choices=["text", "csv", "json"], default="text")
    t.set_defaults(func=cmd_tables)

    c = sub.add_parser("classify", help="reduce an element to its optimal-system representative")
    c.add_argument("alpha", nargs=5)
    c.add_argument("--theta", default="1/2")
    c.add_argument("--verify", action="store_true", help="replay the adjoint action")
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("scope", choices=["symmetries", "solutions", "adjoint", "conservation", "all"])
    v.add_argument("--h", default="0", help="0 or symbolic (conservation scope)")
    v.add_argument("--format", choices=["text", "json"], default="text")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="integrate a closed-form family and compare")
    s.add_argument("family", choices=sorted(FAMILIES))
    s.add_argument("--theta", type=float, default=0.5)
    s.add_argument("--h", type=float, default=2.0)
    s.add_argument("--steps", type=int, default=100)
    s.add_argument("--dt", type=float, default=None)
    s.add_argument("--n", type=int, default=64, help="nodes per direction")
    s.add_argument("--t0", type=float, default=1.0)
    s.add_argument("--param", action="append", help="family parameter name=value")
    s.add_argument("--dt-sweep", action="store_true", help="report the dt-halving error ratio")
    s.add_argument("--out", help="directory for initial/final/exact CSV fields")
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("export", help="write CSV data behind a figure")
    e.add_argument("figure", choices=sorted(FIGURES))
    e.add_argument("--out", default="figdata")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"porosym: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
