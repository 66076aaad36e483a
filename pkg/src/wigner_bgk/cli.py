"""wigner-bgk command line: eval | verify | scan | wp | evolve.

Exit codes: 0 all checks passed, 1 a check failed, 2 bad usage or invalid parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
import warnings
from typing import Optional

import numpy as np

from . import admissibility as adm
from . import evolution as evo
from . import poisson as wp
from .core import DomainError
from .presets import QUARTIC_PRESETS, WP_PRESETS, preset_names, quartic_preset
from .quartic import QuarticEquilibrium, SingularBoundaryWarning, coeff_C, eval_wigner, ode_residual
from .residual import residual_Hq, residual_qp

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


# -- output ---------------------------------------------------------------------

def _fmt(x):
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_table(header, rows, out: Optional[str]):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(float(x)) if isinstance(x, (float, np.floating)) else _fmt(x) for x in r])
    _emit(buf.getvalue(), out)


def _flatten(d, prefix=""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, (list, tuple)):
            yield key, ";".join(_fmt(x) for x in v)
        else:
            yield key, v


def write_report(report: dict, fmt: str, out: Optional[str]):
    if fmt == "json":
        _emit(json.dumps(report, indent=2) + "\n", out)
    else:
        write_table(["key", "value"], list(_flatten(report)), out)


def _emit(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- parameter handling -----------------------------------------------------------

def _equilibrium(args, record: Optional[list] = None) -> QuarticEquilibrium:
    """Preset first, then explicit overrides; all validation happens here."""
    if args.preset:
        if args.preset not in QUARTIC_PRESETS:
            raise UsageError(f"preset {args.preset!r} is not a quartic preset; choose from "
                             f"{', '.join(sorted(QUARTIC_PRESETS))}")
        vals = dict(zip(("mu", "gamma", "a0", "b0", "c0"), QUARTIC_PRESETS[args.preset]))
    else:
        vals = {}
    for k in ("mu", "gamma", "a0", "b0", "c0"):
        v = getattr(args, k, None)
        if v is not None:
            vals[k] = v
    missing = [k for k in ("mu", "gamma", "a0", "b0", "c0") if k not in vals]
    if missing:
        raise UsageError(f"missing parameters {missing}: give --preset or all of --mu --gamma --a0 --b0 --c0")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", SingularBoundaryWarning)
        eq = QuarticEquilibrium.build(vals["mu"], vals["gamma"], vals["a0"], vals["b0"], vals["c0"], args.form)
    if record is not None:
        record.extend(str(w.message) for w in caught)
    else:
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    return eq


def _linspace_request(lo, hi, n, name):
    if n is None or n < 1:
        raise UsageError(f"{name} grid needs at least one point (got {n})")
    if n > 1 and not hi > lo:
        raise UsageError(f"{name} range must be increasing, got [{lo}, {hi}]")
    return np.linspace(lo, hi, n) if n > 1 else np.array([lo])


# -- subcommands ------------------------------------------------------------------

def cmd_eval(args) -> int:
    eq = _equilibrium(args)
    if args.q is not None or args.p is not None:
        if args.q is None or args.p is None:
            raise UsageError("--q and --p must be given together")
        qs, ps = np.array([args.q]), np.array([args.p])
    else:
        qm = eq.q_max if eq.mu == 1 else 4.0
        q_lo, q_hi = args.q_range or (-min(qm * 1.05, 1e3), min(qm * 1.05, 1e3))
        c0 = abs(coeff_C(0.0, eq))
        p_lo, p_hi = args.p_range or (-8.0 / math.sqrt(c0), 8.0 / math.sqrt(c0))
        qs = _linspace_request(q_lo, q_hi, args.n_q, "q")
        ps = _linspace_request(p_lo, p_hi, args.n_p, "p")
    F = eval_wigner(qs[:, None], ps[None, :], eq)
    F = np.atleast_2d(F)
    if args.format == "json":
        rows = [{"q": float(q), "p": float(p), "F": float(F[i, j])}
                for i, q in enumerate(qs) for j, p in enumerate(ps)]
        write_report({"command": "eval", "params": eq.to_dict(), "points": rows}, "json", args.out)
    else:
        write_table(["q", "p", "F"], ((q, p, F[i, j]) for i, q in enumerate(qs) for j, p in enumerate(ps)),
                    args.out)
    return EXIT_OK


def verify_report(eq: QuarticEquilibrium, tol: float = 1e-7, warn: Optional[list] = None) -> dict:
    qm = 0.9 * eq.q_max if eq.mu == 1 else 4.0
    ode = [ode_residual(q, eq) for q in np.linspace(-qm, qm, 21)]
    ode_max = float(np.max(np.abs(ode)))
    rqp = residual_qp(eq)
    rhq = residual_Hq(eq)
    checks = {
        "ode_residual": {"max_abs": ode_max, "tol": tol, "passed": ode_max <= tol},
        "residual_qp": {"max_abs": rqp.max_abs_residual, "at": list(rqp.location), "tol": tol,
                        "passed": rqp.max_abs_residual <= tol},
        "residual_Hq": {"max_abs": rhq.max_abs_residual, "at": list(rhq.location), "tol": tol,
                        "passed": rhq.max_abs_residual <= tol},
    }
    try:
        rep = adm.check_admissibility(eq)
        checks["admissibility"] = {**rep.to_dict(), "passed": rep.passed}
    except (adm.QuadratureError, ArithmeticError) as exc:
        checks["admissibility"] = {"error": f"{type(exc).__name__}: {exc}", "passed": False}
    passed = all(c["passed"] for c in checks.values())
    return {"command": "verify", "params": eq.to_dict(), "checks": checks, "warnings": list(warn or []),
            "passed": passed}


def cmd_verify(args) -> int:
    warn: list = []
    eq = _equilibrium(args, warn)
    report = verify_report(eq, args.tol if args.tol is not None else 1e-7, warn)
    write_report(report, args.format, args.out)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_scan(args) -> int:
    mu = args.mu if args.mu is not None else -1
    a0 = args.a0 if args.a0 is not None else 1.0
    c0 = args.c0 if args.c0 is not None else 1.0
    if args.gamma is not None or args.b0 is not None:
        raise UsageError("scan varies gamma along the family B0 = ratio * A0; use --ratio, not --gamma/--b0")
    lo, hi = args.bracket
    family = adm.ratio_family(mu, args.ratio, a0, c0, args.form)
    t0 = time.perf_counter()
    try:
        g = adm.critical_gamma(family, args.predicate, (lo, hi), args.scan_tol)
    except ValueError as exc:
        report = {"command": "scan", "predicate": args.predicate, "bracket": [lo, hi],
                  "family": family.description, "error": str(exc), "passed": False}
        write_report(report, args.format, args.out)
        return EXIT_FAIL
    report = {"command": "scan", "predicate": args.predicate, "bracket": [lo, hi], "tol": args.scan_tol,
              "family": family.description, "gamma_star": g, "seconds": time.perf_counter() - t0,
              "passed": True}
    write_report(report, args.format, args.out)
    return EXIT_OK


def cmd_wp(args) -> int:
    preset = WP_PRESETS.get(args.preset) if args.preset else None
    if args.preset and preset is None:
        raise UsageError(f"preset {args.preset!r} is not a Wigner-Poisson preset; choose from "
                         f"{', '.join(sorted(WP_PRESETS))}")
    c0s = args.c0 or (preset["c0"] if preset else (1.0,))
    b0 = args.b0 if args.b0 is not None else (preset["b0"] if preset else 1.0)
    units = wp.WPUnits.consistent(hbar=args.hbar)
    rows = []
    meta = {"command": "wp", "units": units.__dict__, "b0": b0, "curves": []}
    for c0 in c0s:
        eq = wp.WPEquilibrium(units, float(c0), float(b0))
        tab = wp.tabulate(eq, wp.default_n_grid(eq, args.n_points), method=args.method)
        meta["curves"].append({"c0": c0, "n_cut": eq.n_cut, "points": len(tab["n"])})
        rows.extend((c0, *r) for r in zip(tab["n"], tab["C"], tab["B"], tab["phi"]))
    if args.format == "json":
        meta["rows"] = [dict(zip(("c0", "n", "C", "B", "phi"), map(float, r))) for r in rows]
        write_report(meta, "json", args.out)
    else:
        write_table(["c0", "n", "C", "B", "phi"], rows, args.out)
        if args.out:
            with open(args.out + ".json", "w") as fh:
                json.dump(meta, fh, indent=2)
    return EXIT_OK


def cmd_evolve(args) -> int:
    eq = _equilibrium(args)
    if eq.mu != -1:
        raise UsageError("evolve supports mu=-1 only: the mu=+1 equilibrium is cut off at the "
                         "support edge, and spectral evolution would measure Gibbs ringing there")
    grid = evo.default_grid(eq, n=args.n, T=args.T)
    Q, P = grid.mesh()
    F0 = eval_wigner(Q, P, eq)
    t0 = time.perf_counter()
    FT = evo.evolve(F0, grid, eq.params)
    dev = evo.relative_l2(FT, F0)
    tol = args.tol if args.tol is not None else 1e-3
    if args.snapshot:
        evo.write_snapshot(args.snapshot, FT, grid, eq.params, args.snapshot_format)
    report = {"command": "evolve", "params": eq.to_dict(),
              "grid": {"l_q": grid.l_q, "l_p": grid.l_p, "n_q": grid.n_q, "n_p": grid.n_p,
                       "dt": grid.dt, "T": grid.T},
              "deviation": dev, "tol": tol, "seconds": time.perf_counter() - t0, "passed": dev <= tol}
    write_report(report, args.format, args.out)
    return EXIT_OK if report["passed"] else EXIT_FAIL


# -- parser -------------------------------------------------------------------------

def _common(p, c0_list=False):
    p.add_argument("--preset", help=f"named parameter set: {', '.join(preset_names())}")
    p.add_argument("--mu", type=int, choices=(-1, 1))
    p.add_argument("--gamma", type=float)
    p.add_argument("--a0", type=float)
    p.add_argument("--b0", type=float)
    if c0_list:
        p.add_argument("--c0", type=float, nargs="+")
    else:
        p.add_argument("--c0", type=float)
    p.add_argument("--form", choices=("exact", "published"), default="exact",
                   help="exact solution (default) or the published closed form")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--tol", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wigner-bgk", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="tabulate F(q, p)")
    _common(p)
    p.add_argument("--q", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--n-q", type=int, default=101)
    p.add_argument("--n-p", type=int, default=101)
    p.add_argument("--q-range", type=float, nargs=2)
    p.add_argument("--p-range", type=float, nargs=2)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="residuals and admissibility report")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="critical gamma along B0 = ratio * A0")
    _common(p)
    p.add_argument("--predicate", choices=sorted(adm.PREDICATES), required=True)
    p.add_argument("--ratio", type=float, default=-2.5)
    p.add_argument("--bracket", type=float, nargs=2, default=(0.1, 1.0))
    p.add_argument("--scan-tol", type=float, default=1e-4)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("wp", help="tabulate Wigner-Poisson (n, C, B, phi)")
    _common(p, c0_list=True)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--n-points", type=int, default=400)
    p.add_argument("--method", choices=("quad", "dilog"), default="quad")
    p.set_defaults(func=cmd_wp)

    p = sub.add_parser("evolve", help="stationarity check by time evolution (mu=-1)")
    _common(p)
    p.add_argument("--T", type=float, default=10.0)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--snapshot", help="write the final state here")
    p.add_argument("--snapshot-format", choices=("csv", "bin"), default="bin")
    p.set_defaults(func=cmd_evolve)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ValueError, DomainError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
