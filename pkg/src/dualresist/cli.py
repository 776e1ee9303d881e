"""Command-line front end.

    dualresist resistance --graph g.txt --source 1 --sink 2
    dualresist kirchhoff  --graph g.txt [--method mp|block|regularized]
    dualresist bounds     --graph g.txt [--edge I J --a-hat X]
    dualresist report     --graph g.txt [--edge I J --a-hat X]
    dualresist verify     --graph g.txt [--seed 42]

Exit codes: 0 success, 2 invalid input (missing file, parse error,
disconnected graph, bad vertex), 1 numerical failure or failed verification.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from .dual_core import DualScalar
from .dual_linalg import DualMatrix, mp_axiom_residuals
from .errors import NumericalError, ValidationError
from .graph_model import (
    PerturbedGraph,
    laplacian,
    load_graph,
    require_connected,
    spanning_tree_count,
    spanning_trees_containing_edge,
)
from .oracle import (
    MAX_ENUM_M,
    MAX_ENUM_N,
    brute_force_spanning_trees,
    finite_difference_resistance,
    one_inverse_member_independence,
)
from .perturbation import perturbation_report, single_edge_analysis
from .resistance import dual_laplacian_pinv, kirchhoff_index, resistance, resistance_mp

COMMANDS = ("resistance", "kirchhoff", "bounds", "report", "verify")
METHODS = ("mp", "block", "regularized")
KF_METHOD = {"mp": "trace", "block": "block", "regularized": "regularized"}
TOL_ENV = "DUALRESIST_TOL"
DEFAULT_TOLERANCE = 1e-9
FD_TOLERANCE = 1e-5
DIGITS = 12


@dataclass
class RunConfig:
    command: str
    graph_path: str
    source: int | None = None
    sink: int | None = None
    method: str = "mp"
    tolerance: float = DEFAULT_TOLERANCE
    format: str = "text"
    edge: tuple[int, int] | None = None
    a_hat: float | None = None
    seed: int = 42


def _num(x) -> str:
    return f"{float(x) + 0.0:.{DIGITS}g}"


def _require_finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        raise NumericalError(f"non-finite value {obj!r} in report")
    if isinstance(obj, dict):
        for v in obj.values():
            _require_finite(v)
    elif isinstance(obj, list):
        for v in obj:
            _require_finite(v)
    return obj


# -- commands --------------------------------------------------------------------
# Each returns (json-able result, text lines, ok flag).

def _cmd_resistance(G: PerturbedGraph, cfg: RunConfig):
    if cfg.source is None or cfg.sink is None:
        raise ValidationError("resistance requires --source and --sink")
    r = resistance(G, cfg.source, cfg.sink, cfg.method)
    result = {"source": cfg.source, "sink": cfg.sink, "method": cfg.method,
              "resistance": r.to_dict()}
    return result, [f"R[{cfg.source},{cfg.sink}] = {r.format(DIGITS)}"], True


def _cmd_kirchhoff(G, cfg):
    kf = kirchhoff_index(G, KF_METHOD[cfg.method])
    return {"method": cfg.method, "kf": kf.to_dict()}, [f"Kf = {kf.format(DIGITS)}"], True


def _single_edge(G, cfg):
    if cfg.edge is None:
        return None
    return single_edge_analysis(G, cfg.edge, 0.0 if cfg.a_hat is None else cfg.a_hat)


def _single_edge_lines(se):
    lines = [
        f"single edge {{{se.edge[0]},{se.edge[1]}}}, a_hat = {_num(se.a_hat)}",
        f"  delta_r = {_num(se.delta_r)}  (trees: {_num(se.delta_r_trees)}, "
        f"dual: {_num(se.delta_r_dual)})",
        f"  tau = {se.tau}, tau_e = {se.tau_e}",
        f"  delta_kf = {_num(se.delta_kf)}",
    ]
    lo, hi = se.kf_ratio_bounds
    if se.kf_ratio is None:
        lines.append(f"  kf_ratio = absent (a_hat = 0); bounds [{_num(lo)}, {_num(hi)}]")
    else:
        lines.append(f"  kf_ratio = {_num(se.kf_ratio)} in [{_num(lo)}, {_num(hi)}]: "
                     f"{'true' if se.kf_ratio_within_bounds else 'false'}")
    return lines


def _bounds_payload(G, cfg):
    rep = perturbation_report(G)
    result = {
        "kf": rep.kf.to_dict(),
        "delta_kf": rep.delta_kf,
        "bound_eigsum": rep.bound_eigsum,
        "bound_specrad": rep.bound_specrad,
        "bounds_hold": list(rep.bounds_hold),
    }
    lines = [
        f"Kf = {rep.kf.format(DIGITS)}",
        f"delta_kf = {_num(rep.delta_kf)}",
        f"bound_eigsum = {_num(rep.bound_eigsum)}",
        f"bound_specrad = {_num(rep.bound_specrad)}",
        "bounds_hold = " + ", ".join("true" if b else "false" for b in rep.bounds_hold),
    ]
    ok = all(rep.bounds_hold)
    se = _single_edge(G, cfg)
    if se is not None:
        result["single_edge"] = se.to_dict()
        lines += _single_edge_lines(se)
        ok = ok and se.kf_ratio_within_bounds is not False
    return rep, result, lines, ok


def _cmd_bounds(G, cfg):
    _, result, lines, ok = _bounds_payload(G, cfg)
    return result, lines, ok


def _cmd_report(G, cfg):
    rep, result, lines, ok = _bounds_payload(G, cfg)
    kf = kirchhoff_index(G, KF_METHOD[cfg.method])
    result["method"] = cfg.method
    result["kf"] = kf.to_dict()
    result["eig_L"] = [float(x) for x in rep.eig_L]
    result["eig_Lhat"] = [float(x) for x in rep.eig_Lhat]
    pairs = []
    for i in range(1, G.n + 1):
        for j in range(i + 1, G.n + 1):
            r = resistance(G, i, j, cfg.method)
            pairs.append({"i": i, "j": j, "resistance": r.to_dict()})
    result["resistances"] = pairs
    lines[0] = f"Kf = {kf.format(DIGITS)}"
    lines.append("eig_L = " + " ".join(_num(x) for x in rep.eig_L))
    lines.append("eig_Lhat = " + " ".join(_num(x) for x in rep.eig_Lhat))
    for p in pairs:
        r = DualScalar(**p["resistance"])
        lines.append(f"R[{p['i']},{p['j']}] = {r.format(DIGITS)}")
    return result, lines, ok


def _check(name, error, tolerance, skipped=False):
    passed = skipped or bool(error <= tolerance)
    return {"name": name, "passed": passed, "max_error": float(error),
            "tolerance": float(tolerance), "skipped": skipped}


def _cmd_verify(G, cfg):
    tol = cfg.tolerance
    n = G.n
    Lw = laplacian(G).matrix
    X = dual_laplacian_pinv(G)
    checks = []

    checks.append(_check("mp_axioms", max(mp_axiom_residuals(Lw, X).values()), tol))
    J_n = DualMatrix.real(np.full((n, n), 1.0 / n))
    eye = DualMatrix.identity(n)
    proj = max((eye - Lw @ X - J_n).max_abs(), (eye - X @ Lw - J_n).max_abs())
    checks.append(_check("projector_identity", proj, tol))

    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    agree = 0.0
    fd_err = 0.0
    for i, j in pairs:
        ref = resistance_mp(G, i, j)
        for m in ("regularized", "block"):
            r = resistance(G, i, j, m)
            agree = max(agree, abs(r.standard - ref.standard),
                        abs(r.infinitesimal - ref.infinitesimal))
        fd_err = max(fd_err, finite_difference_resistance(G, i, j).agreement_error)
    checks.append(_check("three_route_agreement", agree, 10 * tol))
    checks.append(_check("finite_difference", fd_err, FD_TOLERANCE))

    kfs = [kirchhoff_index(G, m) for m in ("trace", "one_inverse", "block", "regularized")]
    kf_spread = max(max(abs(k.standard - kfs[0].standard), abs(k.infinitesimal - kfs[0].infinitesimal))
                    for k in kfs)
    checks.append(_check("kirchhoff_methods", kf_spread, 10 * tol))

    tau = spanning_tree_count(G)
    lemma = 0.0
    for e in G.edges:
        r = resistance_mp(G, e.i, e.j).standard
        lemma = max(lemma, abs(r - spanning_trees_containing_edge(G, e) / tau))
    checks.append(_check("tree_count_lemma", lemma, tol))

    if n <= MAX_ENUM_N and G.m <= MAX_ENUM_M:
        bf_tau, per_edge = brute_force_spanning_trees(G)
        mismatch = abs(bf_tau - tau) + sum(
            abs(per_edge[e.pair] - spanning_trees_containing_edge(G, e)) for e in G.edges)
        checks.append(_check("tree_enumeration", mismatch, 0))
    else:
        checks.append(_check("tree_enumeration", 0.0, 0, skipped=True))

    indep = one_inverse_member_independence(G, trials=10, seed=cfg.seed, tol=10 * tol)
    checks.append(_check("one_inverse_independence", 0.0 if indep else 1.0, 0))

    rep = perturbation_report(G)
    checks.append(_check("kirchhoff_bounds", 0.0 if all(rep.bounds_hold) else 1.0, 0))

    ok = all(c["passed"] for c in checks)
    lines = []
    for c in checks:
        status = "SKIP" if c["skipped"] else ("PASS" if c["passed"] else "FAIL")
        lines.append(f"{status} {c['name']}: max_error = {_num(c['max_error'])} "
                     f"(tolerance {_num(c['tolerance'])})")
    lines.append("verify: " + ("all checks passed" if ok else "FAILED"))
    return {"checks": checks, "passed": ok}, lines, ok


HANDLERS = {
    "resistance": _cmd_resistance,
    "kirchhoff": _cmd_kirchhoff,
    "bounds": _cmd_bounds,
    "report": _cmd_report,
    "verify": _cmd_verify,
}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one command; returns the process exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    start = time.perf_counter()
    try:
        if cfg.method not in METHODS:
            raise ValidationError(f"unknown method {cfg.method!r}")
        try:
            G = load_graph(cfg.graph_path)
        except FileNotFoundError:
            raise ValidationError(f"graph file not found: {cfg.graph_path}") from None
        require_connected(G)
        if cfg.edge is not None:
            G.edge(*cfg.edge)
        result, lines, ok = HANDLERS[cfg.command](G, cfg)
    except ValidationError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=stderr)
        return 1

    if cfg.format == "json":
        payload = {
            "command": cfg.command,
            "graph": {"n": G.n, "m": G.m},
            "result": result,
            "timing_ms": (time.perf_counter() - start) * 1e3,
        }
        try:
            _require_finite(payload)
        except NumericalError as exc:
            print(f"numerical failure: {exc}", file=stderr)
            return 1
        print(json.dumps(payload, indent=2), file=stdout)
    else:
        print("\n".join(lines), file=stdout)
    return 0 if ok else 1


def _default_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOLERANCE
    try:
        value = float(raw)
    except ValueError:
        raise SystemExit(f"error: {TOL_ENV}={raw!r} is not a number") from None
    if not value > 0:
        raise SystemExit(f"error: {TOL_ENV} must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dualresist",
        description="First-order perturbation analysis of unit-resistor networks "
                    "with dual-number weights.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", required=True, dest="graph_path",
                        help="graph file: 'n m' header, then 'i j a_hat' lines")
    common.add_argument("--method", choices=METHODS, default="mp")
    common.add_argument("--tolerance", type=float, default=None,
                        help=f"verification tolerance (default 1e-9, or ${TOL_ENV})")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=42)

    edge_opts = argparse.ArgumentParser(add_help=False)
    edge_opts.add_argument("--edge", type=int, nargs=2, metavar=("I", "J"),
                           help="single-edge mode: analyse a perturbation on edge {I,J} only")
    edge_opts.add_argument("--a-hat", type=float, dest="a_hat",
                           help="perturbation coefficient for --edge (default 0)")

    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("resistance", parents=[common], help="dual resistance distance")
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--sink", type=int, required=True)
    sub.add_parser("kirchhoff", parents=[common], help="dual Kirchhoff index")
    sub.add_parser("bounds", parents=[common, edge_opts], help="Kirchhoff perturbation bounds")
    sub.add_parser("report", parents=[common, edge_opts], help="full perturbation report")
    sub.add_parser("verify", parents=[common], help="run the independent oracle checks")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "a_hat", None) is not None and args.edge is None:
        print("error: --a-hat requires --edge", file=sys.stderr)
        return 2
    cfg = RunConfig(
        command=args.command,
        graph_path=args.graph_path,
        source=getattr(args, "source", None),
        sink=getattr(args, "sink", None),
        method=args.method,
        tolerance=args.tolerance if args.tolerance is not None else _default_tolerance(),
        format=args.format,
        edge=tuple(args.edge) if getattr(args, "edge", None) else None,
        a_hat=getattr(args, "a_hat", None),
        seed=args.seed,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
