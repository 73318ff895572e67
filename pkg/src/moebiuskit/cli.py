"""Command-line front end.

Exit codes: 0 success, 1 property failure, 2 usage, 3 I/O, 4 search not
found, 5 validation failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (BadEpsilon, BoundaryPoint, FlatPointReached, NormalizationFailed, NotFound,
                     StripFormatError, TooFewSamples)
from .fileio import atomic_write_text

EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, EXIT_IO, EXIT_NOT_FOUND, EXIT_INVALID = range(6)


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return f"{float(v):.17g}"


def _csv(header, rows, meta: str) -> str:
    lines = [f"# {meta}", ",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def _short(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def _meta(command: str, **kw) -> str:
    parts = [f"moebiuskit {__version__}", command] + [f"{k}={_short(v)}" for k, v in kw.items()]
    return " ".join(parts)


def threads() -> int:
    raw = os.environ.get("MOEBIUSKIT_THREADS", "").strip()
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"MOEBIUSKIT_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("MOEBIUSKIT_THREADS must be at least 1")
    return n


def _check_writable(path) -> None:
    """Fail early (exit 3) when an output file cannot be created."""
    if path is None:
        return
    p = Path(path)
    parent = p.parent if str(p.parent) else Path(".")
    if p.is_dir():
        raise OSError(f"{p} is a directory")
    if not parent.is_dir():
        raise OSError(f"directory {parent} does not exist")
    if not os.access(parent, os.W_OK):
        raise OSError(f"directory {parent} is not writable")


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        atomic_write_text(path, text)


# ----------------------------------------------------------------------------
# commands

def cmd_bound_sweep(t_min: float, t_max: float, steps: int, out_csv=None) -> int:
    from .bound import T0, lower_bound

    if steps < 2:
        raise UsageError("steps must be at least 2")
    if not (math.isfinite(t_min) and math.isfinite(t_max)) or t_min >= t_max:
        raise UsageError("need finite t_min < t_max")
    _check_writable(out_csv)
    ts = np.linspace(t_min, t_max, steps)
    if t_min <= T0 <= t_max and not np.any(ts == T0):
        ts = np.sort(np.append(ts, T0))
    rows = []
    for t in ts:
        r = lower_bound(float(t))
        rows.append((r.t, r.alpha, r.beta, r.lower_bound, r.active_branch))
    meta = _meta("bound sweep", t_min=t_min, t_max=t_max, steps=steps, seed="none")
    _emit(_csv(("t", "alpha", "beta", "lower_bound", "branch"), rows, meta), out_csv)
    return EXIT_OK


def cmd_tpattern(strip_path, tol: float = 1e-10, out_report=None) -> int:
    from .bound import lower_bound_value
    from .constructions import pattern_prebends
    from .strip_model import cut_along, load_strip, validate_foliation
    from .t_pattern import find_t_pattern

    if not tol > 0:
        raise UsageError("tol must be positive")
    _check_writable(out_report)
    strip = load_strip(strip_path)
    try:
        rep = validate_foliation(strip)
    except TooFewSamples as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if not rep.ok:
        print(f"validation failed: {rep.summary()}", file=sys.stderr)
        return EXIT_INVALID
    try:
        pat = find_t_pattern(strip, tol=tol)
    except NotFound as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    T, B = pattern_prebends(strip, pat)
    trap = cut_along(strip.band, T, B)
    lines = [
        f"# {_meta('tpattern', strip=strip_path, tol=tol, seed='none')}",
        f"lambda={_fmt(strip.lam)}",
        f"samples={strip.n}",
        f"theta={_fmt(pat.sphere.theta)}",
        f"phi={_fmt(pat.sphere.phi)}",
        f"x0={_fmt(pat.source.x0)}",
        f"x1={_fmt(pat.source.x1)}",
    ]
    for k, seg in enumerate(pat.bends):
        pts = ";".join(",".join(_fmt(v) for v in p) for p in seg)
        lines.append(f"bend{k}={pts}")
    lines += [
        f"residual_g={_fmt(pat.residual_g)}",
        f"residual_h={_fmt(pat.residual_h)}",
        f"min_distance={_fmt(pat.min_distance)}",
        f"cell_winding={pat.winding}",
        "meridian_windings=" + ",".join(_fmt(c.w) for c in pat.certificate),
        f"t={_fmt(trap.t)}",
        f"b={_fmt(trap.b)}",
        f"lower_bound={_fmt(lower_bound_value(trap.t))}",
    ]
    _emit("\n".join(lines) + "\n", out_report)
    return EXIT_OK


def cmd_construct(kind: str, eps=None, out_mesh=None, out_strip=None) -> int:
    from .constructions import pl_mesh, smooth_family, strip_mesh, triangular_strip, write_obj
    from .strip_model import save_strip

    if kind == "triangular":
        if eps is not None:
            raise UsageError("--eps only applies to the smoothed construction")
    elif kind == "smoothed":
        if eps is None:
            raise UsageError("--eps is required for the smoothed construction")
        if not (0.0 < eps <= 0.25) or not math.isfinite(eps):
            raise UsageError(f"eps must lie in (0, 0.25], got {eps}")
    else:
        raise UsageError(f"unknown construction {kind!r}")
    stem = "triangular" if kind == "triangular" else f"smoothed-eps{eps:g}"
    out_mesh = f"{stem}.obj" if out_mesh is None else out_mesh
    out_strip = f"{stem}.json" if out_strip is None else out_strip
    _check_writable(out_mesh)
    _check_writable(out_strip)
    if kind == "triangular":
        V, F = pl_mesh()
        strip = triangular_strip()
        meta = _meta("construct", kind=kind, seed="none")
    else:
        strip = smooth_family(eps)
        V, F = strip_mesh(strip)
        meta = _meta("construct", kind=kind, eps=eps, samples=strip.n, seed="none")
    write_obj(out_mesh, V, F, comment=meta)
    save_strip(strip, out_strip)
    return EXIT_OK


def cmd_verify(suite: str = "all", seed: int = 0, out_report=None) -> int:
    from . import verify

    if suite != "all" and suite not in verify.SUITES:
        raise UsageError(f"unknown suite {suite!r}; choose all or one of {', '.join(verify.SUITE_ORDER)}")
    _check_writable(out_report)
    results = verify.run(suite, seed, threads())
    text = verify.report(results, suite, seed)
    _emit(text, out_report)
    if out_report is not None:
        sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_PROPERTY


def parse_eps_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse eps list {text!r}") from None
    if not vals:
        raise UsageError("empty eps list")
    if any(not (0.0 < v <= 0.25) for v in vals):
        raise UsageError("eps values must lie in (0, 0.25]")
    if any(b >= a for a, b in zip(vals, vals[1:])):
        raise UsageError("eps values must be strictly decreasing")
    return vals


def cmd_limit_study(eps_list, out_csv=None, tol: float = 1e-10) -> int:
    from .verify import limit_records

    vals = parse_eps_list(eps_list) if isinstance(eps_list, str) else parse_eps_list(",".join(map(str, eps_list)))
    _check_writable(out_csv)
    try:
        recs = limit_records(vals, threads())
    except NotFound as exc:
        print(f"not found: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    rows = [(r.eps, r.lam, r.t, r.H1, r.H2, r.D1, r.D2, r.sup_distance) for r in recs]
    meta = _meta("limit-study", eps=",".join(map(repr, vals)), tol=tol, seed="none")
    _emit(_csv(("eps", "lambda", "t", "H1", "H2", "D1", "D2", "sup_dist"), rows, meta), out_csv)
    return EXIT_OK


def _patch(args):
    from .asymptotic import load_grid_csv, preset

    if args.grid is not None:
        return load_grid_csv(args.grid, h=args.h)
    params = {}
    for item in args.param or []:
        key, _, val = item.partition("=")
        try:
            params[key] = float(val)
        except ValueError:
            raise UsageError(f"bad preset parameter {item!r}") from None
    try:
        return preset(args.preset, h=args.h, **params)
    except TypeError as exc:
        raise UsageError(str(exc)) from None


def cmd_asymptotic(args) -> int:
    from .asymptotic import connector_experiment, trace_asymptotic

    _check_writable(args.out)
    try:
        patch = _patch(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    meta = _meta(f"asymptotic {args.mode}", patch=patch.name, h=patch.h, seed="none")
    if args.mode == "trace":
        try:
            x, y = (float(v) for v in args.p0.split(","))
        except ValueError:
            raise UsageError("--p0 expects x,y") from None
        try:
            tr = trace_asymptotic(patch, (x, y), step=args.step, max_len=args.max_len)
        except FlatPointReached as exc:
            print(f"flat point reached after {len(exc.polyline)} points", file=sys.stderr)
            return EXIT_PROPERTY
        except BoundaryPoint as exc:
            raise UsageError(str(exc)) from None
        meta += f" step={_fmt(args.step)} stop={tr.stop} chord_deviation={tr.chord_deviation():.3e}"
        rows = [tuple(p) + tuple(n) for p, n in zip(tr.points, tr.normals)]
        _emit(_csv(("x", "y", "z", "nx", "ny", "nz"), rows, meta), args.out)
        return EXIT_OK
    try:
        st = connector_experiment(patch, delta=args.delta, neighborhood=args.neighborhood)
    except NormalizationFailed as exc:
        print(f"normalization failed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    row = (args.delta, st.max_ratio, st.mean_ratio, st.min_ratio, st.n_connectors, st.n_pairs)
    meta += f" neighborhood={_fmt(args.neighborhood)}"
    _emit(_csv(("delta", "max_ratio", "mean_ratio", "min_ratio", "connectors", "pairs"), [row], meta), args.out)
    return EXIT_OK if st.below_three else EXIT_PROPERTY


# ----------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="moebiuskit", description="Optimal paper Moebius band toolkit")
    p.add_argument("--version", action="version", version=f"moebiuskit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="aspect-ratio lower bound")
    bsub = b.add_subparsers(dest="bound_command", required=True)
    sw = bsub.add_parser("sweep", help="CSV of alpha, beta and the bound over a t range")
    sw.add_argument("--t-min", type=float, default=0.0)
    sw.add_argument("--t-max", type=float, default=2.0)
    sw.add_argument("--steps", type=int, default=2001)
    sw.add_argument("--out", default=None, help="output CSV (default stdout)")

    t = sub.add_parser("tpattern", help="search a strip file for an embedded T-pattern")
    t.add_argument("strip")
    t.add_argument("--tol", type=float, default=1e-10)
    t.add_argument("--out", default=None)

    c = sub.add_parser("construct", help="build the PL band or a smoothed strip")
    c.add_argument("kind", choices=("triangular", "smoothed"))
    c.add_argument("--eps", type=float, default=None)
    c.add_argument("--out-mesh", default=None)
    c.add_argument("--out-strip", default=None)

    v = sub.add_parser("verify", help="run property suites")
    v.add_argument("--suite", default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", default=None)

    ls = sub.add_parser("limit-study", help="convergence of the smoothed family")
    ls.add_argument("--eps", default="0.2,0.1,0.05")
    ls.add_argument("--out", default=None)

    a = sub.add_parser("asymptotic", help="asymptotic traces and the connector experiment")
    a.add_argument("mode", choices=("trace", "connector"))
    a.add_argument("--preset", default="cone")
    a.add_argument("--param", action="append", help="preset parameter key=value")
    a.add_argument("--grid", default=None, help="x,y,z grid CSV instead of a preset")
    a.add_argument("--h", type=float, default=1e-4)
    a.add_argument("--p0", default="0.5,0.0")
    a.add_argument("--step", type=float, default=0.01)
    a.add_argument("--max-len", type=float, default=1.0)
    a.add_argument("--delta", type=float, default=0.05)
    a.add_argument("--neighborhood", type=float, default=0.2)
    a.add_argument("--out", default=None)
    return p


def dispatch(args) -> int:
    if args.command == "bound":
        return cmd_bound_sweep(args.t_min, args.t_max, args.steps, args.out)
    if args.command == "tpattern":
        return cmd_tpattern(args.strip, args.tol, args.out)
    if args.command == "construct":
        return cmd_construct(args.kind, args.eps, args.out_mesh, args.out_strip)
    if args.command == "verify":
        return cmd_verify(args.suite, args.seed, args.out)
    if args.command == "limit-study":
        return cmd_limit_study(args.eps, args.out)
    if args.command == "asymptotic":
        return cmd_asymptotic(args)
    raise UsageError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return dispatch(args)
    except (UsageError, StripFormatError, BadEpsilon) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
