"""Command-line interface: ``projgeom <command> [options]``.

Every command prints one JSON document (or a CSV table with ``--output csv``)
to stdout. Failures print ``{"error": {"kind": ..., "message": ...}}`` and
exit with status 2 (bad input or usage) or 3 (geometric domain error).

Randomness comes only from ``numpy.random.Generator(PCG64(seed))`` with
``--seed`` (default 42), so reruns with the same seed are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .atlas import (
    angular_atlas,
    angular_rule_error,
    four_chart_atlas,
    locate,
    transition,
    verify_coverage,
    verify_homeomorphism,
    verify_transitions,
)
from .complex_coords import (
    complex_metric_sq,
    euclidean_metric_sq,
    fs_vs_sphere_consistency,
    inverse_stereographic,
    pushforward_sq,
    sphere_metric_sq,
)
from .errors import GeometryError
from .fubini_study import DiscreteCurve, curve_length, fs_distance, overlap_modulus
from .geodesic_opt import (
    SolverConfig,
    analytic_geodesic,
    analytic_length,
    arc_deviation,
    discrete_length,
    minimize_geodesic,
)
from .harmonics import DEFAULT_COEFF, LocusSpec, density, level_set_radius, locus_as_manifold, locus_points
from .hilbert import random_state, state_from_json, states_from_json
from .phase import ClosedLoop, holonomy_check, pancharatnam_phase, solid_angle

ATLASES = {"four-chart": four_chart_atlas, "angular": angular_atlas}
PARALLEL_WORKERS = 4


class InputError(Exception):
    kind = "parse"


class CliExit(Exception):
    def __init__(self, code: int, payload: dict):
        self.code = code
        self.payload = payload


class JsonArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise CliExit(2, {"error": {"kind": "usage", "message": message}})


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _read_json_arg(text: str):
    """Inline JSON, or the path of a UTF-8 JSON file."""
    try:
        if os.path.isfile(text):
            text = Path(text).read_text(encoding="utf-8")
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot parse JSON input: {exc}") from exc


def _parse(fn, raw):
    try:
        return fn(raw)
    except GeometryError:
        raise
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def _pair(text: str) -> complex:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise InputError(f"expected 'x,y', got {text!r}") from exc
    return complex(x, y)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.floating):
        return _clean(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _dump_json(payload: dict) -> str:
    return json.dumps(_clean(payload), indent=2) + "\n"


def _emit(args, summary: dict, table: tuple[list[str], list] | None = None) -> str:
    if table is not None and getattr(args, "csv", None):
        Path(args.csv).write_text(_csv_text(*table), encoding="utf-8")
    if args.output == "csv":
        if table is None:
            table = (list(summary), [list(summary.values())])
        return _csv_text(*table)
    return _dump_json(summary)


# -- commands ---------------------------------------------------------------

def cmd_fsdist(args) -> str:
    if args.curve:
        curve = _parse(DiscreteCurve.from_json, _read_json_arg(args.curve))
        return _emit(args, {"length": curve_length(curve), "points": len(curve),
                            "closed": curve.closed()})
    if args.state1 is None or args.state2 is None:
        raise InputError("fsdist needs two states (or --curve)")
    a = _parse(state_from_json, _read_json_arg(args.state1))
    b = _parse(state_from_json, _read_json_arg(args.state2))
    return _emit(args, {"distance": fs_distance(a, b), "overlap_modulus": overlap_modulus(a, b)})


def cmd_geodesic(args) -> str:
    a, b = _pair(args.from_), _pair(args.to)
    n = args.points
    if args.solver == "analytic":
        curve = analytic_geodesic(a, b, n)
    else:
        curve = minimize_geodesic(a, b, SolverConfig(n_points=n, gradient_tolerance=args.tol))
    pts = curve.points
    emb = inverse_stereographic(pts)
    numeric, exact = discrete_length(curve), analytic_length(a, b)
    summary = {
        "solver": args.solver,
        "points": n,
        "length_numeric": numeric,
        "length_analytic": exact,
        "residual": abs(numeric - exact),
        "max_deviation": arc_deviation(curve, a, b),
        "iterations": curve.iterations,
    }
    rows = [[k, float(z.real), float(z.imag), *map(float, e)] for k, (z, e) in enumerate(zip(pts, emb))]
    return _emit(args, summary, (["index", "Zx", "Zy", "n1", "n2", "n3"], rows))


def atlas_report(name: str, samples: int, workers: int = 1) -> dict:
    atlas = ATLASES[name]()
    homeo = [verify_homeomorphism(c, max(samples, 2)) for c in atlas.charts]
    cover = verify_coverage(atlas, samples, workers=workers)
    trans = verify_transitions(atlas, samples).max_error
    if name == "angular":
        trans = max(trans, angular_rule_error(samples))
    return {
        "atlas": name,
        "samples": samples,
        "max_roundtrip_error": max(h.max_roundtrip_error for h in homeo),
        "uncovered_count": cover.uncovered_count,
        "transition_max_error": trans,
        "continuity_modulus": max(h.continuity_modulus for h in homeo),
    }


def cmd_atlas_check(args) -> str:
    samples = args.samples if args.samples is not None else 100_000
    if samples < 1:
        raise InputError("--samples must be positive")
    return _emit(args, atlas_report(args.atlas, samples, PARALLEL_WORKERS if args.parallel else 1))


def cmd_chart(args) -> str:
    atlas = ATLASES[args.atlas]()
    out: dict = {"atlas": args.atlas}
    if args.point is not None:
        p = _pair(args.point)
        out["point"] = [p.real, p.imag]
        out["charts"] = [{"name": n, "coordinate": u} for n, u in locate(atlas, (p.real, p.imag))]
    elif args.coord is not None and args.from_chart and args.to_chart:
        out.update({"from": args.from_chart, "to": args.to_chart, "coordinate": args.coord,
                    "result": transition(atlas, args.from_chart, args.to_chart, args.coord)})
    elif args.coord is not None and args.chart:
        x, y = _chart(atlas, args.chart).from_local(args.coord)
        out.update({"chart": args.chart, "coordinate": args.coord, "point": [x, y]})
    else:
        raise InputError("give --point, or --coord with --chart or --from-chart/--to-chart")
    return _emit(args, out)


def _chart(atlas, name):
    try:
        return atlas.chart(name)
    except KeyError as exc:
        raise InputError(str(exc)) from exc


def _metric_rows(z, dz):
    x, y = z.real, z.imag
    dx, dy = dz.real, dz.imag
    euclid = np.abs(euclidean_metric_sq((x, y), (dx, dy)) - complex_metric_sq(dz))
    exact = sphere_metric_sq(z, dz)
    sphere = np.abs(pushforward_sq(z, dz) - exact) / exact
    return np.column_stack([x, y, dx, dy, np.atleast_1d(euclid), np.atleast_1d(sphere)])


def _disk(rng: np.random.Generator, samples: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.random(samples))
    return r * np.exp(2j * np.pi * rng.random(samples))


def metric_samples(rng: np.random.Generator, samples: int, zmax: float = 10.0):
    """Base points uniform in ``|Z| <= zmax``; tangent vectors uniform in ``|dZ| <= 1``."""
    return _disk(rng, samples, zmax), _disk(rng, samples, 1.0)


def cmd_metric_check(args) -> str:
    samples = args.samples if args.samples is not None else 1000
    if samples < 1:
        raise InputError("--samples must be positive")
    rng = make_rng(args.seed)
    z, dz = metric_samples(rng, samples, args.zmax)
    if args.parallel:
        edges = np.linspace(0, samples, PARALLEL_WORKERS + 1).astype(int)
        spans = [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]
        with ThreadPoolExecutor(PARALLEL_WORKERS) as ex:
            table = np.vstack(list(ex.map(lambda s: _metric_rows(z[s[0]:s[1]], dz[s[0]:s[1]]), spans)))
    else:
        table = _metric_rows(z, dz)
    pairs = [(random_state(rng), random_state(rng)) for _ in range(samples)]
    fs_max = max(fs_vs_sphere_consistency(a, b) for a, b in pairs)
    summary = {
        "samples": samples,
        "seed": args.seed,
        "euclid_max": float(table[:, 4].max()),
        "sphere_max_rel": float(table[:, 5].max()),
        "fs_sphere_max": fs_max,
    }
    header = ["x", "y", "dx", "dy", "euclid_residual", "sphere_residual"]
    return _emit(args, summary, (header, table.tolist()))


def cmd_phase(args) -> str:
    verts = _parse(states_from_json, _read_json_arg(args.loop))
    loop = ClosedLoop(tuple(verts))
    out = {"phase": pancharatnam_phase(loop), "vertices": len(loop), "dimension": loop.dim}
    if loop.dim == 2:
        out["solid_angle"] = solid_angle(loop)
        out["holonomy_residual"] = holonomy_check(loop)
    return _emit(args, out)


def cmd_locus(args) -> str:
    samples = args.samples if args.samples is not None else 1000
    if samples < 1:
        raise InputError("--samples must be positive")
    spec = LocusSpec(args.k, args.r, args.coeff)
    x, y = locus_points(spec, samples)
    rho = density((x, y), spec.r, spec.c)
    atlas = locus_as_manifold(spec)
    summary = {
        "k": spec.k,
        "r": spec.r,
        "coeff": spec.c,
        "R": level_set_radius(spec),
        "max_level_residual": float(np.max(np.abs(rho - spec.k ** 2))),
        "atlas_roundtrip_error": max(verify_homeomorphism(c, max(samples, 2)).max_roundtrip_error
                                     for c in atlas.charts),
        "uncovered_count": verify_coverage(atlas, samples).uncovered_count,
    }
    rows = [[i, float(a), float(b), float(r)] for i, (a, b, r) in enumerate(zip(x, y, rho))]
    return _emit(args, summary, (["index", "x", "y", "density"], rows))


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = JsonArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42, help="PCG64 seed (default 42)")
    common.add_argument("--samples", type=int, default=None, help="sample count")
    common.add_argument("--output", choices=["json", "csv"], default="json")
    common.add_argument("--parallel", action="store_true",
                        help="split sampling loops over threads (same output)")

    parser = JsonArgumentParser(prog="projgeom", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fsdist", parents=[common], help="Fubini-Study distance of two states")
    p.add_argument("state1", nargs="?", help="state JSON ([[re, im], ...]) or file")
    p.add_argument("state2", nargs="?")
    p.add_argument("--curve", help="curve JSON (array of states) or file; prints its length")
    p.set_defaults(func=cmd_fsdist)

    p = sub.add_parser("geodesic", parents=[common], help="geodesic between two plane points")
    p.add_argument("--from", dest="from_", required=True, metavar="X,Y")
    p.add_argument("--to", required=True, metavar="X,Y")
    p.add_argument("--points", type=int, default=SolverConfig.n_points)
    p.add_argument("--solver", choices=["minimize", "analytic"], default="minimize")
    p.add_argument("--tol", type=float, default=SolverConfig.gradient_tolerance)
    p.add_argument("--csv", help="also write the curve table to this file")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("atlas-check", parents=[common], help="verify a built-in circle atlas")
    p.add_argument("--atlas", choices=sorted(ATLASES), required=True)
    p.set_defaults(func=cmd_atlas_check)

    p = sub.add_parser("chart", parents=[common], help="local coordinates and transitions")
    p.add_argument("--atlas", choices=sorted(ATLASES), required=True)
    p.add_argument("--point", metavar="X,Y")
    p.add_argument("--chart")
    p.add_argument("--coord", type=float)
    p.add_argument("--from-chart")
    p.add_argument("--to-chart")
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("metric-check", parents=[common], help="sampled metric pullback residuals")
    p.add_argument("--zmax", type=float, default=10.0)
    p.add_argument("--csv", help="also write the residual table to this file")
    p.set_defaults(func=cmd_metric_check)

    p = sub.add_parser("phase", parents=[common], help="geometric phase of a closed loop")
    p.add_argument("--loop", required=True, help="array of states, inline JSON or file")
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("locus", parents=[common], help="level-set circle of |psi_11|^2")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--coeff", type=float, default=DEFAULT_COEFF)
    p.add_argument("--csv", help="also write the sampled locus to this file")
    p.set_defaults(func=cmd_locus)
    return parser


def run(argv=None) -> tuple[int, str]:
    """Execute a command; returns ``(exit status, stdout text)``."""
    try:
        args = build_parser().parse_args(argv)
        return 0, args.func(args)
    except CliExit as exc:
        return exc.code, _dump_json(exc.payload)
    except InputError as exc:
        return 2, _dump_json({"error": {"kind": exc.kind, "message": str(exc)}})
    except GeometryError as exc:
        return 3, _dump_json({"error": {"kind": exc.kind, "message": str(exc)}})


def main(argv=None) -> int:
    try:
        code, text = run(argv)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
