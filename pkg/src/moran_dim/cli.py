"""``moran-dim`` command-line front end.

Exit codes: 0 on success, 2 for configuration or validation problems,
3 for numerical or runtime failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .config import ConfigError, RunConfig, load_config, parse_config
from .errors import (
    ConstraintViolation,
    DomainError,
    MoranDimError,
    UnsupportedDistribution,
    UnsupportedGeometry,
)
from .gfunction import g_analytic, g_limits, g_monte_carlo
from .moran_sim import REGIMES, estimate_dimension, generate, iter_interval_levels
from .params import UniformP, fixed_ratios, validate
from .solver import find_crossing, similarity_dimension, small_phi_dims
from .svg import heatmap_svg

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
CONFIG_ERRORS = (ConfigError, ConstraintViolation, UnsupportedDistribution, UnsupportedGeometry, DomainError)


def fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return jsonable(x.item())
    return x


def _writer(out):
    return csv.writer(out, lineterminator="\n")


def _crossing_dict(res):
    return {
        "alpha": res.alpha,
        "kind": res.kind,
        "bracket": list(res.bracket),
        "residual": res.residual,
        "iterations": res.iterations,
    }


def cmd_solve(config: RunConfig) -> dict:
    dist = config.build_distribution()
    validate(dist)
    tol = config.solve.tol
    upper = find_crossing(dist, "upper", tol)
    lower = find_crossing(dist, "lower", tol)
    small = small_phi_dims(dist)
    ratios = fixed_ratios(dist)
    sim_dim = None
    if ratios is not None and math.fsum(ratios) < 1:
        sim_dim = similarity_dimension(ratios)
    return jsonable(
        {
            "distribution": dist.describe(),
            "upper_large": upper.alpha,
            "lower_large": lower.alpha,
            "upper_small": small.alpha_small,
            "lower_small": small.beta_small,
            "similarity_dimension": sim_dim,
            "crossing": {"upper": _crossing_dict(upper), "lower": _crossing_dict(lower)},
            "g_limits": {"upper": list(g_limits(dist, "max")), "lower": list(g_limits(dist, "min"))},
            "L": dist.bounds.L,
        }
    )


def theta_grid(spec) -> list[float]:
    if spec.thetas is not None:
        return [float(t) for t in spec.thetas]
    if spec.theta_max < spec.theta_min:
        raise ConfigError("gcurve.theta_max must be >= theta_min")
    n = int(math.floor((spec.theta_max - spec.theta_min) / spec.theta_step + 1e-9))
    return [round(spec.theta_min + i * spec.theta_step, 12) for i in range(n + 1)]


def cmd_gcurve(config: RunConfig, out) -> None:
    dist = config.build_distribution()
    validate(dist)
    spec = config.gcurve
    w = _writer(out)
    w.writerow(["theta", "g_upper", "g_lower", "g_mc_upper", "mc_stderr"])
    for i, theta in enumerate(theta_grid(spec)):
        mc = mc_err = None
        if spec.mc_samples:
            ev = g_monte_carlo(dist, theta, "max", spec.mc_samples, seed=[spec.seed, i])
            mc, mc_err = ev.value, ev.stderr
        w.writerow(
            [
                fmt(theta),
                fmt(g_analytic(dist, theta, "max").value),
                fmt(g_analytic(dist, theta, "min").value),
                fmt(mc),
                fmt(mc_err),
            ]
        )


def sweep_axes(spec) -> tuple[list[float], list[float]]:
    grid = spec.grid
    default = [float(v) for v in np.linspace(grid.lo, grid.hi, grid.n)]
    a_values = [float(v) for v in grid.a_values] if grid.a_values else default
    b_values = [float(v) for v in grid.b_values] if grid.b_values else default
    return a_values, b_values


def _sweep_point(args):
    a, b, tol = args
    return find_crossing(UniformP(a, b), "upper", tol).alpha


def sweep_rows(config: RunConfig) -> tuple[list[tuple[float, float, float]], list[float], list[float]]:
    spec = config.sweep
    a_values, b_values = sweep_axes(spec)
    slack = 1e-12
    nodes = [
        (a, b)
        for a in a_values
        for b in b_values
        if 0 < a < 1 and 0 < b < 1 and min(a, b) >= spec.min_ratio - slack and a + b <= spec.max_sum + slack
    ]
    tasks = [(a, b, spec.tol) for a, b in nodes]
    if spec.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            alphas = list(pool.map(_sweep_point, tasks, chunksize=64))
    else:
        alphas = [_sweep_point(t) for t in tasks]
    return [(a, b, alpha) for (a, b), alpha in zip(nodes, alphas)], a_values, b_values


def cmd_sweep(config: RunConfig, out, svg_path=None) -> None:
    rows, a_values, b_values = sweep_rows(config)
    w = _writer(out)
    w.writerow(["a", "b", "alpha"])
    for a, b, alpha in rows:
        w.writerow([fmt(a), fmt(b), fmt(alpha)])
    svg_path = svg_path or config.sweep.svg
    if svg_path:
        Path(svg_path).write_text(heatmap_svg(rows, a_values, b_values))


def cmd_simulate(config: RunConfig) -> dict:
    dist = config.build_distribution()
    validate(dist)
    spec = config.simulate
    real = generate(dist, spec.depth, spec.seed)
    upper = find_crossing(dist, "upper", config.solve.tol).alpha
    lower = find_crossing(dist, "lower", config.solve.tol).alpha
    small = small_phi_dims(dist)
    theory = {
        "large_phi_upper": upper,
        "large_phi_lower": lower,
        "small_phi_upper": small.alpha_small,
        "small_phi_lower": small.beta_small,
    }
    regimes = {}
    for regime in REGIMES:
        est = estimate_dimension(real, regime, spec.H, spec.N_min, spec.N_max)
        regimes[regime] = {
            "estimate": est.value,
            "theory": theory[regime],
            "gap": est.value - theory[regime],
            "H": est.H,
            "N_range": list(est.N_range),
        }
    return jsonable(
        {
            "distribution": dist.describe(),
            "depth": spec.depth,
            "seed": spec.seed,
            "H": spec.H,
            "regimes": regimes,
        }
    )


def cmd_geometry(config: RunConfig, out) -> None:
    dist = config.build_distribution()
    validate(dist)
    spec = config.geometry
    real = generate(dist, max(spec.depth_cap, 1), spec.seed)
    w = _writer(out)
    w.writerow(["depth", "left", "right", "mass"])
    for n, left, right, mass in iter_interval_levels(real, spec.depth_cap):
        for x0, x1, m in zip(left.tolist(), right.tolist(), mass.tolist()):
            w.writerow([n, fmt(x0), fmt(x1), fmt(m)])


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="moran-dim",
        description="Almost-sure Phi-dimensions of random 1-variable Moran measures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("solve", "dimension values from G, G' and the essential bounds (JSON)"),
        ("gcurve", "G and G' on a theta grid (CSV)"),
        ("sweep", "upper dimension over the (a, b) grid for uniform p (CSV, optional SVG)"),
        ("simulate", "empirical estimates from a seeded realization (JSON)"),
        ("geometry", "explicit interval coordinates and masses (CSV)"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=name != "sweep", help="JSON run configuration")
        p.add_argument("--seed", type=int, help="override the seed in the config")
        p.add_argument("--out", help="output path (default: stdout)")
        if name == "sweep":
            p.add_argument("--svg", help="also write an SVG heatmap here")
            p.add_argument("--workers", type=int, help="parallel worker processes")
        if name == "simulate":
            p.add_argument("--depth", type=int)
            p.add_argument("-H", type=float, dest="H")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _apply_overrides(config: RunConfig, args) -> RunConfig:
    data = config.model_dump()
    if args.seed is not None:
        for section in ("gcurve", "simulate", "geometry"):
            data[section]["seed"] = args.seed
    if args.command == "sweep" and args.workers is not None:
        data["sweep"]["workers"] = args.workers
    if args.command == "simulate":
        for key in ("depth", "H"):
            if getattr(args, key) is not None:
                data["simulate"][key] = getattr(args, key)
    return parse_config(data)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        config = load_config(args.config) if args.config else RunConfig()
        config = _apply_overrides(config, args)
        if args.command in ("solve", "simulate"):
            report = cmd_solve(config) if args.command == "solve" else cmd_simulate(config)
            with _output(args.out) as out:
                json.dump(report, out, indent=2)
                out.write("\n")
        else:
            with _output(args.out) as out:
                if args.command == "gcurve":
                    cmd_gcurve(config, out)
                elif args.command == "sweep":
                    cmd_sweep(config, out, args.svg)
                else:
                    cmd_geometry(config, out)
    except CONFIG_ERRORS as exc:
        print(f"moran-dim: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (MoranDimError, ArithmeticError, ValueError) as exc:
        print(f"moran-dim: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
