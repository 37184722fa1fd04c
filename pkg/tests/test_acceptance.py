"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with its runtime.
"""

import csv
import io
import json
import math
import time
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pytest

from moran_dim.cli import cmd_gcurve, cmd_solve, run, sweep_rows
from moran_dim.config import parse_config
from moran_dim.gfunction import g_analytic
from moran_dim.moran_sim import (
    REGIMES,
    estimate_dimension,
    generate,
    window_brute_force,
    window_extremal_ratio,
)
from moran_dim.params import Atom, FiniteMixture, PointMass, UniformP, two_point
from moran_dim.solver import (
    find_crossing,
    similarity_dimension,
    small_phi_dims,
    twopoint_closed_form,
)

HERE = Path(__file__).resolve().parent
CONFIGS = HERE.parent / "configs"
GOLDEN = json.loads((HERE / "golden" / "uniform_p_simulate.json").read_text())


@contextmanager
def criterion(request, number, title, budget=None):
    capman = request.config.pluginmanager.getplugin("capturemanager")
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget is not None:
            assert elapsed < budget, f"runtime {elapsed:.2f}s exceeds {budget}s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        with capman.global_and_fixture_disabled():
            print(f"\n[criterion {number:2d}] {status} {title} ({elapsed:.2f}s)")


def test_criterion_01_uniform_p(request):
    with criterion(request, 1, "uniform p upper dimension", budget=1.0):
        report = cmd_solve(parse_config({"distribution": {"kind": "uniform_p", "a": 0.25, "b": 0.5}}))
        exact = math.log((math.sqrt(1 + 4 * math.exp(-1)) - 1) / 2) / math.log(1 / 2)
        assert abs(report["upper_large"] - exact) <= 2e-3
        assert abs(report["upper_large"] - 1.25 / math.log(2)) <= 0.01


def test_criterion_02_ratio_to_similarity_dimension(request):
    with criterion(request, 2, "ratio to similarity dimension", budget=1.0):
        ratio = find_crossing(UniformP(0.25, 0.5)).alpha / similarity_dimension([0.25, 0.5])
        assert 2.55 <= ratio <= 2.65
        ratios = [
            find_crossing(UniformP(b * b, b)).alpha / similarity_dimension([b * b, b])
            for b in (0.3, 0.4, 0.5)
        ]
        assert max(ratios) - min(ratios) < 1e-6


def test_criterion_03_k3_example(request):
    with criterion(request, 3, "three-children example", budget=1.0):
        config = parse_config(json.loads((CONFIGS / "k3_example.json").read_text()))
        assert abs(cmd_solve(config)["upper_large"] - 5 / 6) <= 1e-9
        out = io.StringIO()
        cmd_gcurve(config, out)
        rows = list(csv.DictReader(io.StringIO(out.getvalue())))
        assert len(rows) == 101
        for row in rows:
            expected = 0.75 if float(row["theta"]) < 0.5 else 5 / 6
            assert abs(float(row["g_upper"]) - expected) <= 1e-12


def test_criterion_04_two_point_closed_form(request):
    with criterion(request, 4, "two-point closed form on a 10x10x10 grid", budget=30.0):
        a_grid = np.linspace(0.02, 0.47, 10)
        b_grid = np.linspace(0.05, 0.95, 10)
        p_grid = np.linspace(0.02, 0.48, 10)
        checked = 0
        for a in a_grid:
            for b in b_grid:
                if not (a < b and a >= 1 / 50 and a + b <= 49 / 50):
                    continue
                for p in p_grid:
                    solved = find_crossing(two_point(a, b, p)).alpha
                    assert abs(solved - twopoint_closed_form(a, b, p)) <= 1e-8, (a, b, p)
                    checked += 1
        assert checked >= 300


def test_criterion_05_small_phi(request):
    with criterion(request, 5, "small dimension function formulas"):
        sp = small_phi_dims(two_point(0.25, 0.5, 0.25))
        assert abs(sp.alpha_small - 2.0) <= 1e-12
        assert abs(sp.beta_small - math.log(3 / 4) / math.log(1 / 4)) <= 1e-12


def test_criterion_06_e_inverse_criterion(request):
    with criterion(request, 6, "e^-1 criterion on 1000 random points", budget=5.0):
        rng = np.random.default_rng(6)
        for _ in range(1000):
            a, b = rng.uniform(0.01, 0.99, size=2)
            theta = rng.uniform(0.0, 5.0)
            lhs = g_analytic(UniformP(a, b), theta).value - theta
            rhs = a**theta + b**theta - math.exp(-1)
            if abs(lhs) <= 1e-9 or abs(rhs) <= 1e-9:
                assert abs(lhs) <= 1e-9 and abs(rhs) <= 1e-9
            else:
                assert (lhs > 0) == (rhs > 0), (a, b, theta)


def test_criterion_07_window_oracle(request):
    with criterion(request, 7, "window optimizer equals brute force", budget=60.0):
        rng = np.random.default_rng(7)
        mixture = FiniteMixture(
            (0.3, 0.7),
            (Atom((0.2, 0.4), (0.3, 0.7)), Atom((0.1, 0.2, 0.3), (0.2, 0.5, 0.3))),
        )
        sources = [PointMass(Atom((0.25, 0.5), (1 / 3, 2 / 3))), mixture, UniformP(0.25, 0.5)]
        for case in range(200):
            dist = sources[case % 3]
            real = generate(dist, 40, int(rng.integers(1 << 30)))
            m = int(rng.integers(1, 13))
            N = int(rng.integers(0, 40 - m + 1))
            sup, inf = window_brute_force(real, N, m)
            assert abs(window_extremal_ratio(real, N, m, "sup") - sup) <= 1e-10
            assert abs(window_extremal_ratio(real, N, m, "inf") - inf) <= 1e-10


def test_criterion_08_sweep(request):
    with criterion(request, 8, "sweep over the admissible (a, b) grid", budget=60.0):
        config = parse_config(json.loads((CONFIGS / "sweep.json").read_text()))
        rows, a_values, b_values = sweep_rows(config)
        inside = [
            (a, b) for a in a_values for b in b_values
            if min(a, b) >= 1 / 50 - 1e-12 and a + b <= 49 / 50 + 1e-12
        ]
        assert len(a_values) == len(b_values) == 48
        assert [(a, b) for a, b, _ in rows] == inside
        assert all(math.isfinite(v) and v > 0 for _, _, v in rows)
        # 1/4 is not a node of the 48-point grid, so check both neighbouring rows
        for a_row in (0.24, 0.26):
            row = [v for a, _, v in rows if abs(a - a_row) < 1e-12]
            assert len(row) > 1 and all(x < y for x, y in zip(row, row[1:]))
        corner = next(v for a, b, v in rows if a == b == a_values[0])
        assert corner < 0.2, f"alpha at the (1/50, 1/50) corner is {corner:.4f}"


def test_criterion_09_empirical_consistency(request):
    with criterion(request, 9, "empirical estimates", budget=120.0):
        sym = PointMass(Atom((1 / 3, 1 / 3), (0.5, 0.5)))
        real = generate(sym, 500, GOLDEN["seed"])
        d = math.log(2) / math.log(3)
        for regime in REGIMES:
            assert abs(estimate_dimension(real, regime).value - d) <= 1e-9

        real = generate(UniformP(0.25, 0.5), GOLDEN["depth"], GOLDEN["seed"])
        est = estimate_dimension(real, "large_phi_upper", GOLDEN["H"])
        lo, hi = GOLDEN["bracket"]
        assert list(est.N_range) == GOLDEN["N_range"]
        assert lo <= est.value <= hi
        assert abs(est.value - GOLDEN["large_phi_upper"]) <= 1e-9


def test_criterion_10_determinism_and_exit_codes(request, tmp_path):
    with criterion(request, 10, "byte-identical output and exit codes"):
        cfg = str(CONFIGS / "uniform_p.json")
        for command in ("gcurve", "geometry"):
            blobs = []
            for i in range(2):
                out = tmp_path / f"{command}{i}.csv"
                assert run([command, "--config", cfg, "--out", str(out)]) == 0
                blobs.append(out.read_bytes())
            assert blobs[0] == blobs[1]
        malformed = {
            "unknown_key.json": json.dumps({"distribution": {"kind": "uniform_p", "a": 0.25, "b": 0.5}, "x": 1}),
            "truncated.json": '{"distribution": ',
            "violation.json": json.dumps(
                {"distribution": {"kind": "point_mass", "ratios": [0.7, 0.5], "probs": [0.5, 0.5]}}
            ),
        }
        for name, text in malformed.items():
            path = tmp_path / name
            path.write_text(text)
            assert run(["solve", "--config", str(path)]) == 2, name
