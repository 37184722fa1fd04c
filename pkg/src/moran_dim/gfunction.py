"""Expectation-ratio functions G and G'.

For a level atom and an exponent ``theta`` one child is *selected*: the
child maximizing ``ratio**theta / prob`` (mode ``"max"``, giving G) or
minimizing it (mode ``"min"``, giving G').  With ``Y = log prob`` and
``Z = log ratio`` of the selected child,

    G(theta) = E[Y] / E[Z].

The upper dimension for large dimension functions is where G crosses the
diagonal; G' plays the same role for the lower dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import expit, xlogy

from .errors import UnsupportedDistribution
from .params import Atom, FiniteMixture, ParamDistribution, PointMass, UniformP, open_uniform

Mode = Literal["max", "min"]


@dataclass(frozen=True)
class GEvaluation:
    theta: float
    ey: float
    ez: float
    value: float
    method: str
    stderr: float | None = None
    n_samples: int | None = None


def _check_mode(mode):
    if mode not in ("max", "min"):
        raise ValueError(f"mode must be 'max' or 'min', got {mode!r}")


def select_child(log_ratios, log_probs, theta: float, mode: Mode = "max") -> int:
    """Index of the selected child.

    ``max`` breaks ties toward the lowest index; ``min`` toward the highest,
    so that with two children the ``min`` choice is always the child the
    ``max`` rule rejects.
    """
    score = theta * np.asarray(log_ratios) - np.asarray(log_probs)
    if mode == "max":
        return int(np.argmax(score))
    return len(score) - 1 - int(np.argmin(score[::-1]))


def atom_yz(atom: Atom, theta: float, mode: Mode = "max") -> tuple[float, float]:
    _check_mode(mode)
    k = select_child(atom.log_ratios, atom.log_probs, theta, mode)
    return float(atom.log_probs[k]), float(atom.log_ratios[k])


def limit_child(atom: Atom, mode: Mode = "max") -> int:
    """Selected child as ``theta -> inf``: extreme ratio first, then the
    probability tie rule that holds for every finite theta."""
    keys = [(atom.log_ratios[k], -atom.log_probs[k], -k) for k in range(atom.K)]
    pick = max if mode == "max" else min
    return pick(range(atom.K), key=keys.__getitem__)


def _discrete(dist):
    if isinstance(dist, PointMass):
        return (1.0,), (dist.atom,)
    return dist.weights, dist.atoms


def _uniform_p_yz(a: float, b: float, c: float, one_minus_c: float, mode: Mode):
    entropy_term = float(xlogy(c, c) + xlogy(one_minus_c, one_minus_c))
    if mode == "max":
        # left child kept when u <= c
        return entropy_term - 1.0, c * math.log(a) + one_minus_c * math.log(b)
    # left child kept when u > c
    return -1.0 - entropy_term, c * math.log(b) + one_minus_c * math.log(a)


def g_analytic(dist: ParamDistribution, theta: float, mode: Mode = "max") -> GEvaluation:
    _check_mode(mode)
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    if isinstance(dist, UniformP):
        x = theta * (math.log(dist.a) - math.log(dist.b))
        c, one_minus_c = float(expit(x)), float(expit(-x))
        ey, ez = _uniform_p_yz(dist.a, dist.b, c, one_minus_c, mode)
    elif isinstance(dist, (PointMass, FiniteMixture)):
        weights, atoms = _discrete(dist)
        yz = [atom_yz(atom, theta, mode) for atom in atoms]
        ey = math.fsum(w * y for w, (y, _) in zip(weights, yz))
        ez = math.fsum(w * z for w, (_, z) in zip(weights, yz))
    else:
        raise UnsupportedDistribution(f"no analytic G for {type(dist).__name__}")
    return GEvaluation(theta, ey, ez, ey / ez, "analytic")


def g_value(dist: ParamDistribution, theta: float, mode: Mode = "max") -> float:
    return g_analytic(dist, theta, mode).value


def _ratio_with_stderr(y, z, freq=None):
    """Ratio of means and its delta-method standard error.

    With ``freq`` given, ``y`` and ``z`` are per-category values and ``freq``
    the sample frequencies; otherwise they are raw samples.
    """
    if freq is None:
        my, mz = float(np.mean(y)), float(np.mean(z))
        dy, dz = y - my, z - mz
        vyy, vzz, vyz = float(np.mean(dy * dy)), float(np.mean(dz * dz)), float(np.mean(dy * dz))
    else:
        my = math.fsum(f * v for f, v in zip(freq, y))
        mz = math.fsum(f * v for f, v in zip(freq, z))
        vyy = math.fsum(f * (v - my) ** 2 for f, v in zip(freq, y))
        vzz = math.fsum(f * (v - mz) ** 2 for f, v in zip(freq, z))
        vyz = math.fsum(f * (v - my) * (w - mz) for f, v, w in zip(freq, y, z))
    r = my / mz
    var = (vyy - 2.0 * r * vyz + r * r * vzz) / (mz * mz)
    return my, mz, r, max(var, 0.0)


def g_monte_carlo(
    dist: ParamDistribution,
    theta: float,
    mode: Mode = "max",
    n_samples: int = 100_000,
    seed: int = 0,
) -> GEvaluation:
    """Estimate G by sampling ``n_samples`` level atoms."""
    _check_mode(mode)
    if n_samples < 100:
        raise ValueError("n_samples must be at least 100")
    rng = np.random.default_rng(seed)
    if isinstance(dist, UniformP):
        u = open_uniform(rng, n_samples)
        x = theta * (math.log(dist.a) - math.log(dist.b))
        c = float(expit(x))
        left = u <= c if mode == "max" else u > c
        y = np.where(left, np.log(u), np.log1p(-u))
        z = np.where(left, math.log(dist.a), math.log(dist.b))
        ey, ez, value, var = _ratio_with_stderr(y, z)
    else:
        weights, atoms = _discrete(dist)
        counts = rng.multinomial(n_samples, np.asarray(weights) / math.fsum(weights))
        freq = counts / n_samples
        yz = [atom_yz(atom, theta, mode) for atom in atoms]
        ey, ez, value, var = _ratio_with_stderr(
            [v for v, _ in yz], [w for _, w in yz], freq
        )
    return GEvaluation(
        theta, ey, ez, value, "monte_carlo", math.sqrt(var / n_samples), n_samples
    )


def g_limits(dist: ParamDistribution, mode: Mode = "max") -> tuple[float, float]:
    """``(G(0), lim G(theta) as theta -> inf)``."""
    _check_mode(mode)
    g0 = g_value(dist, 0.0, mode)
    if isinstance(dist, UniformP):
        a, b = dist.a, dist.b
        c = 0.0 if a < b else 1.0 if a > b else 0.5
        ey, ez = _uniform_p_yz(a, b, c, 1.0 - c, mode)
        return g0, ey / ez
    if not isinstance(dist, (PointMass, FiniteMixture)):
        raise UnsupportedDistribution(f"no analytic G for {type(dist).__name__}")
    weights, atoms = _discrete(dist)
    ks = [limit_child(atom, mode) for atom in atoms]
    ey = math.fsum(w * atom.log_probs[k] for w, atom, k in zip(weights, atoms, ks))
    ez = math.fsum(w * atom.log_ratios[k] for w, atom, k in zip(weights, atoms, ks))
    return g0, ey / ez
