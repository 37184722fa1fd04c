"""Almost-sure dimension values from G, G' and the essential bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoSignChange
from .gfunction import g_value
from .params import ParamDistribution, essential_bounds

DEFAULT_TOL = 1e-9
THETA_START = 1.0
HARD_CAP = 1e6


@dataclass(frozen=True)
class CrossingResult:
    alpha: float
    kind: Literal["fixed_point", "jump_crossing"]
    bracket: tuple[float, float]
    residual: float
    iterations: int


@dataclass(frozen=True)
class SmallPhiDims:
    alpha_small: float
    beta_small: float


def _above_diagonal(dist, mode):
    # Left of the crossing: G >= theta for the upper dimension, G' > theta
    # for the lower one.
    if mode == "upper":
        return lambda t: g_value(dist, t, "max") >= t
    if mode == "lower":
        return lambda t: g_value(dist, t, "min") > t
    raise ValueError(f"mode must be 'upper' or 'lower', got {mode!r}")


def find_crossing(
    dist: ParamDistribution,
    mode: Literal["upper", "lower"] = "upper",
    tol: float = DEFAULT_TOL,
    theta_cap: float = HARD_CAP,
) -> CrossingResult:
    """Locate where G (or G' for ``mode="lower"``) crosses the diagonal.

    Bisection on the side of the diagonal, so jumps of a piecewise
    constant G are handled the same way as smooth crossings.  The result
    is a ``fixed_point`` if G(alpha) = alpha to within ``tol``, otherwise a
    ``jump_crossing`` whose residual is the size of the jump.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    above = _above_diagonal(dist, mode)
    gmode = "max" if mode == "upper" else "min"
    lo, hi = 0.0, THETA_START
    iterations = 0
    while above(hi):
        lo = hi
        hi *= 2.0
        iterations += 1
        if hi > theta_cap:
            raise NoSignChange(
                f"G stays on or above the diagonal up to theta={theta_cap:g} ({mode})"
            )
    while hi - lo > 2.0 * tol:
        mid = 0.5 * (lo + hi)
        if above(mid):
            lo = mid
        else:
            hi = mid
        iterations += 1

    g_lo, g_hi = g_value(dist, lo, gmode), g_value(dist, hi, gmode)
    s_lo, s_hi = g_lo - lo, g_hi - hi
    alpha = 0.5 * (lo + hi)
    # one secant step: exact for a G that is constant across the bracket,
    # second order for a smooth one
    if s_lo != s_hi:
        secant = lo - s_lo * (hi - lo) / (s_hi - s_lo)
        if lo <= secant <= hi:
            alpha = secant
    residual = abs(g_value(dist, alpha, gmode) - alpha)
    if residual <= tol:
        return CrossingResult(alpha, "fixed_point", (lo, hi), residual, iterations)
    return CrossingResult(alpha, "jump_crossing", (lo, hi), abs(g_lo - g_hi), iterations)


def sign_pattern_ok(
    dist: ParamDistribution, result: CrossingResult, mode="upper", n: int = 50, span: float = 1.0
) -> bool:
    """Check the side-of-diagonal pattern on ``n`` points either side of alpha.

    Points left of alpha must be above the diagonal and points right of it
    strictly below (upper mode), with the inequalities reversed for G'.
    """
    above = _above_diagonal(dist, mode)
    a = result.alpha
    lo, hi = result.bracket
    width = max(span, hi - lo)
    left = np.linspace(max(0.0, a - width), lo, n, endpoint=True)
    right = np.linspace(hi, a + width, n, endpoint=True)
    left = left[left < a]
    right = right[right > a]
    return all(above(float(t)) for t in left) and not any(above(float(t)) for t in right)


def _decreasing_root(f, xtol=1e-12):
    hi = 1.0
    while f(hi) > 0:
        hi *= 2.0
        if hi > HARD_CAP:
            raise NoSignChange("no root below the hard cap")
    return brentq(f, 0.0, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)


def uniformp_closed_form(a: float, b: float) -> float:
    """Upper dimension for uniform p: the root of ``a**t + b**t = 1/e``."""
    if not (0 < a < 1 and 0 < b < 1):
        raise DomainError(f"need 0 < a, b < 1, got ({a}, {b})")
    return _decreasing_root(lambda t: a**t + b**t - math.exp(-1.0))


def twopoint_threshold(a: float, b: float, p: float) -> float:
    """The theta at which ``a**t / (a**t + b**t)`` equals ``p``."""
    return math.log((1.0 - p) / p) / math.log(b / a)


def twopoint_closed_form(a: float, b: float, p: float) -> float:
    """Upper dimension for ratios ``a < b`` and left probability ``p`` or
    ``1 - p`` with equal chance, ``p < 1/2``."""
    if not 0 < p < 0.5:
        raise DomainError(f"need 0 < p < 1/2, got {p}")
    if not 0 < a < b < 1:
        raise DomainError(f"need 0 < a < b < 1, got ({a}, {b})")
    beta = math.log(b) / math.log(a)
    eta = math.log(p) / math.log(1.0 - p)
    if eta + 1.0 + beta - 3.0 * eta * beta >= 0:
        return (math.log(p) + math.log(1.0 - p)) / (2.0 * math.log(b))
    return math.log(p) / (0.5 * (math.log(a) + math.log(b)))


def small_phi_dims(dist: ParamDistribution) -> SmallPhiDims:
    """Upper and lower dimensions for small dimension functions (these
    include the Assouad and lower dimensions)."""
    eb = essential_bounds(dist)
    if any(P == 0.0 for P in eb.prob_inf):
        alpha = math.inf
    else:
        alpha = max(math.log(P) / math.log(A) for P, A in zip(eb.prob_inf, eb.ratio_sup))
    # + 0.0 turns log(1) / log(a) = -0.0 into 0.0
    beta = min(math.log(p) / math.log(a) for p, a in zip(eb.prob_sup, eb.ratio_inf)) + 0.0
    return SmallPhiDims(alpha, beta)


def similarity_dimension(ratios) -> float:
    """The d > 0 with ``sum(r**d for r in ratios) == 1``."""
    ratios = [float(r) for r in ratios]
    if len(ratios) < 2:
        raise DomainError("need at least two ratios")
    if any(not 0 < r < 1 for r in ratios):
        raise DomainError(f"ratios must lie in (0, 1): {ratios}")
    if math.fsum(ratios) >= 1:
        raise DomainError(f"ratios sum to {math.fsum(ratios)} >= 1")
    return _decreasing_root(lambda d: math.fsum(r**d for r in ratios) - 1.0)
