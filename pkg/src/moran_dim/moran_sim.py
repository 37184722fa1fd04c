"""Seeded random Moran realizations and empirical dimension estimates.

A realization is one draw of the level atoms.  Every interval at level n
is split with the same level-n atom, so the length and mass of an interval
are products along its address.  Dimension estimates come from extremal
ratios ``log(mass ratio) / log(length ratio)`` over windows of levels.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal

import numpy as np

from .errors import InsufficientDepth, TooLarge, UnsupportedGeometry, WindowOutOfRange
from .gfunction import select_child
from .params import Atom, Bounds, ParamDistribution, level_stream, sample_level, validate

Regime = Literal["large_phi_upper", "large_phi_lower", "small_phi_upper", "small_phi_lower"]
REGIMES: tuple[str, ...] = (
    "large_phi_upper",
    "large_phi_lower",
    "small_phi_upper",
    "small_phi_lower",
)

DEFAULT_H = 2.0
SMALL_WINDOWS = range(1, 9)
BRUTE_FORCE_LIMIT = 2**24
PSI_TOL = 1e-12
MAX_BISECTIONS = 200


@dataclass(frozen=True)
class IntervalAddress:
    word: tuple[int, ...] = ()

    def __len__(self):
        return len(self.word)


@dataclass(frozen=True)
class Realization:
    """Level atoms ``levels[0], levels[1], ...`` for levels 1, 2, ..."""

    levels: tuple[Atom, ...]
    seed: int
    dist_id: str
    bounds: Bounds

    @property
    def depth(self) -> int:
        return len(self.levels)

    @cached_property
    def _arrays(self):
        K = max(a.K for a in self.levels)
        log_r = np.zeros((self.depth, K))
        log_p = np.zeros((self.depth, K))
        valid = np.zeros((self.depth, K), dtype=bool)
        for n, atom in enumerate(self.levels):
            log_r[n, : atom.K] = atom.log_ratios
            log_p[n, : atom.K] = atom.log_probs
            valid[n, : atom.K] = True
        return log_r, log_p, valid


@dataclass(frozen=True)
class DimensionEstimate:
    value: float
    regime: str
    H: float | None
    N_range: tuple[int, int]
    depth: int


def generate(dist: ParamDistribution, depth: int, seed: int) -> Realization:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    validate(dist)
    levels = tuple(sample_level(dist, level_stream(seed, n)) for n in range(1, depth + 1))
    return Realization(levels, int(seed), dist.describe(), dist.bounds)


def interval_geometry(real: Realization, addr: IntervalAddress) -> tuple[float, float]:
    """``(length, mass)`` of the interval with the given address."""
    if len(addr) > real.depth:
        raise WindowOutOfRange(f"address of length {len(addr)} beyond depth {real.depth}")
    length, mass = 1.0, 1.0
    for atom, v in zip(real.levels, addr.word):
        if not 0 <= v < atom.K:
            raise WindowOutOfRange(f"digit {v} out of range for {atom.K} children")
        length *= atom.ratios[v]
        mass *= atom.probs[v]
    return length, mass


def _window_rows(real: Realization, N: int, m: int):
    if N < 0 or m < 1 or N + m > real.depth:
        raise WindowOutOfRange(f"window N={N}, m={m} does not fit depth {real.depth}")
    log_r, log_p, valid = real._arrays
    return log_r[N : N + m], log_p[N : N + m], valid[N : N + m]


def _extremal_ratios(log_r, log_p, valid, mode):
    """Extremal word ratio for a batch of windows, arrays shaped (W, m, K).

    For fixed psi the function ``sum_j best_k(psi * log r - log p)`` is
    strictly decreasing in psi, and it changes sign exactly at the extremal
    ratio because each level's child can be chosen independently.
    """
    fill = -np.inf if mode == "sup" else np.inf
    pick = np.max if mode == "sup" else np.min
    choose = np.argmax if mode == "sup" else np.argmin

    def objective(psi):
        vals = np.where(valid, psi[:, None, None] * log_r - log_p, fill)
        return pick(vals, axis=2).sum(axis=1)

    per_child = np.where(valid, log_p / np.where(valid, log_r, -1.0), 0.0)
    lo = np.zeros(log_r.shape[0])
    hi = per_child.max(axis=(1, 2)) + 1.0
    for _ in range(MAX_BISECTIONS):
        if np.all(hi - lo <= PSI_TOL):
            break
        mid = 0.5 * (lo + hi)
        ahead = objective(mid) > 0
        lo = np.where(ahead, mid, lo)
        hi = np.where(ahead, hi, mid)

    # Snap to the ratio of the word that is optimal at the bracket end lying
    # on the feasible side; that word's ratio sits between the end and the root.
    psi = lo if mode == "sup" else hi
    vals = np.where(valid, psi[:, None, None] * log_r - log_p, fill)
    k = choose(vals, axis=2)[..., None]
    num = np.take_along_axis(log_p, k, axis=2)[..., 0].sum(axis=1)
    den = np.take_along_axis(log_r, k, axis=2)[..., 0].sum(axis=1)
    return num / den


def window_extremal_ratio(real: Realization, N: int, m: int, mode: Literal["sup", "inf"] = "sup") -> float:
    """Sup (or inf) over descendant words of levels N+1..N+m of
    ``log(mass ratio) / log(length ratio)``, without enumerating words."""
    if mode not in ("sup", "inf"):
        raise ValueError(f"mode must be 'sup' or 'inf', got {mode!r}")
    log_r, log_p, valid = _window_rows(real, N, m)
    return float(_extremal_ratios(log_r[None], log_p[None], valid[None], mode)[0])


def _batch_extremal(real: Realization, starts, m: int, mode) -> np.ndarray:
    log_r, log_p, valid = real._arrays
    idx = np.asarray(starts)[:, None] + np.arange(m)
    return _extremal_ratios(log_r[idx], log_p[idx], valid[idx], mode)


def window_brute_force(real: Realization, N: int, m: int) -> tuple[float, float]:
    """``(sup, inf)`` of the window ratio by enumerating every word."""
    _window_rows(real, N, m)
    levels = real.levels[N : N + m]
    if math.prod(a.K for a in levels) > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"window has more than {BRUTE_FORCE_LIMIT} words")
    num = np.zeros(1)
    den = np.zeros(1)
    for atom in levels:
        num = np.add.outer(num, atom.log_probs).ravel()
        den = np.add.outer(den, atom.log_ratios).ravel()
    ratios = num / den
    return float(ratios.max()), float(ratios.min())


def zeta(N: int, H: float, A: float, B: float) -> float:
    """Minimal level gap between scale pairs allowed by the dimension
    function with constant ``H``."""
    return H * math.log(N * abs(math.log(B))) / abs(math.log(A))


def window_length(N: int, H: float, bounds: Bounds) -> int:
    return max(1, math.ceil(zeta(N, H, bounds.A, bounds.B)))


def default_N_range(depth: int, H: float, bounds: Bounds, regime: str = "large_phi_upper"):
    """Default ``(N_min, N_max)``: skip the first tenth of the levels as a
    burn-in, and stop where the windows still fit inside ``depth``."""
    N_min = max(2, depth // 10)
    if regime.startswith("small"):
        return N_min, depth - max(SMALL_WINDOWS)
    N_max = depth - 1
    while N_max >= N_min and N_max + window_length(N_max, H, bounds) > depth:
        N_max -= 1
    return N_min, N_max


def estimate_dimension(
    real: Realization,
    regime: Regime,
    H: float = DEFAULT_H,
    N_min: int | None = None,
    N_max: int | None = None,
) -> DimensionEstimate:
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    d_min, d_max = default_N_range(real.depth, H, real.bounds, regime)
    N_min = d_min if N_min is None else N_min
    N_max = d_max if N_max is None else N_max
    if N_min < 2 or N_max < N_min:
        raise InsufficientDepth(f"empty or invalid N range [{N_min}, {N_max}]")
    upper = regime.endswith("upper")
    mode = "sup" if upper else "inf"
    reduce = np.max if upper else np.min

    if regime.startswith("large"):
        if N_max + window_length(N_max, H, real.bounds) > real.depth:
            raise InsufficientDepth(
                f"N_max={N_max} plus window {window_length(N_max, H, real.bounds)} "
                f"exceeds depth {real.depth}"
            )
        Ns = np.arange(N_min, N_max + 1)
        ms = np.array([window_length(int(N), H, real.bounds) for N in Ns])
        best = [reduce(_batch_extremal(real, Ns[ms == m], int(m), mode)) for m in np.unique(ms)]
        return DimensionEstimate(float(reduce(best)), regime, H, (N_min, N_max), real.depth)

    if N_max + max(SMALL_WINDOWS) > real.depth:
        raise InsufficientDepth(
            f"N_max={N_max} plus window {max(SMALL_WINDOWS)} exceeds depth {real.depth}"
        )
    Ns = np.arange(N_min, N_max + 1)
    best = [reduce(_batch_extremal(real, Ns, m, mode)) for m in SMALL_WINDOWS]
    return DimensionEstimate(float(reduce(best)), regime, None, (N_min, N_max), real.depth)


def extremal_branch(real: Realization, theta: float, depth: int | None = None) -> IntervalAddress:
    """Address following, at each level, the child maximizing ``ratio**theta / prob``."""
    depth = real.depth if depth is None else depth
    if depth > real.depth:
        raise WindowOutOfRange(f"depth {depth} beyond realization depth {real.depth}")
    word = tuple(
        select_child(atom.log_ratios, atom.log_probs, theta, "max") for atom in real.levels[:depth]
    )
    return IntervalAddress(word)


def local_ratio(real: Realization, addr: IntervalAddress) -> float:
    """``log mass / log length`` of an interval, computed in log space."""
    num = math.fsum(atom.log_probs[v] for atom, v in zip(real.levels, addr.word))
    den = math.fsum(atom.log_ratios[v] for atom, v in zip(real.levels, addr.word))
    return num / den


def iter_interval_levels(real: Realization, depth_cap: int):
    """Yield ``(depth, left, right, mass)`` arrays for depths 0..depth_cap.

    The left child sits flush with its parent's left end and the right
    child with its right end.
    """
    if depth_cap > 20:
        raise ValueError("depth_cap must be <= 20")
    if depth_cap > real.depth:
        raise WindowOutOfRange(f"depth_cap {depth_cap} beyond depth {real.depth}")
    if any(atom.K != 2 for atom in real.levels[:depth_cap]):
        raise UnsupportedGeometry("explicit coordinates need exactly two children per level")
    left, right, mass = np.zeros(1), np.ones(1), np.ones(1)
    yield 0, left, right, mass
    for n, atom in enumerate(real.levels[:depth_cap], start=1):
        (a, b), (p, q) = atom.ratios, atom.probs
        length = right - left
        left, right, mass = (
            np.column_stack((left, right - b * length)).ravel(),
            np.column_stack((left + a * length, right)).ravel(),
            np.column_stack((mass * p, mass * q)).ravel(),
        )
        yield n, left, right, mass


def emit_intervals(real: Realization, depth_cap: int) -> list[tuple[float, float, float]]:
    """``(left, right, mass)`` for every interval at level ``depth_cap``."""
    for n, left, right, mass in iter_interval_levels(real, depth_cap):
        if n == depth_cap:
            return list(zip(left.tolist(), right.tolist(), mass.tolist()))
    raise AssertionError("unreachable")


def all_addresses(real: Realization, n: int):
    """Every address of length ``n`` (enumeration helper for small depths)."""
    return (IntervalAddress(w) for w in itertools.product(*(range(a.K) for a in real.levels[:n])))
