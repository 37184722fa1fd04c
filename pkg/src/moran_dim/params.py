"""Parameter space for random Moran constructions.

A level of the construction is an :class:`Atom`: K scaling ratios and K
probabilities. A distribution over atoms (:class:`PointMass`,
:class:`FiniteMixture`, :class:`UniformP`) is the randomness model, and a
distribution together with a seed stands in for a point of the underlying
probability space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np

from .errors import ConstraintViolation

SUM_TOL = 1e-12


@dataclass(frozen=True)
class Atom:
    """One level configuration: child ``k`` has length ratio ``ratios[k]``
    and receives the fraction ``probs[k]`` of its parent's mass."""

    ratios: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "ratios", tuple(float(r) for r in self.ratios))
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))

    @property
    def K(self) -> int:
        return len(self.ratios)

    @cached_property
    def log_ratios(self) -> np.ndarray:
        return np.log(np.asarray(self.ratios))

    @cached_property
    def log_probs(self) -> np.ndarray:
        return np.log(np.asarray(self.probs))


def derive_L(bounds: "Bounds") -> int:
    """Smallest L >= 1 with ``2 * B**(L-1) <= tau``."""
    B, tau = bounds.B, bounds.tau
    if not (0 < B < 1 and 0 < tau < 1):
        raise ConstraintViolation("bounds", None, f"need 0 < B, tau < 1, got B={B}, tau={tau}")
    L = 1
    while 2.0 * B ** (L - 1) > tau:
        L += 1
    return L


@dataclass(frozen=True)
class Bounds:
    """Scale bounds ``A <= ratio`` and ``sum(ratios) <= B_k[K]``.

    ``tau`` is the separation (as a fraction of the parent) between sibling
    intervals; it defaults to ``1 - B``, the gap guaranteed in the
    two-children interval model.
    """

    A: float
    B: float
    tau: float | None = None
    B_k: dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.tau is None:
            object.__setattr__(self, "tau", 1.0 - self.B)

    def sum_bound(self, K: int) -> float:
        return self.B_k.get(K, self.B)

    @property
    def L(self) -> int:
        return derive_L(self)


@dataclass(frozen=True)
class EssentialBounds:
    """Per-child essential infima and suprema of ratios and probabilities."""

    ratio_inf: tuple[float, ...]
    ratio_sup: tuple[float, ...]
    prob_sup: tuple[float, ...]
    prob_inf: tuple[float, ...]


def _default_bounds(atoms) -> Bounds:
    min_ratio = min(min(a.ratios) for a in atoms)
    sums: dict[int, float] = {}
    for a in atoms:
        sums[a.K] = max(sums.get(a.K, 0.0), math.fsum(a.ratios))
    B = max(sums.values())
    tau = min((1.0 - s) / (K - 1) for K, s in sums.items())
    if not 0.0 < tau < 1.0:
        # the atoms themselves are invalid; let validate() report it
        tau = None
    return Bounds(A=0.99 * min_ratio, B=B, tau=tau, B_k=sums)


@dataclass(frozen=True)
class PointMass:
    atom: Atom
    bounds: Bounds | None = None

    def __post_init__(self):
        if self.bounds is None:
            object.__setattr__(self, "bounds", _default_bounds([self.atom]))

    @property
    def support(self) -> list[Atom]:
        return [self.atom]

    def describe(self) -> str:
        return f"point_mass(ratios={list(self.atom.ratios)}, probs={list(self.atom.probs)})"


@dataclass(frozen=True)
class FiniteMixture:
    weights: tuple[float, ...]
    atoms: tuple[Atom, ...]
    bounds: Bounds | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if self.bounds is None and self.atoms:
            object.__setattr__(self, "bounds", _default_bounds(self.atoms))

    @property
    def support(self) -> list[Atom]:
        return [a for a, w in zip(self.atoms, self.weights) if w > 0]

    def describe(self) -> str:
        return f"finite_mixture({len(self.atoms)} atoms)"


@dataclass(frozen=True)
class UniformP:
    """Fixed ratios ``(a, b)``; the left child's probability is uniform on (0, 1)."""

    a: float
    b: float
    bounds: Bounds | None = None

    def __post_init__(self):
        if self.bounds is None:
            object.__setattr__(
                self, "bounds", Bounds(A=0.99 * min(self.a, self.b), B=self.a + self.b)
            )

    def describe(self) -> str:
        return f"uniform_p(a={self.a}, b={self.b})"


ParamDistribution = Union[PointMass, FiniteMixture, UniformP]


def two_point(a: float, b: float, p: float, bounds: Bounds | None = None) -> FiniteMixture:
    """Ratios ``(a, b)`` with the left probability equally likely ``p`` or ``1 - p``."""
    return FiniteMixture(
        weights=(0.5, 0.5),
        atoms=(Atom((a, b), (p, 1.0 - p)), Atom((a, b), (1.0 - p, p))),
        bounds=bounds,
    )


def _validate_bounds(bounds: Bounds) -> None:
    if not 0.0 < bounds.A < bounds.B < 1.0:
        raise ConstraintViolation("bounds", None, f"need 0 < A < B < 1, got A={bounds.A}, B={bounds.B}")
    if bounds.tau is None or not 0.0 < bounds.tau < 1.0:
        raise ConstraintViolation("bounds", None, f"tau must lie in (0, 1), got {bounds.tau}")
    for K, bk in bounds.B_k.items():
        if not 0.0 < bk < 1.0:
            raise ConstraintViolation("bounds", None, f"B_k[{K}]={bk} outside (0, 1)")


def _validate_atom(atom: Atom, bounds: Bounds, index) -> None:
    if atom.K < 2:
        raise ConstraintViolation("ratios", index, f"need at least 2 children, got {atom.K}")
    if len(atom.probs) != atom.K:
        raise ConstraintViolation(
            "probs", index, f"{len(atom.probs)} probabilities for {atom.K} ratios"
        )
    for p in atom.probs:
        if not 0.0 < p < 1.0:
            raise ConstraintViolation("probs", index, f"probability {p} not in (0, 1)")
    total = math.fsum(atom.probs)
    if abs(total - 1.0) > SUM_TOL:
        raise ConstraintViolation("probs", index, f"probabilities sum to {total!r}")
    for r in atom.ratios:
        if not bounds.A <= r < 1.0:
            raise ConstraintViolation("ratios", index, f"ratio {r} not in [A={bounds.A}, 1)")
    s = math.fsum(atom.ratios)
    bk = bounds.sum_bound(atom.K)
    if s > bk:
        raise ConstraintViolation("ratios", index, f"ratios sum to {s} > {bk}")


def validate(dist: ParamDistribution) -> None:
    """Raise :class:`ConstraintViolation` on the first broken invariant."""
    if isinstance(dist, UniformP):
        _validate_bounds(dist.bounds)
        a, b = dist.a, dist.b
        if not (0.0 < a < 1.0 and 0.0 < b < 1.0):
            raise ConstraintViolation("ratios", None, f"(a, b)=({a}, {b}) outside (0, 1)")
        if min(a, b) < dist.bounds.A:
            raise ConstraintViolation("ratios", None, f"min(a, b) < A={dist.bounds.A}")
        if a + b > dist.bounds.sum_bound(2):
            raise ConstraintViolation("ratios", None, f"a + b = {a + b} > B")
        return
    if isinstance(dist, PointMass):
        _validate_bounds(dist.bounds)
        _validate_atom(dist.atom, dist.bounds, 0)
        return
    if isinstance(dist, FiniteMixture):
        if not dist.atoms:
            raise ConstraintViolation("atoms", None, "mixture has no atoms")
        if len(dist.weights) != len(dist.atoms):
            raise ConstraintViolation(
                "weights", None, f"{len(dist.weights)} weights for {len(dist.atoms)} atoms"
            )
        for i, w in enumerate(dist.weights):
            if not w > 0.0:
                raise ConstraintViolation("weights", i, f"weight {w} is not positive")
        total = math.fsum(dist.weights)
        if abs(total - 1.0) > SUM_TOL:
            raise ConstraintViolation("weights", None, f"weights sum to {total!r}")
        _validate_bounds(dist.bounds)
        for i, atom in enumerate(dist.atoms):
            _validate_atom(atom, dist.bounds, i)
        return
    raise ConstraintViolation("variant", None, f"unknown distribution type {type(dist).__name__}")


def open_uniform(rng: np.random.Generator, size=None):
    """Uniform draws on the open interval (0, 1)."""
    u = rng.random(size)
    if size is None:
        while u == 0.0:
            u = rng.random()
        return u
    zero = u == 0.0
    while zero.any():
        u[zero] = rng.random(int(zero.sum()))
        zero = u == 0.0
    return u


def sample_level(dist: ParamDistribution, rng: np.random.Generator) -> Atom:
    if isinstance(dist, PointMass):
        return dist.atom
    if isinstance(dist, FiniteMixture):
        j = rng.choice(len(dist.atoms), p=np.asarray(dist.weights))
        return dist.atoms[j]
    if isinstance(dist, UniformP):
        u = float(open_uniform(rng))
        return Atom((dist.a, dist.b), (u, 1.0 - u))
    raise TypeError(f"unknown distribution type {type(dist).__name__}")


def level_stream(seed: int, index: int) -> np.random.Generator:
    """Independent random stream for task ``index`` under a master ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def essential_bounds(dist: ParamDistribution) -> EssentialBounds:
    if isinstance(dist, UniformP):
        return EssentialBounds(
            ratio_inf=(dist.a, dist.b),
            ratio_sup=(dist.a, dist.b),
            prob_sup=(1.0, 1.0),
            prob_inf=(0.0, 0.0),
        )
    atoms = dist.support
    K = max(a.K for a in atoms)
    r_inf, r_sup, p_sup, p_inf = [], [], [], []
    for j in range(K):
        rs = [a.ratios[j] for a in atoms if a.K > j]
        ps = [a.probs[j] for a in atoms if a.K > j]
        r_inf.append(min(rs))
        r_sup.append(max(rs))
        p_sup.append(max(ps))
        p_inf.append(min(ps))
    return EssentialBounds(tuple(r_inf), tuple(r_sup), tuple(p_sup), tuple(p_inf))


def fixed_ratios(dist: ParamDistribution) -> tuple[float, ...] | None:
    """Ratios shared by every atom in the support, or None if they vary."""
    if isinstance(dist, UniformP):
        return (dist.a, dist.b)
    atoms = dist.support
    first = atoms[0].ratios
    if all(a.ratios == first for a in atoms):
        return first
    return None
