"""JSON run configuration for the command-line tool."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError

from .params import Atom, Bounds, FiniteMixture, PointMass, UniformP


class ConfigError(ValueError):
    """The configuration file is missing, malformed or inconsistent."""


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class AtomSpec(_Strict):
    ratios: list[float] = Field(min_length=2)
    probs: list[float] = Field(min_length=2)


class PointMassSpec(AtomSpec):
    kind: Literal["point_mass"]


class FiniteMixtureSpec(_Strict):
    kind: Literal["finite_mixture"]
    weights: list[float] = Field(min_length=1)
    atoms: list[AtomSpec] = Field(min_length=1)


class UniformPSpec(_Strict):
    kind: Literal["uniform_p"]
    a: float
    b: float


DistributionSpec = Annotated[
    Union[PointMassSpec, FiniteMixtureSpec, UniformPSpec], Field(discriminator="kind")
]


class BoundsSpec(_Strict):
    A: float
    B: float
    tau: float | None = None


class SolveSpec(_Strict):
    tol: PositiveFloat = 1e-9


class GcurveSpec(_Strict):
    theta_min: float = Field(0.0, ge=0.0)
    theta_max: float = Field(5.0, ge=0.0)
    theta_step: PositiveFloat = 0.01
    thetas: list[Annotated[float, Field(ge=0.0)]] | None = None
    mc_samples: int | None = Field(None, ge=100)
    seed: int = 0


class GridSpec(_Strict):
    n: PositiveInt = 48
    lo: float = 1 / 50
    hi: float = 48 / 50
    a_values: list[float] | None = None
    b_values: list[float] | None = None


class SweepSpec(_Strict):
    grid: GridSpec = GridSpec()
    min_ratio: float = 1 / 50
    max_sum: float = 49 / 50
    tol: PositiveFloat = 1e-9
    svg: str | None = None
    workers: PositiveInt = 1


class SimulateSpec(_Strict):
    depth: PositiveInt = 3000
    H: PositiveFloat = 2.0
    N_min: int | None = Field(None, ge=2)
    N_max: int | None = Field(None, ge=2)
    seed: int = 1729


class GeometrySpec(_Strict):
    depth_cap: int = Field(10, ge=0, le=20)
    seed: int = 0


class RunConfig(_Strict):
    distribution: DistributionSpec | None = None
    bounds: BoundsSpec | None = None
    solve: SolveSpec = SolveSpec()
    gcurve: GcurveSpec = GcurveSpec()
    sweep: SweepSpec = SweepSpec()
    simulate: SimulateSpec = SimulateSpec()
    geometry: GeometrySpec = GeometrySpec()

    def build_distribution(self):
        spec = self.distribution
        if spec is None:
            raise ConfigError("this command needs a 'distribution' section")
        bounds = None
        if self.bounds is not None:
            bounds = Bounds(A=self.bounds.A, B=self.bounds.B, tau=self.bounds.tau)
        if isinstance(spec, PointMassSpec):
            return PointMass(Atom(spec.ratios, spec.probs), bounds)
        if isinstance(spec, FiniteMixtureSpec):
            atoms = tuple(Atom(a.ratios, a.probs) for a in spec.atoms)
            return FiniteMixture(tuple(spec.weights), atoms, bounds)
        return UniformP(spec.a, spec.b, bounds)


def parse_config(data: dict) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return parse_config(data)
