import math

import pytest

from moran_dim.params import Atom, Bounds, FiniteMixture, PointMass, UniformP, two_point

K3_RATIOS = (1 / 4, 1 / 16, 1 / 16)


def k3_mixture():
    """Three children; the heavy probability 1/2 sits on each child with
    equal chance."""
    atoms = (
        Atom(K3_RATIOS, (1 / 2, 1 / 4, 1 / 4)),
        Atom(K3_RATIOS, (1 / 4, 1 / 2, 1 / 4)),
        Atom(K3_RATIOS, (1 / 4, 1 / 4, 1 / 2)),
    )
    return FiniteMixture((1 / 3, 1 / 3, 1 / 3), atoms)


@pytest.fixture
def k3():
    return k3_mixture()


@pytest.fixture
def uniform():
    return UniformP(1 / 4, 1 / 2)


@pytest.fixture
def twopt():
    return two_point(1 / 4, 1 / 2, 1 / 4)


@pytest.fixture
def symmetric():
    return PointMass(Atom((1 / 3, 1 / 3), (1 / 2, 1 / 2)))


@pytest.fixture
def skewed():
    return PointMass(Atom((1 / 4, 1 / 2), (1 / 3, 2 / 3)), Bounds(A=0.05, B=0.9))


UNIFORM_EXACT = math.log((math.sqrt(1 + 4 * math.exp(-1)) - 1) / 2) / math.log(1 / 2)
