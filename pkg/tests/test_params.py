import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moran_dim.errors import ConstraintViolation
from moran_dim.params import (
    Atom,
    Bounds,
    FiniteMixture,
    PointMass,
    UniformP,
    derive_L,
    essential_bounds,
    level_stream,
    sample_level,
    two_point,
    validate,
)


def test_validate_accepts_plain_point_mass():
    validate(PointMass(Atom((1 / 4, 1 / 2), (1 / 3, 2 / 3)), Bounds(A=0.05, B=0.9)))


def test_ratio_sum_above_B_rejected():
    dist = PointMass(Atom((0.6, 0.6), (0.5, 0.5)), Bounds(A=0.05, B=0.9))
    with pytest.raises(ConstraintViolation) as exc:
        validate(dist)
    assert exc.value.field == "ratios"
    assert exc.value.atom_index == 0


def test_weights_must_sum_to_one():
    atom = Atom((1 / 4, 1 / 2), (1 / 3, 2 / 3))
    dist = FiniteMixture((0.5, 0.6), (atom, atom))
    with pytest.raises(ConstraintViolation) as exc:
        validate(dist)
    assert exc.value.field == "weights"


@pytest.mark.parametrize(
    "atom, field",
    [
        (Atom((0.2,), (1.0,)), "ratios"),
        (Atom((0.2, 0.3), (0.5, 0.25, 0.25)), "probs"),
        (Atom((0.2, 0.3), (0.0, 1.0)), "probs"),
        (Atom((0.2, 0.3), (0.5, 0.6)), "probs"),
        (Atom((0.01, 0.3), (0.5, 0.5)), "ratios"),
    ],
)
def test_atom_invariants(atom, field):
    with pytest.raises(ConstraintViolation) as exc:
        validate(PointMass(atom, Bounds(A=0.05, B=0.9)))
    assert exc.value.field == field


def test_bounds_invariants():
    with pytest.raises(ConstraintViolation):
        validate(UniformP(0.25, 0.5, Bounds(A=0.5, B=0.4)))
    with pytest.raises(ConstraintViolation):
        validate(UniformP(0.25, 0.5, Bounds(A=0.3, B=0.9)))
    with pytest.raises(ConstraintViolation):
        validate(UniformP(0.5, 0.5, Bounds(A=0.1, B=0.9)))


def test_normalization_tolerance():
    # 1/3 + 1/3 + 1/3 is not exactly 1 in binary
    atom = Atom((0.1, 0.1, 0.1), (1 / 3, 1 / 3, 1 / 3))
    validate(PointMass(atom))
    bad = Atom((0.1, 0.1, 0.1), (1 / 3, 1 / 3, 1 / 3 + 1e-9))
    with pytest.raises(ConstraintViolation):
        validate(PointMass(bad))


def test_default_bounds_are_tight():
    dist = two_point(0.2, 0.5, 0.3)
    assert dist.bounds.A == pytest.approx(0.99 * 0.2)
    assert dist.bounds.B == pytest.approx(0.7)
    assert dist.bounds.tau == pytest.approx(0.3)
    validate(dist)


@pytest.mark.parametrize("B, tau, L", [(0.5, 0.5, 3), (0.9, 0.1, 30), (0.05, 0.9, 2)])
def test_derive_L_examples(B, tau, L):
    assert derive_L(Bounds(A=0.01, B=B, tau=tau)) == L


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_derive_L_is_minimal(B, tau):
    L = derive_L(Bounds(A=B / 2, B=B, tau=tau))
    assert 2 * B ** (L - 1) <= tau
    if L >= 2:
        assert tau < 2 * B ** (L - 2)


def test_sample_level_point_mass_is_degenerate():
    atom = Atom((1 / 4, 1 / 2), (1 / 3, 2 / 3))
    rng = np.random.default_rng(5)
    assert all(sample_level(PointMass(atom), rng) == atom for _ in range(20))


def test_uniform_p_draws_mean():
    dist = UniformP(1 / 4, 1 / 2)
    rng = np.random.default_rng(11)
    n = 10**5
    u = np.array([sample_level(dist, rng).probs[0] for _ in range(n)])
    assert u.min() > 0 and u.max() < 1
    sigma = (12 * n) ** -0.5
    assert abs(u.mean() - 0.5) <= 3 * sigma


def test_mixture_frequencies():
    a0 = Atom((1 / 4, 1 / 2), (1 / 3, 2 / 3))
    a1 = Atom((1 / 4, 1 / 2), (2 / 3, 1 / 3))
    dist = FiniteMixture((0.25, 0.75), (a0, a1))
    rng = np.random.default_rng(3)
    n = 10**5
    hits = sum(sample_level(dist, rng) == a0 for _ in range(n))
    assert abs(hits / n - 0.25) <= 0.01


def test_streams_are_deterministic():
    dist = UniformP(1 / 4, 1 / 2)
    first = [sample_level(dist, level_stream(42, n)) for n in range(50)]
    again = [sample_level(dist, level_stream(42, n)) for n in range(50)]
    other = [sample_level(dist, level_stream(43, n)) for n in range(50)]
    assert first == again
    assert first != other


def test_two_point_essential_bounds():
    p = 0.2
    eb = essential_bounds(two_point(0.25, 0.5, p))
    assert eb.prob_inf == (p, p)
    assert eb.prob_sup == (1 - p, 1 - p)
    assert eb.ratio_inf == eb.ratio_sup == (0.25, 0.5)


def test_uniform_p_essential_bounds():
    eb = essential_bounds(UniformP(0.25, 0.5))
    assert eb.prob_inf == (0.0, 0.0)
    assert eb.prob_sup == (1.0, 1.0)


def test_point_mass_essential_bounds_degenerate(skewed):
    eb = essential_bounds(skewed)
    assert eb.ratio_inf == eb.ratio_sup
    assert eb.prob_inf == eb.prob_sup


atom_strategy = st.builds(
    lambda r, p: Atom(r, (p, 1 - p)),
    st.tuples(st.floats(0.05, 0.45), st.floats(0.05, 0.45)),
    st.floats(0.01, 0.99),
)


@settings(max_examples=100, deadline=None)
@given(st.lists(atom_strategy, min_size=1, max_size=6))
def test_mixture_essential_bounds_match_brute_force(atoms):
    w = [1 / len(atoms)] * len(atoms)
    eb = essential_bounds(FiniteMixture(tuple(w), tuple(atoms)))
    for j in range(2):
        assert eb.ratio_inf[j] == min(a.ratios[j] for a in atoms)
        assert eb.ratio_sup[j] == max(a.ratios[j] for a in atoms)
        assert eb.prob_inf[j] == min(a.probs[j] for a in atoms)
        assert eb.prob_sup[j] == max(a.probs[j] for a in atoms)
        assert eb.ratio_inf[j] <= eb.ratio_sup[j]
        assert eb.prob_inf[j] <= eb.prob_sup[j]


def test_mixed_child_counts():
    a2 = Atom((0.2, 0.3), (0.4, 0.6))
    a3 = Atom((0.1, 0.2, 0.3), (0.2, 0.3, 0.5))
    dist = FiniteMixture((0.5, 0.5), (a2, a3))
    validate(dist)
    assert dist.bounds.B_k == {2: pytest.approx(0.5), 3: pytest.approx(0.6)}
    assert dist.bounds.tau == pytest.approx(0.2)
    eb = essential_bounds(dist)
    assert eb.ratio_inf == (0.1, 0.2, 0.3)
    assert math.isclose(eb.prob_sup[2], 0.5)
