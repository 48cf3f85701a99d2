"""Tests for the nearest-neighbor backends.

The brute-force scan is the oracle; the kd-tree backend must reproduce it.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import special_ortho_group

from entrokl.models import NnMethod, SampleSet
from entrokl.services.neighbors import (
    build_index,
    nn_distances,
    nn_distances_brute,
    nn_distances_tree,
)

BACKENDS = [nn_distances_brute, nn_distances_tree]


def _random_sample(rng: np.random.Generator, n: int, d: int) -> SampleSet:
    return SampleSet(points=rng.normal(size=(n, d)) * rng.uniform(0.1, 10.0))


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize(
    ("points", "expected"),
    [
        ([0.0, 1.0], [1.0, 1.0]),
        ([0.0, 1.0, 3.0], [1.0, 1.0, 2.0]),
        ([[0.0, 0.0], [3.0, 4.0], [0.0, 1.0]], [1.0, math.sqrt(18.0), 1.0]),
    ],
    ids=["two_points", "three_points_1d", "hand_geometry_2d"],
)
def test_hand_computed_distances(backend, points: list, expected: list[float]):
    """
    GIVEN small point sets with hand-computed nearest-neighbor distances
    WHEN running either backend
    THEN rho matches the hand computation
    """
    nn = backend(SampleSet(points=points))

    np.testing.assert_allclose(nn.rho, expected, rtol=1e-15)
    assert not nn.has_duplicates


def test_regular_grid_distances():
    """
    GIVEN 100 points spaced 0.1 apart on a line
    WHEN running the tree backend
    THEN every distance is 0.1
    """
    nn = nn_distances_tree(SampleSet(points=np.arange(100) * 0.1))

    np.testing.assert_allclose(nn.rho, 0.1, rtol=1e-9)


def test_tree_matches_brute_on_random_samples():
    """
    GIVEN 200 random samples with N ∈ [2, 512] and d ∈ [1, 5]
    WHEN running both backends
    THEN the distances agree entrywise within 1e-12 relative
    """
    rng = np.random.default_rng(12345)
    for _ in range(200):
        n = int(rng.integers(2, 513))
        d = int(rng.integers(1, 6))
        sample = _random_sample(rng, n, d)

        brute = nn_distances_brute(sample)
        tree = nn_distances_tree(sample)

        np.testing.assert_allclose(tree.rho, brute.rho, rtol=1e-12)
        assert brute.method is NnMethod.BRUTE
        assert tree.method is NnMethod.TREE


@given(st.integers(min_value=2, max_value=60), st.integers(min_value=1, max_value=4), st.integers(0, 2**32 - 1))
def test_permutation_equivariance(n: int, d: int, seed: int):
    """
    GIVEN a random sample and a random permutation of its rows
    WHEN computing distances for both
    THEN the distances are permuted the same way
    """
    rng = np.random.default_rng(seed)
    sample = _random_sample(rng, n, d)
    perm = rng.permutation(n)

    base = nn_distances_tree(sample)
    permuted = nn_distances_tree(SampleSet(points=sample.points[perm]))

    np.testing.assert_allclose(permuted.rho, base.rho[perm], rtol=1e-12)


@given(st.integers(min_value=2, max_value=60), st.integers(min_value=2, max_value=4), st.integers(0, 2**32 - 1))
def test_rigid_motion_invariance(n: int, d: int, seed: int):
    """
    GIVEN a random sample, a rotation and a translation
    WHEN applying the rigid motion to every point
    THEN the distances are unchanged within 1e-9
    """
    rng = np.random.default_rng(seed)
    sample = SampleSet(points=rng.uniform(-1.0, 1.0, size=(n, d)))
    rotation = special_ortho_group.rvs(d, random_state=rng)
    shift = rng.uniform(-5.0, 5.0, size=d)

    moved = SampleSet(points=sample.points @ rotation.T + shift)

    np.testing.assert_allclose(
        nn_distances_tree(moved).rho, nn_distances_tree(sample).rho, rtol=0, atol=1e-9
    )


@given(
    st.integers(min_value=2, max_value=60),
    st.integers(min_value=1, max_value=4),
    st.floats(min_value=1e-3, max_value=1e3),
    st.integers(0, 2**32 - 1),
)
def test_scaling_covariance(n: int, d: int, s: float, seed: int):
    """
    GIVEN a random sample and a factor s > 0
    WHEN scaling every coordinate by s
    THEN every distance scales by s
    """
    rng = np.random.default_rng(seed)
    sample = _random_sample(rng, n, d)

    scaled = nn_distances_brute(SampleSet(points=s * sample.points))

    np.testing.assert_allclose(scaled.rho, s * nn_distances_brute(sample).rho, rtol=1e-12)


@pytest.mark.parametrize("backend", BACKENDS)
def test_duplicates_are_reported(backend):
    """
    GIVEN three coincident points and one distinct point
    WHEN running either backend
    THEN the coincident points get distance 0 and every pair among them is listed
    """
    nn = backend(SampleSet(points=[[1.0, 1.0], [0.0, 0.0], [1.0, 1.0], [1.0, 1.0]]))

    assert nn.has_duplicates
    assert nn.duplicate_indices == [(0, 2), (0, 3), (2, 3)]
    np.testing.assert_array_equal(nn.rho[[0, 2, 3]], 0.0)
    assert nn.rho[1] == pytest.approx(math.sqrt(2.0))


def test_self_match_excluded_by_index():
    """
    GIVEN a sample with two coincident points
    WHEN running the tree backend
    THEN each duplicate's neighbor is the other copy, not itself
    """
    nn = nn_distances_tree(SampleSet(points=[0.0, 0.0, 5.0]))

    assert list(nn.neighbor[:2]) == [1, 0]


def test_tree_result_does_not_depend_on_workers():
    """
    GIVEN a random sample
    WHEN querying the tree with one and with four threads
    THEN the results are identical
    """
    sample = _random_sample(np.random.default_rng(3), 2000, 3)

    one = nn_distances_tree(sample, workers=1)
    four = nn_distances_tree(sample, workers=4)

    np.testing.assert_array_equal(one.rho, four.rho)
    np.testing.assert_array_equal(one.neighbor, four.neighbor)


def test_backends_agree_bitwise_on_continuous_data():
    """
    GIVEN a random continuous sample (no ties)
    WHEN running both backends
    THEN the neighbor indices and distances are identical
    """
    sample = _random_sample(np.random.default_rng(9), 300, 2)

    brute = nn_distances_brute(sample)
    tree = nn_distances_tree(sample)

    np.testing.assert_array_equal(brute.neighbor, tree.neighbor)
    np.testing.assert_array_equal(brute.rho, tree.rho)


def test_dispatch_by_method_name():
    """
    GIVEN a method given as a string
    WHEN dispatching through nn_distances
    THEN the matching backend runs
    """
    sample = SampleSet(points=[0.0, 1.0, 3.0])

    assert nn_distances(sample, method="brute").method is NnMethod.BRUTE  # type: ignore[arg-type]
    assert nn_distances(sample).method is NnMethod.TREE


def test_index_uses_leaf_size_sixteen():
    """
    GIVEN a sample
    WHEN building the tree index
    THEN it is a kd-tree with leaf size 16
    """
    tree = build_index(SampleSet(points=np.arange(50.0)))

    assert tree.leafsize == 16
    assert tree.n == 50


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize(
    ("points", "expected"),
    [
        ([0.0, 1e-170, 1.0], [1e-170, 1e-170, 1.0]),
        ([0.0, 1e200, 3e200], [1e200, 1e200, 2e200]),
        ([[0.0, 0.0], [1e-200, 1e-200], [1.0, 1.0]], [1e-200 * math.sqrt(2.0)] * 2 + [math.sqrt(2.0)]),
    ],
)
def test_extreme_but_finite_separations(backend, points: list, expected: list[float]):
    """
    GIVEN points separated by less than 1e-162 or with coordinates above 1e154
    WHEN computing nearest-neighbor distances
    THEN every distance is finite, positive and correct, with no duplicates reported
    """
    nn = backend(SampleSet(points=points))

    np.testing.assert_allclose(nn.rho, expected, rtol=1e-12)
    assert nn.duplicate_indices == []
