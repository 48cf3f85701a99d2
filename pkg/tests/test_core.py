"""Tests for the shared constants and elementary functions."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entrokl.core import (
    CONSTANTS,
    EULER_GAMMA,
    bernoulli_tail_bound,
    g_function,
    log_exp_variance,
    log_unit_ball_volume,
    unit_ball_volume,
)

finite_nonneg = st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False)


def test_constants_values():
    """
    GIVEN the package constants
    WHEN reading γ and γ̃
    THEN they match the Euler-Mascheroni constant and its exponential
    """
    assert CONSTANTS.euler_gamma == EULER_GAMMA
    assert CONSTANTS.euler_gamma == pytest.approx(0.5772156649015329, abs=1e-15)
    assert CONSTANTS.gamma_tilde == pytest.approx(1.7810724179901979, rel=1e-14)


@pytest.mark.parametrize(
    ("d", "expected"),
    [(1, 2.0), (2, math.pi), (3, 4.0 * math.pi / 3.0), (4, math.pi**2 / 2.0)],
)
def test_unit_ball_volume_low_dimensions(d: int, expected: float):
    """
    GIVEN a small dimension d
    WHEN computing V_d
    THEN it matches the textbook volume
    """
    assert unit_ball_volume(d) == pytest.approx(expected, rel=1e-14)


def test_unit_ball_volume_large_dimension_does_not_overflow():
    """
    GIVEN d = 400
    WHEN computing the log volume
    THEN the result is finite and the volume underflows toward zero
    """
    assert math.isfinite(log_unit_ball_volume(400))
    assert unit_ball_volume(400) < 1e-100


@pytest.mark.parametrize("bad", [0, -1, 1.5, True, "2"])
def test_unit_ball_volume_rejects_invalid_dimension(bad: object):
    """
    GIVEN a dimension that is not an integer ≥ 1
    WHEN computing V_d
    THEN ValueError is raised
    """
    with pytest.raises(ValueError):
        unit_ball_volume(bad)  # type: ignore[arg-type]


def test_g_function_piecewise_values():
    """
    GIVEN points on both sides of t = 1
    WHEN evaluating G
    THEN G is 0 below 1 and t·log t from 1 on
    """
    assert g_function(0.0) == 0.0
    assert g_function(0.999) == 0.0
    assert g_function(1.0) == 0.0
    assert g_function(math.e) == pytest.approx(math.e)
    np.testing.assert_allclose(g_function([0.5, 2.0, 4.0]), [0.0, 2 * math.log(2), 4 * math.log(4)])


def test_g_function_returns_float_for_scalar():
    """
    GIVEN a scalar argument
    WHEN evaluating G
    THEN a plain float comes back
    """
    assert isinstance(g_function(3.0), float)


@pytest.mark.parametrize("bad", [-1e-9, math.inf, math.nan])
def test_g_function_rejects_invalid_arguments(bad: float):
    """
    GIVEN a negative or non-finite argument
    WHEN evaluating G
    THEN ValueError is raised
    """
    with pytest.raises(ValueError):
        g_function(bad)


@given(finite_nonneg, finite_nonneg)
def test_g_function_is_monotone(a: float, b: float):
    """
    GIVEN two non-negative arguments
    WHEN comparing G at the smaller and the larger one
    THEN G does not decrease
    """
    lo, hi = sorted((a, b))
    assert g_function(lo) <= g_function(hi)


@given(finite_nonneg, finite_nonneg)
def test_g_function_is_convex(a: float, b: float):
    """
    GIVEN two non-negative arguments
    WHEN evaluating G at their midpoint
    THEN it lies below the chord, up to rounding
    """
    mid = g_function(0.5 * (a + b))
    chord = 0.5 * (g_function(a) + g_function(b))
    assert mid <= chord + 1e-9 * max(1.0, chord)


@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.integers(min_value=1, max_value=10**6),
    st.floats(min_value=1e-6, max_value=1.0),
)
def test_bernoulli_tail_bound_holds(x: float, n: int, eps: float):
    """
    GIVEN x ∈ [0, 1], n ≥ 1 and ε ∈ (0, 1]
    WHEN evaluating both sides of 1 - (1 - x)^n ≤ (n·x)^ε
    THEN the left side never exceeds the right
    """
    lhs, rhs = bernoulli_tail_bound(x, n, eps)
    assert lhs <= rhs + 1e-12


def test_bernoulli_tail_bound_on_random_triples():
    """
    GIVEN 10⁴ random triples drawn with a fixed seed
    WHEN checking the bound on each
    THEN it holds everywhere
    """
    rng = np.random.default_rng(20240601)
    xs = rng.random(10_000)
    ns = rng.integers(1, 100_000, size=10_000)
    epss = 1.0 - rng.random(10_000)
    for x, n, eps in zip(xs, ns, epss, strict=True):
        lhs, rhs = bernoulli_tail_bound(float(x), int(n), float(eps))
        assert lhs <= rhs + 1e-12


@pytest.mark.parametrize(("x", "n", "eps"), [(1.5, 1, 0.5), (0.5, 0, 0.5), (0.5, 1, 0.0), (0.5, 1, 1.5)])
def test_bernoulli_tail_bound_rejects_out_of_range(x: float, n: int, eps: float):
    """
    GIVEN an argument outside its range
    WHEN evaluating the bound
    THEN ValueError is raised
    """
    with pytest.raises(ValueError):
        bernoulli_tail_bound(x, n, eps)


def test_log_exp_variance():
    """
    GIVEN η ~ Exp(1)
    WHEN reading var(log η)
    THEN it equals π²/6
    """
    assert log_exp_variance() == pytest.approx(1.6449340668482264)
