"""Tests for the analytic density families."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate

from entrokl.models import DensityFamily, SupportKind
from entrokl.services.densities import AnalyticDensity, parse_density_spec
from entrokl.services.exceptions import DensitySpecError, DimensionMismatchError, SampleError


def test_analytic_entropy_closed_forms(standard_normal, gaussian_2d, unit_interval, unit_square, exponential):
    """
    GIVEN one density of each family
    WHEN computing the closed-form entropy
    THEN the textbook values come back
    """
    assert standard_normal.analytic_entropy() == pytest.approx(1.4189385332046727, abs=1e-12)
    assert gaussian_2d.analytic_entropy() == pytest.approx(2.8378770664093453, abs=1e-12)
    assert unit_interval.analytic_entropy() == 0.0
    assert unit_square.analytic_entropy() == 0.0
    assert exponential.analytic_entropy() == 1.0
    assert parse_density_spec({"family": "exponential", "rate": 2.0}).analytic_entropy() == (
        pytest.approx(1.0 - math.log(2.0))
    )


def test_gaussian_entropy_matches_quadrature():
    """
    GIVEN N(0.5, 2.25)
    WHEN integrating -f·log f over ν ± 10σ
    THEN the result matches ½·log(2πeσ²) within 1e-8
    """
    density = parse_density_spec({"family": "gaussian", "mean": [0.5], "cov": [[2.25]]})

    value, _ = integrate.quad(
        lambda x: -density.pdf(x) * density.logpdf(x), 0.5 - 15.0, 0.5 + 15.0, epsabs=1e-12
    )

    assert value == pytest.approx(density.analytic_entropy(), abs=1e-8)


def test_exponential_entropy_matches_quadrature(exponential):
    """
    GIVEN the exponential law with rate 1
    WHEN integrating -f·log f over [0, ∞)
    THEN the result is 1
    """
    value, _ = integrate.quad(lambda x: -exponential.pdf(x) * exponential.logpdf(x), 0, math.inf)

    assert value == pytest.approx(1.0, abs=1e-8)


def test_ball_mass_known_values(standard_normal, unit_interval, unit_square):
    """
    GIVEN balls with hand-computable masses
    WHEN computing exact masses
    THEN normal-CDF and interval arithmetic values come back
    """
    assert standard_normal.ball_mass_exact([0.0], 1.0) == pytest.approx(0.6826894921370859, abs=1e-12)
    assert unit_interval.ball_mass_exact([0.5], 0.25) == pytest.approx(0.5)
    assert unit_interval.ball_mass_exact([0.0], 0.5) == pytest.approx(0.5)
    assert unit_square.ball_mass_exact([0.5, 0.5], 0.25) == pytest.approx(math.pi / 16.0)
    assert unit_square.ball_mass_exact([3.0, 3.0], 0.5) == 0.0


def test_ball_mass_unavailable_is_none(unit_square, correlated_gaussian):
    """
    GIVEN balls with no closed-form mass
    WHEN asking for the exact mass
    THEN None is returned, not an error
    """
    assert unit_square.ball_mass_exact([0.0, 0.0], 0.5) is None
    assert correlated_gaussian.ball_mass_exact([0.0, 0.0], 1.0) is None


def test_isotropic_gaussian_ball_mass_uses_chi_square(gaussian_2d):
    """
    GIVEN the 2-D standard normal
    WHEN computing the mass of B(0, r)
    THEN it equals 1 - exp(-r²/2)
    """
    assert gaussian_2d.ball_mass_exact([0.0, 0.0], 1.5) == pytest.approx(1.0 - math.exp(-1.125))
    off_center = gaussian_2d.ball_mass_exact([1.0, 0.0], 1.0)
    assert off_center is not None
    assert 0.0 < off_center < 1.0 - math.exp(-0.5)


@pytest.mark.parametrize(
    ("document", "x"),
    [
        ({"family": "gaussian", "mean": [0.0], "cov": [[1.0]]}, [0.7]),
        ({"family": "gaussian", "mean": [0.0, 0.0], "cov": [[2.0, 0.0], [0.0, 2.0]]}, [0.3, -0.4]),
        ({"family": "uniform_box", "lower": [0.0], "upper": [1.0]}, [0.2]),
        ({"family": "exponential", "rate": 1.5}, [0.4]),
    ],
)
def test_ball_mass_monotone_and_tends_to_one(document: dict, x: list[float]):
    """
    GIVEN a density with closed-form ball masses
    WHEN growing the radius
    THEN the mass does not decrease and reaches 1 - 1e-6 at r = 10³
    """
    density = parse_density_spec(document)
    radii = np.geomspace(1e-3, 1e3, 200)

    masses = density.ball_masses(x, radii)

    assert np.all(np.diff(masses) >= -1e-12)
    assert masses[-1] >= 1.0 - 1e-6


def test_gaussian_pdf_is_maximal_at_mean(correlated_gaussian):
    """
    GIVEN a correlated Gaussian
    WHEN evaluating the density at random perturbations of the mean
    THEN none exceeds the density at the mean
    """
    rng = np.random.default_rng(11)
    perturbed = correlated_gaussian.mean + rng.normal(scale=0.5, size=(500, 2))

    peak = correlated_gaussian.pdf(correlated_gaussian.mean)

    assert np.all(correlated_gaussian.pdf(perturbed) <= peak)
    assert peak == pytest.approx(correlated_gaussian.sup_density())


def test_pdf_vanishes_outside_support(unit_interval, exponential):
    """
    GIVEN bounded and half-line supports
    WHEN evaluating outside them
    THEN the density is 0 and the log-density -inf
    """
    assert unit_interval.pdf([1.5]) == 0.0
    assert unit_interval.pdf(0.5) == 1.0
    assert exponential.logpdf([-0.1]) == -math.inf
    np.testing.assert_allclose(exponential.pdf(np.array([[0.0], [1.0]])), [1.0, math.exp(-1.0)])


def test_pdf_rejects_wrong_dimension(gaussian_2d):
    """
    GIVEN a 2-D density
    WHEN evaluating at a point of length 3
    THEN DimensionMismatchError is raised
    """
    with pytest.raises(DimensionMismatchError):
        gaussian_2d.pdf([0.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        gaussian_2d.pdf([math.nan, 0.0])


def test_support_and_interior(standard_normal, unit_square, exponential):
    """
    GIVEN one density per family
    WHEN asking for the support shape and interior membership
    THEN the family's geometry is reported
    """
    assert standard_normal.support is SupportKind.ALL_SPACE
    assert unit_square.support is SupportKind.BOX
    assert exponential.support is SupportKind.HALF_LINE
    assert unit_square.is_interior([0.5, 0.5])
    assert not unit_square.is_interior([0.0, 0.5])
    assert not exponential.is_interior([0.0])


def test_sample_is_reproducible_and_tagged(correlated_gaussian):
    """
    GIVEN a fixed seed
    WHEN sampling twice
    THEN the samples are identical and tagged with family and seed
    """
    first = correlated_gaussian.sample(50, seed=42)
    second = correlated_gaussian.sample(50, seed=42)

    np.testing.assert_array_equal(first.points, second.points)
    assert first.points.shape == (50, 2)
    assert first.source_tag == "gaussian:seed=42"
    assert not np.array_equal(first.points, correlated_gaussian.sample(50, seed=43).points)


def test_sample_moments_match_parameters(correlated_gaussian, unit_square, exponential):
    """
    GIVEN one density per family
    WHEN drawing 20000 points
    THEN the sample means are within five standard errors of the true means
    """
    n = 20_000
    g = correlated_gaussian.sample(n, seed=1).points
    np.testing.assert_allclose(g.mean(axis=0), [1.0, -1.0], atol=5 * math.sqrt(2.0 / n))
    np.testing.assert_allclose(np.cov(g.T), correlated_gaussian.cov, atol=0.08)

    u = unit_square.sample(n, seed=1).points
    assert np.all((u >= 0.0) & (u <= 1.0))
    np.testing.assert_allclose(u.mean(axis=0), 0.5, atol=5 * math.sqrt(1.0 / (12 * n)))

    e = exponential.sample(n, seed=1).points
    assert np.all(e >= 0.0)
    assert e.mean() == pytest.approx(1.0, abs=5 / math.sqrt(n))


def test_sample_needs_two_points(exponential):
    """
    GIVEN n = 1
    WHEN sampling
    THEN SampleError is raised
    """
    with pytest.raises(SampleError):
        exponential.sample(1, seed=0)


@pytest.mark.parametrize("eps", [0.25, 0.5, 0.9])
def test_power_integral_matches_quadrature(eps: float):
    """
    GIVEN ε ∈ (0, 1) and 1-D Gaussian and exponential laws
    WHEN integrating f^{1-ε} numerically
    THEN the closed form agrees
    """
    gaussian = parse_density_spec({"family": "gaussian", "mean": [1.0], "cov": [[0.5]]})
    exponential = parse_density_spec({"family": "exponential", "rate": 3.0})

    g_value, _ = integrate.quad(lambda x: gaussian.pdf(x) ** (1 - eps), -math.inf, math.inf)
    e_value, _ = integrate.quad(lambda x: exponential.pdf(x) ** (1 - eps), 0, math.inf)

    assert gaussian.power_integral(eps) == pytest.approx(g_value, rel=1e-8)
    assert exponential.power_integral(eps) == pytest.approx(e_value, rel=1e-8)


def test_power_integral_rejects_eps_outside_unit_interval(standard_normal):
    """
    GIVEN ε = 1
    WHEN asking for ∫ f^{1-ε}
    THEN ValueError is raised
    """
    with pytest.raises(ValueError):
        standard_normal.power_integral(1.0)


def test_bounds_of_density(standard_normal, unit_square):
    """
    GIVEN a Gaussian and a box
    WHEN reading sup f and inf f on the support
    THEN the Gaussian has M = 1/sqrt(2π) and m = 0, the box has both equal to 1/volume
    """
    assert standard_normal.sup_density() == pytest.approx(1.0 / math.sqrt(2.0 * math.pi))
    assert standard_normal.inf_on_support() == 0.0
    assert unit_square.sup_density() == 1.0
    assert unit_square.inf_on_support() == 1.0


def test_lambda_min_is_smallest_eigenvalue(correlated_gaussian):
    """
    GIVEN a correlated covariance
    WHEN reading λ_min
    THEN it equals the smallest eigenvalue
    """
    assert correlated_gaussian.lambda_min == pytest.approx(float(np.linalg.eigvalsh([[2.0, 0.6], [0.6, 1.0]])[0]))


@pytest.mark.parametrize(
    ("document", "field"),
    [
        ({"mean": [0.0], "cov": [[1.0]]}, "family"),
        ({"family": "cauchy"}, "family"),
        ({"family": "exponential", "rate": -1.0}, "rate"),
        ({"family": "gaussian", "mean": [0.0, 0.0], "cov": [[1.0]]}, "cov"),
        ({"family": "uniform_box", "lower": [1.0], "upper": [0.0]}, "upper"),
    ],
)
def test_parse_density_spec_names_failing_field(document: dict, field: str):
    """
    GIVEN an invalid density document
    WHEN parsing it
    THEN DensitySpecError names the failing field
    """
    with pytest.raises(DensitySpecError) as exc_info:
        parse_density_spec(document)

    assert exc_info.value.field == field
    assert str(exc_info.value).startswith(f"{field}: ")


def test_describe_echoes_document():
    """
    GIVEN a parsed document
    WHEN describing the density
    THEN the original fields come back
    """
    density = parse_density_spec({"family": "uniform_box", "lower": [0, 0], "upper": [1, 2]})

    assert density.family is DensityFamily.UNIFORM_BOX
    assert density.describe() == {"family": "uniform_box", "lower": [0.0, 0.0], "upper": [1.0, 2.0]}


def _covering_box(density: AnalyticDensity) -> tuple[np.ndarray, np.ndarray]:
    match density.family:
        case DensityFamily.GAUSSIAN:
            return density.mean - 8 * density.marginal_std, density.mean + 8 * density.marginal_std
        case DensityFamily.UNIFORM_BOX:
            return density.lower, density.upper
        case DensityFamily.EXPONENTIAL:
            return np.zeros(1), np.full(1, 40.0 / density.sup_density())


@pytest.mark.parametrize(
    "fixture",
    ["standard_normal", "gaussian_2d", "correlated_gaussian", "unit_interval", "unit_square", "exponential"],
)
def test_pdf_integrates_to_one(request, fixture: str):
    """
    GIVEN a density and a box covering all but a negligible part of its mass
    WHEN averaging pdf × box volume over 10⁵ uniform points in the box
    THEN the result is within three standard errors of 1
    """
    density = request.getfixturevalue(fixture)
    lower, upper = _covering_box(density)
    volume = float(np.prod(upper - lower))
    rng = np.random.default_rng(2024)

    points = lower + (upper - lower) * rng.random((100_000, density.dim))
    values = density.pdf(points) * volume

    std_error = values.std(ddof=1) / math.sqrt(values.size)
    assert abs(values.mean() - 1.0) <= 3 * std_error + 1e-12
