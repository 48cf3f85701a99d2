"""Analytic ground-truth densities.

This module provides AnalyticDensity, an immutable wrapper around a validated
density document (Gaussian, uniform box or exponential) that can evaluate,
sample, and report the closed forms the estimator is checked against.
"""

from __future__ import annotations

import logging
import math
from functools import cached_property
from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import ValidationError
from scipy import linalg, stats

from entrokl.core import log_unit_ball_volume
from entrokl.models import (
    DensityFamily,
    ExponentialSpec,
    GaussianSpec,
    SampleSet,
    SupportKind,
    UniformBoxSpec,
    density_spec_adapter,
)
from entrokl.services.exceptions import DensitySpecError, DimensionMismatchError, SampleError
from entrokl.services.seeding import make_rng

logger = logging.getLogger(__name__)

_LOG_2PI = math.log(2.0 * math.pi)


class AnalyticDensity:
    """An evaluatable, sampleable density with known closed forms.

    Instances are immutable and safe to share across threads. Geometry that is
    expensive to compute (Cholesky factor, smallest covariance eigenvalue) is
    computed once on first use.

    Args:
        spec: Validated density document

    Example:
        >>> density = AnalyticDensity(GaussianSpec(mean=[0.0], cov=[[1.0]]))
        >>> round(density.pdf([0.0]), 7)
        0.3989423
        >>> round(density.analytic_entropy(), 7)
        1.4189385
    """

    def __init__(self, spec: GaussianSpec | UniformBoxSpec | ExponentialSpec) -> None:
        self._spec = spec

    def __repr__(self) -> str:
        return f"AnalyticDensity({self._spec!r})"

    @property
    def spec(self) -> GaussianSpec | UniformBoxSpec | ExponentialSpec:
        """The validated document this density was built from."""
        return self._spec

    @property
    def family(self) -> DensityFamily:
        """Density family."""
        return DensityFamily(self._spec.family)

    @property
    def dim(self) -> int:
        """Dimension d."""
        return self._spec.dim

    @property
    def support(self) -> SupportKind:
        """Shape of the support S(f)."""
        match self.family:
            case DensityFamily.GAUSSIAN:
                return SupportKind.ALL_SPACE
            case DensityFamily.UNIFORM_BOX:
                return SupportKind.BOX
            case DensityFamily.EXPONENTIAL:
                return SupportKind.HALF_LINE

    def describe(self) -> dict[str, Any]:
        """JSON-ready echo of the density document."""
        return self._spec.model_dump(mode="json")

    # Geometry

    @cached_property
    def mean(self) -> np.ndarray:
        """Gaussian mean ν."""
        assert isinstance(self._spec, GaussianSpec)
        return np.asarray(self._spec.mean, dtype=float)

    @cached_property
    def cov(self) -> np.ndarray:
        """Gaussian covariance Σ."""
        assert isinstance(self._spec, GaussianSpec)
        return np.asarray(self._spec.cov, dtype=float)

    @cached_property
    def cholesky(self) -> np.ndarray:
        """Lower-triangular L with L·Lᵀ = Σ."""
        return np.linalg.cholesky(self.cov)

    @cached_property
    def log_det_cov(self) -> float:
        """log det Σ from the Cholesky diagonal."""
        return 2.0 * float(np.sum(np.log(np.diag(self.cholesky))))

    @cached_property
    def lambda_min(self) -> float:
        """Smallest eigenvalue of Σ (symmetric eigensolver)."""
        return float(np.linalg.eigvalsh(self.cov)[0])

    @cached_property
    def isotropic_variance(self) -> float | None:
        """σ² when Σ = σ²·I exactly, else None."""
        cov = self.cov
        diag = np.diag(cov)
        if np.all(cov == np.diag(diag)) and np.all(diag == diag[0]):
            return float(diag[0])
        return None

    @cached_property
    def marginal_std(self) -> np.ndarray:
        """Per-coordinate standard deviations sqrt(diag Σ)."""
        return np.sqrt(np.diag(self.cov))

    @cached_property
    def lower(self) -> np.ndarray:
        """Lower corner of the uniform box."""
        assert isinstance(self._spec, UniformBoxSpec)
        return np.asarray(self._spec.lower, dtype=float)

    @cached_property
    def upper(self) -> np.ndarray:
        """Upper corner of the uniform box."""
        assert isinstance(self._spec, UniformBoxSpec)
        return np.asarray(self._spec.upper, dtype=float)

    @cached_property
    def log_volume(self) -> float:
        """log of the box volume."""
        return float(np.sum(np.log(self.upper - self.lower)))

    @property
    def rate(self) -> float:
        """Exponential rate λ."""
        assert isinstance(self._spec, ExponentialSpec)
        return self._spec.rate

    # Evaluation

    def _as_points(self, x: npt.ArrayLike) -> tuple[np.ndarray, bool]:
        arr = np.asarray(x, dtype=float)
        if arr.ndim == 0 and self.dim == 1:
            return arr.reshape(1, 1), True
        if arr.ndim == 1:
            if arr.shape[0] != self.dim:
                raise DimensionMismatchError(
                    f"Point has length {arr.shape[0]} but the density has dimension {self.dim}"
                )
            return arr.reshape(1, -1), True
        if arr.ndim == 2 and arr.shape[1] == self.dim:
            return arr, False
        raise DimensionMismatchError(
            f"Expected a point of length {self.dim} or an array of shape (m, {self.dim}), "
            f"got shape {arr.shape}"
        )

    def _logpdf_rows(self, points: np.ndarray) -> np.ndarray:
        match self.family:
            case DensityFamily.GAUSSIAN:
                z = linalg.solve_triangular(self.cholesky, (points - self.mean).T, lower=True)
                quad = np.sum(z * z, axis=0)
                return -0.5 * quad - 0.5 * self.dim * _LOG_2PI - 0.5 * self.log_det_cov
            case DensityFamily.UNIFORM_BOX:
                inside = np.all((points >= self.lower) & (points <= self.upper), axis=1)
                return np.where(inside, -self.log_volume, -np.inf)
            case DensityFamily.EXPONENTIAL:
                x = points[:, 0]
                return np.where(x >= 0, math.log(self.rate) - self.rate * x, -np.inf)

    def logpdf(self, x: npt.ArrayLike) -> float | np.ndarray:
        """log f(x); -inf outside the support.

        Args:
            x: One point of length d, or an (m, d) array of points

        Returns:
            A float for a single point, otherwise an array of m values

        Raises:
            ValueError: If a coordinate is not finite
            DimensionMismatchError: If the point length differs from d
        """
        points, single = self._as_points(x)
        if not np.all(np.isfinite(points)):
            raise ValueError("Density arguments must be finite")
        out = self._logpdf_rows(points)
        return float(out[0]) if single else out

    def pdf(self, x: npt.ArrayLike) -> float | np.ndarray:
        """Density value f(x), 0 outside the support.

        Accepts the same inputs as logpdf.
        """
        out = np.exp(self.logpdf(x))
        return float(out) if np.ndim(out) == 0 else out

    def is_interior(self, x: npt.ArrayLike) -> bool:
        """Whether x lies in the interior of the support."""
        points, _ = self._as_points(x)
        point = points[0]
        match self.family:
            case DensityFamily.GAUSSIAN:
                return True
            case DensityFamily.UNIFORM_BOX:
                return bool(np.all((point > self.lower) & (point < self.upper)))
            case DensityFamily.EXPONENTIAL:
                return bool(point[0] > 0)

    # Sampling

    def draw(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """Draw n i.i.d. points as an (n, d) array from a caller-owned generator."""
        match self.family:
            case DensityFamily.GAUSSIAN:
                z = rng.standard_normal((n, self.dim))
                return self.mean + z @ self.cholesky.T
            case DensityFamily.UNIFORM_BOX:
                return self.lower + (self.upper - self.lower) * rng.random((n, self.dim))
            case DensityFamily.EXPONENTIAL:
                u = rng.random((n, 1))
                return -np.log1p(-u) / self.rate

    def sample(self, n: int, seed: int) -> SampleSet:
        """Draw an exact i.i.d. sample of size n.

        Gaussians use the Cholesky transform of standard normals, boxes use
        scaled uniforms and the exponential uses the inverse CDF.

        Args:
            n: Sample size, at least 2
            seed: Non-negative seed; the same seed gives the same sample

        Returns:
            SampleSet tagged with the family and seed

        Raises:
            SampleError: If n < 2
        """
        if n < 2:
            raise SampleError(f"A sample needs at least 2 points, got n={n}")
        points = self.draw(make_rng(seed), n)
        return SampleSet(points=points, source_tag=f"{self.family.value}:seed={seed}")

    # Closed forms

    def analytic_entropy(self) -> float:
        """Differential entropy H(f) = -∫ f log f in nats."""
        match self.family:
            case DensityFamily.GAUSSIAN:
                return 0.5 * (self.dim * (_LOG_2PI + 1.0) + self.log_det_cov)
            case DensityFamily.UNIFORM_BOX:
                return self.log_volume
            case DensityFamily.EXPONENTIAL:
                return 1.0 - math.log(self.rate)

    def sup_density(self) -> float:
        """The constant M = sup f of the boundedness condition."""
        match self.family:
            case DensityFamily.GAUSSIAN:
                return math.exp(-0.5 * self.dim * _LOG_2PI - 0.5 * self.log_det_cov)
            case DensityFamily.UNIFORM_BOX:
                return math.exp(-self.log_volume)
            case DensityFamily.EXPONENTIAL:
                return self.rate

    def inf_on_support(self) -> float:
        """The constant m = inf of f over its support (0 for unbounded supports)."""
        if self.family is DensityFamily.UNIFORM_BOX:
            return math.exp(-self.log_volume)
        return 0.0

    def power_integral(self, eps: float) -> float:
        """Closed form of ∫ f^{1-ε} for ε ∈ (0, 1).

        Raises:
            ValueError: If eps is outside (0, 1)
        """
        if not 0.0 < eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {eps}")
        match self.family:
            case DensityFamily.GAUSSIAN:
                log_value = 0.5 * self.dim * (eps * _LOG_2PI - math.log1p(-eps))
                return math.exp(log_value + 0.5 * eps * self.log_det_cov)
            case DensityFamily.UNIFORM_BOX:
                return math.exp(eps * self.log_volume)
            case DensityFamily.EXPONENTIAL:
                return self.rate ** (-eps) / (1.0 - eps)

    def ball_masses(self, x: npt.ArrayLike, radii: npt.ArrayLike) -> np.ndarray:
        """Closed-form ∫_{B(x,r)} f for several radii; NaN where no closed form exists.

        Closed forms cover 1-D Gaussians (normal CDF), isotropic Gaussians in any
        dimension (noncentral chi-square CDF), 1-D boxes and exponentials
        (interval overlap), and boxes in any dimension when the ball lies inside
        the box or misses it entirely.

        Args:
            x: Ball center, length d
            radii: Positive radii

        Returns:
            Array of masses in [0, 1], same shape as radii
        """
        points, _ = self._as_points(x)
        center = points[0]
        r = np.asarray(radii, dtype=float)
        if np.any(r <= 0) or not np.all(np.isfinite(r)):
            raise ValueError("Ball radii must be finite and positive")
        masses = np.full(r.shape, np.nan)

        match self.family:
            case DensityFamily.GAUSSIAN if self.dim == 1:
                sigma = float(self.marginal_std[0])
                a = (center[0] - r - self.mean[0]) / sigma
                b = (center[0] + r - self.mean[0]) / sigma
                # upper tail through survival functions to keep precision
                masses = np.where(
                    a > 0, stats.norm.sf(a) - stats.norm.sf(b), stats.norm.cdf(b) - stats.norm.cdf(a)
                )
            case DensityFamily.GAUSSIAN if self.isotropic_variance is not None:
                var = self.isotropic_variance
                offset = float(np.sum((center - self.mean) ** 2)) / var
                scaled = r**2 / var
                if offset == 0.0:
                    masses = stats.chi2.cdf(scaled, self.dim)
                else:
                    masses = stats.ncx2.cdf(scaled, self.dim, offset)
            case DensityFamily.UNIFORM_BOX if self.dim == 1:
                lo = np.maximum(center[0] - r, self.lower[0])
                hi = np.minimum(center[0] + r, self.upper[0])
                masses = np.maximum(hi - lo, 0.0) / (self.upper[0] - self.lower[0])
            case DensityFamily.UNIFORM_BOX:
                gap = np.maximum(np.maximum(self.lower - center, center - self.upper), 0.0)
                distance = float(np.sqrt(np.sum(gap**2)))
                slack = float(np.min(np.minimum(center - self.lower, self.upper - center)))
                inside = r <= slack
                log_ball = log_unit_ball_volume(self.dim) + self.dim * np.log(r)
                masses = np.where(inside, np.exp(log_ball - self.log_volume), masses)
                masses = np.where(r <= distance, 0.0, masses)
            case DensityFamily.EXPONENTIAL:
                lo = np.maximum(center[0] - r, 0.0)
                hi = np.maximum(center[0] + r, 0.0)
                masses = np.exp(-self.rate * lo) * -np.expm1(-self.rate * (hi - lo))

        return np.clip(np.asarray(masses, dtype=float), 0.0, 1.0)

    def ball_mass_exact(self, x: npt.ArrayLike, r: float) -> float | None:
        """Exact ∫_{B(x,r)} f when a closed form exists, else None.

        Args:
            x: Ball center
            r: Radius, > 0

        Returns:
            Mass in [0, 1], or None when the caller must fall back to Monte Carlo

        Example:
            >>> box = AnalyticDensity(UniformBoxSpec(lower=[0.0], upper=[1.0]))
            >>> box.ball_mass_exact([0.0], 0.5)
            0.5
        """
        mass = float(self.ball_masses(x, np.array([r]))[0])
        return None if math.isnan(mass) else mass


def parse_density_spec(data: object) -> AnalyticDensity:
    """Validate a density document and build the density.

    Args:
        data: Parsed JSON/YAML document

    Returns:
        AnalyticDensity for the document

    Raises:
        DensitySpecError: If the document is invalid; ``field`` names the failing field
    """
    try:
        spec = density_spec_adapter.validate_python(data)
    except ValidationError as e:
        error = e.errors()[0]
        loc = error["loc"]
        if error["type"] in ("union_tag_not_found", "union_tag_invalid"):
            field = "family"
        elif len(loc) > 1:
            field = ".".join(str(part) for part in loc[1:])
        else:
            field = None
        raise DensitySpecError(error["msg"], field=field) from e

    logger.debug(f"Parsed {spec.family} density of dimension {spec.dim}")
    return AnalyticDensity(spec)
