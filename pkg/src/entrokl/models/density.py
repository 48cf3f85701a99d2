"""Density document models.

These models are the validated form of the density JSON documents accepted
by the CLI. Field names are fixed by the document format.
"""

from __future__ import annotations

from typing import Annotated, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationInfo, field_validator

_SYMMETRY_TOL = 1e-12
_CONDITION_FLOOR = 1e-12


class _SpecBase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)


class GaussianSpec(_SpecBase):
    """A nondegenerate multivariate normal N(ν, Σ).

    Attributes:
        family: Always "gaussian"
        mean: Mean vector ν (length d ≥ 1)
        cov: Covariance matrix Σ, d×d, symmetric positive-definite
    """

    family: Literal["gaussian"] = "gaussian"
    mean: list[float] = Field(min_length=1)
    cov: list[list[float]]

    @field_validator("cov")
    @classmethod
    def validate_cov(cls, cov: list[list[float]], info: ValidationInfo) -> list[list[float]]:
        """Validate shape, symmetry and conditioning of Σ.

        Raises:
            ValueError: If Σ is not d×d, not symmetric within 1e-12, or its smallest
                eigenvalue is below 1e-12 times its largest
        """
        mean = info.data.get("mean")
        matrix = np.asarray(cov, dtype=float)
        if mean is not None and matrix.shape != (len(mean), len(mean)):
            raise ValueError(
                f"cov must be {len(mean)}x{len(mean)} to match mean, got shape {matrix.shape}"
            )
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("cov must be a square matrix")
        scale = max(1.0, float(np.max(np.abs(matrix))))
        if np.max(np.abs(matrix - matrix.T)) > _SYMMETRY_TOL * scale:
            raise ValueError("cov must be symmetric")
        eigenvalues = np.linalg.eigvalsh(matrix)
        if eigenvalues[0] <= 0 or eigenvalues[0] < _CONDITION_FLOOR * eigenvalues[-1]:
            raise ValueError("cov must be positive-definite and not near-singular")
        return cov

    @property
    def dim(self) -> int:
        """Dimension d."""
        return len(self.mean)


class UniformBoxSpec(_SpecBase):
    """The uniform law on the box [lower, upper] ⊂ R^d.

    Attributes:
        family: Always "uniform_box"
        lower: Lower corner
        upper: Upper corner, strictly above lower in every coordinate
    """

    family: Literal["uniform_box"] = "uniform_box"
    lower: list[float] = Field(min_length=1)
    upper: list[float] = Field(min_length=1)

    @field_validator("upper")
    @classmethod
    def validate_upper(cls, upper: list[float], info: ValidationInfo) -> list[float]:
        """Validate that upper matches lower in length and exceeds it coordinatewise.

        Raises:
            ValueError: If lengths differ or some upper[k] <= lower[k]
        """
        lower = info.data.get("lower")
        if lower is None:
            return upper
        if len(lower) != len(upper):
            raise ValueError(f"upper has length {len(upper)} but lower has length {len(lower)}")
        if any(u <= lo for lo, u in zip(lower, upper, strict=True)):
            raise ValueError("upper must exceed lower in every coordinate")
        return upper

    @property
    def dim(self) -> int:
        """Dimension d."""
        return len(self.lower)


class ExponentialSpec(_SpecBase):
    """The exponential law with rate λ on [0, ∞).

    Attributes:
        family: Always "exponential"
        rate: Rate λ > 0
    """

    family: Literal["exponential"] = "exponential"
    rate: float = Field(gt=0)

    @property
    def dim(self) -> int:
        """Dimension d, always 1."""
        return 1


DensitySpec = Annotated[
    GaussianSpec | UniformBoxSpec | ExponentialSpec, Field(discriminator="family")
]

density_spec_adapter: TypeAdapter[GaussianSpec | UniformBoxSpec | ExponentialSpec] = TypeAdapter(
    DensitySpec
)
