"""Sample and nearest-neighbor models.

A SampleSet is the N×d batch of observations; NnDistances holds, for each
observation, the Euclidean distance to its nearest other observation.
"""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from entrokl.models.base import NnMethod


def _frozen_array(values: object, dtype: type) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


class SampleSet(BaseModel):
    """An immutable batch of N observation points in R^d.

    One-dimensional input is read as N points in d = 1.

    Attributes:
        points: Read-only float array with N rows and d columns
        source_tag: Free-form provenance string (file name, density and seed, ...)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    points: np.ndarray
    source_tag: str = ""

    @field_validator("points", mode="before")
    @classmethod
    def validate_points(cls, value: object) -> np.ndarray:
        """Coerce to a read-only 2-D float array and check shape and finiteness.

        Raises:
            ValueError: If N < 2, d < 1, or any coordinate is NaN/±∞
        """
        arr = np.asarray(value, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, np.newaxis]
        if arr.ndim != 2:
            raise ValueError(f"points must be a 2-D array, got {arr.ndim} dimensions")
        if arr.shape[0] < 2:
            raise ValueError(f"A sample needs at least 2 points, got {arr.shape[0]}")
        if arr.shape[1] < 1:
            raise ValueError("Points must have at least one coordinate")
        if not np.all(np.isfinite(arr)):
            raise ValueError("All coordinates must be finite")
        return _frozen_array(arr, float)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def n(self) -> int:
        """Number of points N."""
        return int(self.points.shape[0])

    @computed_field  # type: ignore[prop-decorator]
    @property
    def dim(self) -> int:
        """Dimension d of each point."""
        return int(self.points.shape[1])


class NnDistances(BaseModel):
    """Per-point nearest-neighbor distances of a SampleSet.

    Attributes:
        rho: Read-only array of N non-negative distances ρ_i
        neighbor: Index of the neighbor that realises ρ_i
        method: Backend that produced the distances
        duplicate_indices: Pairs (i, j), i < j, of coincident points
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho: np.ndarray
    neighbor: np.ndarray
    method: NnMethod
    duplicate_indices: list[tuple[int, int]] = Field(default_factory=list)

    @field_validator("rho", mode="before")
    @classmethod
    def validate_rho(cls, value: object) -> np.ndarray:
        """Coerce to a read-only 1-D float array of non-negative entries."""
        arr = np.asarray(value, dtype=float)
        if arr.ndim != 1:
            raise ValueError("rho must be one-dimensional")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("rho entries must be finite and non-negative")
        return _frozen_array(arr, float)

    @field_validator("neighbor", mode="before")
    @classmethod
    def validate_neighbor(cls, value: object) -> np.ndarray:
        """Coerce to a read-only integer index array."""
        return _frozen_array(value, np.intp)

    @model_validator(mode="after")
    def validate_consistency(self) -> NnDistances:
        """Check array lengths agree and duplicates match zero distances.

        Raises:
            ValueError: If rho and neighbor differ in length, or duplicate_indices
                is empty while some ρ_i = 0 (or vice versa)
        """
        if self.rho.shape != self.neighbor.shape:
            raise ValueError("rho and neighbor must have the same length")
        has_zero = bool(np.any(self.rho == 0.0))
        if has_zero != bool(self.duplicate_indices):
            raise ValueError("duplicate_indices must be non-empty exactly when some rho is 0")
        return self

    @property
    def n(self) -> int:
        """Number of points the distances belong to."""
        return int(self.rho.shape[0])

    @property
    def has_duplicates(self) -> bool:
        """Whether any two sample points coincide."""
        return bool(self.duplicate_indices)
