"""Entropy estimate model."""

from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from entrokl.models.base import NnMethod


class EntropyEstimate(BaseModel):
    """The nearest-neighbor entropy estimate H_N with its decomposition.

    H_N = d·log ρ̄ + log V_d + γ + log(N-1) is also the mean of the per-point
    contributions ζ_i(N) = log(ρ_i^d · V_d · γ̃ · (N-1)).

    Attributes:
        h_n: Estimate H_N in nats
        n: Sample size N
        dim: Dimension d
        log_rho_bar: (1/N)·Σ log ρ_i
        zeta: Read-only array of the N contributions ζ_i(N)
        method: Backend that produced the distances
        source_tag: Provenance of the underlying sample
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    h_n: float
    n: int
    dim: int
    log_rho_bar: float
    zeta: np.ndarray
    method: NnMethod
    source_tag: str = ""

    @field_validator("zeta", mode="before")
    @classmethod
    def validate_zeta(cls, value: object) -> np.ndarray:
        """Coerce to a read-only 1-D float array."""
        arr = np.array(value, dtype=float, copy=True)
        if arr.ndim != 1:
            raise ValueError("zeta must be one-dimensional")
        arr.setflags(write=False)
        return arr
