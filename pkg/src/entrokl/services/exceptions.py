"""Custom exceptions for service layer operations.

This module defines domain-specific exceptions for invalid inputs, coincident
sample points, density documents, quadrature and simulation failures.
"""

from __future__ import annotations


class EntroklError(Exception):
    """Base exception for all entrokl errors.

    Catching this exception will catch every error raised deliberately by
    the package.
    """

    pass


class SampleError(EntroklError, ValueError):
    """A sample cannot be used for estimation."""

    pass


class DuplicatePointsError(SampleError):
    """Two or more sample points coincide, so some ρ_i = 0 and log ρ_i is undefined.

    Attributes:
        duplicate_indices: Index pairs (i, j), i < j, at distance 0
    """

    def __init__(self, duplicate_indices: list[tuple[int, int]], message: str | None = None):
        self.duplicate_indices = list(duplicate_indices)
        shown = ", ".join(f"({i}, {j})" for i, j in self.duplicate_indices[:20])
        if len(self.duplicate_indices) > 20:
            shown += ", ..."
        super().__init__(message or f"Coincident sample points at index pairs: {shown}")


class DensitySpecError(EntroklError, ValueError):
    """A density document is malformed or violates a family invariant.

    Attributes:
        field: Name of the failing field, or None when the document itself is unreadable
    """

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class DimensionMismatchError(EntroklError, ValueError):
    """A point has a different length from the density or sample dimension."""

    pass


class OutsideSupportError(EntroklError, ValueError):
    """A query point lies where f(x) = 0, so the exponential limit law is undefined."""

    pass


class UnsupportedDensityError(EntroklError, ValueError):
    """An operation was requested for a density family it does not cover."""

    pass


class QuadratureError(EntroklError):
    """Adaptive quadrature did not converge to the requested tolerance."""

    pass


class SimulationError(EntroklError):
    """A simulated nearest-neighbor statistic was exactly zero.

    Attributes:
        seed: Master seed of the run
        rep: Replication index of the zero realization
    """

    def __init__(self, message: str, seed: int, rep: int):
        self.seed = seed
        self.rep = rep
        super().__init__(f"{message} (seed={seed}, rep={rep})")


class PointsFileError(EntroklError, ValueError):
    """A points CSV file could not be parsed.

    Attributes:
        line: 1-based line number of the offending row, or None for file-level errors
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ExperimentCellError(EntroklError):
    """A single (n, rep) cell of a convergence study failed.

    Attributes:
        n: Sample size of the cell
        rep: Replication index
        seed: Derived seed of the cell
    """

    def __init__(self, message: str, n: int, rep: int, seed: int):
        self.n = n
        self.rep = rep
        self.seed = seed
        super().__init__(f"n={n} rep={rep} seed={seed}: {message}")
