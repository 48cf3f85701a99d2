"""Base types and enums used across multiple models.

This module contains the small closed vocabularies shared by samples,
estimates, densities and reports.
"""

from __future__ import annotations

from enum import Enum


class NnMethod(str, Enum):
    """Nearest-neighbor search backend.

    Attributes:
        BRUTE: Exact all-pairs scan, O(N²d)
        TREE: Exact kd-tree search (median splits, leaf size 16)
    """

    BRUTE = "brute"
    TREE = "tree"


class DensityFamily(str, Enum):
    """Built-in analytic density families.

    Attributes:
        GAUSSIAN: Nondegenerate multivariate normal
        UNIFORM_BOX: Uniform law on an axis-aligned box
        EXPONENTIAL: One-dimensional exponential law
    """

    GAUSSIAN = "gaussian"
    UNIFORM_BOX = "uniform_box"
    EXPONENTIAL = "exponential"


class SupportKind(str, Enum):
    """Shape of the support S(f) = {x: f(x) > 0}.

    Attributes:
        ALL_SPACE: S(f) = R^d
        BOX: S(f) is a closed axis-aligned box
        HALF_LINE: S(f) = [0, ∞)
    """

    ALL_SPACE = "all_space"
    BOX = "box"
    HALF_LINE = "half_line"


class LocalKind(str, Enum):
    """Local ball-average functionals of a density.

    Attributes:
        AVERAGE: I_f(x, r), the mean of f over B(x, r)
        MAXIMAL: M_f(x, R), the supremum of I_f(x, r) over r ∈ (0, R]
        MINIMAL: m_f(x, R), the infimum of I_f(x, r) over r ∈ (0, R]
    """

    AVERAGE = "I"
    MAXIMAL = "M"
    MINIMAL = "m"


class FunctionalKind(str, Enum):
    """Global integral functionals whose finiteness drives consistency.

    Attributes:
        K: Moment of G(|log ρ|) raised to 1 + ε₀
        K2: Moment of G(log² ρ) raised to 1 + ε₀
        Q: Integral of M_f^{ε₁}
        T: Integral of m_f^{-ε₂}
    """

    K = "K"
    K2 = "K2"
    Q = "Q"
    T = "T"
