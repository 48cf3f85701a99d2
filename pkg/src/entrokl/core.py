"""Shared mathematical constants and elementary functions.

Everything here is a pure function of its inputs. All logarithms are natural,
so every entropy quantity in the package is expressed in nats.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.special import gammaln

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class MathConstants:
    """Constants entering the nearest-neighbor entropy estimate.

    Attributes:
        euler_gamma: Euler-Mascheroni constant γ, -∫ e^{-t} log t dt over (0, ∞)
        gamma_tilde: exp(γ), the scale of the limiting exponential law
    """

    euler_gamma: float = EULER_GAMMA
    gamma_tilde: float = math.exp(EULER_GAMMA)


CONSTANTS = MathConstants()


def _validate_dimension(d: object) -> int:
    if isinstance(d, bool) or not isinstance(d, numbers.Integral):
        raise ValueError(f"Dimension must be an integer, got {d!r}")
    if d < 1:
        raise ValueError(f"Dimension must be at least 1, got {d}")
    return int(d)


def log_unit_ball_volume(d: int) -> float:
    """Natural log of the Lebesgue volume of the unit Euclidean ball in R^d.

    Args:
        d: Dimension (integer ≥ 1)

    Returns:
        (d/2)·log π - log Γ(d/2 + 1)

    Raises:
        ValueError: If d is not an integer ≥ 1
    """
    d = _validate_dimension(d)
    return 0.5 * d * math.log(math.pi) - float(gammaln(0.5 * d + 1.0))


def unit_ball_volume(d: int) -> float:
    """Volume V_d = π^{d/2} / Γ(d/2 + 1) of the unit ball in R^d.

    Computed through log-Gamma so large dimensions do not overflow.

    Args:
        d: Dimension (integer ≥ 1)

    Returns:
        Strictly positive ball volume

    Raises:
        ValueError: If d is not an integer ≥ 1

    Examples:
        >>> unit_ball_volume(1)
        2.0
        >>> round(unit_ball_volume(3), 7)
        4.1887902
    """
    return math.exp(log_unit_ball_volume(d))


def g_function(t: float | npt.ArrayLike) -> float | np.ndarray:
    """The convex gauge G: 0 on [0, 1), t·log t on [1, ∞).

    There is no smoothing at t = 1; G' jumps there.

    Args:
        t: Non-negative finite scalar or array

    Returns:
        G(t), with the same shape as the input (a float for scalar input)

    Raises:
        ValueError: If any entry is negative or non-finite
    """
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("G is defined for finite arguments only")
    if np.any(arr < 0):
        raise ValueError("G is defined on [0, ∞) only")

    safe = np.maximum(arr, 1.0)
    out = np.where(arr >= 1.0, safe * np.log(safe), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def bernoulli_tail_bound(x: float, n: int, eps: float) -> tuple[float, float]:
    """Both sides of 1 - (1 - x)^n ≤ (n·x)^ε for x ∈ [0, 1], n ≥ 1, ε ∈ (0, 1].

    Args:
        x: Success probability in [0, 1]
        n: Number of trials (≥ 1)
        eps: Exponent in (0, 1]

    Returns:
        Tuple (lhs, rhs)

    Raises:
        ValueError: If an argument is out of range
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    lhs = 1.0 - (1.0 - x) ** n
    rhs = (n * x) ** eps
    return lhs, rhs


def log_exp_variance() -> float:
    """Variance of log η for η ~ Exp(1), equal to π²/6."""
    return math.pi**2 / 6.0
