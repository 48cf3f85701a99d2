"""Local ball averages and the integral conditions built on them.

I_f(x, r) is the mean of f over the ball B(x, r); M_f(x, R) and m_f(x, R) are
its supremum and infimum over r ∈ (0, R]. The global functionals K_f, K_{f,2},
Q_f and T_f are estimated by Monte Carlo, and the moment, boundedness and
minorization conditions are checked against their closed forms.

Ball masses come from the density's closed forms when available, otherwise
from Monte Carlo over mc_n points spread uniformly in the ball. For a given
(x, seed) the same unit-ball points are scaled to every radius, so estimates
of I_f(x, ·) vary smoothly with r.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections.abc import Callable

import numpy as np
import numpy.typing as npt
from scipy import integrate

from entrokl.core import g_function, log_unit_ball_volume
from entrokl.models import (
    DIVERGENT,
    BoundednessReport,
    ConditionAReport,
    DensityFamily,
    FunctionalEstimate,
    FunctionalKind,
    IdentityCheck,
    LocalFunctionalValue,
    LocalKind,
    LogIntegrabilityReport,
    LogMomentIdentityReport,
    MinorizationProbe,
    MinorizationReport,
)
from entrokl.services.densities import AnalyticDensity
from entrokl.services.exceptions import QuadratureError, UnsupportedDensityError
from entrokl.services.parallel import map_ordered
from entrokl.services.seeding import derive_seed, make_rng

logger = logging.getLogger(__name__)

RADIUS_FLOOR = 1e-4
REFINE_TOL = 1e-3
_RADIUS_BLOCK = 64

_OUTER_STREAM = 0
_INNER_STREAM = 1


# Ball averages


def unit_ball_points(dim: int, mc_n: int, seed: int) -> np.ndarray:
    """Uniform points in the unit ball: Gaussian direction times U^{1/d}.

    Args:
        dim: Dimension d
        mc_n: Number of points
        seed: Seed of the point set

    Returns:
        (mc_n, d) array
    """
    rng = make_rng(seed)
    direction = rng.standard_normal((mc_n, dim))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    radius = rng.random((mc_n, 1)) ** (1.0 / dim)
    return direction * radius


def ball_averages(
    density: AnalyticDensity, x: npt.ArrayLike, radii: np.ndarray, mc_n: int, seed: int
) -> tuple[np.ndarray, np.ndarray, bool]:
    """I_f(x, r) for each radius, with Monte Carlo standard errors.

    Args:
        density: Density f
        x: Ball center
        radii: Positive radii
        mc_n: Monte Carlo points per radius when no closed form exists
        seed: Seed of the shared unit-ball points

    Returns:
        Tuple (values, std_errors, all_exact)

    Raises:
        ValueError: If a closed form is missing and mc_n < 1
    """
    center = np.asarray(x, dtype=float).reshape(-1)
    radii = np.asarray(radii, dtype=float)
    d = density.dim

    masses = density.ball_masses(center, radii)
    log_volumes = log_unit_ball_volume(d) + d * np.log(radii)
    values = masses / np.exp(log_volumes)
    std_errors = np.zeros_like(values)

    missing = np.flatnonzero(np.isnan(masses))
    if missing.size == 0:
        return values, std_errors, True
    if mc_n < 1:
        raise ValueError("mc_n must be positive when no closed-form ball mass is available")

    unit = unit_ball_points(d, mc_n, seed)
    for start in range(0, missing.size, _RADIUS_BLOCK):
        block = missing[start : start + _RADIUS_BLOCK]
        points = center + radii[block, np.newaxis, np.newaxis] * unit[np.newaxis]
        f = np.asarray(density.pdf(points.reshape(-1, d))).reshape(block.size, mc_n)
        values[block] = f.mean(axis=1)
        if mc_n > 1:
            std_errors[block] = f.std(axis=1, ddof=1) / math.sqrt(mc_n)

    return values, std_errors, False


def local_average(
    density: AnalyticDensity, x: npt.ArrayLike, r: float, mc_n: int = 4096, seed: int = 0
) -> LocalFunctionalValue:
    """I_f(x, r) = ∫_{B(x,r)} f / (r^d·V_d).

    Args:
        density: Density f
        x: Ball center
        r: Radius, > 0
        mc_n: Monte Carlo points when the ball mass has no closed form
        seed: Seed of the Monte Carlo points

    Returns:
        LocalFunctionalValue of kind I

    Raises:
        ValueError: If r <= 0, or mc_n = 0 with no closed form available

    Example:
        >>> box = AnalyticDensity(UniformBoxSpec(lower=[0.0], upper=[1.0]))
        >>> local_average(box, [0.5], 0.25).value
        1.0
    """
    if not r > 0:
        raise ValueError(f"r must be positive, got {r}")
    values, errors, exact = ball_averages(density, x, np.array([r]), mc_n, seed)
    return LocalFunctionalValue(
        x=np.asarray(x, dtype=float).reshape(-1).tolist(),
        r_or_R=r,
        value=float(values[0]),
        kind=LocalKind.AVERAGE,
        grid_points=1,
        used_exact_ball_mass=exact,
        std_error=float(errors[0]),
    )


def _extremal(
    density: AnalyticDensity,
    x: npt.ArrayLike,
    R: float,
    grid: int,
    mc_n: int,
    seed: int,
    grid_refinements: int,
    kind: LocalKind,
) -> LocalFunctionalValue:
    if not R > 0:
        raise ValueError(f"R must be positive, got {R}")
    if grid < 2:
        raise ValueError(f"grid must be at least 2, got {grid}")

    center = np.asarray(x, dtype=float).reshape(-1)
    pick = np.argmax if kind is LocalKind.MAXIMAL else np.argmin
    # the r -> 0 limit of I_f(x, r) is f(x) at interior points
    limit = density.pdf(center) if density.is_interior(center) else None

    def search(size: int) -> tuple[float, float, bool]:
        radii = np.geomspace(RADIUS_FLOOR * R, R, size)
        values, errors, exact = ball_averages(density, center, radii, mc_n, seed)
        best = int(pick(values))
        value, error = float(values[best]), float(errors[best])
        if limit is not None and pick(np.array([value, limit])) == 1:
            value, error = limit, 0.0
        return value, error, exact

    size = grid
    value, error, exact = search(size)
    converged = grid_refinements == 0
    for _ in range(grid_refinements):
        size = 2 * size - 1
        refined, error, exact = search(size)
        change = abs(refined - value) / max(abs(value), np.finfo(float).tiny)
        value = refined
        if change < REFINE_TOL:
            converged = True
            break
    if not converged:
        logger.warning(
            f"{kind.value}_f({center.tolist()}, {R}) still moving after "
            f"{grid_refinements} grid refinements"
        )

    return LocalFunctionalValue(
        x=center.tolist(),
        r_or_R=R,
        value=value,
        kind=kind,
        grid_points=size + (1 if limit is not None else 0),
        used_exact_ball_mass=exact,
        std_error=error,
    )


def maximal_function(
    density: AnalyticDensity,
    x: npt.ArrayLike,
    R: float,
    grid: int = 64,
    mc_n: int = 4096,
    seed: int = 0,
    grid_refinements: int = 4,
) -> LocalFunctionalValue:
    """M_f(x, R) = sup over r ∈ (0, R] of I_f(x, r).

    The supremum is taken over f(x) (the r → 0 limit, used at interior points)
    and I_f(x, r_k) on `grid` radii log-spaced on [10⁻⁴·R, R]. The grid is
    refined (2·grid - 1 radii, nesting the previous grid) until the extremum
    moves by less than 0.1%, at most grid_refinements times.

    Args:
        density: Density f
        x: Center
        R: Radius cap, > 0
        grid: Initial number of radii, ≥ 2
        mc_n: Monte Carlo points per radius when no closed form exists
        seed: Seed of the shared unit-ball points
        grid_refinements: Maximum number of grid doublings

    Returns:
        LocalFunctionalValue of kind M
    """
    return _extremal(density, x, R, grid, mc_n, seed, grid_refinements, LocalKind.MAXIMAL)


def minimal_function(
    density: AnalyticDensity,
    x: npt.ArrayLike,
    R: float,
    grid: int = 64,
    mc_n: int = 4096,
    seed: int = 0,
    grid_refinements: int = 4,
) -> LocalFunctionalValue:
    """m_f(x, R) = inf over r ∈ (0, R] of I_f(x, r), searched like maximal_function."""
    return _extremal(density, x, R, grid, mc_n, seed, grid_refinements, LocalKind.MINIMAL)


# Integrands


def log_distance_gauge(rho: npt.ArrayLike, squared: bool = False) -> float | np.ndarray:
    """G(|log ρ|), or G(log² ρ) when squared, for distances ρ > 0.

    Raises:
        ValueError: If some ρ is not positive
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise ValueError("Distances must be positive")
    log_rho = np.log(rho)
    return g_function(log_rho**2 if squared else np.abs(log_rho))


def abs_log_power(rho: npt.ArrayLike, p: float) -> float | np.ndarray:
    """|log ρ|^p for distances ρ > 0."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise ValueError("Distances must be positive")
    out = np.abs(np.log(rho)) ** p
    return float(out) if out.ndim == 0 else out


# Global functionals


def _mean_and_error(values: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(values))
    if values.size < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1) / math.sqrt(values.size))


def _summarize(
    kind: FunctionalKind,
    params: dict[str, float],
    contributions: np.ndarray,
    n_inner: int,
    seed: int,
    flags: list[str],
) -> FunctionalEstimate:
    if DIVERGENT not in flags and not np.all(np.isfinite(contributions)):
        flags.append(DIVERGENT)
    if DIVERGENT in flags:
        logger.warning(f"{kind.value} estimate flagged divergent with params {params}")
        value, std_error = None, 0.0
    else:
        value, std_error = _mean_and_error(contributions)
    return FunctionalEstimate(
        kind=kind,
        params=params,
        value=value,
        std_error=std_error,
        n_outer=int(contributions.size),
        n_inner=n_inner,
        seed=seed,
        flags=flags,
    )


def functional_K(
    density: AnalyticDensity,
    eps0: float = 0.5,
    n_outer: int = 2000,
    n_inner: int = 2000,
    seed: int = 0,
    squared: bool = False,
    redraw_cap: int = 100,
    workers: int = 1,
) -> FunctionalEstimate:
    """Nested Monte Carlo estimate of K_f(ε₀), or K_{f,2}(ε₀) when squared.

    For each of n_outer draws x ~ f, the inner mean of G(|log ρ(x, y)|) (or
    G(log² ρ)) over n_inner draws y ~ f is raised to 1 + ε₀; the estimate is
    the outer mean. A y coinciding with x is redrawn, at most redraw_cap times
    per outer point; past the cap the estimate is flagged divergent.

    Args:
        density: Density f
        eps0: Exponent ε₀ > 0
        n_outer: Outer draws, ≥ 100
        n_inner: Inner draws per outer point, ≥ 100
        seed: Master seed; outer point i uses the sub-stream (seed, 1, i)
        squared: Use G(log² ρ) instead of G(|log ρ|)
        redraw_cap: Maximum redraw rounds per outer point
        workers: Threads over outer points

    Returns:
        FunctionalEstimate of kind K or K2

    Raises:
        ValueError: If eps0 <= 0 or a sample count is below 100
    """
    if not eps0 > 0:
        raise ValueError(f"eps0 must be positive, got {eps0}")
    if n_outer < 100 or n_inner < 100:
        raise ValueError(f"n_outer and n_inner must be at least 100, got {n_outer} and {n_inner}")

    kind = FunctionalKind.K2 if squared else FunctionalKind.K
    xs = density.draw(make_rng(seed, _OUTER_STREAM), n_outer)

    def inner_mean(i: int) -> tuple[float, int, bool]:
        rng = make_rng(seed, _INNER_STREAM, i)
        ys = density.draw(rng, n_inner)
        rho = np.linalg.norm(ys - xs[i], axis=1)
        redrawn = 0
        for _ in range(redraw_cap):
            zero = rho == 0.0
            if not zero.any():
                break
            redrawn += int(zero.sum())
            ys[zero] = density.draw(rng, int(zero.sum()))
            rho[zero] = np.linalg.norm(ys[zero] - xs[i], axis=1)
        if np.any(rho == 0.0):
            return math.nan, redrawn, True
        return float(np.mean(log_distance_gauge(rho, squared=squared))), redrawn, False

    results = map_ordered(inner_mean, range(n_outer), workers)
    inner = np.array([r[0] for r in results])
    redrawn = sum(r[1] for r in results)
    flags: list[str] = []
    if redrawn:
        logger.warning(f"{kind.value}: redrew {redrawn} inner points coinciding with outer points")
        flags.append(f"coincident_redraws={redrawn}")
    if any(r[2] for r in results):
        flags.extend(["redraw_cap_exceeded", DIVERGENT])

    with np.errstate(over="ignore", invalid="ignore"):
        contributions = inner ** (1.0 + eps0)
    return _summarize(kind, {"eps0": eps0}, contributions, n_inner, seed, flags)


def _outer_points(
    density: AnalyticDensity, xs: npt.ArrayLike | None, n_outer: int, seed: int
) -> np.ndarray:
    if xs is not None:
        points = np.asarray(xs, dtype=float).reshape(-1, density.dim)
        if points.shape[0] < 1:
            raise ValueError("xs must contain at least one point")
        return points
    if n_outer < 1:
        raise ValueError(f"n_outer must be at least 1, got {n_outer}")
    return density.draw(make_rng(seed, _OUTER_STREAM), n_outer)


def functional_Q(
    density: AnalyticDensity,
    eps1: float = 0.5,
    R1: float = 1.0,
    n_outer: int = 1000,
    grid: int = 64,
    mc_n: int = 4096,
    seed: int = 0,
    xs: npt.ArrayLike | None = None,
    grid_refinements: int = 4,
    workers: int = 1,
) -> FunctionalEstimate:
    """Monte Carlo estimate of Q_f(ε₁, R₁) = ∫ M_f(x, R₁)^{ε₁} f(x) dx.

    Args:
        density: Density f
        eps1: Exponent ε₁ > 0
        R1: Radius cap R₁ > 0
        n_outer: Draws x ~ f (ignored when xs is given)
        grid: Initial radius grid of each maximal-function search
        mc_n: Ball-mass Monte Carlo points
        seed: Master seed; point i searches with seed derived from (seed, 1, i)
        xs: Optional fixed evaluation points replacing the draws
        grid_refinements: Maximum grid doublings
        workers: Threads over outer points

    Returns:
        FunctionalEstimate of kind Q
    """
    if not eps1 > 0:
        raise ValueError(f"eps1 must be positive, got {eps1}")
    if not R1 > 0:
        raise ValueError(f"R1 must be positive, got {R1}")

    points = _outer_points(density, xs, n_outer, seed)

    def contribution(i: int) -> float:
        sub_seed = derive_seed(seed, _INNER_STREAM, i)
        return maximal_function(density, points[i], R1, grid, mc_n, sub_seed, grid_refinements).value

    maxima = np.array(map_ordered(contribution, range(points.shape[0]), workers))
    with np.errstate(over="ignore"):
        contributions = maxima**eps1
    return _summarize(FunctionalKind.Q, {"eps1": eps1, "R1": R1}, contributions, mc_n, seed, [])


def functional_T(
    density: AnalyticDensity,
    eps2: float = 0.5,
    R2: float = 1.0,
    n_outer: int = 1000,
    grid: int = 64,
    mc_n: int = 4096,
    seed: int = 0,
    xs: npt.ArrayLike | None = None,
    grid_refinements: int = 4,
    workers: int = 1,
) -> FunctionalEstimate:
    """Monte Carlo estimate of T_f(ε₂, R₂) = ∫ m_f(x, R₂)^{-ε₂} f(x) dx.

    For a uniform box and no fixed xs, the draws are restricted to the points at
    distance more than R₂ from the boundary (flag "interior_restricted"), when
    that inner box is not empty. A zero minimal function marks the estimate
    divergent and names the first offending point.

    Args:
        density: Density f
        eps2: Exponent ε₂ ∈ (0, 1)
        R2: Radius cap R₂ > 0
        n_outer: Draws (ignored when xs is given)
        grid: Initial radius grid of each minimal-function search
        mc_n: Ball-mass Monte Carlo points
        seed: Master seed
        xs: Optional fixed evaluation points
        grid_refinements: Maximum grid doublings
        workers: Threads over outer points

    Returns:
        FunctionalEstimate of kind T

    Raises:
        ValueError: If eps2 is outside (0, 1) or R2 <= 0
    """
    if not 0.0 < eps2 < 1.0:
        raise ValueError(f"eps2 must lie in (0, 1), got {eps2}")
    if not R2 > 0:
        raise ValueError(f"R2 must be positive, got {R2}")

    flags: list[str] = []
    if xs is None and density.family is DensityFamily.UNIFORM_BOX:
        inner_lower, inner_upper = density.lower + R2, density.upper - R2
        if np.all(inner_lower < inner_upper):
            if n_outer < 1:
                raise ValueError(f"n_outer must be at least 1, got {n_outer}")
            rng = make_rng(seed, _OUTER_STREAM)
            points = rng.uniform(inner_lower, inner_upper, size=(n_outer, density.dim))
            flags.append("interior_restricted")
        else:
            logger.warning(f"Box too small to keep draws {R2} away from its boundary")
            points = _outer_points(density, None, n_outer, seed)
    else:
        points = _outer_points(density, xs, n_outer, seed)

    def minimum(i: int) -> float:
        sub_seed = derive_seed(seed, _INNER_STREAM, i)
        return minimal_function(density, points[i], R2, grid, mc_n, sub_seed, grid_refinements).value

    minima = np.array(map_ordered(minimum, range(points.shape[0]), workers))
    zero = np.flatnonzero(minima <= 0.0)
    if zero.size:
        flags.extend([DIVERGENT, f"offending_x={points[zero[0]].tolist()}"])
        contributions = np.full(minima.shape, np.inf)
    else:
        with np.errstate(over="ignore"):
            contributions = minima ** (-eps2)
    return _summarize(FunctionalKind.T, {"eps2": eps2, "R2": R2}, contributions, mc_n, seed, flags)


# Condition checks


def gaussian_probe_points(density: AnalyticDensity, n_probes: int, seed: int) -> np.ndarray:
    """Probe points drawn uniformly in ν ± 3·sqrt(diag Σ)."""
    if density.family is not DensityFamily.GAUSSIAN:
        raise UnsupportedDensityError("Probe boxes are defined for Gaussian densities only")
    half_width = 3.0 * density.marginal_std
    rng = make_rng(seed, _OUTER_STREAM)
    return rng.uniform(density.mean - half_width, density.mean + half_width, (n_probes, density.dim))


def check_gaussian_minorization(
    density: AnalyticDensity,
    R: float,
    xs: npt.ArrayLike,
    grid: int = 64,
    mc_n: int = 4096,
    seed: int = 0,
    grid_refinements: int = 4,
) -> MinorizationReport:
    """Check m_f(x, R) ≥ c·f(x), c = exp(-R²/(2·λ_min)), at each probe point.

    A probe passes when its margin m̂_f(x, R) - c·f(x) is at least minus three
    Monte Carlo standard errors (minus 1e-12·f(x) on the closed-form path).

    Args:
        density: A Gaussian density
        R: Radius cap, > 0
        xs: Probe points
        grid: Initial radius grid
        mc_n: Ball-mass Monte Carlo points
        seed: Master seed; probe i searches with seed derived from (seed, i)
        grid_refinements: Maximum grid doublings

    Returns:
        MinorizationReport with per-probe margins

    Raises:
        UnsupportedDensityError: If the density is not Gaussian
    """
    if density.family is not DensityFamily.GAUSSIAN:
        raise UnsupportedDensityError(
            f"Minorization check is defined for Gaussian densities, got {density.family.value}"
        )
    if not R > 0:
        raise ValueError(f"R must be positive, got {R}")

    c = math.exp(-(R**2) / (2.0 * density.lambda_min))
    points = np.asarray(xs, dtype=float).reshape(-1, density.dim)
    probes = []
    for i, x in enumerate(points):
        m = minimal_function(density, x, R, grid, mc_n, derive_seed(seed, i), grid_refinements)
        f_x = density.pdf(x)
        bound = c * f_x
        margin = m.value - bound
        tolerance = 3.0 * m.std_error + 1e-12 * f_x
        probes.append(
            MinorizationProbe(
                x=x.tolist(),
                m_hat=m.value,
                std_error=m.std_error,
                f_x=f_x,
                bound=bound,
                margin=margin,
                tolerance=tolerance,
                ok=margin >= -tolerance,
            )
        )

    passed = all(p.ok for p in probes)
    if not passed:
        logger.warning(f"Minorization failed at {sum(not p.ok for p in probes)} probe points")
    return MinorizationReport(
        R=R, c=c, lambda_min=density.lambda_min, probes=probes, passed=passed, seed=seed
    )


def _quad(
    fn: Callable[[float], float], a: float, b: float, quad_tol: float
) -> tuple[float, float, bool]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, error = integrate.quad(fn, a, b, epsabs=quad_tol * 1e-2, epsrel=1e-10, limit=500)
    converged = error <= quad_tol and not any(
        issubclass(w.category, integrate.IntegrationWarning) for w in caught
    )
    return float(value), float(error), converged


def verify_log_moment_identities(
    rate: float = 1.0, quad_tol: float = 1e-6, strict: bool = False
) -> LogMomentIdentityReport:
    """Verify both integration-by-parts identities for F(u) = 1 - exp(-λu).

    Near zero:  ∫_(0,1/e] (-log u)·log(-log u) dF(u) = ∫_(0,1/e] F(u)·(log(-log u) + 1)/u du
    In the tail: ∫_(e,∞) log u·log log u dF(u) = ∫_(e,∞) (1 - F(u))·(log log u + 1)/u du

    Each side is integrated by adaptive quadrature with dF(u) = λ·exp(-λu) du.

    Args:
        rate: Exponential rate λ > 0
        quad_tol: Required agreement of the two sides
        strict: Raise instead of reporting when quadrature does not converge

    Returns:
        LogMomentIdentityReport with both identities

    Raises:
        ValueError: If rate <= 0
        QuadratureError: In strict mode, if any integral did not converge
    """
    if not rate > 0:
        raise ValueError(f"rate must be positive, got {rate}")

    def density(u: float) -> float:
        return rate * math.exp(-rate * u)

    def cdf(u: float) -> float:
        return -math.expm1(-rate * u)

    sides = {
        "near_zero": (
            (lambda u: -math.log(u) * math.log(-math.log(u)) * density(u)),
            (lambda u: cdf(u) * (math.log(-math.log(u)) + 1.0) / u),
            0.0,
            math.exp(-1.0),
        ),
        "tail": (
            (lambda u: math.log(u) * math.log(math.log(u)) * density(u)),
            (lambda u: math.exp(-rate * u) * (math.log(math.log(u)) + 1.0) / u),
            math.e,
            math.inf,
        ),
    }

    checks = []
    for name, (lhs_fn, rhs_fn, a, b) in sides.items():
        lhs, lhs_error, lhs_ok = _quad(lhs_fn, a, b, quad_tol)
        rhs, rhs_error, rhs_ok = _quad(rhs_fn, a, b, quad_tol)
        converged = lhs_ok and rhs_ok
        if strict and not converged:
            raise QuadratureError(f"Quadrature for the {name} identity did not converge (rate={rate})")
        abs_diff = abs(lhs - rhs)
        checks.append(
            IdentityCheck(
                name=name,
                lhs=lhs,
                rhs=rhs,
                abs_diff=abs_diff,
                lhs_error=lhs_error,
                rhs_error=rhs_error,
                converged=converged,
                ok=converged and abs_diff <= quad_tol,
            )
        )

    return LogMomentIdentityReport(
        rate=rate, quad_tol=quad_tol, identities=checks, passed=all(c.ok for c in checks)
    )


def check_condition_A(
    density: AnalyticDensity, p: float = 2.0, n_pairs: int = 100_000, seed: int = 0
) -> ConditionAReport:
    """Monte Carlo estimate of E|log ρ(X₁, X₂)|^p with a tail-stability verdict.

    The estimate over all n_pairs independent pairs and over the first half of
    them must agree within three joint standard errors.

    Raises:
        ValueError: If p <= 1 or n_pairs < 4
    """
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    if n_pairs < 4:
        raise ValueError(f"n_pairs must be at least 4, got {n_pairs}")

    rng = make_rng(seed)
    first = density.draw(rng, n_pairs)
    second = density.draw(rng, n_pairs)
    rho = np.linalg.norm(first - second, axis=1)

    if np.any(rho == 0.0):
        logger.warning("Coincident pairs in the condition A draw")
        return ConditionAReport(
            p=p,
            n_pairs=n_pairs,
            value=None,
            std_error=0.0,
            half_value=None,
            half_std_error=0.0,
            stable=False,
            passed=False,
            seed=seed,
            flags=["coincident_pairs", DIVERGENT],
        )

    with np.errstate(over="ignore"):
        values = abs_log_power(rho, p)
    value, std_error = _mean_and_error(values)
    half_value, half_std_error = _mean_and_error(values[: n_pairs // 2])

    flags: list[str] = []
    finite = math.isfinite(value) and math.isfinite(std_error)
    joint = math.hypot(std_error, half_std_error)
    stable = finite and abs(value - half_value) <= 3.0 * joint
    if not finite:
        flags.append(DIVERGENT)
    elif not stable:
        flags.append("unstable_tail")

    return ConditionAReport(
        p=p,
        n_pairs=n_pairs,
        value=value if finite else None,
        std_error=std_error if finite else 0.0,
        half_value=half_value if finite else None,
        half_std_error=half_std_error if finite else 0.0,
        stable=stable,
        passed=stable,
        seed=seed,
        flags=flags,
    )


def check_condition_B(
    density: AnalyticDensity, n_probe: int = 10_000, seed: int = 0
) -> BoundednessReport:
    """Check that f is bounded: reports M = sup f and the largest probed value."""
    bound = density.sup_density()
    probes = density.draw(make_rng(seed), n_probe)
    extreme = float(np.max(density.pdf(probes)))
    passed = math.isfinite(bound) and extreme <= bound * (1.0 + 1e-12)
    return BoundednessReport(
        condition="B", bound=bound, probe_extreme=extreme, n_probe=n_probe, passed=passed, seed=seed
    )


def check_condition_C1(
    density: AnalyticDensity, n_probe: int = 10_000, seed: int = 0
) -> BoundednessReport:
    """Check that f is bounded away from zero on its support (m > 0)."""
    bound = density.inf_on_support()
    probes = density.draw(make_rng(seed), n_probe)
    extreme = float(np.min(density.pdf(probes)))
    flags = [] if bound > 0 else ["unbounded_support"]
    passed = bound > 0 and extreme >= bound * (1.0 - 1e-12)
    return BoundednessReport(
        condition="C1",
        bound=bound,
        probe_extreme=extreme,
        n_probe=n_probe,
        passed=passed,
        seed=seed,
        flags=flags,
    )


def check_log_integrability(
    density: AnalyticDensity,
    eps1: float = 0.5,
    R1: float = 1.0,
    eps2: float = 0.5,
    R2: float = 1.0,
    n_outer: int = 1000,
    grid: int = 64,
    mc_n: int = 4096,
    seed: int = 0,
    workers: int = 1,
) -> LogIntegrabilityReport:
    """Compare ∫|log f|·f with the bound Q_f(ε₁, R₁)/ε₁ + T_f(ε₂, R₂)/ε₂.

    The bound follows from log f ≤ M_f^{ε₁}/ε₁ where f ≥ 1 and
    -log f ≤ m_f^{-ε₂}/ε₂ where f < 1. The check passes when the bound is finite
    and exceeds the Monte Carlo integral within three combined standard errors.
    """
    rng = make_rng(seed, _OUTER_STREAM)
    log_f = np.asarray(density.logpdf(density.draw(rng, n_outer)))
    log_integral, log_error = _mean_and_error(np.abs(log_f))

    q = functional_Q(
        density, eps1, R1, n_outer, grid, mc_n, derive_seed(seed, 1), workers=workers
    )
    t = functional_T(
        density, eps2, R2, n_outer, grid, mc_n, derive_seed(seed, 2), workers=workers
    )

    flags = [f"Q:{flag}" for flag in q.flags] + [f"T:{flag}" for flag in t.flags]
    bound = None
    passed = False
    if q.value is not None and t.value is not None:
        bound = q.value / eps1 + t.value / eps2
        slack = 3.0 * (log_error + q.std_error / eps1 + t.std_error / eps2)
        passed = log_integral <= bound + slack
    else:
        flags.append(DIVERGENT)

    return LogIntegrabilityReport(
        params={"eps1": eps1, "R1": R1, "eps2": eps2, "R2": R2},
        log_integral=log_integral,
        log_integral_std_error=log_error,
        q_value=q.value,
        t_value=t.value,
        bound=bound,
        passed=passed,
        seed=seed,
        flags=flags,
    )
