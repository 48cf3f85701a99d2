"""Conditional law of the rescaled nearest-neighbor distance.

Given a query point x, ξ_{N,x} = (N-1)·V_d·γ̃·min_j ρ^d(x, X_j) over N-1
fresh draws X_j ~ f. Its exact CDF is F_{N,x}(u) = 1 - (1 - p)^{N-1} with
p = ∫_{B(x, r_N(u))} f and r_N(u) = (u/(V_d·γ̃·(N-1)))^{1/d}; as N grows it
converges to the exponential law with rate f(x)/γ̃.
"""

from __future__ import annotations

import logging
import math

import numpy as np
import numpy.typing as npt
from scipy import stats

from entrokl.core import (
    CONSTANTS,
    bernoulli_tail_bound,
    g_function,
    log_exp_variance,
    log_unit_ball_volume,
)
from entrokl.models import (
    CdfAgreementReport,
    ConditionalLawReport,
    EnvelopeReport,
    LogMomentsReport,
)
from entrokl.services.conditions import ball_averages, maximal_function, minimal_function
from entrokl.services.densities import AnalyticDensity
from entrokl.services.exceptions import OutsideSupportError, SimulationError
from entrokl.services.parallel import map_ordered
from entrokl.services.seeding import make_rng

logger = logging.getLogger(__name__)

DKW_ALPHA = 0.001


def _center(density: AnalyticDensity, x: npt.ArrayLike) -> np.ndarray:
    center = np.asarray(x, dtype=float).reshape(-1)
    density.pdf(center)  # dimension and finiteness checks
    return center


def _log_scale(dim: int, n: int) -> float:
    """log(V_d·γ̃·(N-1))."""
    return log_unit_ball_volume(dim) + CONSTANTS.euler_gamma + math.log(n - 1)


def _check_sizes(n: int, reps: int) -> None:
    if n < 2:
        raise ValueError(f"N must be at least 2, got {n}")
    if reps < 1:
        raise ValueError(f"reps must be at least 1, got {reps}")


def simulate_xi(
    density: AnalyticDensity,
    x: npt.ArrayLike,
    n: int,
    reps: int,
    seed: int,
    workers: int = 1,
) -> np.ndarray:
    """Simulate reps independent realizations of ξ_{N,x}.

    Realization k draws N-1 fresh points from the sub-stream (seed, k), so the
    output depends only on the arguments, not on workers.

    Args:
        density: Density f
        x: Query point
        n: Sample size N ≥ 2 (N-1 neighbors per realization)
        reps: Number of realizations ≥ 1
        seed: Master seed
        workers: Threads over realizations

    Returns:
        Array of reps positive realizations, in realization order

    Raises:
        SimulationError: If a realization is exactly zero
    """
    _check_sizes(n, reps)
    center = _center(density, x)
    d = density.dim
    log_scale = _log_scale(d, n)

    def realization(rep: int) -> float:
        neighbors = density.draw(make_rng(seed, rep), n - 1)
        nearest_sq = float(np.min(np.sum((neighbors - center) ** 2, axis=1)))
        if nearest_sq == 0.0:
            raise SimulationError("Simulated nearest-neighbor distance is exactly zero", seed, rep)
        return math.exp(log_scale + 0.5 * d * math.log(nearest_sq))

    return np.array(map_ordered(realization, range(reps), workers))


def _positive_density(density: AnalyticDensity, center: np.ndarray) -> float:
    f_x = density.pdf(center)
    if f_x <= 0:
        raise OutsideSupportError(
            f"f(x) = 0 at x = {center.tolist()}; the limit law needs x in the support"
        )
    return f_x


def conditional_law_report(
    density: AnalyticDensity,
    x: npt.ArrayLike,
    n: int,
    reps: int,
    seed: int,
    workers: int = 1,
) -> ConditionalLawReport:
    """Compare simulated ξ_{N,x} with its limit law 1 - exp(-f(x)·u/γ̃).

    Args:
        density: Density f
        x: Query point with f(x) > 0
        n: Sample size N
        reps: Number of realizations
        seed: Master seed
        workers: Threads over realizations

    Returns:
        ConditionalLawReport with the Kolmogorov-Smirnov distance and the mean log

    Raises:
        OutsideSupportError: If f(x) = 0
    """
    center = _center(density, x)
    f_x = _positive_density(density, center)
    rate = f_x / CONSTANTS.gamma_tilde

    xi = simulate_xi(density, center, n, reps, seed, workers)
    ks = stats.kstest(xi, stats.expon(scale=1.0 / rate).cdf)
    logger.debug(f"KS distance {ks.statistic:.4g} at N={n}, reps={reps}")

    return ConditionalLawReport(
        x=center.tolist(),
        n=n,
        reps=reps,
        ks_distance=float(ks.statistic),
        empirical_mean_log=float(np.mean(np.log(xi))),
        target_mean_log=-math.log(f_x),
        rate=rate,
        seed=seed,
    )


def _ball_masses(
    density: AnalyticDensity, center: np.ndarray, radii: np.ndarray, mc_n: int, seed: int
) -> np.ndarray:
    values, _, _ = ball_averages(density, center, radii, mc_n, seed)
    d = density.dim
    return np.clip(values * np.exp(log_unit_ball_volume(d) + d * np.log(radii)), 0.0, 1.0)


def exact_conditional_cdf(
    density: AnalyticDensity,
    x: npt.ArrayLike,
    n: int,
    u: npt.ArrayLike,
    mc_n: int = 4096,
    seed: int = 0,
) -> float | np.ndarray:
    """F_{N,x}(u) = 1 - (1 - p)^{N-1}, p the mass of B(x, r_N(u)).

    Ball masses use the density's closed forms when available, else Monte
    Carlo with mc_n points from `seed`.

    Args:
        density: Density f
        x: Query point
        n: Sample size N ≥ 2
        u: Non-negative argument(s)
        mc_n: Ball-mass Monte Carlo points
        seed: Seed of the ball-mass points

    Returns:
        CDF value(s) in [0, 1], a float for scalar u

    Raises:
        ValueError: If u is negative or N < 2
    """
    if n < 2:
        raise ValueError(f"N must be at least 2, got {n}")
    center = _center(density, x)
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 0) or np.any(np.isnan(u_arr)):
        raise ValueError("u must be non-negative")

    d = density.dim
    flat = u_arr.reshape(-1)
    out = np.zeros(flat.shape)
    positive = np.flatnonzero((flat > 0) & np.isfinite(flat))
    out[np.isinf(flat)] = 1.0
    if positive.size:
        radii = np.exp((np.log(flat[positive]) - _log_scale(d, n)) / d)
        p = _ball_masses(density, center, radii, mc_n, seed)
        with np.errstate(divide="ignore"):
            out[positive] = -np.expm1((n - 1) * np.log1p(-p))

    out = out.reshape(u_arr.shape)
    return float(out) if out.ndim == 0 else out


def exact_cdf_agreement(
    density: AnalyticDensity,
    x: npt.ArrayLike,
    n: int,
    reps: int,
    seed: int,
    alpha: float = DKW_ALPHA,
    mc_n: int = 4096,
    workers: int = 1,
) -> CdfAgreementReport:
    """Check simulated ξ_{N,x} against exact_conditional_cdf.

    Passes when the Kolmogorov-Smirnov distance is within the
    Dvoretzky-Kiefer-Wolfowitz half-width sqrt(log(2/α)/(2·reps)).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    center = _center(density, x)
    xi = simulate_xi(density, center, n, reps, seed, workers)

    def cdf(u: np.ndarray) -> np.ndarray:
        return np.asarray(exact_conditional_cdf(density, center, n, u, mc_n, seed))

    ks = stats.kstest(xi, cdf)
    band = math.sqrt(math.log(2.0 / alpha) / (2.0 * reps))
    passed = float(ks.statistic) <= band
    if not passed:
        logger.warning(f"Simulated law leaves the DKW band: {ks.statistic:.4g} > {band:.4g}")

    return CdfAgreementReport(
        x=center.tolist(),
        n=n,
        reps=reps,
        ks_distance=float(ks.statistic),
        dkw_band=band,
        alpha=alpha,
        passed=passed,
        seed=seed,
    )


def conditional_log_moments(
    density: AnalyticDensity,
    x: npt.ArrayLike,
    n: int,
    reps: int,
    seed: int,
    workers: int = 1,
) -> LogMomentsReport:
    """Empirical E log ξ, E log² ξ and E G(|log ξ|) against their limits.

    The limits are -log f(x) and log² f(x) + π²/6.

    Raises:
        OutsideSupportError: If f(x) = 0
    """
    center = _center(density, x)
    f_x = _positive_density(density, center)
    log_xi = np.log(simulate_xi(density, center, n, reps, seed, workers))
    sq = log_xi**2
    root_reps = math.sqrt(reps)

    return LogMomentsReport(
        x=center.tolist(),
        n=n,
        reps=reps,
        mean_log=float(np.mean(log_xi)),
        mean_log_std_error=float(np.std(log_xi, ddof=1) / root_reps) if reps > 1 else 0.0,
        target_mean_log=-math.log(f_x),
        mean_log_sq=float(np.mean(sq)),
        mean_log_sq_std_error=float(np.std(sq, ddof=1) / root_reps) if reps > 1 else 0.0,
        target_mean_log_sq=math.log(f_x) ** 2 + log_exp_variance(),
        mean_g_abs_log=float(np.mean(g_function(np.abs(log_xi)))),
        seed=seed,
    )


def radius_for(dim: int, n: int, u: float) -> float:
    """r_N(u) = (u/(V_d·γ̃·(N-1)))^{1/d}."""
    if u <= 0:
        return 0.0
    return math.exp((math.log(u) - _log_scale(dim, n)) / dim)


def check_cdf_envelopes(
    density: AnalyticDensity,
    x: npt.ArrayLike,
    n: int,
    eps1: float = 0.5,
    R1: float = 1.0,
    R2: float = 1.0,
    grid_points: int = 64,
    grid: int = 64,
    mc_n: int = 4096,
    seed: int = 0,
    tolerance: float = 1e-9,
) -> EnvelopeReport:
    """Check the two CDF envelopes used to bound E|log ξ_{N,x}|.

    Near zero, F_{N,x}(u) ≤ ((N-1)·p)^{ε₁} ≤ (M_f(x,R₁)/γ̃)^{ε₁}·u^{ε₁} on
    (0, 1/e], applicable once r_N(1/e) ≤ R₁. In the tail,
    1 - F_{N,x}(u) ≤ exp(-u·m_f(x,R₂)/γ̃) on [e, sqrt(N-1)], applicable once
    r_N(sqrt(N-1)) ≤ R₂ and sqrt(N-1) > e. Envelopes that do not apply at this
    N are skipped and flagged.

    Returns:
        EnvelopeReport with the largest excess of each side over its envelope
    """
    if not 0.0 < eps1 <= 1.0:
        raise ValueError(f"eps1 must lie in (0, 1], got {eps1}")
    if n < 2:
        raise ValueError(f"N must be at least 2, got {n}")
    center = _center(density, x)
    d = density.dim
    gamma_tilde = CONSTANTS.gamma_tilde
    flags: list[str] = []

    lower_checked = False
    max_lower_excess = -math.inf
    if radius_for(d, n, math.exp(-1.0)) <= R1:
        lower_checked = True
        maximal = maximal_function(density, center, R1, grid, mc_n, seed)
        m_upper = maximal.value + 3.0 * maximal.std_error
        us = np.geomspace(1e-6 * math.exp(-1.0), math.exp(-1.0), grid_points)
        radii = np.array([radius_for(d, n, u) for u in us])
        masses = _ball_masses(density, center, radii, mc_n, seed)
        for u, p in zip(us, masses, strict=True):
            cdf, bernoulli = bernoulli_tail_bound(float(p), n - 1, eps1)
            envelope = (m_upper / gamma_tilde) ** eps1 * u**eps1
            max_lower_excess = max(max_lower_excess, cdf - envelope, cdf - bernoulli)
    else:
        flags.append("lower_envelope_not_applicable")

    upper_checked = False
    max_upper_excess = -math.inf
    top = math.sqrt(n - 1)
    if top > math.e and radius_for(d, n, top) <= R2:
        upper_checked = True
        minimal = minimal_function(density, center, R2, grid, mc_n, seed)
        m_lower = max(minimal.value - 3.0 * minimal.std_error, 0.0)
        us = np.geomspace(math.e, top, grid_points)
        survival = 1.0 - np.asarray(exact_conditional_cdf(density, center, n, us, mc_n, seed))
        envelope = np.exp(-us * m_lower / gamma_tilde)
        max_upper_excess = float(np.max(survival - envelope))
    else:
        flags.append("upper_envelope_not_applicable")

    worst = max(max_lower_excess, max_upper_excess)
    passed = (lower_checked or upper_checked) and worst <= tolerance
    return EnvelopeReport(
        x=center.tolist(),
        n=n,
        params={"eps1": eps1, "R1": R1, "R2": R2},
        lower_checked=lower_checked,
        upper_checked=upper_checked,
        max_lower_excess=max_lower_excess if lower_checked else 0.0,
        max_upper_excess=max_upper_excess if upper_checked else 0.0,
        passed=passed,
        flags=flags,
    )
