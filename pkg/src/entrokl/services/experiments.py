"""Monte Carlo convergence studies of the entropy estimator.

This module provides convergence_study, which measures bias, variance and MSE
of H_N against the closed-form entropy along a grid of sample sizes, and
variance_decomposition, which checks var(H_N) against its per-point terms.
Cell seeds are derived from (master_seed, n, rep), so every report is a pure
function of its arguments whatever the thread count.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np

from entrokl.models import (
    CellFailure,
    ConvergenceReport,
    ConvergenceRow,
    NnMethod,
    RepRecord,
    VarianceDecompositionReport,
)
from entrokl.services.densities import AnalyticDensity
from entrokl.services.estimator import estimate_entropy
from entrokl.services.exceptions import EntroklError, ExperimentCellError
from entrokl.services.parallel import map_ordered
from entrokl.services.seeding import derive_seed, make_rng

logger = logging.getLogger(__name__)

DEFAULT_N_GRID = (250, 500, 1000, 2000, 4000)
_BOOTSTRAP_KEY = 2**31


def _aggregate(n: int, values: np.ndarray, h_true: float) -> ConvergenceRow:
    k = int(values.size)
    if k == 0:
        return ConvergenceRow(
            n=n,
            reps_ok=0,
            mean_h=None,
            bias=None,
            var_h=None,
            mse=None,
            mse_from_bias_var=None,
            se_mean=None,
        )
    mean_h = float(np.mean(values))
    bias = mean_h - h_true
    mse = float(np.mean((values - h_true) ** 2))
    if k < 2:
        return ConvergenceRow(
            n=n,
            reps_ok=k,
            mean_h=mean_h,
            bias=bias,
            var_h=None,
            mse=mse,
            mse_from_bias_var=None,
            se_mean=None,
        )
    var_h = float(np.var(values, ddof=1))
    return ConvergenceRow(
        n=n,
        reps_ok=k,
        mean_h=mean_h,
        bias=bias,
        var_h=var_h,
        mse=mse,
        mse_from_bias_var=bias**2 + var_h * (k - 1) / k,
        se_mean=math.sqrt(var_h / k),
    )


def convergence_study(
    density: AnalyticDensity,
    n_grid: Sequence[int] = DEFAULT_N_GRID,
    reps: int = 100,
    master_seed: int = 0,
    backend: NnMethod = NnMethod.TREE,
    workers: int = 1,
) -> ConvergenceReport:
    """Estimate H_N on reps fresh samples at each n and aggregate against H.

    Each (n, rep) cell samples n points with seed derive_seed(master_seed, n, rep)
    and runs the estimator with the chosen backend. A cell that raises is logged,
    recorded in ``failures`` and left out of the aggregates; the study goes on.

    Args:
        density: Density with a closed-form entropy
        n_grid: Sample sizes, each ≥ 2; reported in increasing order
        reps: Replications per sample size, ≥ 2
        master_seed: Seed every cell seed derives from
        backend: Nearest-neighbor backend; it does not change the report
        workers: Threads over cells

    Returns:
        ConvergenceReport, with the raw per-cell records in ``records``

    Raises:
        ValueError: If n_grid is empty, some n < 2, or reps < 2
    """
    grid = sorted(set(int(n) for n in n_grid))
    if not grid:
        raise ValueError("n_grid must not be empty")
    if grid[0] < 2:
        raise ValueError(f"Every n must be at least 2, got {grid[0]}")
    if reps < 2:
        raise ValueError(f"reps must be at least 2, got {reps}")

    h_true = density.analytic_entropy()
    cells = [(n, rep) for n in grid for rep in range(reps)]
    logger.info(
        f"Starting convergence study: {density.family.value}, n_grid={grid}, reps={reps}, "
        f"backend={NnMethod(backend).value}"
    )

    def run_cell(cell: tuple[int, int]) -> RepRecord | CellFailure:
        n, rep = cell
        seed = derive_seed(master_seed, n, rep)
        try:
            sample = density.sample(n, seed)
            estimate = estimate_entropy(sample, method=backend)
        except EntroklError as e:
            error = ExperimentCellError(str(e), n=n, rep=rep, seed=seed)
            logger.error(f"Convergence cell failed: {error}")
            return CellFailure(n=n, rep=rep, seed=seed, error=str(e))
        logger.debug(f"Cell n={n} rep={rep}: H_N={estimate.h_n}")
        return RepRecord(n=n, rep=rep, h_n=estimate.h_n, seed=seed)

    outcomes = map_ordered(run_cell, cells, workers)
    records = [o for o in outcomes if isinstance(o, RepRecord)]
    failures = [o for o in outcomes if isinstance(o, CellFailure)]

    per_n = []
    for n in grid:
        values = np.array([r.h_n for r in records if r.n == n])
        per_n.append(_aggregate(n, values, h_true))

    report = ConvergenceReport(
        density_spec=density.describe(),
        n_grid=grid,
        reps=reps,
        per_n=per_n,
        h_true=h_true,
        master_seed=master_seed,
        failures=failures,
        records=records,
    )
    logger.info(f"Convergence study complete: {len(records)} cells ok, {len(failures)} failed")
    return report


def _cov(a: np.ndarray, b: np.ndarray, axis: int = -1) -> np.ndarray:
    k = a.shape[axis]
    da = a - a.mean(axis=axis, keepdims=True)
    db = b - b.mean(axis=axis, keepdims=True)
    return np.sum(da * db, axis=axis) / (k - 1)


def variance_decomposition(
    density: AnalyticDensity,
    n: int,
    reps: int = 2000,
    master_seed: int = 0,
    seeds: Sequence[int] | None = None,
    n_boot: int = 200,
    workers: int = 1,
) -> VarianceDecompositionReport:
    """Check var(H_N) = (1/N)·var(ζ₁) + ((N-1)/N)·cov(ζ₁, ζ₂) across reps.

    The left side is the sample variance of H_N over reps; the right side
    combines the sample variance of the first per-point contribution and the
    sample covariance of the first two. Their gap must lie within three
    bootstrap standard errors (resampling reps, seeded from master_seed).

    Args:
        density: Density f
        n: Sample size, ≥ 3
        reps: Replications, ≥ 100 (ignored when seeds is given)
        master_seed: Seed of the per-rep seeds and of the bootstrap
        seeds: Explicit per-rep sample seeds, at least two
        n_boot: Bootstrap resamples
        workers: Threads over reps

    Returns:
        VarianceDecompositionReport
    """
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if seeds is None:
        if reps < 100:
            raise ValueError(f"reps must be at least 100, got {reps}")
        seeds = [derive_seed(master_seed, n, rep) for rep in range(reps)]
    elif len(seeds) < 2:
        raise ValueError("At least two seeds are needed")
    seeds = list(seeds)
    reps = len(seeds)

    def run_rep(seed: int) -> tuple[float, float, float]:
        estimate = estimate_entropy(density.sample(n, seed))
        return estimate.h_n, float(estimate.zeta[0]), float(estimate.zeta[1])

    logger.info(f"Starting variance decomposition: n={n}, reps={reps}")
    rows = np.array(map_ordered(run_rep, seeds, workers))
    h, zeta1, zeta2 = rows[:, 0], rows[:, 1], rows[:, 2]

    def boot_terms(idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        z1, z2 = zeta1[idx], zeta2[idx]
        cov = _cov(z1, z2)
        recombined = np.var(z1, axis=-1, ddof=1) / n + (n - 1) / n * cov
        return cov, np.var(h[idx], axis=-1, ddof=1) - recombined

    var_h = float(np.var(h, ddof=1))
    var_zeta1 = float(np.var(zeta1, ddof=1))
    cov_zeta12 = float(_cov(zeta1, zeta2))
    recombined = var_zeta1 / n + (n - 1) / n * cov_zeta12
    gap = var_h - recombined

    rng = make_rng(master_seed, n, _BOOTSTRAP_KEY)
    boot_cov, boot_gap = boot_terms(rng.integers(0, reps, size=(n_boot, reps)))
    cov_std_error = float(np.std(boot_cov, ddof=1))
    gap_std_error = float(np.std(boot_gap, ddof=1))
    passed = abs(gap) <= max(3.0 * gap_std_error, 1e-12)

    logger.info(f"Variance decomposition: gap={gap:.4g} ± {gap_std_error:.4g}")
    return VarianceDecompositionReport(
        n=n,
        reps=reps,
        var_h=var_h,
        var_zeta1=var_zeta1,
        cov_zeta12=cov_zeta12,
        cov_std_error=cov_std_error,
        recombined=recombined,
        gap=gap,
        gap_std_error=gap_std_error,
        passed=passed,
        master_seed=master_seed,
    )
