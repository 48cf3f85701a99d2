"""Nearest-neighbor (Kozachenko-Leonenko) entropy estimator.

H_N = d·log ρ̄ + log V_d + γ + log(N-1), where log ρ̄ is the mean log
nearest-neighbor distance. The estimate is returned together with its
per-point contributions ζ_i(N), whose mean is H_N.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from entrokl.core import CONSTANTS, log_unit_ball_volume
from entrokl.models import EntropyEstimate, NnDistances, NnMethod, SampleSet
from entrokl.services.exceptions import DuplicatePointsError
from entrokl.services.neighbors import nn_distances
from entrokl.services.seeding import make_rng

logger = logging.getLogger(__name__)


def kl_entropy(sample: SampleSet, nn: NnDistances) -> EntropyEstimate:
    """Compute H_N from precomputed nearest-neighbor distances.

    Args:
        sample: The sample the distances were computed from
        nn: Its nearest-neighbor distances

    Returns:
        EntropyEstimate with h_n = mean(zeta)

    Raises:
        ValueError: If nn does not belong to a sample of this size
        DuplicatePointsError: If some ρ_i = 0, so log ρ_i is undefined
    """
    if nn.n != sample.n:
        raise ValueError(f"Distances cover {nn.n} points but the sample has {sample.n}")
    if nn.has_duplicates:
        raise DuplicatePointsError(nn.duplicate_indices)

    n, d = sample.n, sample.dim
    log_rho = np.log(nn.rho)
    offset = log_unit_ball_volume(d) + CONSTANTS.euler_gamma + math.log(n - 1)
    zeta = d * log_rho + offset

    # np.mean reduces pairwise, so the result does not depend on scheduling
    h_n = float(np.mean(zeta))
    log_rho_bar = float(np.mean(log_rho))

    return EntropyEstimate(
        h_n=h_n,
        n=n,
        dim=d,
        log_rho_bar=log_rho_bar,
        zeta=zeta,
        method=nn.method,
        source_tag=sample.source_tag,
    )


def estimate_entropy(
    sample: SampleSet, method: NnMethod = NnMethod.TREE, workers: int = 1
) -> EntropyEstimate:
    """Compute nearest-neighbor distances with the chosen backend, then H_N.

    Raises:
        DuplicatePointsError: If the sample has coincident points
    """
    return kl_entropy(sample, nn_distances(sample, method=method, workers=workers))


def kl_entropy_with_jitter(
    sample: SampleSet,
    jitter_scale: float,
    seed: int,
    method: NnMethod = NnMethod.TREE,
    workers: int = 1,
) -> EntropyEstimate:
    """Compute H_N after adding uniform noise on [-jitter_scale, jitter_scale]^d.

    A zero scale leaves the points untouched, so a duplicate-free sample gives
    exactly the kl_entropy result. The jitter is recorded in the source tag.

    Args:
        sample: Input sample, possibly with coincident points
        jitter_scale: Half-width of the noise, ≥ 0
        seed: Seed of the noise stream
        method: Nearest-neighbor backend
        workers: Threads for the tree query

    Returns:
        EntropyEstimate of the jittered sample

    Raises:
        ValueError: If jitter_scale is negative or non-finite
        DuplicatePointsError: If coincident points survive the jitter
    """
    if not math.isfinite(jitter_scale) or jitter_scale < 0:
        raise ValueError(f"jitter_scale must be finite and non-negative, got {jitter_scale}")

    if jitter_scale > 0:
        rng = make_rng(seed)
        noise = rng.uniform(-jitter_scale, jitter_scale, size=sample.points.shape)
        tag = f"{sample.source_tag}|jitter={jitter_scale!r},seed={seed}"
        sample = SampleSet(points=sample.points + noise, source_tag=tag)
        logger.debug(f"Applied jitter of scale {jitter_scale} with seed {seed}")

    return kl_entropy(sample, nn_distances(sample, method=method, workers=workers))
