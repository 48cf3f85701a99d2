"""Nearest-neighbor distances within a sample.

Both backends are exact. The brute backend scans all pairs; the tree backend
queries a kd-tree built with median splits and leaf size 16. Self-matches are
excluded by index, never by a distance > 0 filter, so coincident points are
found as neighbors at distance 0 and reported as duplicates.

Whatever backend picks the neighbor j of point i, the reported ρ_i is
recomputed from points[i] - points[j] with one shared expression, so the two
backends agree bitwise whenever they pick the same neighbor.
"""

from __future__ import annotations

import itertools
import logging

import numpy as np
from scipy.spatial import cKDTree

from entrokl.models import NnDistances, NnMethod, SampleSet

logger = logging.getLogger(__name__)

LEAF_SIZE = 16
_BRUTE_BLOCK_FLOATS = 1 << 22


def _norms(diff: np.ndarray) -> np.ndarray:
    # hypot accumulates without squaring, so it neither underflows nor overflows
    return np.hypot.reduce(np.abs(diff), axis=-1)


def _distances_to(points: np.ndarray, neighbor: np.ndarray) -> np.ndarray:
    return _norms(points - points[neighbor])


def _nearest_by_scan(points: np.ndarray, rows: np.ndarray) -> np.ndarray:
    dist = _norms(points[rows, np.newaxis, :] - points[np.newaxis, :, :])
    dist[np.arange(rows.size), rows] = np.inf
    return np.argmin(dist, axis=1)


def _duplicate_pairs(points: np.ndarray, rho: np.ndarray) -> list[tuple[int, int]]:
    zero = np.flatnonzero(rho == 0.0)
    if zero.size == 0:
        return []
    _, inverse = np.unique(points[zero], axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    pairs: list[tuple[int, int]] = []
    for group in np.unique(inverse):
        members = sorted(int(i) for i in zero[inverse == group])
        pairs.extend(itertools.combinations(members, 2))
    pairs.sort()
    return pairs


def _build(points: np.ndarray, neighbor: np.ndarray, method: NnMethod) -> NnDistances:
    rho = _distances_to(points, neighbor)
    duplicates = _duplicate_pairs(points, rho)
    if duplicates:
        logger.warning(f"{len(duplicates)} coincident point pairs found ({method.value} backend)")
    return NnDistances(rho=rho, neighbor=neighbor, method=method, duplicate_indices=duplicates)


def nn_distances_brute(sample: SampleSet) -> NnDistances:
    """Exact nearest-neighbor distances by an all-pairs scan.

    Work is O(N²d); rows are processed in blocks to bound memory.

    Args:
        sample: Validated sample

    Returns:
        NnDistances with method BRUTE
    """
    points = sample.points
    n, d = points.shape
    block = max(1, _BRUTE_BLOCK_FLOATS // (n * d))
    neighbor = np.empty(n, dtype=np.intp)

    for start in range(0, n, block):
        stop = min(start + block, n)
        neighbor[start:stop] = _nearest_by_scan(points, np.arange(start, stop))

    logger.debug(f"Brute-force nearest neighbors computed for N={n}, d={d}")
    return _build(points, neighbor, NnMethod.BRUTE)


def build_index(sample: SampleSet) -> cKDTree:
    """Build the exact kd-tree index used by the tree backend.

    The tree splits at the median (balanced) with leaf size 16. It is immutable
    and may be queried from several threads. Points are rescaled by a power of
    two so that squared distances stay finite; neighbor order is unchanged.
    """
    largest = float(np.max(np.abs(sample.points)))
    exponent = np.frexp(largest)[1] if largest > 0 else 0
    scaled = np.ldexp(sample.points, -exponent)
    return cKDTree(scaled, leafsize=LEAF_SIZE, balanced_tree=True, compact_nodes=True)


def nn_distances_tree(sample: SampleSet, workers: int = 1) -> NnDistances:
    """Exact nearest-neighbor distances through a kd-tree.

    Args:
        sample: Validated sample
        workers: Threads used by the tree query; the result does not depend on it

    Returns:
        NnDistances with method TREE, equal to the brute-force distances
    """
    points = sample.points
    tree = build_index(sample)
    dist, idx = tree.query(tree.data, k=2, eps=0.0, workers=workers)
    own = np.arange(sample.n)
    first_is_self = idx[:, 0] == own
    neighbor = np.where(first_is_self, idx[:, 1], idx[:, 0]).astype(np.intp)
    found = np.where(first_is_self, dist[:, 1], dist[:, 0])

    # zero or non-finite tree distances may hide an underflowed or missing neighbor
    suspect = np.flatnonzero(~(found > 0) | ~np.isfinite(found) | (neighbor >= sample.n))
    if suspect.size:
        logger.debug(f"Rescanning {suspect.size} points with degenerate tree distances")
        neighbor[suspect] = _nearest_by_scan(points, suspect)

    logger.debug(f"kd-tree nearest neighbors computed for N={sample.n}, d={sample.dim}")
    return _build(points, neighbor, NnMethod.TREE)


def nn_distances(sample: SampleSet, method: NnMethod = NnMethod.TREE, workers: int = 1) -> NnDistances:
    """Dispatch to the requested nearest-neighbor backend.

    Args:
        sample: Validated sample
        method: BRUTE or TREE
        workers: Threads for the tree query (ignored by BRUTE)

    Returns:
        NnDistances produced by the chosen backend
    """
    match NnMethod(method):
        case NnMethod.BRUTE:
            return nn_distances_brute(sample)
        case NnMethod.TREE:
            return nn_distances_tree(sample, workers=workers)
