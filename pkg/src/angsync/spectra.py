"""Full-spectrum computation at desk scale: eigenvalue lists, histograms, and
relative-gap clustering for multiplicity checks."""

from __future__ import annotations

import numpy as np

from .core import InvalidInputError, SyncMatrix, TooLargeError

DENSE_LIMIT = 5000


def full_spectrum(H: SyncMatrix, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """All eigenvalues of the Hermitian matrix, descending, by dense
    eigendecomposition.  Refuses sizes above `dense_limit`."""
    if H.n > dense_limit:
        raise TooLargeError(f"n={H.n} exceeds dense limit {dense_limit}")
    return np.linalg.eigvalsh(H.to_dense())[::-1]


def top_k_spectrum(H: SyncMatrix, k: int, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """The k largest eigenvalues, descending (dense path reused)."""
    if not 1 <= k <= H.n:
        raise InvalidInputError(f"k must lie in [1, {H.n}], got {k}")
    return full_spectrum(H, dense_limit)[:k]


def histogram(values, bins: int):
    """Equal-width histogram spanning [min, max]; returns (center, count)
    pairs whose counts sum to len(values)."""
    vals = np.asarray(values, dtype=np.float64)
    if vals.size == 0:
        raise InvalidInputError("cannot histogram an empty value list")
    if bins < 1:
        raise InvalidInputError("bins must be >= 1")
    counts, edges = np.histogram(vals, bins=bins)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return list(zip(centers.tolist(), counts.tolist()))


def cluster_sizes(values, rel_gap: float = 0.10) -> list[int]:
    """Group a descending eigenvalue list into clusters, splitting wherever a
    consecutive gap exceeds rel_gap times the largest value."""
    vals = np.asarray(values, dtype=np.float64)
    if vals.size == 0:
        return []
    threshold = rel_gap * vals[0]
    sizes = []
    current = 1
    for k in range(1, vals.size):
        if vals[k - 1] - vals[k] > threshold:
            sizes.append(current)
            current = 1
        else:
            current += 1
    sizes.append(current)
    return sizes
