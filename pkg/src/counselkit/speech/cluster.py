"""Seeded k-means++ clustering for speaker partitioning."""

from __future__ import annotations

import numpy as np

from ..errors import KTooLargeError


def _squared_dists(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def kmeanspp_cluster(
    embeddings: list | np.ndarray,
    k: int,
    seed: int,
    max_iters: int = 100,
    wcss_out: list[float] | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """D-squared seeding then Lloyd iterations to an assignment fixpoint.

    Returns (assignments, centroids). Deterministic for a fixed seed; ties
    in nearest-centroid assignment break toward the lowest cluster index.
    The all-identical-points degenerate case returns k copies of the point
    with every assignment at cluster 0.
    """
    points = np.asarray(embeddings, dtype=float)
    if points.ndim != 2:
        raise ValueError("embeddings must be a 2-D array of shape (n, d)")
    n = len(points)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > n:
        raise KTooLargeError(f"k={k} exceeds {n} points")

    if bool(np.all(points == points[0])):
        centroids = np.tile(points[0], (k, 1))
        if wcss_out is not None:
            wcss_out.append(0.0)
        return np.zeros(n, dtype=int), centroids

    rng = np.random.default_rng(seed)
    chosen = [int(rng.integers(n))]
    while len(chosen) < k:
        d2 = _squared_dists(points, points[chosen]).min(axis=1)
        total = float(d2.sum())
        if total == 0.0:
            # Remaining mass collapsed onto existing centroids: take the
            # lowest-index point not yet chosen.
            for i in range(n):
                if i not in chosen:
                    chosen.append(i)
                    break
        else:
            chosen.append(int(rng.choice(n, p=d2 / total)))
    centroids = points[chosen].copy()

    assignments = np.full(n, -1, dtype=int)
    for _ in range(max_iters):
        d2 = _squared_dists(points, centroids)
        new_assign = d2.argmin(axis=1)
        if wcss_out is not None:
            wcss_out.append(float(d2[np.arange(n), new_assign].sum()))
        if np.array_equal(new_assign, assignments):
            break
        assignments = new_assign
        for j in range(k):
            members = points[assignments == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
    return assignments, centroids
