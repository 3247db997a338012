"""Partition a view's features into clusters with k-means.

Features are treated as points in the N-dimensional sample space (columns
of the view matrix).  Each resulting feature cluster later seeds exactly
one kernel, so clusters must form a partition and stay non-empty: empty
clusters are repaired by moving in the point farthest from its centroid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import View
from .seeding import generator

_REL_TOL = 1e-9  # slack for float noise in monotonicity checks


@dataclass(frozen=True)
class FeatureClustering:
    """k-means partition of one view's features.

    `assignments[i]` is the 1-based cluster label of feature i; `centroids`
    has one row per cluster in the N-dimensional sample space.
    """

    view_name: str
    assignments: np.ndarray
    centroids: np.ndarray
    seed: int
    inertia: float
    wcss_trace: tuple[float, ...] = ()

    def __post_init__(self):
        labels = np.asarray(self.assignments, dtype=int)
        k = self.centroids.shape[0]
        counts = np.bincount(labels, minlength=k + 1)[1:]
        if labels.min(initial=1) < 1 or labels.max(initial=1) > k:
            raise ValueError("labels must lie in 1..C_f")
        if np.any(counts == 0):
            raise ValueError("every cluster must be non-empty")
        object.__setattr__(self, "assignments", labels)

    @property
    def n_clusters(self) -> int:
        return self.centroids.shape[0]

    def members(self, label: int) -> np.ndarray:
        """0-based feature indices assigned to 1-based cluster `label`."""
        return np.flatnonzero(self.assignments == label)


def kmeans_plusplus_init(
    points: np.ndarray, k: int, rng: np.random.Generator
) -> np.ndarray:
    """Classic k-means++ seeding: first center uniform, rest D^2-weighted."""
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0.0:  # all remaining points coincide with a chosen center
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=d2 / total)
        centers[j] = points[idx]
        d2 = np.minimum(d2, np.sum((points - centers[j]) ** 2, axis=1))
    return centers


def _assign(points: np.ndarray, centers: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    d2 = (
        np.sum(points**2, axis=1)[:, None]
        - 2.0 * points @ centers.T
        + np.sum(centers**2, axis=1)[None, :]
    )
    np.maximum(d2, 0.0, out=d2)
    return np.argmin(d2, axis=1), d2


def _repair_empty(
    labels: np.ndarray, centers: np.ndarray, d2: np.ndarray, k: int
) -> np.ndarray:
    """Give each empty cluster the point farthest from its current centroid.

    The moved point becomes the cluster's centroid, so the step never
    increases the within-cluster sum of squares.  Points that are sole
    members of their cluster are not eligible (their removal would just
    shift the hole).
    """
    for label in range(k):
        if np.any(labels == label):
            continue
        counts = np.bincount(labels, minlength=k)
        dist_to_own = d2[np.arange(len(labels)), labels]
        eligible = counts[labels] > 1
        candidates = np.flatnonzero(eligible)
        donor = candidates[np.argmax(dist_to_own[candidates])]
        labels[donor] = label
        centers[label] = d2_point = None  # placeholder, fixed below
        centers[label] = _point_cache[donor]
    return labels


def _lloyd(
    points: np.ndarray,
    k: int,
    rng: np.random.Generator,
    max_iter: int,
    tol: float,
) -> tuple[np.ndarray, np.ndarray, float, list[float]]:
    centers = kmeans_plusplus_init(points, k, rng)
    trace: list[float] = []
    labels = np.zeros(points.shape[0], dtype=int)
    for _ in range(max_iter):
        labels, d2 = _assign(points, centers)
        # repair empty clusters before the centroid update
        for label in range(k):
            if np.any(labels == label):
                continue
            counts = np.bincount(labels, minlength=k)
            dist_to_own = d2[np.arange(len(labels)), labels]
            candidates = np.flatnonzero(counts[labels] > 1)
            donor = candidates[np.argmax(dist_to_own[candidates])]
            labels[donor] = label
            centers[label] = points[donor]
            d2[:, label] = np.sum((points - centers[label]) ** 2, axis=1)
        new_centers = np.empty_like(centers)
        for label in range(k):
            new_centers[label] = points[labels == label].mean(axis=0)
        wcss = float(
            np.sum((points - new_centers[labels]) ** 2)
        )
        if trace and wcss > trace[-1] * (1.0 + _REL_TOL) + 1e-12:
            raise AssertionError(
                f"WCSS increased during Lloyd iteration: {trace[-1]} -> {wcss}"
            )
        trace.append(wcss)
        shift = float(np.max(np.linalg.norm(new_centers - centers, axis=1)))
        centers = new_centers
        if shift < tol:
            break
    labels, _ = _assign(points, centers)
    return labels, centers, trace[-1], trace


def kmeans_features(
    view: View,
    n_clusters: int,
    seed: int = 0,
    restarts: int = 10,
    max_iter: int = 300,
    tol: float = 1e-6,
    standardize: bool = False,
) -> FeatureClustering:
    """Cluster the view's features with Lloyd's algorithm, k-means++ init.

    The best of `restarts` runs (lowest within-cluster sum of squares, ties
    to the lowest run index) wins.  Deterministic given `seed`.  With
    `standardize` each feature column is z-scored before clustering;
    default is raw sample space.
    """
    d = view.n_features
    if n_clusters < 1:
        raise ValueError(f"n_clusters must be >= 1, got {n_clusters}")
    if n_clusters > d:
        raise ValueError(f"n_clusters={n_clusters} exceeds feature count {d}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")

    points = view.matrix.T.copy()  # features as points in sample space
    if standardize:
        mu = points.mean(axis=1, keepdims=True)
        sd = points.std(axis=1, keepdims=True)
        points = (points - mu) / np.where(sd > 0, sd, 1.0)

    best: tuple[np.ndarray, np.ndarray, float, list[float]] | None = None
    for run in range(restarts):
        rng = generator(seed, run)
        result = _lloyd(points, n_clusters, rng, max_iter, tol)
        if best is None or result[2] < best[2]:
            best = result
    labels, centers, inertia, trace = best
    return FeatureClustering(
        view_name=view.name,
        assignments=labels + 1,
        centroids=centers,
        seed=seed,
        inertia=inertia,
        wcss_trace=tuple(trace),
    )
