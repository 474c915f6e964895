"""
Metric multidimensional scaling of a distance graph by weighted SMACOF.

The stress of coordinates X is

    sigma(X) = sum_{i<j} w_ij (d_ij - |x_i - x_j|)^2 / sum_{i<j} w_ij

and each Guttman transform X <- V^+ B(X) X, with V the weighted Laplacian, does not
increase it.
"""
import logging
import math
from typing import List, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import pdist, squareform

from src.types.embedding_result import EmbeddingResult, RadiiStatistics
from src.types.stress_problem import StressProblem
from src.util.errors import Err, ForgeError

log = logging.getLogger(__name__)

PINV_THRESHOLD = 1e-10
# relative slack on the monotonicity check, for rounding in the stress sum
MONOTONE_SLACK = 1e-10
# stress at or below this is an exact fit up to rounding
STRESS_FLOOR = 1e-24


def locality_weights(distances: np.ndarray, k: Optional[int] = None) -> np.ndarray:
    d = np.asarray(distances, dtype=float)
    if np.any(d < 0):
        raise ForgeError(Err.NEGATIVE_DISTANCE, ["locality weights of a negative distance"])
    if k is None:
        k = d.shape[0]
    w = np.exp(-math.sqrt(k) * d)
    np.fill_diagonal(w, 0.0)
    return w


def uniform_weights(k: int) -> np.ndarray:
    return np.ones((k, k)) - np.eye(k)


def stress(p: StressProblem, coords: np.ndarray) -> float:
    embedded = squareform(pdist(coords))
    upper = np.triu_indices(p.size, k=1)
    w = p.weights[upper]
    residual = p.distances[upper] - embedded[upper]
    return float(np.sum(w * residual ** 2) / np.sum(w))


def _check_connected(weights: np.ndarray) -> None:
    count, labels = connected_components(csr_matrix(weights > 0), directed=False)
    if count > 1:
        blocks: List[List[int]] = [[int(i) for i in np.nonzero(labels == c)[0]] for c in range(count)]
        raise ForgeError(Err.DISCONNECTED_WEIGHTS, [f"{count} blocks: {blocks}"])


def _laplacian_pinv(weights: np.ndarray) -> np.ndarray:
    laplacian = np.diag(weights.sum(axis=1)) - weights
    eigenvalues, vectors = np.linalg.eigh(laplacian)
    keep = eigenvalues > PINV_THRESHOLD * max(1.0, float(eigenvalues[-1]))
    return (vectors[:, keep] / eigenvalues[keep]) @ vectors[:, keep].T


def _guttman(p: StressProblem, coords: np.ndarray, v_pinv: np.ndarray) -> np.ndarray:
    embedded = squareform(pdist(coords))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(embedded > 0, p.distances / embedded, 0.0)
    b = -p.weights * ratio
    np.fill_diagonal(b, 0.0)
    np.fill_diagonal(b, -b.sum(axis=1))
    return v_pinv @ (b @ coords)


def classical_scaling(distances: np.ndarray, target_dim: int) -> Optional[np.ndarray]:
    """
    Torgerson scaling from the double centered squared distances; None when the
    Gram matrix has fewer than target_dim positive eigenvalues.
    """
    k = distances.shape[0]
    centering = np.eye(k) - np.ones((k, k)) / k
    gram = -centering @ (distances ** 2) @ centering / 2
    eigenvalues, vectors = np.linalg.eigh((gram + gram.T) / 2)
    order = np.argsort(eigenvalues)[::-1][:target_dim]
    top = eigenvalues[order]
    if len(top) < target_dim or np.any(top <= PINV_THRESHOLD * max(1.0, float(abs(eigenvalues).max()))):
        return None
    return vectors[:, order] * np.sqrt(top)


def smacof(
    p: StressProblem,
    init: Optional[np.ndarray] = None,
    tol: float = 1e-9,
    max_iter: int = 10000,
    rng_seed: int = 0,
) -> EmbeddingResult:
    _check_connected(p.weights)
    if init is not None:
        coords = np.array(init, dtype=float)
        if coords.shape != (p.size, p.target_dim):
            raise ForgeError(
                Err.DIMENSION_MISMATCH, [f"init {coords.shape} vs ({p.size}, {p.target_dim})"]
            )
    else:
        start = classical_scaling(p.distances, p.target_dim)
        if start is None:
            log.info("Classical scaling is rank deficient, starting from random coordinates")
            start = np.random.default_rng(rng_seed).standard_normal((p.size, p.target_dim))
        coords = start

    v_pinv = _laplacian_pinv(p.weights)
    current = stress(p, coords)
    converged = current <= STRESS_FLOOR
    iteration = 0
    while not converged and iteration < max_iter:
        iteration += 1
        updated = _guttman(p, coords, v_pinv)
        new = stress(p, updated)
        if new - current > MONOTONE_SLACK * current + STRESS_FLOOR:
            raise ForgeError(Err.STRESS_INCREASED, [f"iteration {iteration}: {current} -> {new}"])
        decrease = (current - new) / current
        coords, current = updated, new
        if current <= STRESS_FLOOR or decrease < tol:
            converged = True
        if iteration % 1000 == 0:
            log.debug(f"SMACOF iteration {iteration}: stress {current:.6g}")

    if not converged:
        log.warning(f"SMACOF stopped at max_iter {max_iter} with stress {current:.6g}")
    return EmbeddingResult([list(map(float, row)) for row in coords], current, iteration, converged)


def sphere_chord_defect(length: float) -> float:
    """
    Relative shortfall (l - 2 sin(l/2)) / l of the chord under a great circle arc of
    length l on the unit sphere.
    """
    if not 0 <= length <= math.pi:
        raise ForgeError(Err.INVALID_ARGUMENT, [f"arc length {length} outside [0, pi]"])
    if length == 0:
        return 0.0
    return (length - 2 * math.sin(length / 2)) / length


def radii_statistics(coords) -> RadiiStatistics:
    x = np.asarray(coords, dtype=float)
    centroid = x.mean(axis=0)
    radii = np.linalg.norm(x - centroid, axis=1)
    return RadiiStatistics(
        [float(c) for c in centroid],
        [float(r) for r in radii],
        float(radii.mean()),
        float(radii.min()),
        float(radii.max()),
        float(radii.std()),
    )
