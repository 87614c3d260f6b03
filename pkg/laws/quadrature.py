"""
Endpoint-adapted quadrature on a finite interval.

The substitution x = c + r cos(theta) with a midpoint rule in theta turns
densities with square-root (or inverse square-root) behavior at the edges
into smooth periodic integrands, which the midpoint rule integrates with
spectral accuracy.
"""
from typing import Callable, Tuple

import numpy as np

from config import config


def cosine_nodes(lo: float, hi: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes and arc-length weights for the cosine substitution.

    Returns
    -------
    points : (n,) ndarray
        Strictly increasing nodes inside (lo, hi).
    weights : (n,) ndarray
        Quadrature weights, so that sum(f(points) * weights) ~ integral of f.
    """
    if not hi > lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    center = 0.5 * (lo + hi)
    radius = 0.5 * (hi - lo)
    theta = (np.arange(n)[::-1] + 0.5) * np.pi / n
    points = center + radius * np.cos(theta)
    weights = radius * np.sin(theta) * (np.pi / n)
    return points, weights


def integrate(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
              n: int = None) -> float:
    """Integral of a vectorized f over [lo, hi]"""
    points, weights = cosine_nodes(lo, hi, n or config.QUADRATURE_POINTS)
    return float(np.sum(np.asarray(f(points), dtype=float) * weights))
