from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple
import logging

import numpy as np
from scipy.linalg import eigh_tridiagonal

from config import config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BorderedJacobi:
    """
    Jacobi parameters that are constant beyond a finite boundary.

    alpha_i, beta_i are ``boundary_alpha[i]``, ``boundary_beta[i]`` for
    i < k and ``tail_alpha``, ``tail_beta`` for every i >= k; k = 0 is a
    pure Toeplitz Jacobi matrix.
    """
    boundary_alpha: Tuple[float, ...]
    boundary_beta: Tuple[float, ...]
    tail_alpha: float
    tail_beta: float

    def __post_init__(self):
        object.__setattr__(self, "boundary_alpha", tuple(float(v) for v in self.boundary_alpha))
        object.__setattr__(self, "boundary_beta", tuple(float(v) for v in self.boundary_beta))
        object.__setattr__(self, "tail_alpha", float(self.tail_alpha))
        object.__setattr__(self, "tail_beta", float(self.tail_beta))

        if len(self.boundary_alpha) != len(self.boundary_beta):
            raise ValueError(
                f"boundary lengths differ: {len(self.boundary_alpha)} alphas, "
                f"{len(self.boundary_beta)} betas"
            )
        values = self.boundary_alpha + self.boundary_beta + (self.tail_alpha, self.tail_beta)
        if not all(np.isfinite(values)):
            raise ValueError("Jacobi parameters must be finite")
        if any(beta <= 0 for beta in self.boundary_beta + (self.tail_beta,)):
            raise ValueError("all beta must be positive")

    @property
    def k(self) -> int:
        return len(self.boundary_alpha)

    def alpha(self, i: int) -> float:
        return self.boundary_alpha[i] if i < self.k else self.tail_alpha

    def beta(self, i: int) -> float:
        if i < 0:
            return 0.0
        return self.boundary_beta[i] if i < self.k else self.tail_beta

    def alphas(self, n: int) -> np.ndarray:
        return np.array([self.alpha(i) for i in range(n)])

    def betas(self, n: int) -> np.ndarray:
        return np.array([self.beta(i) for i in range(n)])

    def tridiagonal(self, n: int) -> np.ndarray:
        """Leading n x n block of the Jacobi matrix"""
        return (np.diag(self.alphas(n))
                + np.diag(self.betas(n - 1), 1)
                + np.diag(self.betas(n - 1), -1))

    def gershgorin_interval(self) -> Tuple[float, float]:
        """Interval containing the spectrum of the infinite Jacobi operator"""
        lows, highs = [], []
        for i in range(self.k + 2):
            radius = self.beta(i - 1) + self.beta(i)
            lows.append(self.alpha(i) - radius)
            highs.append(self.alpha(i) + radius)
        return min(lows), max(highs)

    def shifted(self, c: float) -> "BorderedJacobi":
        return BorderedJacobi(tuple(a + c for a in self.boundary_alpha), self.boundary_beta,
                              self.tail_alpha + c, self.tail_beta)

    def scaled(self, c: float) -> "BorderedJacobi":
        if not c > 0:
            raise ValueError(f"scale must be positive, got {c}")
        return BorderedJacobi(tuple(a * c for a in self.boundary_alpha),
                              tuple(b * c for b in self.boundary_beta),
                              self.tail_alpha * c, self.tail_beta * c)

    def to_dict(self) -> Dict:
        return {
            "k": self.k,
            "boundary_alpha": list(self.boundary_alpha),
            "boundary_beta": list(self.boundary_beta),
            "tail_alpha": self.tail_alpha,
            "tail_beta": self.tail_beta,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "BorderedJacobi":
        return cls(tuple(data["boundary_alpha"]), tuple(data["boundary_beta"]),
                   data["tail_alpha"], data["tail_beta"])


def _as_pair(alphas: Sequence[float], betas: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    alphas = np.asarray(alphas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    if alphas.ndim != 1 or alphas.shape != betas.shape:
        raise ValueError(f"alphas and betas must be 1-D of equal length, got {alphas.shape} and {betas.shape}")
    if alphas.size == 0:
        raise ValueError("alphas and betas must be nonempty")
    return alphas, betas


def to_bordered(alphas: Sequence[float], betas: Sequence[float], k: Optional[int] = None,
                trim_tol: Optional[float] = None) -> BorderedJacobi:
    """
    Package a finite run of Jacobi parameters as a BorderedJacobi.

    With ``k`` given, the first k entries form the boundary and entry k
    is the tail. Otherwise the last entry is the tail and the boundary is
    trimmed from the right while it matches the tail within ``trim_tol``.
    """
    alphas, betas = _as_pair(alphas, betas)

    if k is not None:
        if not 0 <= k < alphas.size:
            raise ValueError(f"boundary length {k} needs at least {k + 1} parameters, got {alphas.size}")
        return BorderedJacobi(tuple(alphas[:k]), tuple(betas[:k]), alphas[k], betas[k])

    tol = config.TRIM_TOL if trim_tol is None else trim_tol
    tail_alpha, tail_beta = alphas[-1], betas[-1]
    size = alphas.size - 1
    while size > 0 and abs(alphas[size - 1] - tail_alpha) <= tol and abs(betas[size - 1] - tail_beta) <= tol:
        size -= 1

    logger.debug(f"Trimmed boundary to k={size} from {alphas.size} parameters")
    return BorderedJacobi(tuple(alphas[:size]), tuple(betas[:size]), tail_alpha, tail_beta)


def toeplitz_distance(alphas: Sequence[float], betas: Sequence[float]) -> float:
    """Max deviation from the final entries over the last half of the parameters"""
    alphas, betas = _as_pair(alphas, betas)
    if alphas.size < 2:
        raise ValueError("toeplitz_distance needs at least two parameters")
    start = alphas.size // 2
    return float(max(np.max(np.abs(alphas[start:] - alphas[-1])),
                     np.max(np.abs(betas[start:] - betas[-1]))))


def gauss_rule(alphas: Sequence[float], betas: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gauss quadrature nodes and weights of the truncated Jacobi matrix.

    Uses the first len(alphas) diagonal and len(alphas) - 1 off-diagonal
    entries; weights are squared first components of the eigenvectors.
    """
    alphas = np.asarray(alphas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    n = alphas.size
    if betas.size < n - 1:
        raise ValueError(f"need {n - 1} betas for {n} alphas, got {betas.size}")
    if n == 1:
        return alphas.copy(), np.ones(1)
    nodes, vectors = eigh_tridiagonal(alphas, betas[:n - 1])
    return nodes, vectors[0, :] ** 2
