from typing import Optional, Tuple, Union
import logging

import numpy as np
from scipy.linalg import LinAlgError, cholesky, hankel, solve_triangular

from config import config
from jacobi.measures import DiscretizedMeasure, MomentRealizabilityError, MomentSequence

logger = logging.getLogger(__name__)


class LanczosBreakdown(ArithmeticError):
    """
    Recurrence stopped early because a beta vanished.

    The measure is then supported on finitely many points; ``alphas`` and
    ``betas`` hold the parameters computed before the breakdown.
    """

    def __init__(self, step: int, alphas: np.ndarray, betas: np.ndarray, message: str = ""):
        self.step = step
        self.alphas = np.asarray(alphas, dtype=float)
        self.betas = np.asarray(betas, dtype=float)
        super().__init__(message or f"Lanczos breakdown at step {step}")


def lanczos_discrete(mu: DiscretizedMeasure, steps: int, breakdown_tol: Optional[float] = None,
                     return_basis: bool = False) -> Union[Tuple[np.ndarray, np.ndarray],
                                                          Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """
    Jacobi parameters of a discretized measure by the Lanczos iteration.

    The polynomials q_n are held as weighted grid values sqrt(w_j) q_n(x_j),
    so the measure inner product becomes the Euclidean one and the iteration
    runs on diag(x). Each new vector is reorthogonalized twice against all
    previous ones.

    Parameters
    ----------
    mu : DiscretizedMeasure
        Measure on N grid points.
    steps : int
        Number of (alpha, beta) pairs, at most N - 1.
    breakdown_tol : float, optional
        beta below this raises LanczosBreakdown; defaults to config.BREAKDOWN_TOL.
    return_basis : bool, default=False
        Also return the (N, steps + 1) matrix of weighted basis vectors.

    Returns
    -------
    alphas : (steps,) ndarray
    betas : (steps,) ndarray
    basis : (N, steps + 1) ndarray, only if ``return_basis``
    """
    tol = config.BREAKDOWN_TOL if breakdown_tol is None else breakdown_tol
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    if steps > mu.size - 1:
        raise ValueError(f"steps={steps} exceeds the {mu.size - 1} allowed by a {mu.size}-point measure")

    x = mu.points
    alphas = np.zeros(steps)
    betas = np.zeros(steps)
    basis = np.zeros((mu.size, steps + 1))
    basis[:, 0] = np.sqrt(mu.weights)

    for n in range(steps):
        q = basis[:, n]
        v = x * q
        alphas[n] = q @ v
        v = v - alphas[n] * q
        if n > 0:
            v = v - betas[n - 1] * basis[:, n - 1]

        # double Gram-Schmidt reorthogonalization
        previous = basis[:, :n + 1]
        v = v - previous @ (previous.T @ v)
        v = v - previous @ (previous.T @ v)

        betas[n] = np.sqrt(v @ v)
        if betas[n] < tol:
            raise LanczosBreakdown(n, alphas[:n + 1], betas[:n],
                                   f"Lanczos breakdown at step {n}: beta={betas[n]:.3e} below {tol:.1e}")
        basis[:, n + 1] = v / betas[n]
        logger.debug(f"Lanczos step {n}: alpha={alphas[n]:.15g}, beta={betas[n]:.15g}")

    logger.info(f"Lanczos ran {steps} steps on a {mu.size}-point measure")
    if return_basis:
        return alphas, betas, basis
    return alphas, betas


def _alphas_from_factor(factor: np.ndarray, count: int) -> np.ndarray:
    alphas = np.zeros(count)
    for n in range(count):
        alphas[n] = factor[n, n + 1] / factor[n, n]
        if n > 0:
            alphas[n] -= factor[n - 1, n] / factor[n - 1, n - 1]
    return alphas


def _leading_factor(matrix: np.ndarray) -> Tuple[int, np.ndarray]:
    """Largest p with a positive definite leading p x p block, and its upper Cholesky factor"""
    for p in range(matrix.shape[0], 0, -1):
        try:
            return p, cholesky(matrix[:p, :p], lower=False)
        except LinAlgError:
            continue
    return 0, np.zeros((0, 0))


def moments_to_jacobi(m: MomentSequence, steps: int,
                      pd_tol: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Jacobi parameters from raw moments through the Cholesky factor of the Hankel matrix.

    With H = R^T R of order steps + 1,

        alpha_n = R[n, n+1] / R[n, n] - R[n-1, n] / R[n-1, n-1]
        beta_n  = R[n+1, n+1] / R[n, n]

    A pivot that vanishes to within ``pd_tol`` (relative to the Hankel
    diagonal) means the moments come from a measure on finitely many points
    and raises LanczosBreakdown with the parameters found so far; a clearly
    negative pivot raises MomentRealizabilityError.
    """
    tol = config.PD_TOL if pd_tol is None else pd_tol
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    if 2 * steps > m.order:
        raise ValueError(f"{steps} steps need moments up to m_{2 * steps}, got up to m_{m.order}")

    size = steps + 1
    moments = m.moments
    matrix = hankel(moments[:size], moments[steps:2 * steps + 1])

    p, factor = _leading_factor(matrix)
    if p > 0:
        # a pivot that survives Cholesky can still vanish to rounding
        ratios = np.diag(factor) ** 2 / np.diag(matrix)[:p]
        small = np.flatnonzero(ratios <= tol)
        if small.size:
            p = int(small[0])
            factor = factor[:p, :p]
        elif p == size:
            alphas = _alphas_from_factor(factor, steps)
            betas = np.array([factor[n + 1, n + 1] / factor[n, n] for n in range(steps)])
            logger.info(f"Computed {steps} Jacobi parameter pairs from {m.order + 1} moments")
            return alphas, betas

    if p == 0:
        raise MomentRealizabilityError(f"Hankel matrix has a nonpositive leading entry m0={moments[0]!r}")

    column = matrix[:p, p]
    coupling = solve_triangular(factor.T, column, lower=True)
    pivot = matrix[p, p] - coupling @ coupling
    if abs(pivot) > tol * matrix[p, p]:
        raise MomentRealizabilityError(
            f"Hankel matrix is not positive semidefinite: pivot {pivot:.3e} at order {p}"
        )

    extended = np.zeros((p, p + 1))
    extended[:, :p] = factor
    extended[:, p] = coupling
    alphas = _alphas_from_factor(extended, p)
    betas = np.array([factor[n + 1, n + 1] / factor[n, n] for n in range(p - 1)])
    raise LanczosBreakdown(p - 1, alphas, betas,
                           f"moments describe a measure on {p} point(s); beta_{p - 1} vanishes")
