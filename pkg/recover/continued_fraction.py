"""
Terminating continued fraction for the Cauchy transform of a bordered Jacobi matrix.

Beyond the boundary the fraction is periodic and sums in closed form, so

    g(x) = 1 / (x - a_0 - b_0^2 / (x - a_1 - ... - 2 b_{k-1}^2 / T(x)))
    T(x) = x - a_k + sqrt((a_k - x)^2 - 4 b_k^2)

with T taking +i sqrt|r| on the tail support and the real root of the sign
of x - a_k off it. Every function here accepts scalars or arrays.
"""
from typing import Optional, Tuple, Union
import logging

import numpy as np

from config import config
from jacobi.bordered import BorderedJacobi
from laws.level_density import SupportInterval

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


class ContinuedFractionPole(ZeroDivisionError):
    """A level of the continued fraction vanished at a real point off the tail support"""

    def __init__(self, x: float, level: int):
        self.x = x
        self.level = level
        super().__init__(f"continued fraction pole near x={x!r} at level {level}")


def tail_support(j: BorderedJacobi) -> SupportInterval:
    """Support [a_k - 2 b_k, a_k + 2 b_k] of the Toeplitz tail"""
    return SupportInterval(j.tail_alpha - 2 * j.tail_beta, j.tail_alpha + 2 * j.tail_beta)


def _unwrap(values: np.ndarray):
    return complex(values) if values.ndim == 0 else values


def tail_g(j: BorderedJacobi, x: ArrayLike) -> Union[complex, np.ndarray]:
    """Closed-form innermost level x - a_k + sqrt((a_k - x)^2 - 4 b_k^2)"""
    x = np.asarray(x, dtype=float)
    shift = x - j.tail_alpha
    radicand = shift**2 - 4 * j.tail_beta**2
    on_support = radicand < 0
    root = np.where(on_support,
                    1j * np.sqrt(np.abs(radicand)),
                    np.sign(shift) * np.sqrt(np.where(on_support, 0.0, radicand)))
    return _unwrap(shift + root)


def _levels(j: BorderedJacobi, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Outermost denominator d_0, the smallest |d| over all levels, and the level where it occurs.

    No division-by-zero checks; callers decide what a vanishing level means.
    """
    inner = np.asarray(tail_g(j, x), dtype=complex)
    smallest = np.abs(inner)
    level = np.full(x.shape, j.k, dtype=int)
    if j.k == 0:
        return inner / 2, smallest, level

    with np.errstate(divide="ignore", invalid="ignore"):
        d = x - j.alpha(j.k - 1) - 2 * j.beta(j.k - 1) ** 2 / inner
        for i in range(j.k - 1, -1, -1):
            if i < j.k - 1:
                d = x - j.alpha(i) - j.beta(i) ** 2 / d
            magnitude = np.abs(d)
            replace = ~(magnitude >= smallest)
            smallest = np.where(replace, magnitude, smallest)
            level = np.where(replace, i, level)
    return d, smallest, level


def continued_fraction_g(j: BorderedJacobi, x: ArrayLike,
                         pole_tol: Optional[float] = None) -> Union[complex, np.ndarray]:
    """
    Boundary value of the Cauchy transform at real x.

    On the tail support this is the limit from the upper half-plane, so
    -Im(g) / pi is the density there. Raises ContinuedFractionPole if some
    level is within ``pole_tol`` of zero at a point off the support.
    """
    tol = config.POLE_TOL if pole_tol is None else pole_tol
    x = np.asarray(x, dtype=float)
    d, smallest, level = _levels(j, x)

    interval = tail_support(j)
    off_support = (x <= interval.lo) | (x >= interval.hi)
    poles = off_support & ~(smallest >= tol)
    if np.any(poles):
        first = np.flatnonzero(poles.ravel())[0]
        raise ContinuedFractionPole(float(x.ravel()[first]), int(level.ravel()[first]))

    return _unwrap(1 / d)


def outer_denominator(j: BorderedJacobi, x: ArrayLike) -> ArrayLike:
    """Real part of the outermost level d_0 = 1/g; its zeros off the support are atoms"""
    x = np.asarray(x, dtype=float)
    d, _, _ = _levels(j, x)
    values = np.real(d)
    return float(values) if values.ndim == 0 else values
