from math import comb
from typing import Union
import logging

import numpy as np
from scipy.special import eval_chebyu

logger = logging.getLogger(__name__)


def catalan(n: int) -> int:
    """Catalan number C_n = binom(2n, n) / (n + 1), exact"""
    if n < 0:
        raise ValueError(f"catalan index must be nonnegative, got {n}")
    return comb(2 * n, n) // (n + 1)


def narayana(n: int, j: int) -> int:
    """Narayana number N_{n,j} = binom(n, j) binom(n, j-1) / n, exact"""
    if n < 1 or not 1 <= j <= n:
        raise ValueError(f"narayana requires 1 <= j <= n, got n={n}, j={j}")
    return comb(n, j) * comb(n, j - 1) // n


def narayana_poly(n: int, r):
    """
    Narayana polynomial N_n(r) = sum_j N_{n,j} r^j with N_0(r) = 1.

    Works for ints, Fractions, floats, sympy expressions and numpy arrays;
    the result has the same kind as ``r``, so rational input stays exact.
    """
    if n < 0:
        raise ValueError(f"narayana_poly index must be nonnegative, got {n}")
    if n == 0:
        return r * 0 + 1
    total = r * 0
    power = r
    for j in range(1, n + 1):
        total = total + narayana(n, j) * power
        power = power * r
    return total


def chebyshev_u(n: int, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Chebyshev polynomial of the second kind, with U_{-1} = 0"""
    if n < -1:
        raise ValueError(f"chebyshev_u index must be >= -1, got {n}")
    x = np.asarray(x, dtype=float)
    if n == -1:
        values = np.zeros_like(x)
    else:
        values = eval_chebyu(n, x)
    return float(values) if values.ndim == 0 else values
