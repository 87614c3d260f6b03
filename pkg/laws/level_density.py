from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb, isfinite, sqrt
from numbers import Real
from typing import Dict, Optional, Union
import logging

import numpy as np

from combinatorics.sequences import catalan, chebyshev_u, narayana_poly
from jacobi.bordered import BorderedJacobi

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


class LawParameterError(ValueError):
    """Law parameters outside their admissible range"""


class LawKind(Enum):
    WIGNER = "wigner"
    MARCHENKO_PASTUR = "mp"
    KESTEN_MCKAY = "km"
    WACHTER = "wachter"


@dataclass(frozen=True)
class SupportInterval:
    """Closed interval [lo, hi] carrying a density"""
    lo: float
    hi: float

    def __post_init__(self):
        if not (isfinite(self.lo) and isfinite(self.hi)):
            raise ValueError(f"support endpoints must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise ValueError(f"support must satisfy lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def half_width(self) -> float:
        return 0.5 * (self.hi - self.lo)

    @property
    def width(self) -> float:
        return self.hi - self.lo


def _plain_number(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


@dataclass(frozen=True)
class LawSpec:
    """
    One of the four level density laws with its parameters.

    Use the named constructors; parameters may be ints, Fractions or
    floats, and rational parameters give exact moments and cumulants.
    """
    kind: LawKind
    lam: Optional[Real] = None
    v: Optional[Real] = None
    a: Optional[Real] = None
    b: Optional[Real] = None

    def __post_init__(self):
        for name in ("lam", "v", "a", "b"):
            object.__setattr__(self, name, _plain_number(getattr(self, name)))

        required = {
            LawKind.WIGNER: (),
            LawKind.MARCHENKO_PASTUR: ("lam",),
            LawKind.KESTEN_MCKAY: ("v",),
            LawKind.WACHTER: ("a", "b"),
        }[self.kind]
        for name in ("lam", "v", "a", "b"):
            value = getattr(self, name)
            if name in required:
                if not isinstance(value, Real) or not isfinite(value):
                    raise LawParameterError(f"{self.kind.value} law needs a finite real '{name}', got {value!r}")
            elif value is not None:
                raise LawParameterError(f"{self.kind.value} law takes no parameter '{name}'")

        if self.kind is LawKind.MARCHENKO_PASTUR and not self.lam >= 1:
            raise LawParameterError(f"Marchenko-Pastur requires lambda >= 1, got {self.lam}")
        if self.kind is LawKind.KESTEN_MCKAY and not self.v >= 2:
            raise LawParameterError(f"Kesten-McKay requires v >= 2, got {self.v}")
        if self.kind is LawKind.WACHTER and not (self.a >= 1 and self.b >= 1):
            raise LawParameterError(f"Wachter requires a >= 1 and b >= 1, got a={self.a}, b={self.b}")

    @classmethod
    def wigner(cls) -> "LawSpec":
        return cls(LawKind.WIGNER)

    @classmethod
    def marchenko_pastur(cls, lam: Real) -> "LawSpec":
        return cls(LawKind.MARCHENKO_PASTUR, lam=lam)

    @classmethod
    def kesten_mckay(cls, v: Real) -> "LawSpec":
        return cls(LawKind.KESTEN_MCKAY, v=v)

    @classmethod
    def wachter(cls, a: Real, b: Real) -> "LawSpec":
        return cls(LawKind.WACHTER, a=a, b=b)

    @classmethod
    def from_name(cls, name: str, lam: Optional[Real] = None, v: Optional[Real] = None,
                  a: Optional[Real] = None, b: Optional[Real] = None) -> "LawSpec":
        """Build from a command-line style name; flags foreign to the law are rejected"""
        try:
            kind = LawKind(name.lower())
        except ValueError:
            choices = ", ".join(k.value for k in LawKind)
            raise LawParameterError(f"unknown law '{name}', expected one of {choices}")
        given = {"lam": lam, "v": v, "a": a, "b": b}
        return cls(kind, **{name: value for name, value in given.items() if value is not None})

    @property
    def parameters(self) -> Dict[str, Real]:
        return {name: getattr(self, name) for name in ("lam", "v", "a", "b")
                if getattr(self, name) is not None}

    @property
    def label(self) -> str:
        params = ",".join(f"{k}={v}" for k, v in self.parameters.items())
        return f"{self.kind.value}({params})" if params else self.kind.value


def support(law: LawSpec) -> SupportInterval:
    """Closed support interval of the law"""
    if law.kind is LawKind.WIGNER:
        return SupportInterval(-2.0, 2.0)
    if law.kind is LawKind.MARCHENKO_PASTUR:
        root = sqrt(law.lam)
        return SupportInterval(max((1 - root) ** 2, 0.0), (1 + root) ** 2)
    if law.kind is LawKind.KESTEN_MCKAY:
        edge = 2 * sqrt(law.v - 1)
        return SupportInterval(-edge, edge)
    s = float(law.a + law.b)
    root_b = sqrt(law.b)
    root_c = sqrt(law.a * (s - 1))
    return SupportInterval(max(((root_b - root_c) / s) ** 2, 0.0),
                           min(((root_b + root_c) / s) ** 2, 1.0))


def density(law: LawSpec, x: ArrayLike) -> ArrayLike:
    """Density of the law; zero outside the open support, including the endpoints"""
    x = np.asarray(x, dtype=float)
    interval = support(law)
    inside = (x > interval.lo) & (x < interval.hi)
    xi = np.where(inside, x, interval.midpoint)
    edge = np.sqrt((interval.hi - xi) * (xi - interval.lo))

    if law.kind is LawKind.WIGNER:
        values = edge / (2 * np.pi)
    elif law.kind is LawKind.MARCHENKO_PASTUR:
        values = edge / (2 * np.pi * xi)
    elif law.kind is LawKind.KESTEN_MCKAY:
        v = float(law.v)
        values = v * edge / (2 * np.pi * (v - xi) * (v + xi))
    else:
        s = float(law.a + law.b)
        values = s * edge / (2 * np.pi * xi * (1 - xi))

    values = np.where(inside, values, 0.0)
    return float(values) if values.ndim == 0 else values


def moment_exact(law: LawSpec, n: int) -> Fraction:
    """
    n-th raw moment as an exact rational.

    Float parameters enter through their exact binary value, so the float
    ``moment`` is the correctly rounded result.
    """
    if n < 0:
        raise ValueError(f"moment order must be nonnegative, got {n}")
    if n == 0:
        return Fraction(1)

    if law.kind is LawKind.WIGNER:
        return Fraction(catalan(n // 2)) if n % 2 == 0 else Fraction(0)

    if law.kind is LawKind.MARCHENKO_PASTUR:
        return narayana_poly(n, Fraction(law.lam))

    if law.kind is LawKind.KESTEN_MCKAY:
        if n % 2:
            return Fraction(0)
        v = Fraction(law.v)
        half = n // 2
        return sum((comb(n - j, half) * Fraction(j, n - j) * v**j * (v - 1) ** (half - j)
                    for j in range(1, half + 1)), Fraction(0))

    a, b = Fraction(law.a), Fraction(law.b)
    s = a + b
    scaled = a * (s - 1)
    correction = sum((scaled ** (j + 2) / s ** (2 * j + 4) * narayana_poly(j + 1, b / scaled)
                      for j in range(n - 1)), Fraction(0))
    return a / s - s * correction


def moment(law: LawSpec, n: int) -> float:
    """n-th raw moment"""
    return float(moment_exact(law, n))


def free_cumulant_exact(law: LawSpec, n: int) -> Fraction:
    """n-th free cumulant as an exact rational"""
    if n < 1:
        raise ValueError(f"free cumulant order must be positive, got {n}")

    if law.kind is LawKind.WIGNER:
        return Fraction(1 if n == 2 else 0)

    if law.kind is LawKind.MARCHENKO_PASTUR:
        return Fraction(law.lam)

    if law.kind is LawKind.KESTEN_MCKAY:
        if n % 2:
            return Fraction(0)
        half = (n - 2) // 2
        return (-1) ** half * Fraction(law.v) * catalan(half)

    a, b = Fraction(law.a), Fraction(law.b)
    s = a + b
    return -narayana_poly(n - 1, -b / a) * (-a) ** n / s ** (2 * n - 1)


def free_cumulant(law: LawSpec, n: int) -> float:
    """n-th free cumulant"""
    return float(free_cumulant_exact(law, n))


def jacobi_params(law: LawSpec) -> BorderedJacobi:
    """Jacobi parameters: a one-entry boundary followed by a constant tail"""
    if law.kind is LawKind.WIGNER:
        return BorderedJacobi((0.0,), (1.0,), 0.0, 1.0)

    if law.kind is LawKind.MARCHENKO_PASTUR:
        lam = float(law.lam)
        return BorderedJacobi((lam,), (sqrt(lam),), lam + 1, sqrt(lam))

    if law.kind is LawKind.KESTEN_MCKAY:
        v = float(law.v)
        return BorderedJacobi((0.0,), (sqrt(v),), 0.0, sqrt(v - 1))

    a, b = float(law.a), float(law.b)
    s = a + b
    return BorderedJacobi(
        (a / s,),
        (sqrt(a * b) / s**1.5,),
        (a * a - a + a * b + b) / s**2,
        sqrt(a * b * (s - 1)) / s**2,
    )


def orthogonal_poly(law: LawSpec, n: int, x: ArrayLike) -> ArrayLike:
    """
    Monic orthogonal polynomial q_n written through Chebyshev U polynomials:

        q_n(x) = beta1^(n-1) (x - alpha0) U_{n-1}(y) - beta0^2 beta1^(n-2) U_{n-2}(y),
        y = (x - alpha1) / (2 beta1).
    """
    if n < 0:
        raise ValueError(f"polynomial degree must be nonnegative, got {n}")
    x = np.asarray(x, dtype=float)
    if n == 0:
        values = np.ones_like(x)
        return float(values) if values.ndim == 0 else values

    params = jacobi_params(law)
    alpha0, beta0 = params.boundary_alpha[0], params.boundary_beta[0]
    alpha1, beta1 = params.tail_alpha, params.tail_beta
    y = (x - alpha1) / (2 * beta1)
    values = (beta1 ** (n - 1) * (x - alpha0) * chebyshev_u(n - 1, y)
              - beta0**2 * beta1 ** (n - 2) * chebyshev_u(n - 2, y))
    values = np.asarray(values, dtype=float)
    return float(values) if values.ndim == 0 else values


def orthonormal_poly(law: LawSpec, n: int, x: ArrayLike) -> ArrayLike:
    """Orthonormal polynomial from the three-term recurrence with the law's Jacobi parameters"""
    if n < 0:
        raise ValueError(f"polynomial degree must be nonnegative, got {n}")
    params = jacobi_params(law)
    x = np.asarray(x, dtype=float)
    previous, current = np.zeros_like(x), np.ones_like(x)
    for i in range(n):
        previous, current = current, ((x - params.alpha(i)) * current
                                      - params.beta(i - 1) * previous) / params.beta(i)
    return float(current) if current.ndim == 0 else current


def polynomial_norm(law: LawSpec, n: int) -> float:
    """L2 norm of the monic q_n, i.e. beta0 * beta1^(n-1)"""
    if n < 0:
        raise ValueError(f"polynomial degree must be nonnegative, got {n}")
    if n == 0:
        return 1.0
    params = jacobi_params(law)
    return params.boundary_beta[0] * params.tail_beta ** (n - 1)
