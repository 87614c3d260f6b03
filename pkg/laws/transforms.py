"""
Cauchy, R and S transforms of the four level density laws.

Square roots of quadratics are taken as products of principal roots of the
linear factors, sqrt(z - lo) * sqrt(z - hi), which is analytic off the
support and behaves like z at infinity. All closed forms are rationalized so
that no removable singularity is ever evaluated.
"""
from typing import Tuple
import cmath
import logging
import math

from laws.level_density import LawKind, LawSpec, support

logger = logging.getLogger(__name__)

ComplexPoint = complex

_ZERO_TOL = 1e-14


class TransformDomainError(ValueError):
    """Transform evaluated at a pole or on the branch cut"""


def _as_complex(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise TransformDomainError(f"transform argument must be finite, got {z}")
    return z


def _checked_ratio(numerator: complex, denominator: complex, where: str) -> complex:
    if abs(denominator) <= _ZERO_TOL * max(1.0, abs(numerator)):
        raise TransformDomainError(f"pole of the {where} at the requested point")
    return numerator / denominator


def cauchy_transform(law: LawSpec, z: ComplexPoint) -> ComplexPoint:
    """g(z) = integral of d mu(x) / (z - x), with g(z) ~ 1/z at infinity"""
    z = _as_complex(z)
    interval = support(law)
    if z.imag == 0 and interval.lo < z.real < interval.hi:
        raise TransformDomainError(
            f"z={z.real} lies inside the support [{interval.lo}, {interval.hi}]; "
            "use the recover module for boundary values"
        )
    root = cmath.sqrt(z - interval.lo) * cmath.sqrt(z - interval.hi)

    if law.kind is LawKind.WIGNER:
        return _checked_ratio(2.0, z + root, "Cauchy transform")

    if law.kind is LawKind.MARCHENKO_PASTUR:
        lam = float(law.lam)
        return _checked_ratio(2.0, z + 1 - lam + root, "Cauchy transform")

    if law.kind is LawKind.KESTEN_MCKAY:
        v = float(law.v)
        return _checked_ratio(2 * (v - 1), (v - 2) * z + v * root, "Cauchy transform")

    a, b = float(law.a), float(law.b)
    s = a + b
    # the support may be clipped to [0, 1]; the cut must use the unclipped roots
    root_b, root_c = math.sqrt(b), math.sqrt(a * (s - 1))
    lo, hi = ((root_b - root_c) / s) ** 2, ((root_b + root_c) / s) ** 2
    root = cmath.sqrt(z - lo) * cmath.sqrt(z - hi)
    return _checked_ratio(2 * (s - 1), 1 - a + (s - 2) * z + s * root, "Cauchy transform")


def r_transform(law: LawSpec, w: ComplexPoint) -> ComplexPoint:
    """R-transform on the branch that is analytic at w = 0, where R(0) is the mean"""
    w = _as_complex(w)

    if law.kind is LawKind.WIGNER:
        return w

    if law.kind is LawKind.MARCHENKO_PASTUR:
        return _checked_ratio(complex(law.lam), 1 - w, "R-transform")

    if law.kind is LawKind.KESTEN_MCKAY:
        v = float(law.v)
        return _checked_ratio(2 * v * w, 1 + cmath.sqrt(1 + 4 * w * w), "R-transform")

    a, b = float(law.a), float(law.b)
    s = a + b
    radical = cmath.sqrt(s * s + 2 * (a - b) * w + w * w)
    return _checked_ratio(complex(2 * a), s - w + radical, "R-transform")


def s_transform(law: LawSpec, z: ComplexPoint) -> ComplexPoint:
    """S-transform, S(z) = R^{-1}(z) / z"""
    z = _as_complex(z)

    if law.kind is LawKind.WIGNER:
        return complex(1.0)

    if law.kind is LawKind.MARCHENKO_PASTUR:
        return _checked_ratio(z - law.lam, z * z, "S-transform")

    if law.kind is LawKind.KESTEN_MCKAY:
        v = float(law.v)
        return _checked_ratio(complex(v), v * v - z * z, "S-transform")

    a, b = float(law.a), float(law.b)
    s = a + b
    return _checked_ratio(a - s * z, z * z * (z - 1), "S-transform")


def s_transform_interval(law: LawSpec) -> Tuple[float, float]:
    """Open real interval on which R(z * S(z)) = z holds on the principal branch"""
    if law.kind is LawKind.WIGNER:
        return -math.inf, math.inf
    if law.kind is LawKind.MARCHENKO_PASTUR:
        return 0.0, math.inf
    if law.kind is LawKind.KESTEN_MCKAY:
        v = float(law.v)
        return -v, v
    return 0.0, 1.0
