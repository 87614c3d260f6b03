from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Tuple
import logging

from sympy import Poly, QQ, Rational, symbols

from combinatorics.sequences import catalan, narayana

logger = logging.getLogger(__name__)

A, B = symbols("a b")


def _to_fraction(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


@dataclass(frozen=True)
class BivariatePolynomial:
    """
    Exact polynomial in the indeterminates a and b with rational coefficients.

    Thin wrapper around a sympy ``Poly`` over QQ; arithmetic is exact and
    zero coefficients are never stored.
    """
    poly: Poly

    @classmethod
    def from_terms(cls, terms: Dict[Tuple[int, int], Fraction]) -> "BivariatePolynomial":
        expr = sum((Rational(c.numerator, c.denominator) * A**i * B**j
                    for (i, j), c in terms.items()), Rational(0))
        return cls(Poly(expr, A, B, domain=QQ))

    @classmethod
    def constant(cls, value) -> "BivariatePolynomial":
        return cls(Poly(Rational(value), A, B, domain=QQ))

    @classmethod
    def a(cls) -> "BivariatePolynomial":
        return cls(Poly(A, A, B, domain=QQ))

    @classmethod
    def b(cls) -> "BivariatePolynomial":
        return cls(Poly(B, A, B, domain=QQ))

    def terms(self) -> Dict[Tuple[int, int], Fraction]:
        """Map (deg_a, deg_b) -> coefficient, zero coefficients omitted"""
        return {monom: _to_fraction(coeff)
                for monom, coeff in self.poly.terms() if coeff != 0}

    def is_zero(self) -> bool:
        return self.poly.is_zero

    def _lift(self, other) -> "BivariatePolynomial":
        if isinstance(other, BivariatePolynomial):
            return other
        if isinstance(other, Fraction):
            return BivariatePolynomial.constant(Rational(other.numerator, other.denominator))
        return BivariatePolynomial.constant(other)

    def __add__(self, other) -> "BivariatePolynomial":
        return BivariatePolynomial(self.poly + self._lift(other).poly)

    __radd__ = __add__

    def __sub__(self, other) -> "BivariatePolynomial":
        return BivariatePolynomial(self.poly - self._lift(other).poly)

    def __rsub__(self, other) -> "BivariatePolynomial":
        return BivariatePolynomial(self._lift(other).poly - self.poly)

    def __mul__(self, other) -> "BivariatePolynomial":
        return BivariatePolynomial(self.poly * self._lift(other).poly)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "BivariatePolynomial":
        return BivariatePolynomial(self.poly ** exponent)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivariatePolynomial):
            return NotImplemented
        return (self.poly - other.poly).is_zero

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms().items())))

    def exact_quotient(self, divisor: "BivariatePolynomial"):
        """Quotient if ``divisor`` divides exactly, otherwise None"""
        quotient, remainder = self.poly.div(divisor.poly)
        if not remainder.is_zero:
            return None
        return BivariatePolynomial(quotient)

    def substitute(self, a, b):
        """Evaluate at (a, b); exact for rational arguments"""
        total = 0
        for (i, j), coeff in self.terms().items():
            total = total + coeff * a**i * b**j
        return total


@dataclass
class MomentPyramidTriangle:
    """One triangle of the Wachter moment pyramid"""
    moment_index: int
    rows: List[List[int]] = field(default_factory=list)

    @property
    def top_row(self) -> List[int]:
        return self.rows[0] if self.rows else []

    def as_strings(self) -> List[List[str]]:
        return [[str(entry) for entry in row] for row in self.rows]


def wachter_moment_exact(k: int) -> Tuple[BivariatePolynomial, int]:
    """
    k-th Wachter moment as numerator(a, b) / (a + b)^d.

    Expands m_k = a/s - s * sum_{j=0}^{k-2} (a(s-1))^{j+2} N_{j+1}(b/(a(s-1))) / s^{2j+4}
    with s = a + b over the common denominator s^{2k-1}, then cancels
    factors of s from numerator and denominator while the division is exact.
    No other common factors are sought.
    """
    if k < 1:
        raise ValueError(f"moment index must be positive, got {k}")

    a = BivariatePolynomial.a()
    b = BivariatePolynomial.b()
    s = a + b
    scaled = a * (s - 1)

    numerator = a * s ** (2 * k - 2)
    for j in range(k - 1):
        narayana_block = BivariatePolynomial.constant(0)
        for i in range(1, j + 2):
            narayana_block = narayana_block + narayana(j + 1, i) * b**i * scaled ** (j + 2 - i)
        numerator = numerator - s ** (2 * (k - 2 - j)) * narayana_block

    power = 2 * k - 1
    while power > 0:
        quotient = numerator.exact_quotient(s)
        if quotient is None:
            break
        numerator = quotient
        power -= 1

    logger.debug(f"Wachter moment {k}: {len(numerator.terms())} terms over (a+b)^{power}")
    return numerator, power


def wachter_pyramid(k: int) -> MomentPyramidTriangle:
    """
    Coefficient triangle of the k-th Wachter moment numerator.

    Rows are grouped by the degree in b, highest first; each row lists the
    absolute coefficients in descending powers of a.
    """
    numerator, _ = wachter_moment_exact(k)
    by_b_degree: Dict[int, List[Tuple[int, int]]] = {}
    for (deg_a, deg_b), coeff in numerator.terms().items():
        if coeff.denominator != 1:
            raise ArithmeticError(f"non-integer coefficient {coeff} in Wachter numerator {k}")
        by_b_degree.setdefault(deg_b, []).append((deg_a, abs(coeff.numerator)))

    rows = []
    for deg_b in sorted(by_b_degree, reverse=True):
        entries = sorted(by_b_degree[deg_b], key=lambda item: item[0], reverse=True)
        rows.append([value for _, value in entries])

    triangle = MomentPyramidTriangle(moment_index=k, rows=rows)
    if sum(triangle.top_row) != catalan(k):
        logger.warning(f"Pyramid {k} top row sums to {sum(triangle.top_row)}, expected C_{k}")
    return triangle


def _is_triangular(value: int) -> bool:
    # value = t(t+1)/2  <=>  8 value + 1 is an odd square
    root = isqrt(8 * value + 1)
    return root * root == 8 * value + 1


def pyramid_edge_notes(triangle: MomentPyramidTriangle) -> List[str]:
    """
    Soft checks of the triangular-number patterns seen at the pyramid edges.

    Failures are returned as notes and logged as warnings, never raised.
    """
    notes = []
    if triangle.rows:
        bottom = triangle.rows[-1]
        for value in (bottom[0], bottom[-1]):
            if not _is_triangular(value):
                notes.append(f"bottom entry {value} of triangle {triangle.moment_index} is not triangular")
        top = triangle.top_row
        if len(top) >= 3:
            for value in (top[1], top[-2]):
                if not _is_triangular(value):
                    notes.append(f"second top-row entry {value} of triangle "
                                 f"{triangle.moment_index} is not triangular")
    for note in notes:
        logger.warning(note)
    return notes
