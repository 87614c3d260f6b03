from fractions import Fraction

import numpy as np
import pytest

from combinatorics.sequences import catalan, narayana
from combinatorics.wachter_pyramid import (
    BivariatePolynomial,
    pyramid_edge_notes,
    wachter_moment_exact,
    wachter_pyramid,
)
from laws.level_density import LawSpec, density, moment, moment_exact, support
from laws.quadrature import integrate


class TestBivariatePolynomial:
    def test_terms_drop_zeros(self):
        a, b = BivariatePolynomial.a(), BivariatePolynomial.b()
        p = (a + b) * (a - b) + b * b
        assert p.terms() == {(2, 0): Fraction(1)}

    def test_distributive_law(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            polys = []
            for _ in range(3):
                terms = {(int(i), int(j)): Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
                         for i, j in rng.integers(0, 4, size=(3, 2))}
                polys.append(BivariatePolynomial.from_terms(terms))
            p, q, r = polys
            assert (p + q) * r == p * r + q * r

    def test_exact_quotient(self):
        a, b = BivariatePolynomial.a(), BivariatePolynomial.b()
        s = a + b
        assert (a * s * s).exact_quotient(s) == a * s
        assert a.exact_quotient(s) is None

    def test_substitute_is_exact(self):
        a, b = BivariatePolynomial.a(), BivariatePolynomial.b()
        p = a * a * b - 3 * b + Fraction(1, 2)
        assert p.substitute(Fraction(1, 3), Fraction(2)) == Fraction(2, 9) - 6 + Fraction(1, 2)


class TestWachterMomentExact:
    def test_first_moment(self):
        numerator, power = wachter_moment_exact(1)
        assert numerator.terms() == {(1, 0): Fraction(1)}
        assert power == 1

    def test_second_moment(self):
        numerator, power = wachter_moment_exact(2)
        assert numerator.terms() == {(3, 0): 1, (2, 1): 1, (1, 1): 1}
        assert power == 3

    def test_third_moment(self):
        numerator, power = wachter_moment_exact(3)
        assert numerator.terms() == {
            (5, 0): 1, (4, 1): 2, (3, 2): 1, (3, 1): 3, (2, 2): 3, (2, 1): -1, (1, 2): 1,
        }
        assert power == 5

    def test_second_moment_float_value(self):
        numerator, power = wachter_moment_exact(2)
        value = float(numerator.substitute(2, 3)) / 5**power
        assert value == pytest.approx(moment(LawSpec.wachter(2, 3), 2), rel=1e-12)

    @pytest.mark.parametrize("k", range(1, 11))
    def test_matches_closed_form_at_random_rationals(self, k):
        rng = np.random.default_rng(100 + k)
        numerator, power = wachter_moment_exact(k)
        for _ in range(10):
            a = 1 + Fraction(int(rng.integers(0, 17)), 4)
            b = 1 + Fraction(int(rng.integers(0, 17)), 4)
            exact = numerator.substitute(a, b) / (a + b) ** power
            assert exact == moment_exact(LawSpec.wachter(a, b), k)

    @pytest.mark.parametrize("k", range(1, 9))
    def test_matches_quadrature_at_one_one(self, k):
        law = LawSpec.wachter(1, 1)
        interval = support(law)
        numerator, power = wachter_moment_exact(k)
        value = float(numerator.substitute(1, 1)) / 2**power
        quadrature = integrate(lambda x: x**k * density(law, x), interval.lo, interval.hi)
        assert value == pytest.approx(quadrature, abs=1e-10)

    def test_rejects_nonpositive_index(self):
        with pytest.raises(ValueError):
            wachter_moment_exact(0)


class TestWachterPyramid:
    def test_first_triangle(self):
        assert wachter_pyramid(1).rows == [[1]]

    def test_third_triangle_rows(self):
        assert wachter_pyramid(3).rows == [[1, 3, 1], [2, 3, 1], [1]]

    @pytest.mark.parametrize("k", range(1, 9))
    def test_top_row_is_narayana(self, k):
        triangle = wachter_pyramid(k)
        assert triangle.top_row == [narayana(k, j) for j in range(1, k + 1)]
        assert sum(triangle.top_row) == catalan(k)

    @pytest.mark.parametrize("k", range(1, 7))
    def test_entries_nonnegative(self, k):
        assert all(entry >= 0 for row in wachter_pyramid(k).rows for entry in row)

    def test_strings(self):
        assert wachter_pyramid(3).as_strings()[0] == ["1", "3", "1"]

    def test_edge_notes_quiet_for_small_triangle(self):
        assert pyramid_edge_notes(wachter_pyramid(3)) == []

    def test_edge_notes_are_soft(self):
        for k in range(1, 7):
            notes = pyramid_edge_notes(wachter_pyramid(k))
            assert isinstance(notes, list)
