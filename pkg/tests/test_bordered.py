from math import sqrt

import numpy as np
import pytest

from combinatorics.sequences import catalan
from jacobi.bordered import BorderedJacobi, gauss_rule, to_bordered, toeplitz_distance


class TestBorderedJacobi:
    def test_accessors(self):
        j = BorderedJacobi((2.0,), (sqrt(2),), 3.0, sqrt(2))
        assert j.k == 1
        assert j.alpha(0) == 2.0 and j.alpha(7) == 3.0
        assert j.beta(-1) == 0.0
        np.testing.assert_allclose(j.alphas(4), [2, 3, 3, 3])
        np.testing.assert_allclose(j.betas(3), [sqrt(2)] * 3)

    def test_values_stored_as_floats(self):
        j = BorderedJacobi([np.float64(1)], [np.int64(2)], 0, 1)
        assert j.boundary_alpha == (1.0,)
        assert type(j.boundary_beta[0]) is float

    @pytest.mark.parametrize("args", [
        ((0.0, 1.0), (1.0,), 0.0, 1.0),
        ((0.0,), (0.0,), 0.0, 1.0),
        ((), (), 0.0, -1.0),
        ((np.nan,), (1.0,), 0.0, 1.0),
    ])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            BorderedJacobi(*args)

    def test_tridiagonal(self):
        t = BorderedJacobi((1.0,), (0.5,), 0.0, 2.0).tridiagonal(4)
        np.testing.assert_array_equal(t, t.T)
        assert t[0, 0] == 1.0 and t[0, 1] == 0.5 and t[2, 3] == 2.0 and t[3, 3] == 0.0

    def test_gershgorin_contains_truncated_spectra(self):
        j = BorderedJacobi((5.0, -1.0), (0.3, 2.0), 0.5, 1.0)
        lo, hi = j.gershgorin_interval()
        eigenvalues = np.linalg.eigvalsh(j.tridiagonal(40))
        assert lo <= eigenvalues.min() and eigenvalues.max() <= hi

    def test_shift_and_scale(self):
        j = BorderedJacobi((2.0,), (1.5,), 3.0, 1.0)
        assert j.shifted(1.0) == BorderedJacobi((3.0,), (1.5,), 4.0, 1.0)
        assert j.scaled(2.0) == BorderedJacobi((4.0,), (3.0,), 6.0, 2.0)
        with pytest.raises(ValueError):
            j.scaled(0.0)

    def test_dict_round_trip(self):
        j = BorderedJacobi((0.5, 0.1), (0.25, 0.3), 0.5, 0.25)
        assert BorderedJacobi.from_dict(j.to_dict()) == j
        assert j.to_dict()["k"] == 2


class TestToBordered:
    def test_pure_toeplitz_trims_fully(self):
        j = to_bordered([0, 0, 0], [1, 1, 1])
        assert j.k == 0
        assert (j.tail_alpha, j.tail_beta) == (0.0, 1.0)

    def test_one_boundary_entry(self):
        j = to_bordered([2, 3, 3], [sqrt(2)] * 3)
        assert j == BorderedJacobi((2.0,), (sqrt(2),), 3.0, sqrt(2))

    def test_beta_difference_keeps_boundary(self):
        j = to_bordered([0.5, 0.5], [1 / (2 * sqrt(2)), 0.25])
        assert j.k == 1

    def test_trim_tolerance(self):
        assert to_bordered([1e-10, 0, 0], [1, 1, 1]).k == 0
        assert to_bordered([1e-10, 0, 0], [1, 1, 1], trim_tol=1e-12).k == 1

    def test_explicit_boundary_length(self):
        j = to_bordered([0, 0, 0, 0], [1, 1, 1, 1], k=2)
        assert j.k == 2
        with pytest.raises(ValueError):
            to_bordered([0, 0], [1, 1], k=2)

    @pytest.mark.parametrize("alphas, betas", [([], []), ([0, 1], [1])])
    def test_malformed_input(self, alphas, betas):
        with pytest.raises(ValueError):
            to_bordered(alphas, betas)


class TestToeplitzDistance:
    def test_constant(self):
        assert toeplitz_distance([1, 1, 1], [2, 2, 2]) == 0.0

    def test_boundary_outside_last_half(self):
        assert toeplitz_distance([2, 3, 3, 3], [1, 1, 1, 1]) == 0.0

    def test_deviation_in_last_half(self):
        assert toeplitz_distance([0, 0, 0.1, 0], [1, 1.2, 1, 1]) == pytest.approx(0.1)

    def test_needs_two_entries(self):
        with pytest.raises(ValueError):
            toeplitz_distance([0], [1])


class TestGaussRule:
    def test_semicircle_nodes(self):
        nodes, weights = gauss_rule(np.zeros(5), np.ones(5))
        np.testing.assert_allclose(nodes, 2 * np.cos(np.arange(5, 0, -1) * np.pi / 6), atol=1e-12)
        assert weights.sum() == pytest.approx(1.0)

    def test_reproduces_moments(self):
        nodes, weights = gauss_rule(np.zeros(6), np.ones(5))
        for n in range(0, 12, 2):
            assert np.sum(weights * nodes**n) == pytest.approx(catalan(n // 2), rel=1e-10)

    def test_single_node(self):
        nodes, weights = gauss_rule([0.7], [])
        assert nodes.tolist() == [0.7] and weights.tolist() == [1.0]

    def test_too_few_betas(self):
        with pytest.raises(ValueError):
            gauss_rule([0, 0, 0], [1])
