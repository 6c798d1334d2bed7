import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial import legendre
from scipy import special

from fgps.exceptions import DomainError
from fgps.gegenbauer import (
    barycentric_weights,
    gauss_legendre,
    gegenbauer_poly_eval,
    gegenbauer_rule,
    gg_nodes,
    integration_vector,
    leading_coefficient,
)


def moments(d):
    return (1.0 + (-1.0) ** d) / (d + 1.0)


class TestPolynomial:
    def test_degree_zero_is_one(self):
        assert gegenbauer_poly_eval(0.5, 0, 0.3) == 1.0

    def test_legendre_p2_at_zero(self):
        # lambda = 1/2 is the Legendre family: P_2(0) = -1/2
        assert gegenbauer_poly_eval(0.5, 2, 0.0) == pytest.approx(-0.5, abs=1e-15)

    def test_chebyshev_zero(self):
        assert abs(gegenbauer_poly_eval(0.0, 5, math.cos(math.pi / 10))) <= 1e-12

    @pytest.mark.parametrize("lam", [-0.5, -1.0])
    def test_rejects_small_index(self, lam):
        with pytest.raises(DomainError):
            gegenbauer_poly_eval(lam, 3, 0.1)

    @given(st.floats(-1, 1), st.integers(0, 12))
    def test_matches_scipy_legendre(self, x, n):
        assert gegenbauer_poly_eval(0.5, n, x) == pytest.approx(special.eval_legendre(n, x), abs=1e-13)

    @given(st.floats(-0.45, 3.0), st.floats(-1, 1), st.integers(0, 10))
    def test_matches_scipy_jacobi(self, lam, x, n):
        expected = special.eval_jacobi(n, lam - 0.5, lam - 0.5, x)
        assert gegenbauer_poly_eval(lam, n, x) == pytest.approx(expected, rel=1e-11, abs=1e-11)


class TestNodes:
    def test_chebyshev_closed_form(self):
        np.testing.assert_allclose(gg_nodes(0.0, 2), [-math.sqrt(3) / 2, 0.0, math.sqrt(3) / 2], atol=1e-15)

    def test_legendre_two_points(self):
        np.testing.assert_allclose(gg_nodes(0.5, 1), [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)

    def test_single_node(self):
        np.testing.assert_array_equal(gg_nodes(0.0, 0), [0.0])

    @pytest.mark.parametrize("lam", [-0.4, -0.2, 0.5, 1.0, 2.5])
    @pytest.mark.parametrize("n_g", [0, 1, 5, 40, 200])
    def test_against_scipy_jacobi_roots(self, lam, n_g):
        expected, _ = special.roots_jacobi(n_g + 1, lam - 0.5, lam - 0.5)
        np.testing.assert_allclose(gg_nodes(lam, n_g), np.sort(expected), atol=1e-13)

    @pytest.mark.parametrize("lam", [0.0, 0.3, 1.0])
    @pytest.mark.parametrize("n_g", [3, 64, 1000])
    def test_sorted_symmetric_interior(self, lam, n_g):
        x = gg_nodes(lam, n_g)
        assert x.size == n_g + 1
        assert np.all(np.diff(x) > 0)
        assert np.all(np.abs(x) < 1)
        np.testing.assert_allclose(x, -x[::-1], atol=1e-13)

    @pytest.mark.parametrize("lam", [0.2, 1.5])
    def test_residual_small_relative_to_polynomial_size(self, lam):
        n_g = 30
        roots = gg_nodes(lam, n_g)
        probe = np.linspace(-1, 1, 401)
        scale = np.max(np.abs(gegenbauer_poly_eval(lam, n_g + 1, probe)))
        assert np.max(np.abs(gegenbauer_poly_eval(lam, n_g + 1, roots))) <= 1e-13 * scale

    @pytest.mark.parametrize("n_g", [0, 7, 64])
    def test_zero_index_fast_path_matches_generic(self, n_g):
        # lambda = 0 through the closed form, a tiny positive lambda through Newton
        assert np.max(np.abs(gg_nodes(0.0, n_g) - gg_nodes(1e-14, n_g))) <= 1e-13

    def test_rejects_bad_input(self):
        with pytest.raises(DomainError):
            gg_nodes(-0.5, 3)
        with pytest.raises(DomainError):
            gg_nodes(0.0, -1)


class TestIntegrationVector:
    def test_single_node(self):
        np.testing.assert_allclose(integration_vector([0.0]), [2.0], atol=1e-15)

    def test_two_point_gauss(self):
        s = 1 / math.sqrt(3)
        np.testing.assert_allclose(integration_vector([-s, s]), [1.0, 1.0], atol=1e-14)

    def test_chebyshev_five_points(self):
        p = integration_vector(gg_nodes(0.0, 4))
        x = gg_nodes(0.0, 4)
        assert p.sum() == pytest.approx(2.0, abs=1e-14)
        assert p @ x**2 == pytest.approx(2.0 / 3.0, abs=1e-14)

    def test_duplicate_nodes_rejected(self):
        with pytest.raises(DomainError):
            integration_vector([0.1, 0.1, 0.5])

    def test_nodes_outside_rejected(self):
        with pytest.raises(DomainError):
            integration_vector([-1.0, 0.0, 0.5])

    @pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, 2.5])
    @pytest.mark.parametrize("n_g", [4, 16, 64, 1000])
    def test_moment_exactness(self, lam, n_g):
        rule = gegenbauer_rule(lam, n_g)
        assert rule.integration_vector.sum() == pytest.approx(2.0, abs=1e-12)
        degrees = range(0, n_g + 1) if n_g <= 64 else range(0, n_g + 1, 37)
        for d in degrees:
            m = moments(d)
            assert abs(rule.integration_vector @ rule.nodes**d - m) <= 1e-11 * (1 + abs(m))

    @given(st.lists(st.floats(-0.99, 0.99), min_size=1, max_size=12, unique=True))
    def test_arbitrary_nodes_integrate_polynomials(self, nodes):
        nodes = np.sort(np.array(nodes))
        if nodes.size > 1 and np.min(np.diff(nodes)) < 1e-2:
            return
        p = integration_vector(nodes)
        assert p.sum() == pytest.approx(2.0, abs=1e-9)


class TestGaussLegendre:
    @pytest.mark.parametrize("n", [1, 2, 9, 100])
    def test_matches_numpy(self, n):
        x, w = gauss_legendre(n)
        xe, we = legendre.leggauss(n)
        np.testing.assert_allclose(x, xe, atol=1e-14)
        np.testing.assert_allclose(w, we, atol=1e-14)

    def test_barycentric_weights_do_not_overflow(self):
        w = barycentric_weights(gg_nodes(0.0, 1000))
        assert np.all(np.isfinite(w))
        assert np.max(np.abs(w)) == 1.0


class TestLeadingCoefficient:
    def test_legendre_first_degree(self):
        assert leading_coefficient(0.5, 1) == pytest.approx(2.0, rel=1e-15)

    def test_legendre_degree_zero(self):
        assert leading_coefficient(0.5, 0) == pytest.approx(1.0, rel=1e-15)

    def test_index_one_degree_two(self):
        assert leading_coefficient(1.0, 2) == pytest.approx(16.0 / 3.0, rel=1e-14)

    @pytest.mark.parametrize("degree", [0, 1, 5, 40])
    def test_zero_index_is_a_limit(self, degree):
        assert leading_coefficient(0.0, degree) == pytest.approx(leading_coefficient(1e-9, degree), rel=1e-7)

    def test_large_degree_is_finite(self):
        assert math.isfinite(leading_coefficient(0.7, 400))


class TestRule:
    def test_shifted_nodes(self):
        rule = gegenbauer_rule(0.0, 10)
        np.testing.assert_array_equal(rule.shifted_nodes, (rule.nodes + 1.0) / 2.0)
        assert np.all((rule.shifted_nodes > 0) & (rule.shifted_nodes < 1))
        assert rule.size == 11

    def test_immutable(self):
        rule = gegenbauer_rule(0.0, 10)
        with pytest.raises(ValueError):
            rule.nodes[0] = 0.0
