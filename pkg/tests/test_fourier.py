import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fgps.exceptions import DomainError
from fgps.fourier import (
    PeriodicGrid,
    cardinal_derivative,
    cardinal_derivative_matrix,
    cardinal_derivative_n,
    cardinal_eval,
    cardinal_eval_sum,
    cardinal_matrix,
    interpolate,
)

TWO_PI = 2.0 * math.pi

even_n = st.integers(1, 32).map(lambda k: 2 * k)
periods = st.floats(0.5, 20.0)
times = st.floats(-200.0, 200.0)


class TestGrid:
    def test_nodes(self):
        grid = PeriodicGrid(8, 3.0)
        np.testing.assert_array_equal(grid.nodes, 3.0 * np.arange(8) / 8)
        assert grid.nodes[0] == 0.0 and grid.nodes[-1] < 3.0

    @pytest.mark.parametrize("n", [0, -2, 3, 7])
    def test_rejects_odd_or_nonpositive(self, n):
        with pytest.raises(DomainError):
            PeriodicGrid(n)

    def test_rejects_bad_period(self):
        with pytest.raises(DomainError):
            PeriodicGrid(4, 0.0)

    def test_nodes_read_only(self):
        with pytest.raises(ValueError):
            PeriodicGrid(4).nodes[1] = 0.0

    def test_primed_weights(self):
        grid = PeriodicGrid(6)
        np.testing.assert_array_equal(grid.wavenumbers, [-3, -2, -1, 0, 1, 2, 3])
        np.testing.assert_array_equal(grid.primed_weights, [0.5, 1, 1, 1, 1, 1, 0.5])


class TestCardinal:
    def test_one_at_own_node(self):
        grid = PeriodicGrid(4)
        assert cardinal_eval(grid, 1, grid.nodes[1]) == pytest.approx(1.0, abs=1e-15)

    def test_zero_at_other_node(self):
        grid = PeriodicGrid(4)
        assert abs(cardinal_eval(grid, 1, grid.nodes[3])) <= 1e-15

    def test_closed_form_value(self):
        grid = PeriodicGrid(4)
        expected = 0.25 * math.sin(4 * math.pi / 8) / math.tan(math.pi / 8)
        assert cardinal_eval(grid, 0, math.pi / 4) == pytest.approx(expected, rel=1e-15)
        assert cardinal_eval_sum(grid, 0, math.pi / 4) == pytest.approx(expected, rel=1e-14)

    @given(even_n, periods)
    def test_cardinality(self, n, period):
        grid = PeriodicGrid(n, period)
        np.testing.assert_allclose(cardinal_matrix(grid, grid.nodes), np.eye(n), atol=1e-13)

    @given(even_n, periods, times)
    def test_closed_form_matches_sum(self, n, period, t):
        grid = PeriodicGrid(n, period)
        j = n // 3
        assert cardinal_eval(grid, j, t) == pytest.approx(cardinal_eval_sum(grid, j, t), abs=1e-13)

    @given(even_n, periods, times)
    def test_partition_of_unity(self, n, period, t):
        grid = PeriodicGrid(n, period)
        assert cardinal_matrix(grid, t).sum() == pytest.approx(1.0, abs=1e-12)

    @given(even_n, periods, times)
    def test_periodic(self, n, period, t):
        grid = PeriodicGrid(n, period)
        assert cardinal_eval(grid, 0, t + period) == pytest.approx(cardinal_eval(grid, 0, t), abs=1e-12)
        assert cardinal_derivative(grid, 0, t + period) == pytest.approx(
            cardinal_derivative(grid, 0, t), abs=1e-12 * n
        )

    def test_near_node_uses_sum(self):
        grid = PeriodicGrid(10)
        for eps in (1e-12, 1e-9, 1e-7):
            assert cardinal_eval(grid, 2, grid.nodes[2] + eps) == pytest.approx(
                cardinal_eval_sum(grid, 2, grid.nodes[2] + eps), abs=1e-14
            )

    def test_bad_index(self):
        with pytest.raises(DomainError):
            cardinal_eval(PeriodicGrid(4), 4, 0.0)


def central_difference(fun, t, h=1e-5):
    return (fun(t + h) - fun(t - h)) / (2 * h)


class TestDerivative:
    @pytest.mark.parametrize("j", [0, 3, 7])
    def test_zero_at_own_node(self, j):
        grid = PeriodicGrid(8)
        assert abs(cardinal_derivative(grid, j, grid.nodes[j])) <= 1e-15

    def test_two_nodes(self):
        # F_0 = (1 + cos t) / 2 on two nodes, so F_0' = -sin(t) / 2, not identically zero
        grid = PeriodicGrid(2)
        for t in np.linspace(-3, 9, 13):
            fd = central_difference(lambda s: cardinal_eval(grid, 0, s), t)
            assert cardinal_derivative(grid, 0, t) == pytest.approx(fd, abs=1e-9)
            assert cardinal_derivative(grid, 0, t) == pytest.approx(-0.5 * math.sin(t), abs=1e-15)

    def test_matches_finite_difference(self):
        grid = PeriodicGrid(8)
        fd = central_difference(lambda s: cardinal_eval(grid, 0, s), 0.3)
        assert cardinal_derivative(grid, 0, 0.3) == pytest.approx(fd, abs=1e-7)

    @given(even_n, periods, times)
    def test_null_sum(self, n, period, t):
        grid = PeriodicGrid(n, period)
        assert abs(cardinal_derivative_matrix(grid, t).sum()) <= 1e-11 * max(1.0, n / period)

    def test_second_derivative_by_differences(self):
        grid = PeriodicGrid(8)
        h = 1e-4
        f = [cardinal_eval(grid, 0, 0.3 + k * h) for k in (-1, 0, 1)]
        fd2 = (f[0] - 2 * f[1] + f[2]) / h**2
        assert cardinal_derivative_n(grid, 0, 1, 0.3) == pytest.approx(fd2, abs=1e-5)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_higher_orders_chain(self, n):
        grid = PeriodicGrid(8, 5.0)
        t = 1.234
        fd = central_difference(lambda s: cardinal_derivative_n(grid, 2, n - 1, s), t, h=1e-6)
        exact = cardinal_derivative_n(grid, 2, n, t)
        assert exact == pytest.approx(fd, rel=1e-6, abs=1e-6)

    def test_order_zero_is_first_derivative(self):
        grid = PeriodicGrid(6)
        assert cardinal_derivative_n(grid, 1, 0, 0.7) == cardinal_derivative(grid, 1, 0.7)

    def test_second_derivative_at_node(self):
        grid = PeriodicGrid(8)
        k = grid.wavenumbers
        expected = -(1 / 8) * np.sum(grid.primed_weights * k**2.0)
        assert cardinal_derivative_n(grid, 0, 1, 0.0) == pytest.approx(expected, rel=1e-14)
        assert expected != 0

    @pytest.mark.parametrize("order", [0, 1, 2])
    def test_growth_rate(self, order):
        # the empirical exponent sits near order + 1
        ns = np.array([8, 16, 32, 64])
        t = np.linspace(0, TWO_PI, 4001)
        sup = [np.max(np.abs(cardinal_derivative_n(PeriodicGrid(n), 0, order, t))) for n in ns]
        slope = np.polyfit(np.log(ns), np.log(sup), 1)[0]
        assert order + 0.5 < slope < order + 1.5

    def test_negative_order_rejected(self):
        with pytest.raises(DomainError):
            cardinal_derivative_n(PeriodicGrid(4), 0, -1, 0.0)


class TestInterpolate:
    def test_at_node(self):
        grid = PeriodicGrid(8)
        assert interpolate(grid, np.sin(grid.nodes), grid.nodes[3]) == pytest.approx(math.sin(grid.nodes[3]), abs=1e-15)

    def test_sin_off_grid(self):
        grid = PeriodicGrid(8)
        assert interpolate(grid, np.sin(grid.nodes), 0.5) == pytest.approx(math.sin(0.5), abs=1e-14)

    @given(st.floats(-1e3, 1e3), times)
    def test_constant(self, c, t):
        grid = PeriodicGrid(6)
        assert interpolate(grid, np.full(6, c), t) == pytest.approx(c, abs=1e-14 * max(1.0, abs(c)))

    @given(
        even_n.filter(lambda n: n >= 4),
        st.lists(st.floats(-2, 2), min_size=3, max_size=3),
        st.floats(0, 50),
    )
    def test_trigonometric_exactness(self, n, coefs, t):
        grid = PeriodicGrid(n, 3.0)
        kmax = n // 2 - 1
        w = 2 * math.pi / 3.0

        def f(s):
            return coefs[0] + coefs[1] * np.cos(kmax * w * s) + coefs[2] * np.sin(kmax * w * s)

        assert interpolate(grid, f(grid.nodes), t) == pytest.approx(float(f(t)), abs=1e-12)

    def test_vector_samples(self):
        grid = PeriodicGrid(8)
        samples = np.column_stack([np.sin(grid.nodes), np.cos(grid.nodes)])
        out = interpolate(grid, samples, [0.5, 1.5])
        np.testing.assert_allclose(out, [[math.sin(0.5), math.cos(0.5)], [math.sin(1.5), math.cos(1.5)]], atol=1e-14)

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            interpolate(PeriodicGrid(8), np.zeros(7), 0.0)
