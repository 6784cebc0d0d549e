import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from runge_guard import chebyshev as cheb
from runge_guard.chebyshev import ChebSeries
from runge_guard.errors import DomainError
from runge_guard.quaternion import Quaternion
from runge_guard.selftest import chebyshev_quadrature_oracle

coeff_lists = st.lists(st.floats(-10, 10), min_size=1, max_size=9)


def direct_sum(c, tau):
    return sum(ci * np.cos(i * np.arccos(tau)) for i, ci in enumerate(c))


class TestFit:
    def test_second_polynomial(self):
        s = cheb.fit(lambda x: 2 * x**2 - 1, 4, 8)
        assert np.allclose(s.coeffs, [0, 0, 1, 0, 0], atol=1e-14, rtol=0)

    def test_constant(self):
        s = cheb.fit(lambda x: np.full_like(x, 3.5), 6)
        assert s.coeffs[0] == pytest.approx(3.5, abs=1e-15)
        assert np.max(np.abs(s.coeffs[1:])) < 1e-14

    def test_sine_matches_quadrature(self):
        s = cheb.fit(np.sin, 12, 64)
        assert np.max(np.abs(s.coeffs - chebyshev_quadrature_oracle(np.sin, 12))) <= 1e-12

    def test_default_sampling(self):
        s = cheb.fit(np.exp, 10)
        assert s.degree == 10
        assert np.allclose(s(np.linspace(-1, 1, 11)), np.exp(np.linspace(-1, 1, 11)), atol=1e-10)

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            cheb.fit(np.sin, 10, 10)

    def test_vector_valued(self):
        s = cheb.fit(lambda x: np.stack([x, x**2, np.ones_like(x)], axis=-1), 4)
        assert s.sample_shape == (3,)
        assert np.allclose(s(0.5), [0.5, 0.25, 1.0], atol=1e-14)


class TestEvaluate:
    def test_first(self):
        assert cheb.evaluate(ChebSeries([0.0, 1.0]), 0.3) == pytest.approx(0.3, abs=1e-16)

    def test_second(self):
        assert cheb.evaluate(ChebSeries([0.0, 0.0, 1.0]), 0.5) == pytest.approx(-0.5, abs=1e-16)

    def test_direct_sum(self):
        rng = np.random.default_rng(1)
        c = rng.normal(size=9)
        tau = rng.uniform(-1, 1, 50)
        assert np.max(np.abs(cheb.evaluate(ChebSeries(c), tau) - direct_sum(c, tau))) <= 1e-13

    def test_outside_raises(self):
        with pytest.raises(DomainError):
            cheb.evaluate(ChebSeries([1.0, 2.0]), 1.0 + 1e-9)

    def test_physical_time(self):
        s = ChebSeries([0.0, 1.0], interval_length=0.5)
        assert s.at_time(0.5) == pytest.approx(1.0)
        assert s.at_time(0.0) == pytest.approx(-1.0)


class TestCalculus:
    def test_derivative_of_first(self):
        d = cheb.differentiate(ChebSeries([0.0, 1.0], 2.0))
        assert d == ChebSeries([1.0], 2.0)

    def test_derivative_of_second(self):
        d = cheb.differentiate(ChebSeries([0.0, 0.0, 1.0], 2.0))
        assert d(0.25) == pytest.approx(1.0, abs=1e-15)

    def test_derivative_scale(self):
        # d/dt of tau on [0, t_N] is 2/t_N
        d = cheb.differentiate(ChebSeries([0.0, 1.0], 0.01))
        assert d(0.1) == pytest.approx(200.0, rel=1e-15)

    def test_derivative_finite_differences(self):
        rng = np.random.default_rng(2)
        s = ChebSeries(rng.normal(size=11), 0.3)
        tau = rng.uniform(-0.99, 0.99, 50)
        h = 1e-6
        fd = (s(tau + h) - s(tau - h)) / (2 * h) * (2 / 0.3)
        exact = cheb.differentiate(s)(tau)
        assert np.max(np.abs(exact - fd)) / np.max(np.abs(exact)) <= 1e-6

    def test_integral_of_constant(self):
        s = cheb.integrate(ChebSeries([2.0], 0.75))
        assert s(1.0) == pytest.approx(1.5, rel=1e-15)
        assert s(-1.0) == pytest.approx(0.0, abs=1e-16)

    def test_integral_of_first(self):
        s = cheb.integrate(ChebSeries([0.0, 1.0], 2.0))
        tau = np.linspace(-1, 1, 21)
        assert np.max(np.abs(s(tau) - (tau**2 / 2 - 0.5))) <= 1e-14

    def test_round_trip(self):
        rng = np.random.default_rng(3)
        s = ChebSeries(rng.normal(size=9), 0.04)
        back = cheb.differentiate(cheb.integrate(s))
        assert back.allclose(s, atol=1e-12)

    def test_matches_numpy(self):
        from numpy.polynomial import chebyshev as npc

        c = np.random.default_rng(4).normal(size=7)
        assert np.allclose(cheb.differentiate(ChebSeries(c)).coeffs, npc.chebder(c), atol=1e-14)
        assert np.allclose(cheb.integrate(ChebSeries(c)).coeffs, npc.chebint(c, lbnd=-1), atol=1e-14)


class TestMultiply:
    def test_square_of_first(self):
        p = cheb.multiply(ChebSeries([0.0, 1.0]), ChebSeries([0.0, 1.0]))
        assert np.allclose(p.coeffs, [0.5, 0.0, 0.5], atol=1e-16)

    def test_identity(self):
        b = ChebSeries(np.random.default_rng(5).normal(size=6))
        assert cheb.multiply(ChebSeries([1.0]), b) == b

    def test_pointwise(self):
        rng = np.random.default_rng(6)
        tau = rng.uniform(-1, 1, 100)
        for _ in range(10):
            a, b = ChebSeries(rng.normal(size=6)), ChebSeries(rng.normal(size=6))
            p = cheb.multiply(a, b, cap=10)
            assert np.max(np.abs(p(tau) - a(tau) * b(tau))) <= 1e-12

    def test_cap_truncates(self):
        a = ChebSeries(np.ones(6))
        assert cheb.multiply(a, a, cap=4).degree == 4

    def test_interval_mismatch(self):
        with pytest.raises(ValueError):
            cheb.multiply(ChebSeries([1.0], 1.0), ChebSeries([1.0], 2.0))

    def test_quaternion_product_pointwise(self):
        rng = np.random.default_rng(7)
        q = ChebSeries(rng.normal(size=(5, 4)), quaternion=True)
        w = ChebSeries(rng.normal(size=(4, 3)))
        p = cheb.multiply(q, w)
        for tau in rng.uniform(-1, 1, 20):
            ref = Quaternion.from_array(q(tau)) * Quaternion(0.0, *w(tau))
            assert np.allclose(p(tau), ref.as_array(), atol=1e-12)


def test_chebyshev_points_are_interior_roots():
    x = cheb.chebyshev_points(8)
    assert np.all(np.abs(x) < 1) and np.all(np.diff(x) < 0)
    # roots of F_8
    assert np.max(np.abs(cheb.evaluate(ChebSeries([0] * 8 + [1]), x))) < 1e-14


@settings(max_examples=50, deadline=None)
@given(a=coeff_lists, b=coeff_lists, tau=st.floats(-1, 1))
def test_product_is_commutative_and_pointwise(a, b, tau):
    sa, sb = ChebSeries(a), ChebSeries(b)
    ab, ba = cheb.multiply(sa, sb), cheb.multiply(sb, sa)
    assert ab.allclose(ba, atol=1e-12)
    scale = max(1.0, float(np.sum(np.abs(a)) * np.sum(np.abs(b))))
    assert abs(ab(tau) - sa(tau) * sb(tau)) <= 1e-13 * scale


@settings(max_examples=50, deadline=None)
@given(c=coeff_lists, length=st.floats(1e-3, 10.0))
def test_integral_vanishes_at_start(c, length):
    s = cheb.integrate(ChebSeries(c, length))
    assert abs(s(-1.0)) <= 1e-13 * max(1.0, length * float(np.sum(np.abs(c))))
