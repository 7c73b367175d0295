import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebyblaschke.chebyshev import (
    Polynomial,
    bound_rhs,
    chebyshev_inverse_branch,
    chebyshev_t,
    chebyshev_t_derivative,
    critical_values,
    inverse_closed_form,
    verify_polynomial_bound,
)
from chebyblaschke.errors import DomainError


def t_poly(n):
    return Polynomial(np.polynomial.chebyshev.cheb2poly([0] * n + [1]))


def test_small_values():
    assert chebyshev_t(2, 0.5) == pytest.approx(-0.5, abs=1e-15)
    for n in range(2, 9):
        assert chebyshev_t(n, 1.0) == 1.0
        assert chebyshev_t_derivative(n, 1.0) == pytest.approx(n * n, rel=1e-14)
    assert chebyshev_t_derivative(2, 1.0) == 4.0


def test_leading_coefficient():
    x = 1e4
    for n in range(2, 9):
        assert chebyshev_t(n, x) / x ** n == pytest.approx(2.0 ** (n - 1), rel=1e-6)


def test_cosine_identity():
    th = np.random.default_rng(0).uniform(-10, 10, 500)
    for n in range(1, 8):
        assert np.max(np.abs(chebyshev_t(n, np.cos(th)) - np.cos(n * th))) < 1e-10


def test_derivative_finite_difference_complex():
    rng = np.random.default_rng(1)
    x = rng.normal(0, 1, 100) + 1j * rng.normal(0, 1, 100)
    h = 1e-6
    for n in (2, 5):
        fd = (chebyshev_t(n, x + h) - chebyshev_t(n, x - h)) / (2 * h)
        an = chebyshev_t_derivative(n, x)
        assert np.max(np.abs(fd - an) / np.maximum(np.abs(an), 1.0)) < 1e-6


def test_inverse_endpoints():
    for n in range(1, 7):
        assert chebyshev_inverse_branch(n, 1.0) == pytest.approx(1.0, abs=1e-15)
        assert chebyshev_inverse_branch(n, 0.0) == pytest.approx(math.cos(math.pi / (2 * n)), abs=1e-15)
    with pytest.raises(DomainError):
        chebyshev_inverse_branch(3, -0.1)


@pytest.mark.parametrize("y", [0.3, 2.0, 50.0])
def test_inverse_round_trip(y):
    for n in range(2, 7):
        assert abs(chebyshev_t(n, chebyshev_inverse_branch(n, y)) - y) < 1e-10 * max(1, y)


def test_inverse_closed_form_and_monotone():
    y = np.concatenate([np.linspace(0, 1, 50), np.geomspace(1, 1e6, 200)])
    for n in range(2, 7):
        x = chebyshev_inverse_branch(n, y)
        assert np.max(np.abs(x - inverse_closed_form(n, y))) < 1e-10
        assert np.all(np.diff(x) >= 0) and np.all(np.diff(x)[y[1:] != y[:-1]] > 0)


def test_polynomial_validation():
    with pytest.raises(DomainError):
        Polynomial([1, 2])
    with pytest.raises(DomainError):
        Polynomial([1, 2, 1e-16])


@pytest.mark.parametrize("n", range(2, 7))
def test_equality_for_chebyshev(n):
    p = t_poly(n)
    x = np.linspace(math.cos(math.pi / (2 * n)), 3.0, 50)
    lhs = np.abs(p.derivative(x))
    assert np.max(np.abs(lhs - bound_rhs(p, x))) <= 1e-8
    assert abs(verify_polynomial_bound(p, x)) <= 1e-8


def test_square_strict():
    p = Polynomial([0, 0, 1])
    assert np.allclose(critical_values(p), 0)
    rng = np.random.default_rng(3)
    z = rng.normal(0, 1, 200) + 1j * rng.normal(0, 1, 200)
    assert verify_polynomial_bound(p, z) < 0


def test_random_cubics():
    rng = np.random.default_rng(4)
    worst = -np.inf
    for _ in range(100):
        c = rng.normal(0, 1, 4) + 1j * rng.normal(0, 1, 4)
        z = rng.normal(0, 1.5, 200) + 1j * rng.normal(0, 1.5, 200)
        worst = max(worst, verify_polynomial_bound(Polynomial(c), z))
    assert worst <= 1e-8


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**31))
def test_random_degrees(n, seed):
    rng = np.random.default_rng(seed)
    c = rng.normal(0, 1, n + 1) + 1j * rng.normal(0, 1, n + 1)
    c[-1] = c[-1] if abs(c[-1]) > 0.1 else 1.0
    z = rng.normal(0, 1, 100) + 1j * rng.normal(0, 1, 100)
    assert verify_polynomial_bound(Polynomial(c), z) <= 1e-8 * max(1.0, abs(c[-1]))
