import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebyblaschke import blaschke as bl
from chebyblaschke.errors import DomainError

from oracle_values import DEG2_A, DEG2_CRIT, DEG2_VALUE


def rand_product(n, seed, radius=0.9):
    rng = np.random.default_rng(seed)
    z = radius * np.sqrt(rng.uniform(0, 1, n)) * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    return bl.BlaschkeProduct(np.exp(2j * np.pi * rng.uniform()), z)


def circle(m=2000):
    return np.exp(2j * np.pi * np.arange(m) / m)


def test_identity_and_square():
    ident = bl.BlaschkeProduct(1, [0])
    assert bl.evaluate(ident, 0.3 + 0.1j) == 0.3 + 0.1j
    assert bl.derivative(ident, 0.7j) == 1
    assert bl.schwarz_pick(ident, 0.0) == 1.0
    sq = bl.BlaschkeProduct(1, [0, 0])
    assert bl.derivative(sq, 0.5) == pytest.approx(1.0, abs=1e-15)


def test_validation():
    with pytest.raises(DomainError):
        bl.BlaschkeProduct(1.1, [0.2])
    with pytest.raises(DomainError):
        bl.BlaschkeProduct(1, [1.0])
    with pytest.raises(DomainError):
        bl.BlaschkeProduct(1, [])


def test_zeros_and_boundary():
    for n in range(1, 9):
        b = rand_product(n, n)
        assert np.max(np.abs(bl.evaluate(b, b.zarr))) < 1e-15
        w = bl.evaluate(b, circle())
        assert np.max(np.abs(np.abs(w) - 1)) < 1e-10
        assert bl.winding_number(w) == n


def test_derivative_finite_difference():
    b = rand_product(5, 42)
    rng = np.random.default_rng(7)
    z = 0.95 * np.sqrt(rng.uniform(0, 1, 100)) * np.exp(2j * np.pi * rng.uniform(0, 1, 100))
    h = 1e-6
    fd = (bl.evaluate(b, z + h) - bl.evaluate(b, z - h)) / (2 * h)
    an = bl.derivative(b, z)
    assert np.max(np.abs(fd - an) / np.abs(an)) < 1e-6


def test_derivative_at_and_near_zero():
    a = 0.4 - 0.2j
    b = bl.BlaschkeProduct(1, [a])
    # (z - a)/(1 - conj(a) z): derivative at a is 1/(1 - |a|^2), at 0 it is 1 - |a|^2
    assert bl.derivative(b, a) == pytest.approx(1 / (1 - abs(a) ** 2), rel=1e-14)
    assert bl.derivative(b, 0.0) == pytest.approx(1 - abs(a) ** 2, rel=1e-14)
    c = rand_product(4, 3)
    z0 = c.zarr[0] + 1e-10
    h = 1e-7
    fd = (bl.evaluate(c, z0 + h) - bl.evaluate(c, z0 - h)) / (2 * h)
    assert abs(bl.derivative(c, z0) - fd) < 1e-6 * abs(fd)


def test_critical_power():
    cd = bl.critical_points(bl.BlaschkeProduct(1, [0, 0]))
    assert cd.points == (0j,)
    assert cd.lambda_min == 0.0
    cd = bl.critical_points(bl.BlaschkeProduct(1, [0, 0, 0, 0]))
    assert len(cd.points) == 3 and max(abs(p) for p in cd.points) < 1e-7


def test_critical_degree2_closed_form():
    b = bl.BlaschkeProduct(1, [0, DEG2_A])
    cd = bl.critical_points(b)
    assert len(cd.points) == 1
    assert abs(cd.points[0] - DEG2_CRIT) < 1e-14
    assert abs(cd.values[0] - DEG2_VALUE) < 1e-14
    assert cd.lambda_min == pytest.approx(abs(DEG2_VALUE), rel=1e-12)


@pytest.mark.parametrize("n", range(2, 9))
def test_critical_random(n):
    b = rand_product(n, 100 + n)
    cd = bl.critical_points(b)
    assert len(cd.points) == n - 1
    assert all(abs(p) < 1 for p in cd.points)
    assert max(cd.residuals) < 1e-10
    assert all(abs(v) < 1 for v in cd.values)


def test_repeated_zeros():
    b = bl.BlaschkeProduct(1, [0.3, 0.3, 0.3, -0.5j])
    cd = bl.critical_points(b)
    assert len(cd.points) == 3
    assert sum(abs(p - 0.3) < 1e-7 for p in cd.points) == 2


def test_compose_identity_and_properties():
    b = rand_product(4, 9)
    same = bl.compose_automorphism(b, 0, 0)
    assert np.allclose(same.zarr, b.zarr, atol=1e-15)
    c = bl.compose_automorphism(b, 0.5 - 0.3j, 1.1)
    assert c.degree == b.degree
    assert np.max(np.abs(np.abs(bl.evaluate(c, circle())) - 1)) < 1e-10
    with pytest.raises(DomainError):
        bl.compose_automorphism(b, 1.0, 0)


def test_schwarz_pick_invariance_and_bound():
    b = rand_product(5, 21)
    a, th = -0.3 + 0.6j, 2.0
    c = bl.compose_automorphism(b, a, th)
    phi = bl.automorphism(a, th)
    rng = np.random.default_rng(8)
    z = 0.99 * np.sqrt(rng.uniform(0, 1, 1000)) * np.exp(2j * np.pi * rng.uniform(0, 1, 1000))
    assert np.max(np.abs(bl.schwarz_pick(c, z) - bl.schwarz_pick(b, phi(z)))) < 1e-9
    assert np.all(bl.schwarz_pick(b, z) <= 1 - np.abs(bl.evaluate(b, z)) ** 2 + 1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**31))
def test_critical_values_are_images(n, seed):
    b = rand_product(n, seed)
    cd = bl.critical_points(b)
    assert np.allclose(bl.evaluate(b, np.array(cd.points)), cd.values, atol=1e-13)
    assert cd.lambda_min == pytest.approx(max(abs(v) for v in cd.values), rel=1e-15)


def test_lemniscate_power_connected():
    b = bl.BlaschkeProduct(1, [0, 0, 0])
    for t in (0.1, 0.5, 0.9):
        assert bl.lemniscate_connected(b, t, 256)


def test_lemniscate_two_ovals():
    # zeros +-0.5: critical point 0 with |B(0)| = 0.25
    b = bl.BlaschkeProduct(1, [0.5, -0.5])
    low = bl.lemniscate_probe(b, 0.2, 1024)
    assert not low.connected and low.components == 2 and not low.critical_criterion
    high = bl.lemniscate_probe(b, 0.3, 1024)
    assert high.connected and high.critical_criterion


def test_lemniscate_domain():
    b = bl.BlaschkeProduct(1, [0.1])
    with pytest.raises(DomainError):
        bl.lemniscate_connected(b, 1.0)
    with pytest.raises(DomainError):
        bl.lemniscate_connected(b, 0.5, grid_n=64)


def test_trace_points_on_level():
    b = rand_product(3, 5)
    pts = bl.trace_lemniscate(b, 0.6, 512)
    assert len(pts) > 100
    assert np.max(np.abs(np.abs(bl.evaluate(b, pts)) - 0.6)) < 1e-10


def test_max_schwarz_pick_on_circle_level():
    # B = z^2 on |z| = r: (1 - r^2) 2 r everywhere
    b = bl.BlaschkeProduct(1, [0, 0])
    t = 0.49
    best, arg, pts = bl.max_schwarz_pick_on_level(b, t, 512)
    r = math.sqrt(t)
    assert best == pytest.approx((1 - r * r) * 2 * r, rel=1e-9)
