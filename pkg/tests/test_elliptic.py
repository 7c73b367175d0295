import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chebyblaschke.elliptic import (
    Modulus,
    agm,
    complete_k,
    inverse_sn,
    jacobi_sn,
    sncndn,
    sncndn_real,
)
from chebyblaschke.errors import DomainError, PoleError

from oracle_values import AGM_1_HALF, K_TABLE, SNCNDN_07_05, SNCNDN_13_09

KGRID = [0.1 * i for i in range(1, 10)]


def test_agm_fixed_points():
    assert agm(1, 1) == 1.0
    assert agm(2.5, 2.5) == 2.5


def test_agm_oracle():
    assert agm(1, 0.5) == pytest.approx(AGM_1_HALF, rel=1e-15, abs=0)
    assert 0.5 < agm(1, 0.5) < 1


@pytest.mark.parametrize("bad", [(0, 1), (-1, 2), (1, float("inf"))])
def test_agm_rejects(bad):
    with pytest.raises(DomainError):
        agm(*bad)


@pytest.mark.parametrize("k", sorted(K_TABLE))
def test_complete_k_quadrature(k):
    assert abs(complete_k(Modulus.from_k(k)).bigK - K_TABLE[k]) <= 1e-12


def test_complete_k_limits_and_symmetry():
    assert complete_k(Modulus.from_k(1e-9)).bigK == pytest.approx(math.pi / 2, abs=1e-15)
    ep = complete_k(Modulus.from_k(math.sqrt(0.5)))
    assert ep.bigK == pytest.approx(ep.bigKprime, rel=1e-14)


def test_complete_k_monotone():
    eps = [complete_k(Modulus.from_k(k)) for k in np.linspace(0.01, 0.99, 60)]
    assert np.all(np.diff([e.bigK for e in eps]) > 0)
    assert np.all(np.diff([e.bigKprime for e in eps]) < 0)
    assert all(e.bigK >= math.pi / 2 and e.bigKprime >= math.pi / 2 for e in eps)


@pytest.mark.parametrize("k", [0.0, 1.0, -0.2, 1.5])
def test_modulus_endpoints_rejected(k):
    with pytest.raises(DomainError):
        Modulus.from_k(k)


def test_modulus_extreme_logit():
    m = Modulus.from_logit(-300.0)
    assert m.k > 0 and m.kprime == 1.0
    assert abs(m.logit + 300.0) < 1e-12


def test_sn_special_values():
    for k in KGRID:
        m = Modulus.from_k(k)
        assert jacobi_sn(0.0, m) == 0.0
        assert jacobi_sn(complete_k(m).bigK, m) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("u,k,ref", [(0.7, 0.5, SNCNDN_07_05), (1.3, 0.9, SNCNDN_13_09)])
def test_sncndn_quadrature_inversion(u, k, ref):
    got = sncndn_real(u, Modulus.from_k(k))
    assert np.allclose(got, ref, rtol=0, atol=1e-14)


def test_sn_identities_random():
    rng = np.random.default_rng(11)
    for k in KGRID:
        m = Modulus.from_k(k)
        K = complete_k(m).bigK
        u = rng.uniform(-20, 20, 1000)
        s, c, d = sncndn_real(u, m)
        assert np.max(np.abs(s * s + c * c - 1)) < 1e-10
        assert np.max(np.abs(d * d + k * k * s * s - 1)) < 1e-10
        assert np.max(np.abs(sncndn_real(u + 4 * K, m)[0] - s)) < 1e-9
        assert np.max(np.abs(sncndn_real(u + 2 * K, m)[0] + s)) < 1e-9


def test_complex_sn_against_mpmath():
    rng = np.random.default_rng(3)
    for k in (0.2, 0.6, 0.95):
        m = Modulus.from_k(k)
        ep = complete_k(m)
        for _ in range(20):
            u = complex(rng.uniform(-ep.bigK, ep.bigK), rng.uniform(0, 0.9 * ep.bigKprime))
            with mp.workdps(30):
                ref = complex(mp.ellipfun("sn", mp.mpc(u.real, u.imag), m=k * k))
            assert abs(jacobi_sn(u, m) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_pole_reports_lattice_point():
    m = Modulus.from_k(0.5)
    ep = complete_k(m)
    pole = 2 * ep.bigK + 1j * ep.bigKprime
    with pytest.raises(PoleError) as info:
        sncndn(pole + 1e-10, m)
    assert abs(info.value.lattice_point - pole) < 1e-12


def test_inverse_sn_special():
    m = Modulus.from_k(0.5)
    assert inverse_sn(0.0, m) == 0
    assert inverse_sn(1.0, m) == pytest.approx(complete_k(m).bigK, rel=1e-14)
    assert abs(inverse_sn(complex("inf"), m) - 1j * complete_k(m).bigKprime) < 1e-14


def test_inverse_sn_round_trip_rectangle():
    rng = np.random.default_rng(5)
    for k in (0.3, 0.7):
        m = Modulus.from_k(k)
        ep = complete_k(m)
        # open rectangle (-K, K) x (-K', K'), where the principal inverse is exact
        u = rng.uniform(-0.98, 0.98, 100) * ep.bigK + 1j * rng.uniform(-0.98, 0.98, 100) * ep.bigKprime
        back = inverse_sn(np.asarray(jacobi_sn(u, m)), m)
        assert np.max(np.abs(back - u)) < 1e-9


@settings(max_examples=200, deadline=None)
@given(st.floats(-0.999, 0.999), st.floats(0.01, 0.99))
def test_inverse_sn_real_range(s, k):
    m = Modulus.from_k(k)
    u = inverse_sn(s, m)
    assert abs(u.imag) == 0.0
    assert abs(u.real) <= complete_k(m).bigK
    assert abs(jacobi_sn(u, m) - s) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False),
       st.floats(0.05, 0.95))
def test_inverse_sn_forward_residual(s, k):
    m = Modulus.from_k(k)
    try:
        back = jacobi_sn(inverse_sn(s, m), m)
    except PoleError:
        return
    assert abs(back - s) <= 1e-10 * max(1.0, abs(s))


def test_near_one_modulus_stays_accurate():
    # k' = 1e-20: k rounds to 1 but the pair keeps full information
    m = Modulus.from_kprime(1e-20)
    s, c, d = sncndn_real(3.0, m)
    # the oracle needs far more than 40 digits to resolve 1 - k^2 = 1e-40
    with mp.workdps(200):
        kk = mp.sqrt(1 - mp.mpf("1e-40"))
        ref = [mp.ellipfun(f, 3, m=kk * kk) for f in ("sn", "cn", "dn")]
    assert abs(s - float(ref[0])) < 1e-14
    assert abs(c - float(ref[1])) < 1e-14
    assert abs(d - float(ref[2])) / float(ref[2]) < 1e-12
