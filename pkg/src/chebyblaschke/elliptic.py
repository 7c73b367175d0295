"""Complete elliptic integrals of the first kind and the Jacobi elliptic sine.

Everything is plain binary64.  A modulus is carried as the pair ``(k, k')``
rather than ``k`` alone: the moduli produced downstream get extremely close
to 0 or to 1 (``k ~ 1e-40`` is routine for the extremal products when the
critical values approach the unit circle), and ``sqrt(1 - k*k)`` would throw
away every significant digit of the small member of the pair.

Real ``sn, cn, dn`` come from the descending Landen (Gauss) transformation
applied to an argument reduced to ``[0, K/2]``; complex arguments are
assembled from real values at moduli ``k`` and ``k'`` by the addition
formulas.  The inverse of ``sn`` is Carlson's symmetric integral ``R_F``.

All public functions accept scalars or numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericError, PoleError

LANDEN_TOL = 1e-12
LANDEN_MAX_STEPS = 32
POLE_RADIUS = 1e-8
AGM_RTOL = 1e-15
AGM_MAX_ITER = 64
RF_MAX_ITER = 200
_RF_R = 1e-16


@dataclass(frozen=True)
class Modulus:
    """Elliptic modulus as the complementary pair ``k**2 + kprime**2 == 1``.

    Both members must be positive.  ``k`` may round to exactly ``1.0`` when
    ``kprime`` is tiny (and vice versa); the pair still identifies a modulus
    strictly inside ``(0, 1)``.
    """

    k: float
    kprime: float

    def __post_init__(self):
        k, kp = self.k, self.kprime
        if not (math.isfinite(k) and math.isfinite(kp)):
            raise DomainError(f"non-finite modulus pair ({k!r}, {kp!r})")
        if not (0.0 < k <= 1.0 and 0.0 < kp <= 1.0):
            raise DomainError(f"modulus pair ({k!r}, {kp!r}) outside (0, 1)")
        if abs(k * k + kp * kp - 1.0) > 1e-14:
            raise DomainError(f"k**2 + k'**2 = {k * k + kp * kp!r} != 1")

    @classmethod
    def from_k(cls, k: float) -> "Modulus":
        k = float(k)
        if not 0.0 < k < 1.0:
            raise DomainError(f"modulus k={k!r} outside the open interval (0, 1)")
        return cls(k, math.sqrt((1.0 - k) * (1.0 + k)))

    @classmethod
    def from_kprime(cls, kprime: float) -> "Modulus":
        return cls.from_k(kprime).complement()

    @classmethod
    def from_logit(cls, x: float) -> "Modulus":
        """Modulus with ``log(k / k') == x``; accurate for any ``|x| < 350``."""
        e = math.exp(-2.0 * abs(x))
        big = 1.0 / math.sqrt(1.0 + e)
        small = math.exp(-abs(x)) * big
        return cls(big, small) if x >= 0 else cls(small, big)

    def complement(self) -> "Modulus":
        return Modulus(self.kprime, self.k)

    @property
    def logit(self) -> float:
        return math.log(self.k) - math.log(self.kprime)


@dataclass(frozen=True)
class EllipticPair:
    bigK: float
    bigKprime: float


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean of two positive reals."""
    a, b = float(a), float(b)
    if not (a > 0.0 and b > 0.0) or not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"agm needs positive finite arguments, got ({a!r}, {b!r})")
    for _ in range(AGM_MAX_ITER):
        if abs(a - b) <= AGM_RTOL * max(a, b):
            return 0.5 * (a + b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    raise NumericError("agm did not converge")


@lru_cache(maxsize=4096)
def _complete(k: float, kprime: float) -> EllipticPair:
    return EllipticPair(math.pi / (2.0 * agm(1.0, kprime)), math.pi / (2.0 * agm(1.0, k)))


def complete_k(m: Modulus) -> EllipticPair:
    """``K(k)`` and ``K'(k) = K(k')`` via the AGM."""
    if not isinstance(m, Modulus):
        m = Modulus.from_k(m)
    return _complete(m.k, m.kprime)


@lru_cache(maxsize=4096)
def _descent(k: float, kprime: float) -> tuple:
    # k_{j+1} = (1 - k'_j) / (1 + k'_j), kept together with 1 - k_{j+1}.
    ks = []
    while k >= LANDEN_TOL:
        if len(ks) == LANDEN_MAX_STEPS:
            raise NumericError(f"Landen descent exceeded {LANDEN_MAX_STEPS} steps")
        k, kprime, gap = (
            (k / (1.0 + kprime)) ** 2,
            2.0 * math.sqrt(kprime) / (1.0 + kprime),
            2.0 * kprime / (1.0 + kprime),
        )
        ks.append((k, gap))
    return tuple(ks)


def landen_moduli(m: Modulus) -> tuple:
    """Descending Landen sequence of pairs ``(k_j, 1 - k_j)``, ending once
    ``k_j < LANDEN_TOL``."""
    return _descent(m.k, m.kprime)


def _sncndn_near_zero(x, ks):
    # Valid for |x| <= K/2, where none of sn, cn, dn is small.
    scale = 1.0
    for mu, _ in ks:
        scale *= 1.0 + mu
    w = x / scale
    s, c, d = np.sin(w), np.cos(w), np.ones_like(w)
    for mu, gap in reversed(ks):
        den = 1.0 + mu * s * s
        # 1 - mu s^2 = (1 - mu) + mu c^2 avoids cancellation as mu -> 1
        s, c, d = (1.0 + mu) * s / den, c * d / den, (gap + mu * c * c) / den
    return s, c, d


def sncndn_real(x, m: Modulus):
    """Real ``(sn, cn, dn)`` at real ``x``."""
    x = np.asarray(x, dtype=float)
    K = complete_k(m).bigK
    ks = landen_moduli(m)
    r = np.remainder(x + 2.0 * K, 4.0 * K) - 2.0 * K
    # sn(2K - r) = sn(r), cn(2K - r) = -cn(r)
    far = np.abs(r) > K
    r = np.where(far, np.copysign(2.0 * K, r) - r, r)
    csign = np.where(far, -1.0, 1.0)
    ssign = np.where(r < 0.0, -1.0, 1.0)
    a = np.abs(r)
    # quarter-period reflection keeps cn and dn at full relative accuracy near K
    refl = a > 0.5 * K
    s, c, d = _sncndn_near_zero(np.where(refl, K - a, a), ks)
    kp = m.kprime
    sn = np.where(refl, c / d, s)
    cn = np.where(refl, kp * s / d, c)
    dn = np.where(refl, kp / d, d)
    return ssign * sn, csign * cn, dn


def _nearest_pole(u, m: Modulus):
    ep = complete_k(m)
    K, Kp = ep.bigK, ep.bigKprime
    j = np.round(u.real / (2.0 * K))
    l = np.round((u.imag - Kp) / (2.0 * Kp))
    pole = 2.0 * K * j + 1j * (Kp + 2.0 * Kp * l)
    return pole, np.abs(u - pole)


def sncndn(u, m: Modulus):
    """Complex ``(sn, cn, dn)``; raises :class:`PoleError` within
    ``POLE_RADIUS`` of a pole."""
    u = np.asarray(u, dtype=complex)
    if not np.all(np.isfinite(u)):
        raise DomainError("sn needs a finite argument")
    pole, dist = _nearest_pole(u, m)
    if np.any(dist < POLE_RADIUS):
        where = np.flatnonzero(np.atleast_1d(dist) < POLE_RADIUS)[0]
        p = complex(np.atleast_1d(pole)[where])
        raise PoleError(f"sn evaluated within {POLE_RADIUS:g} of the pole {p}", p)
    s, c, d = sncndn_real(u.real, m)
    s1, c1, d1 = sncndn_real(u.imag, m.complement())
    k2 = m.k * m.k
    den = c1 * c1 + k2 * (s * s1) ** 2
    sn = (s * d1 + 1j * (c * d) * (s1 * c1)) / den
    cn = (c * c1 - 1j * (s * d) * (s1 * d1)) / den
    dn = (d * c1 * d1 - 1j * k2 * (s * c) * s1) / den
    return sn, cn, dn


def _out(v, like):
    if np.ndim(like) == 0:
        v = v[()] if isinstance(v, np.ndarray) else v
        return complex(v) if np.iscomplexobj(v) else float(v)
    return v


def jacobi_sn(u, m: Modulus):
    """Jacobi ``sn(u; k)`` for complex ``u``."""
    return _out(sncndn(u, m)[0], u)


def carlson_rf(x, y, z):
    """Carlson's symmetric integral ``R_F(x, y, z)`` by duplication.

    Arguments may be complex (principal branch); at most one may vanish.
    """
    x, y, z = np.broadcast_arrays(np.asarray(x), np.asarray(y), np.asarray(z))
    dtype = complex if any(np.iscomplexobj(v) for v in (x, y, z)) else float
    x0, y0, z0 = (np.array(v, dtype=dtype) for v in (x, y, z))
    a0 = (x0 + y0 + z0) / 3.0
    q = (3.0 * _RF_R) ** (-1.0 / 6.0) * np.maximum(
        np.maximum(np.abs(a0 - x0), np.abs(a0 - y0)), np.abs(a0 - z0))
    xm, ym, zm, am = x0, y0, z0, a0
    scale = 1.0
    for _ in range(RF_MAX_ITER):
        if np.all(scale * q < np.abs(am)):
            break
        sx, sy, sz = np.sqrt(xm), np.sqrt(ym), np.sqrt(zm)
        lam = sx * sy + sx * sz + sy * sz
        xm, ym, zm, am = (xm + lam) / 4.0, (ym + lam) / 4.0, (zm + lam) / 4.0, (am + lam) / 4.0
        scale /= 4.0
    else:
        raise NumericError("R_F duplication did not converge")
    X = (a0 - x0) * scale / am
    Y = (a0 - y0) * scale / am
    Z = -X - Y
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / np.sqrt(am)


def _one_minus_k2s2(s, m: Modulus):
    # (1 - ks)(1 + ks) loses k' entirely once k rounds to 1.
    if m.k > 0.5:
        return (1.0 - s) * (1.0 + s) + (m.kprime * s) ** 2
    return (1.0 - m.k * s) * (1.0 + m.k * s)


def inverse_sn_real(s, m: Modulus):
    """Real ``u`` in ``[-K, K]`` with ``sn(u) = s`` for real ``s`` in ``[-1, 1]``."""
    s = np.asarray(s, dtype=float)
    if np.any(np.abs(s) > 1.0):
        raise DomainError("real inverse sn needs |s| <= 1")
    return s * carlson_rf((1.0 - s) * (1.0 + s), _one_minus_k2s2(s, m), 1.0)


def imaginary_parameter(a, m: Modulus):
    """``t`` in ``[0, K']`` with ``dn(t; k') = 1/a``, for ``1 <= a <= 1/k``.

    Equivalently ``sn(K + i t; k) = a``.  Past ``1/sqrt(k)`` the quarter
    period is reflected, ``dn(K' - t; k') = k / dn(t; k')``, so the result is
    accurate at both ends.
    """
    a = np.asarray(a, dtype=float)
    k, kp = m.k, m.kprime
    Kp = complete_k(m).bigKprime
    refl = a * a * k > 1.0
    b = np.where(refl, 1.0 / (k * np.where(refl, a, 1.0)), a)
    b = np.maximum(b, 1.0)
    s = np.sqrt((b - 1.0) * (b + 1.0)) / (b * kp)
    one_minus_bk = (1.0 - b) + b * (kp * kp / (1.0 + k))
    arg = np.maximum(one_minus_bk * (1.0 + b * k), 0.0) / (b * kp) ** 2
    t = s * carlson_rf(arg, 1.0 / (b * b), 1.0)
    return np.where(refl, Kp - t, t)


def inverse_sn(s, m: Modulus):
    """Principal inverse of ``sn``: ``u`` in ``(-K, K] x [-K', K']``.

    Off the real rays ``|s| > 1`` this is ``s * R_F(1 - s^2, 1 - k^2 s^2, 1)``.
    On those rays (where the principal value jumps) the upper edge is taken,
    ``Im u >= 0``; ``s = inf`` maps to ``i K'``.
    """
    arr = np.asarray(s, dtype=complex)
    flat = np.atleast_1d(arr).ravel()
    out = np.empty(flat.shape, dtype=complex)
    k = m.k
    ep = complete_k(m)
    K, Kp = ep.bigK, ep.bigKprime

    inf = np.isinf(flat.real) | np.isinf(flat.imag)
    if np.any(np.isnan(flat)):
        raise DomainError("inverse sn of NaN")
    ray = ~inf & (flat.imag == 0.0) & (np.abs(flat.real) > 1.0)
    gen = ~inf & ~ray

    if np.any(gen):
        v = flat[gen]
        out[gen] = v * carlson_rf((1.0 - v) * (1.0 + v), _one_minus_k2s2(v, m), 1.0)
    if np.any(ray):
        x = flat[ray].real
        a = np.abs(x)
        sign = np.sign(x)
        near = a * k <= 1.0
        res = np.empty(x.shape, dtype=complex)
        if np.any(near):
            t = imaginary_parameter(a[near], m)
            res[near] = sign[near] * K + 1j * t
        if np.any(~near):
            # sn(v + iK') = 1 / (k sn v)
            v = inverse_sn_real(1.0 / (k * x[~near]), m)
            res[~near] = v + 1j * Kp
        out[ray] = res
    out[inf] = 1j * Kp
    out = out.reshape(np.shape(arr))
    return _out(out, s)
