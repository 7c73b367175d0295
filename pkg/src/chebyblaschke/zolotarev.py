"""Zolotarev fractions ``Z_n(zeta; kappa)``.

``Z`` is defined parametrically by ``Z(sn(u; k)) = sn(u M; kappa)`` with
``M = K(kappa) / K(k)`` and ``k`` tied to ``kappa`` through the degree
equation ``K'(k) K(kappa) = n K'(kappa) K(k)``.  Because ``Z`` is a
single-valued rational function, any preimage ``u`` of ``zeta`` gives the
same value, so the principal inverse of ``sn`` is valid on the whole sphere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .elliptic import (
    EllipticPair,
    Modulus,
    _nearest_pole,
    _out,
    complete_k,
    inverse_sn,
    sncndn,
    sncndn_real,
)
from .errors import DomainError, NumericError, PoleError

LOGIT_BRACKET = 700.0
RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class ZolotarevParams:
    n: int
    kappa: Modulus
    k: Modulus
    ek: EllipticPair
    ekappa: EllipticPair
    ratio: float

    @property
    def residual(self) -> float:
        """Relative residual of the degree equation."""
        lhs = self.ek.bigKprime * self.ekappa.bigK
        rhs = self.n * self.ekappa.bigKprime * self.ek.bigK
        return abs(lhs - rhs) / rhs


def _as_modulus(m) -> Modulus:
    return m if isinstance(m, Modulus) else Modulus.from_k(m)


def _period_ratio(x: float) -> float:
    ep = complete_k(Modulus.from_logit(x))
    return ep.bigKprime / ep.bigK


def solve_modulus(n: int, kappa) -> ZolotarevParams:
    """Solve ``K'(k)/K(k) = n K'(kappa)/K(kappa)`` for ``k`` by bisection.

    The unknown is parametrized by ``x = log(k / k')`` so that moduli within
    ``1e-300`` of either end stay representable; ``K'/K`` is strictly
    decreasing in ``x``.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"degree must be a positive integer, got {n!r}")
    n = int(n)
    kappa = _as_modulus(kappa)
    ekappa = complete_k(kappa)
    target = n * ekappa.bigKprime / ekappa.bigK

    lo, hi = -LOGIT_BRACKET, LOGIT_BRACKET
    if not _period_ratio(lo) > target > _period_ratio(hi):
        raise NumericError(f"degree equation not bracketed for n={n}, kappa={kappa.k!r}")
    if n == 1:
        lo = hi = kappa.logit
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo < 1e-14 * max(1.0, abs(mid)):
            break
        if _period_ratio(mid) > target:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    k = kappa if n == 1 else Modulus.from_logit(x)
    ek = complete_k(k)
    p = ZolotarevParams(n, kappa, k, ek, ekappa, ekappa.bigK / ek.bigK)
    if p.residual > RESIDUAL_TOL:
        raise NumericError(f"degree equation residual {p.residual:.3e} above {RESIDUAL_TOL:g}")
    return p


def _parameter(zeta, p: ZolotarevParams):
    # u M, where sn(u; k) = zeta
    return inverse_sn(np.asarray(zeta, dtype=complex), p.k) * p.ratio


def zolotarev_eval(zeta, p: ZolotarevParams):
    """``Z_n(zeta; kappa)``; raises :class:`PoleError` near a pole of ``Z``."""
    z = np.asarray(zeta, dtype=complex)
    inf = np.isinf(z.real) | np.isinf(z.imag)
    out = np.zeros(z.shape, dtype=complex)
    if np.any(inf):
        # Z(inf) = sn(i n K'(kappa); kappa): 0 for even n, a pole for odd n
        if p.n % 2:
            raise PoleError("Z has a pole at infinity for odd n", complex("inf"))
    fin = ~inf
    if np.any(fin):
        out[fin] = sncndn(_parameter(z[fin], p), p.kappa)[0]
    if not np.iscomplexobj(zeta) and np.all(out.imag == 0):
        out = out.real
    return _out(out, zeta)


def zolotarev_projective(zeta, p: ZolotarevParams):
    """``Z`` as a pair ``(num, den)`` with ``Z = num / den``, free of poles.

    Near a pole the reciprocal is taken from ``sn(U - iK') = 1/(kappa sn U)``.
    """
    z = np.asarray(zeta, dtype=complex)
    inf = np.isinf(z.real) | np.isinf(z.imag)
    U = np.where(inf, 1j * p.n * p.ekappa.bigKprime, 0.0).astype(complex)
    if np.any(~inf):
        U[~inf] = _parameter(z[~inf], p)
    _, dpole = _nearest_pole(U, p.kappa)
    near = dpole < 0.5 * min(p.ekappa.bigK, p.ekappa.bigKprime)
    num = np.ones(U.shape, dtype=complex)
    den = np.ones(U.shape, dtype=complex)
    if np.any(~near):
        num[~near] = sncndn(U[~near], p.kappa)[0]
    if np.any(near):
        den[near] = p.kappa.k * sncndn(U[near] - 1j * p.ekappa.bigKprime, p.kappa)[0]
    return num, den


def zolotarev_derivative(zeta, p: ZolotarevParams):
    """``dZ/dzeta = M cn(U) dn(U) / (cn(u) dn(u))`` with ``U = M u``."""
    z = np.asarray(zeta, dtype=complex)
    u = inverse_sn(z, p.k)
    _, c, d = sncndn(u, p.k)
    _, C, D = sncndn(u * p.ratio, p.kappa)
    return _out(p.ratio * C * D / (c * d), zeta)


def zolotarev_zeros(p: ZolotarevParams) -> list:
    """The ``n`` zeros of ``Z`` on the sphere.

    ``sn(u M; kappa)`` vanishes at ``u = 2 j K(k) + 2 i l K'(k) / n``, giving
    ``zeta_l = sn(2 i l K'(k)/n; k) = i sc(2 l K'(k)/n; k')`` for
    ``l = 0..n-1``.  For even ``n`` the term ``l = n/2`` is the zero at
    infinity, returned as ``complex('inf')``.
    """
    Kp = p.ek.bigKprime
    zeros = []
    for l in range(p.n):
        if 2 * l == p.n:
            zeros.append(complex("inf"))
            continue
        y = 2.0 * l * Kp / p.n
        s, c, _ = sncndn_real(y, p.k.complement())
        zeros.append(complex(0.0, float(s) / float(c)))
    vals = np.atleast_1d(zolotarev_eval(np.array(zeros), p))
    bad = np.abs(vals) >= 1e-8
    if np.any(bad):
        raise NumericError(f"lattice zeros fail verification: |Z| = {np.abs(vals)[bad]}")
    return zeros


def _chordal(num, den, w):
    return np.abs(num - w * den) / np.sqrt((np.abs(num) ** 2 + np.abs(den) ** 2) * (1 + abs(w) ** 2))


def zolotarev_degree_check(p: ZolotarevParams, w: complex, samples: int = 160) -> int:
    """Count solutions of ``Z(zeta) = w`` on the sphere.

    Grid search over the two charts ``|zeta| <= 1`` and ``zeta = 1/eta``,
    ``|eta| <= 1``; every discrete local minimum of the chordal distance is
    refined by Newton's method and the converged roots are deduplicated.
    """
    w = complex(w)
    kap = p.kappa.k
    if abs(w) < 1e-6 or abs(abs(w) - 1.0) < 1e-6 or abs(abs(w) - 1.0 / kap) < 1e-6:
        raise DomainError("degree check needs |w| away from 0, 1 and 1/kappa")
    # geometric radii: preimages spread over scales from k to 1/k
    rmin = min(1e-9, 1e-3 * p.k.k)
    nr, nt = int(samples * max(1.0, -math.log10(rmin) / 9.0)), 2 * samples
    r = np.geomspace(rmin, 1.0, nr)
    th = 2.0 * math.pi * np.arange(nt) / nt
    R, T = np.meshgrid(r, th, indexing="ij")
    polar = R * np.exp(1j * T)

    roots = []
    unresolved = []
    for chart in (0, 1):
        zeta = polar if chart == 0 else 1.0 / polar
        num, den = zolotarev_projective(zeta, p)
        d = _chordal(num, den, w)
        # local minima over the 8-neighbourhood, periodic in angle
        pad = np.pad(d, ((1, 1), (0, 0)), mode="edge")
        nb = [np.roll(pad, s, axis=1)[1 + a : nr + 1 + a] for a in (-1, 0, 1) for s in (-1, 0, 1)
              if (a, s) != (0, 0)]
        is_min = np.all([d <= x for x in nb], axis=0)
        for i, j in zip(*np.nonzero(is_min)):
            z0 = zeta[i, j]
            z1 = _newton(z0, w, p)
            if z1 is None:
                if 0 < i < nr - 1:
                    unresolved.append((chart, int(i), int(j)))
                continue
            roots.append(z1)
    if unresolved:
        raise NumericError(f"degree check: Newton failed from cells {unresolved[:10]}")
    distinct = []
    for z in roots:
        if all(not _same_point(z, q) for q in distinct):
            distinct.append(z)
    return len(distinct)


def _same_point(a, b, rtol=1e-7):
    # relative, not chordal: preimages pile up geometrically towards 1/k
    return abs(a - b) <= rtol * min(abs(a), abs(b)) or max(abs(a), abs(b)) < 1e-300


def _newton(z0, w, p, maxiter=60):
    # Newton on eta = 1/zeta outside the unit disk keeps steps bounded
    z = complex(z0)
    for _ in range(maxiter):
        try:
            num, den = zolotarev_projective(z, p)
            f = complex(num) / complex(den) - w if abs(complex(den)) > 0 else None
            if f is None:
                return None
            dz = zolotarev_derivative(z, p)
        except (PoleError, ZeroDivisionError):
            return None
        if abs(f) < 1e-13 * (1 + abs(w)):
            return z
        if dz == 0 or not np.isfinite(dz):
            return None
        if abs(z) <= 1.0:
            z = z - f / dz
        else:
            eta = 1.0 / z
            eta = eta + f / dz * eta * eta
            if eta == 0:
                return None
            z = 1.0 / eta
        if not np.isfinite(z):
            return None
    num, den = zolotarev_projective(z, p)
    if abs(complex(num) - w * complex(den)) < 1e-10 * (abs(complex(den)) + abs(complex(num))):
        return z
    return None
