"""The extremal product ``B_{n tau}(z) = Phi(Z((z - 1)/(z + 1); kappa))``.

``Phi(v) = (1 + sqrt(kappa) v) / (1 - sqrt(kappa) v)`` and
``sqrt(kappa) = (sqrt(tau) - 1) / (sqrt(tau) + 1)``.

On the real segment ``(-1, 1)`` everything is evaluated through two real
parametrizations, which keep full relative accuracy even when the zeros sit
within ``1e-14`` of ``-1`` (small ``tau``, large ``n``):

* the cut ``zeta = -1/dn(t; k')``, ``0 <= t <= K'(k)``, covering
  ``(k - 1)/(k + 1) <= z <= 0``, where ``Z = -1/dn(M t; kappa')`` and
  ``B = (D - sqrt(kappa)) / (D + sqrt(kappa))`` with ``D = dn(M t; kappa')``;
* ``zeta = -cd(e; k)``, ``0 <= e <= K(k)``, covering ``0 <= z < 1``, where
  ``Z = -cd(M e; kappa)``.

Zeros sit at ``t_j = (2j + 1) K'(k) / (2n)`` and critical points at
``t = j K'(k) / n``, with critical values ``+-1/sqrt(tau)``.  The hyperbolic
coordinate ``s = artanh(z)`` satisfies ``(1 - z^2) dB/dz = dB/ds``, so the
Schwarz-Pick quantity along the segment is ``|dB/ds|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import blaschke as bl
from .elliptic import Modulus, sncndn_real
from .errors import ConsistencyError, DomainError, NumericError, RangeError
from .zolotarev import ZolotarevParams, solve_modulus, zolotarev_projective

ZERO_RESIDUAL = 1e-10
AUDIT_POINTS = 500
CRIT_TOL = 1e-6
BISECT_STEPS = 64
SMALL_PARAMETER = 1e-12


def kappa_from_tau(tau: float) -> Modulus:
    """``Modulus`` with ``sqrt(kappa) = (sqrt(tau) - 1) / (sqrt(tau) + 1)``."""
    tau = float(tau)
    if not (tau > 1.0 and math.isfinite(tau)):
        raise DomainError(f"tau must be a finite number > 1, got {tau!r}")
    r = math.sqrt(tau)
    sk = (tau - 1.0) / (r + 1.0) ** 2
    if sk <= 0.0:
        raise DomainError(f"tau={tau!r} too close to 1: kappa underflows")
    # 1 - kappa = 4 sqrt(tau) / (sqrt(tau) + 1)^2, kept exact for kappa near 1
    one_minus = 4.0 * r / (r + 1.0) ** 2
    return Modulus(sk * sk, math.sqrt(one_minus * (1.0 + sk * sk)))


@dataclass(frozen=True)
class MoebiusMap:
    """``v -> (a v + b) / (c v + d)``."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if abs(self.det) <= 1e-14:
            raise DomainError("degenerate Moebius map (ad - bc = 0)")

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __call__(self, v):
        v = np.asarray(v, dtype=complex)
        out = (self.a * v + self.b) / (self.c * v + self.d)
        return complex(out) if out.ndim == 0 else out

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """``self o other``."""
        return MoebiusMap(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                          self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    @classmethod
    def disk_automorphism(cls, a: complex, theta: float) -> "MoebiusMap":
        """``e^{i theta} (z - a) / (1 - conj(a) z)``."""
        a = complex(a)
        rot = complex(math.cos(theta), math.sin(theta))
        return cls(rot, -rot * a, -a.conjugate(), 1.0)

    def as_disk_automorphism(self):
        """``(a, theta)`` with ``self == e^{i theta}(z - a)/(1 - conj(a) z)``."""
        a = complex(self.inverse()(0.0))
        p = 0.0 if abs(a) > 0.5 else 0.9
        rot = complex(self(p)) * (1.0 - a.conjugate() * p) / (p - a)
        return a, math.atan2(rot.imag, rot.real)


def argument_map() -> MoebiusMap:
    """``z -> (z - 1)/(z + 1)``."""
    return MoebiusMap(1.0, -1.0, 1.0, 1.0)


def phi_map(kappa: Modulus) -> MoebiusMap:
    """``Phi(v) = (v sqrt(kappa) + 1) / (1 - v sqrt(kappa))``."""
    sk = math.sqrt(kappa.k)
    return MoebiusMap(sk, 1.0, -sk, 1.0)


class ExtremalBranch:
    """``B_{n tau}`` on the real segment, through the real parametrizations.

    ``sigma`` runs over ``[-t_beta, K(k)]``: negative values are the cut
    parameter ``t = -sigma`` and nonnegative values the parameter ``e``.
    ``B`` is strictly increasing in ``sigma`` from 0 at ``z_beta`` toward 1.
    """

    def __init__(self, n: int, tau: float, zparams: ZolotarevParams | None = None):
        if int(n) != n or n < 2:
            raise DomainError(f"degree n must be an integer >= 2, got {n!r}")
        self.n = int(n)
        self.tau = float(tau)
        self.kappa = kappa_from_tau(tau)
        self.z = zparams if zparams is not None else solve_modulus(self.n, self.kappa)
        self.M = self.z.ratio
        self.sk = math.sqrt(self.kappa.k)
        self.kc = self.z.k.complement()
        self.kapc = self.kappa.complement()
        self.Kk = self.z.ek.bigK
        self.Kpk = self.z.ek.bigKprime
        self.t_beta = self.Kpk / (2 * self.n)
        # (kappa'^2 / k'^2) * 4 sqrt(kappa) M, the common factor of dB/ds
        self._c = 4.0 * self.sk * self.M * (self.kappa.kprime / self.z.k.kprime) ** 2

    # cut: zeta = -1/dn(t; k')
    def cut(self, t):
        t = np.asarray(t, dtype=float)
        sn, cn, dn = sncndn_real(t, self.kc)
        S, C, D = sncndn_real(self.M * t, self.kapc)
        B = (D - self.sk) / (D + self.sk)
        # S/sn = M (1 + O(t^2)); the limit avoids 0/0 at denormal t
        tiny = t < SMALL_PARAMETER
        ratio = np.where(tiny, self.M, S / np.where(tiny, 1.0, sn))
        dBds = self._c * ratio * C * dn / ((D + self.sk) ** 2 * cn)
        kp2 = self.z.k.kprime ** 2
        x = -kp2 * sn * sn / (1.0 + dn) ** 2
        gap = 2.0 * dn / (1.0 + dn)
        return B, dBds, x, gap, dn

    # zeta = -cd(e; k)
    def ebranch(self, e):
        e = np.asarray(e, dtype=float)
        sn, cn, dn = sncndn_real(e, self.z.k)
        S, C, D = sncndn_real(self.M * e, self.kappa)
        den = D + self.sk * C
        B = (D - self.sk * C) / den
        tiny = e < SMALL_PARAMETER
        ratio = np.where(tiny, self.M, S / np.where(tiny, 1.0, sn))
        dBds = self._c * ratio * cn * dn / den ** 2
        kp2 = self.z.k.kprime ** 2
        x = kp2 * sn * sn / (dn + cn) ** 2
        gap = 2.0 * dn / (dn + cn)
        return B, dBds, x, gap, 2.0 * cn / (dn + cn)

    def _split(self, sigma, fn_cut, fn_e):
        sigma = np.asarray(sigma, dtype=float)
        neg = sigma < 0.0
        out = np.empty(sigma.shape)
        if np.any(neg):
            out[neg] = fn_cut(-sigma[neg])
        if np.any(~neg):
            out[~neg] = fn_e(sigma[~neg])
        return out

    def value(self, sigma):
        return self._split(sigma, lambda t: self.cut(t)[0], lambda e: self.ebranch(e)[0])

    def dB_ds(self, sigma):
        return self._split(sigma, lambda t: self.cut(t)[1], lambda e: self.ebranch(e)[1])

    def x(self, sigma):
        return self._split(sigma, lambda t: self.cut(t)[2], lambda e: self.ebranch(e)[2])

    def gap(self, sigma):
        """``1 + x`` without cancellation."""
        return self._split(sigma, lambda t: self.cut(t)[3], lambda e: self.ebranch(e)[3])

    @property
    def sigma_range(self):
        return -self.t_beta, self.Kk

    def solve(self, y):
        """``sigma`` with ``B(sigma) = y`` by vectorized bisection."""
        y = np.asarray(y, dtype=float)
        if np.any((y < 0.0) | (y >= 1.0)) or np.any(~np.isfinite(y)):
            raise DomainError("inverse branch needs 0 <= y < 1")
        lo = np.full(y.shape, -self.t_beta)
        hi = np.full(y.shape, self.Kk)
        for _ in range(BISECT_STEPS + 8):
            mid = 0.5 * (lo + hi)
            up = self.value(mid) < y
            lo = np.where(up, mid, lo)
            hi = np.where(up, hi, mid)
        sig = 0.5 * (lo + hi)
        return np.where(y == 0.0, -self.t_beta, sig)

    def schwarz_pick_at_level(self, y):
        """``(1 - x^2)|B'(x)|`` at ``x = B^{-1}(y)`` on the branch."""
        return np.abs(self.dB_ds(self.solve(y)))

    @property
    def dfntau0(self) -> float:
        return float(abs(self.dB_ds(-self.t_beta)))


def _zeta_from_gap(g):
    # zeta = (z - 1)/(z + 1) with z = -1 + g
    return (g - 2.0) / g


@dataclass(frozen=True, eq=False)
class ExtremalProduct:
    n: int
    tau: float
    kappa: Modulus
    zparams: ZolotarevParams
    zeros_z: tuple
    z_beta: float
    blaschke_form: bl.BlaschkeProduct
    zeros_zeta: tuple = ()
    zero_gaps: tuple = ()
    zero_t: tuple = ()
    branch: ExtremalBranch = field(default=None, repr=False)

    @property
    def zeta_beta(self) -> float:
        return self.zeros_zeta[0]

    def eval_zeta(self, zeta):
        """``Phi(Z(zeta))`` by the complex parametric path."""
        num, den = zolotarev_projective(zeta, self.zparams)
        sk = self.branch.sk
        out = (den + sk * num) / (den - sk * num)
        return complex(out) if np.ndim(zeta) == 0 else out


def _find_zeros(br: ExtremalBranch, scan: int = 64):
    # one root of dn(M t; kappa') = sqrt(kappa) on each piece [jK'/n, (j+1)K'/n]
    n = br.n
    roots = []
    for j in range(n):
        a, b = j * br.Kpk / n, (j + 1) * br.Kpk / n
        ts = np.linspace(a, b, scan + 1)
        g = sncndn_real(br.M * ts, br.kapc)[2] - br.sk
        idx = np.nonzero(np.sign(g[:-1]) != np.sign(g[1:]))[0]
        if len(idx) != 1:
            raise NumericError(f"zero scan found {len(idx)} sign changes on piece {j}")
        lo, hi = ts[idx[0]], ts[idx[0] + 1]
        glo = g[idx[0]]
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            gm = float(sncndn_real(br.M * mid, br.kapc)[2]) - br.sk
            if (gm > 0) == (glo > 0):
                lo, glo = mid, gm
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return np.array(roots)


def build_extremal(n: int, tau: float, audit_seed: int = 20240) -> ExtremalProduct:
    """Construct ``B_{n tau}``: modulus, zeros, ``z_beta`` and the explicit
    Blaschke form (alpha fitted at ``z = 0`` and audited globally)."""
    br = ExtremalBranch(n, tau)
    t = _find_zeros(br)
    # polish on B itself, evaluated by the complex parametric path
    kp2 = br.z.k.kprime ** 2
    for _ in range(3):
        _, dBds, x, gap, dn = br.cut(t)
        zeta = -1.0 / dn
        vals = np.array([_bval(br, z).real for z in zeta])
        if np.all(np.abs(vals) < 1e-14):
            break
        sn, cn, _ = sncndn_real(t, br.kc)
        t = t - vals / (dBds * (-kp2 * sn * cn / (2.0 * dn)))
    _, _, x, gap, dn = br.cut(t)
    zeta = -1.0 / dn
    res = np.array([abs(_bval(br, z)) for z in zeta])
    if np.any(res >= ZERO_RESIDUAL):
        raise NumericError(f"zero residuals {res} above {ZERO_RESIDUAL:g}")
    if len(x) != br.n:
        raise NumericError(f"found {len(x)} zeros, expected {br.n}")
    if np.any(x <= -1.0) or np.any(x > 0.0):
        raise ConsistencyError("a zero rounds outside (-1, 0] in binary64")
    zeros = tuple(float(v) for v in x)
    z_beta = max(zeros)
    # alpha from the value B(0) = 1/sqrt(tau) (z = 0 is sigma = 0)
    b0 = float(br.value(0.0))
    trial = bl.BlaschkeProduct(1.0, zeros)
    alpha = b0 / bl.evaluate(trial, 0.0)
    form = bl.BlaschkeProduct(alpha / abs(alpha), zeros)
    e = ExtremalProduct(br.n, br.tau, br.kappa, br.z, zeros, z_beta, form,
                        tuple(float(v) for v in zeta), tuple(float(g) for g in gap),
                        tuple(float(v) for v in t), br)
    rng = np.random.default_rng(audit_seed)
    r = np.sqrt(rng.uniform(0, 1, AUDIT_POINTS))
    zs = r * np.exp(2j * np.pi * rng.uniform(0, 1, AUDIT_POINTS))
    dev = np.max(np.abs(bl.evaluate(form, zs) - extremal_eval(e, zs)))
    if dev > 1e-8:
        raise ConsistencyError(f"Blaschke form deviates from the parametric form by {dev:.3e}")
    return e


def _bval(br, zeta):
    num, den = zolotarev_projective(complex(zeta), br.z)
    num, den = complex(num), complex(den)
    return (den + br.sk * num) / (den - br.sk * num)


def extremal_eval(e: ExtremalProduct, z):
    """``B_{n tau}(z)`` for ``|z| <= 1``, ``z != -1``, by the parametric path."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == -1.0):
        raise DomainError("B_{n tau} is evaluated through (z - 1)/(z + 1): z = -1 excluded")
    return e.eval_zeta((z - 1.0) / (z + 1.0)) if z.ndim else e.eval_zeta(complex((z - 1.0) / (z + 1.0)))


def extremal_derivative(e: ExtremalProduct, z):
    """``B'_{n tau}(z)`` from the Blaschke form (logarithmic derivative)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == -1.0):
        raise DomainError("z = -1 excluded")
    return bl.derivative(e.blaschke_form, z if z.ndim else complex(z))


def inverse_branch(e, y):
    """``x`` in ``[z_beta, 1)`` with ``B(x) = y``; accepts scalars or arrays."""
    br = e.branch if isinstance(e, ExtremalProduct) else e
    sig = br.solve(y)
    x = br.x(sig)
    if isinstance(e, ExtremalProduct):
        # the endpoint is the polished zero, not its branch-formula image
        x = np.where(np.asarray(y) == 0.0, e.z_beta, x)
    if np.ndim(y) == 0:
        return float(x)
    return x


def boundary_winding(e: ExtremalProduct, base: int = 2000, rounds: int = 40) -> int:
    """Winding number of ``theta -> B(e^{i theta})`` about 0.

    The circle is ``zeta = i y`` in the argument coordinate; ``y = sinh(p)``
    reaches the zeros near ``z = -1`` and phase steps above 0.5 rad are
    subdivided until resolved.
    """
    P = math.asinh(1e3 / e.zparams.k.k)
    p = np.linspace(-P, P, base)
    v = e.eval_zeta(1j * np.sinh(p))
    for _ in range(rounds):
        step = np.abs(np.angle(v[1:] / v[:-1]))
        big = np.nonzero(step > 0.5)[0]
        if len(big) == 0:
            break
        mid = 0.5 * (p[big] + p[big + 1])
        vm = e.eval_zeta(1j * np.sinh(mid))
        p = np.insert(p, big + 1, mid)
        v = np.insert(v, big + 1, vm)
    else:
        raise NumericError("boundary phase not resolved")
    # p = +-P are both next to z = -1; the closing arc passes through it
    return bl.winding_number(v)


def centred_chart(e: ExtremalProduct):
    # conjugate by psi(w) = (w + c)/(1 + c w) with c at the hyperbolic centre
    # of the zeros; zeros of B o psi computed from the gaps 1 + z_j
    g = np.array(e.zero_gaps)
    h = np.log(g / (2.0 - g))
    hc = 0.5 * (h.max() + h.min())
    ec = 2.0 / (1.0 + math.exp(-hc))  # 1 + c
    c = ec - 1.0
    w = (g - ec) / (g + ec - g * ec)
    return bl.BlaschkeProduct(1.0, w), c


def critical_values_extremal(e: ExtremalProduct):
    """Critical values of ``B_{n tau}``; each must be ``+-1/sqrt(tau)``.

    The critical points are computed for ``B o psi``, a conjugate by a disk
    automorphism that centres the zeros hyperbolically (critical values are
    unchanged); this keeps clusters of zeros near ``-1`` resolvable.
    """
    form, c = centred_chart(e)
    cd = bl.critical_points(form, invariant_residual=True)
    vals = np.array(cd.values)
    lam = 1.0 / math.sqrt(e.tau)
    dev = np.abs(np.abs(vals) - lam)
    if np.any(dev > CRIT_TOL):
        raise ConsistencyError(f"critical values off +-1/sqrt(tau) by {dev.max():.3e}")
    return [complex(v) for v in vals]


def critical_points_extremal(e: ExtremalProduct):
    """Critical points of ``B_{n tau}`` in the disk (mapped back from the chart)."""
    form, c = centred_chart(e)
    w = np.array(bl.critical_points(form, invariant_residual=True).points)
    return [complex(z) for z in (w + c) / (1.0 + c * w)]


def f_ntau_product(e: ExtremalProduct) -> bl.BlaschkeProduct:
    """``f_{n tau} = B_{n tau} o phi`` with ``phi(z) = (z + z_beta)/(1 + z_beta z)``.

    Zeros ``(z_j - z_beta)/(1 - z_beta z_j)`` are formed from the gaps; the
    factor is 1 because ``f(1) = 1`` and all zeros are real.
    """
    g = np.array(e.zero_gaps)
    gb = g[0]
    w = (g - gb) / (g + gb - g * gb)
    return bl.BlaschkeProduct(1.0, w)


def build_f_ntau(n: int, tau: float):
    """``(B_{n tau}, phi)`` with ``phi(0) = z_beta`` so that ``f = B o phi``
    has ``f(0) = 0``."""
    e = build_extremal(n, tau)
    zb = e.z_beta
    phi = MoebiusMap(1.0, zb, zb, 1.0)
    v = abs(e.eval_zeta(e.zeta_beta))
    if v >= 1e-8:
        raise ConsistencyError(f"|B(phi(0))| = {v:.3e}")
    return e, phi


def dfntau0(n: int, tau: float) -> float:
    """``|f'_{n tau}(0)| = (1 - z_beta^2)|B'(z_beta)|``.

    At ``t_beta = K'(k)/(2n)`` this is
    ``M (1 - kappa) dn / (k'^2 sn cn)`` with ``sn, cn, dn`` at ``(t_beta; k')``.
    """
    return ExtremalBranch(n, tau).dfntau0


TAU_LO = 1.0 + 1e-6
TAU_MAX = 1e12


def solve_tau(n: int, target: float, tol: float = 1e-9) -> float:
    """``tau`` with ``dfntau0(n, tau) = target`` (bisection in ``log tau``)."""
    target = float(target)
    if not 0.0 < target <= 1.0:
        raise DomainError("target must lie in (0, 1]")
    lo, hi = TAU_LO, 2.0
    flo = dfntau0(n, lo)
    if target > flo:
        raise RangeError(f"target {target!r} above dfntau0 at tau = {lo!r} ({flo!r})")
    while dfntau0(n, hi) > target:
        lo = hi
        hi *= 2.0
        if hi > TAU_MAX:
            raise RangeError(f"target {target!r} not reached for tau <= {TAU_MAX:g}")
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if not lo < mid < hi:
            break
        fm = dfntau0(n, mid)
        if abs(fm - target) < 1e-3 * tol:
            return mid
        if fm > target:
            lo = mid
        else:
            hi = mid
    tau = math.sqrt(lo * hi)
    if abs(dfntau0(n, tau) - target) >= tol:
        raise NumericError("solve_tau did not reach the requested tolerance")
    return tau
