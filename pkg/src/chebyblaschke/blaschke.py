"""Finite Blaschke products ``B(z) = alpha * prod (z - z_k) / (1 - conj(z_k) z)``.

Evaluation, derivative, critical points and values, pre-composition with
disk automorphisms, the Schwarz-Pick quantity and a raster probe for the
connectivity of lemniscates ``{|B| = t}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DomainError, NumericError

NEAR_ZERO = 1e-8
CLUSTER_RADIUS = 1e-7
TRIM_RTOL = 1e-13
CRIT_RESIDUAL = 1e-10


@dataclass(frozen=True)
class BlaschkeProduct:
    alpha: complex
    zeros: tuple

    def __init__(self, alpha, zeros):
        alpha = complex(alpha)
        zs = tuple(complex(z) for z in np.atleast_1d(zeros))
        if len(zs) < 1:
            raise DomainError("a Blaschke product needs at least one zero")
        if abs(abs(alpha) - 1.0) > 1e-12:
            raise DomainError(f"|alpha| = {abs(alpha)!r} is not 1")
        if not all(abs(z) < 1.0 for z in zs):
            raise DomainError("every zero must lie in the open unit disk")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "zeros", zs)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    @property
    def zarr(self) -> np.ndarray:
        return np.array(self.zeros, dtype=complex)

    def __call__(self, z):
        return evaluate(self, z)


@dataclass(frozen=True)
class CriticalData:
    points: tuple
    values: tuple
    lambda_min: float
    residuals: tuple = ()


def _factors(b: BlaschkeProduct, z):
    z = np.asarray(z, dtype=complex)
    zk = b.zarr
    num = z[..., None] - zk
    den = 1.0 - np.conj(zk) * z[..., None]
    if np.any(den == 0):
        raise DomainError("evaluation at a pole 1/conj(z_k)")
    return z, num, den


def _ret(v, like):
    return complex(v) if np.ndim(like) == 0 else v


def evaluate(b: BlaschkeProduct, z):
    """Product formula, factor by factor."""
    z, num, den = _factors(b, z)
    return _ret(b.alpha * np.prod(num / den, axis=-1), z)


def log_derivative(b: BlaschkeProduct, z):
    """``B'/B = sum 1/(z - z_k) + conj(z_k)/(1 - conj(z_k) z)``."""
    z, num, den = _factors(b, z)
    return _ret(np.sum(1.0 / num + np.conj(b.zarr) / den, axis=-1), z)


def derivative(b: BlaschkeProduct, z):
    """``B'(z)``: logarithmic form away from zeros, product rule near them."""
    z, num, den = _factors(b, z)
    zk = b.zarr
    f = num / den
    near = np.min(np.abs(num), axis=-1) < NEAR_ZERO
    out = np.empty(z.shape, dtype=complex)
    far = ~near
    if np.any(far):
        L = np.sum(1.0 / num[far] + np.conj(zk) / den[far], axis=-1)
        out[far] = L * b.alpha * np.prod(f[far], axis=-1)
    if np.any(near):
        fn = f[near]
        dfn = (1.0 - np.abs(zk) ** 2) / den[near] ** 2
        acc = np.zeros(fn.shape[0], dtype=complex)
        for j in range(b.degree):
            others = np.prod(np.delete(fn, j, axis=-1), axis=-1) if b.degree > 1 else 1.0
            acc += dfn[:, j] * others
        out[near] = b.alpha * acc
    return _ret(out, z)


def schwarz_pick(b: BlaschkeProduct, z):
    """``(1 - |z|^2) |B'(z)|``."""
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("Schwarz-Pick quantity needs |z| < 1")
    v = (1.0 - np.abs(z) ** 2) * np.abs(derivative(b, z))
    return float(v) if np.ndim(z) == 0 else v


def _poly_from_roots(r):
    # ascending coefficients of prod (z - r_j)
    c = np.array([1.0 + 0j])
    for x in r:
        c = np.convolve(c, [-x, 1.0])
    return c


def numerator_coefficients(b: BlaschkeProduct) -> np.ndarray:
    """Ascending coefficients of ``N' D - N D'`` where ``B = alpha N / D``.

    The ``z^(2n-1)`` terms cancel exactly; trailing coefficients below
    ``TRIM_RTOL`` relative are trimmed.
    """
    zk = b.zarr
    N = _poly_from_roots(zk)
    D = np.array([1.0 + 0j])
    for x in zk:
        D = np.convolve(D, [1.0, -np.conj(x)])
    dN = N[1:] * np.arange(1, len(N))
    dD = D[1:] * np.arange(1, len(D))
    c = np.zeros(2 * b.degree, dtype=complex)
    t1 = np.convolve(dN, D)
    t2 = np.convolve(N, dD)
    c[: len(t1)] += t1
    c[: len(t2)] -= t2
    c = c[: 2 * b.degree - 1]
    scale = np.max(np.abs(c))
    while len(c) > 1 and abs(c[-1]) < TRIM_RTOL * scale:
        c = c[:-1]
    return c


def polynomial_roots(coeffs) -> np.ndarray:
    """All roots of the ascending-coefficient polynomial (companion eigenvalues)."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    if len(c) < 2:
        return np.array([], dtype=complex)
    return np.roots(c[::-1])


def polish_polynomial_root(coeffs, z0, maxiter=50):
    """Newton polish of a root of the ascending-coefficient polynomial."""
    p = np.asarray(coeffs, dtype=complex)[::-1]
    dp = np.polyder(p)
    z = complex(z0)
    for _ in range(maxiter):
        v = np.polyval(p, z)
        d = np.polyval(dp, z)
        if d == 0:
            break
        step = v / d
        z -= step
        if abs(step) <= 1e-16 * max(1.0, abs(z)):
            break
    return z


def _polish_critical(b, z0, maxiter=60):
    zk = b.zarr
    cz = np.conj(zk)
    z = complex(z0)
    for _ in range(maxiter):
        if np.min(np.abs(z - zk)) < CLUSTER_RADIUS:
            return z
        L = np.sum(1.0 / (z - zk) + cz / (1.0 - cz * z))
        dL = np.sum(-1.0 / (z - zk) ** 2 + cz ** 2 / (1.0 - cz * z) ** 2)
        if dL == 0:
            break
        step = L / dL
        z -= step
        if abs(step) < 1e-16 * max(1.0, abs(z)):
            break
    return z


def critical_points(b: BlaschkeProduct, invariant_residual: bool = False) -> CriticalData:
    """The ``n - 1`` critical points in the disk and their values.

    Roots of the derivative's numerator come from the companion matrix; the
    ``n - 1`` of smallest modulus are polished by Newton on ``B'/B`` (a zero
    of ``B'`` that is not a zero of ``B``).  Repeated zeros ``z_k`` are
    critical points themselves and are snapped onto.

    The residual check is ``|B'| < 1e-10``; with ``invariant_residual`` it is
    ``(1 - |z|^2)|B'| < 1e-10`` instead, which is unchanged by automorphisms
    and meaningful for critical points crowding the circle.
    """
    n = b.degree
    if n < 2:
        raise DomainError("critical points need degree >= 2")
    zk = b.zarr
    # centres of repeated zeros; companion roots near them are snapped
    centres = []
    for z in zk:
        close = np.abs(zk - z) < CLUSTER_RADIUS
        if close.sum() > 1 and all(abs(z - c) >= CLUSTER_RADIUS for c in centres):
            centres.append(complex(zk[close].mean()))
    roots = polynomial_roots(numerator_coefficients(b))
    roots = roots[np.argsort(np.abs(roots))][: n - 1]
    pts = []
    for r in roots:
        hit = [c for c in centres if abs(r - c) < 1e-5]
        pts.append(hit[0] if hit else _polish_critical(b, r))
    pts = np.array(pts, dtype=complex)
    if len(pts) != n - 1 or np.any(np.abs(pts) >= 1.0):
        raise NumericError(f"found {int(np.sum(np.abs(pts) < 1))} interior critical points, expected {n - 1}")
    vals = evaluate(b, pts)
    res = np.abs(derivative(b, pts))
    if invariant_residual:
        res = res * (1.0 - np.abs(pts) ** 2)
    bad = res >= CRIT_RESIDUAL
    if np.any(bad):
        raise NumericError(f"critical point residuals |B'| = {res[bad]} above {CRIT_RESIDUAL:g}")
    order = np.lexsort((pts.imag, pts.real))
    pts, vals, res = pts[order], vals[order], res[order]
    return CriticalData(tuple(complex(p) for p in pts), tuple(complex(v) for v in vals),
                        float(np.max(np.abs(vals))), tuple(float(r) for r in res))


def automorphism(a: complex, theta: float):
    """``phi(z) = e^{i theta} (z - a) / (1 - conj(a) z)`` as a callable."""
    a = complex(a)
    rot = complex(math.cos(theta), math.sin(theta))

    def phi(z):
        z = np.asarray(z, dtype=complex)
        return rot * (z - a) / (1.0 - np.conj(a) * z)
    return phi


def compose_automorphism(b: BlaschkeProduct, a: complex, theta: float, audit_seed: int = 0) -> BlaschkeProduct:
    """``B o phi`` for ``phi(z) = e^{i theta} (z - a) / (1 - conj(a) z)``."""
    a = complex(a)
    if abs(a) >= 1.0:
        raise DomainError("automorphism needs |a| < 1")
    phi = automorphism(a, theta)
    irot = complex(math.cos(theta), -math.sin(theta))
    zk = b.zarr
    w = irot * zk
    new = (w + a) / (1.0 + np.conj(a) * w)
    trial = BlaschkeProduct(1.0, new)
    # fit alpha where the trial product is best conditioned
    cands = np.array([0.0, 0.5, -0.5j])
    tv = evaluate(trial, cands)
    i = int(np.argmax(np.abs(tv)))
    alpha = evaluate(b, phi(cands[i])) / tv[i]
    out = BlaschkeProduct(alpha / abs(alpha), new)
    rng = np.random.default_rng(audit_seed)
    z = np.sqrt(rng.uniform(0, 1, 200)) * np.exp(2j * np.pi * rng.uniform(0, 1, 200)) * 0.99
    err = np.max(np.abs(evaluate(out, z) - evaluate(b, phi(z))))
    if err > 1e-9:
        raise NumericError(f"automorphism audit failed: max deviation {err:.3e}")
    return out


def winding_number(values) -> int:
    """Winding number about 0 of a closed sampled curve (argument accumulation)."""
    v = np.asarray(values, dtype=complex)
    d = np.angle(np.roll(v, -1) / v)
    return int(round(np.sum(d) / (2 * math.pi)))


@dataclass(frozen=True)
class LemniscateProbe:
    connected: bool
    components: int
    zeros_in_one_component: bool
    critical_criterion: bool
    grid_n: int


def _raster(b, grid_n):
    h = 2.0 / grid_n
    x = -1.0 + (np.arange(grid_n) + 0.5) * h
    Z = x[None, :] + 1j * x[:, None]
    inside = np.abs(Z) < 1.0
    return Z, inside, h


def lemniscate_probe(b: BlaschkeProduct, t: float, grid_n: int = 512) -> LemniscateProbe:
    """Raster probe of the sublevel set ``{|B| <= t}``.

    A pixel is marked when the closed sublevel set can reach it to first
    order, ``|B| - t <= |B'| h / sqrt(2)``; this keeps the set connected
    through saddle points at critical levels.  Components are labelled with
    8-connectivity.  The critical-value criterion (every critical value in
    ``|w| <= t``) is reported alongside, not equated with the raster verdict.
    """
    if not 0.0 < t < 1.0:
        raise DomainError("level t must lie in (0, 1)")
    if grid_n < 256:
        raise DomainError("grid_n must be at least 256")
    Z, inside, h = _raster(b, grid_n)
    zin = Z[inside]
    a = np.abs(evaluate(b, zin))
    d = np.abs(derivative(b, zin))
    mask = np.zeros(Z.shape, dtype=bool)
    mask[inside] = a - t <= d * h / math.sqrt(2.0)
    labels, count = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    zk = b.zarr
    ii = np.clip(((zk.imag + 1.0) / h).astype(int), 0, grid_n - 1)
    jj = np.clip(((zk.real + 1.0) / h).astype(int), 0, grid_n - 1)
    zl = set(labels[ii, jj].tolist())
    one = len(zl) == 1 and 0 not in zl
    if b.degree >= 2:
        # relative slack: at a critical level the computed maximum may round above t
        crit = critical_points(b, invariant_residual=True).lambda_min <= t * (1.0 + 1e-9)
    else:
        crit = True
    return LemniscateProbe(bool(count == 1 and one), int(count), bool(one), bool(crit), grid_n)


def lemniscate_connected(b: BlaschkeProduct, t: float, grid_n: int = 512) -> bool:
    """Resolution-limited probe: is the lemniscate ``{|B| = t}`` connected?"""
    return lemniscate_probe(b, t, grid_n).connected


def _project_to_level(b, z, t, maxiter=30):
    # Newton along the gradient of log|B|, which is conj(B'/B)
    z = complex(z)
    lt = math.log(t)
    for _ in range(maxiter):
        v = complex(evaluate(b, z))
        L = complex(log_derivative(b, z))
        g = L.conjugate()
        gg = abs(g) ** 2
        if gg == 0 or v == 0:
            return None
        r = math.log(abs(v)) - lt
        z = z - r * g / gg
        if abs(r) < 1e-15:
            break
    return z if abs(z) < 1 else None


def trace_lemniscate(b: BlaschkeProduct, t: float, grid_n: int = 512) -> np.ndarray:
    """Points on ``{|B| = t}`` from sign changes of ``|B| - t`` between
    neighbouring pixel centres, each refined by bisection along the edge."""
    Z, inside, h = _raster(b, grid_n)
    F = np.full(Z.shape, np.nan)
    F[inside] = np.abs(evaluate(b, Z[inside])) - t
    pts = []
    for axis in (0, 1):
        a = F
        bnb = np.roll(F, -1, axis=axis)
        za, zb = Z, np.roll(Z, -1, axis=axis)
        sl = [slice(None), slice(None)]
        sl[axis] = slice(0, grid_n - 1)
        sl = tuple(sl)
        cross = (a[sl] * bnb[sl] < 0)
        lo = za[sl][cross]
        hi = zb[sl][cross]
        flo = a[sl][cross]
        for _ in range(50):
            mid = 0.5 * (lo + hi)
            fm = np.abs(evaluate(b, mid)) - t
            same = np.sign(fm) == np.sign(flo)
            lo = np.where(same, mid, lo)
            flo = np.where(same, fm, flo)
            hi = np.where(same, hi, mid)
        pts.append(0.5 * (lo + hi))
    return np.concatenate(pts) if pts else np.array([], dtype=complex)


def max_schwarz_pick_on_level(b: BlaschkeProduct, t: float, grid_n: int = 512, refine: int = 5):
    """Maximum of ``(1 - |z|^2)|B'(z)|`` over ``{|B| = t}``.

    The traced points give a starting set; around each of the ``refine``
    best, the maximum is located along the curve by a bounded scalar search
    over the tangent offset, every trial point projected back onto the level.
    Returns ``(max, argmax, traced points)``.
    """
    from scipy.optimize import minimize_scalar

    pts = trace_lemniscate(b, t, grid_n)
    if len(pts) == 0:
        raise NumericError("no level-set crossings found on the raster")
    sp = schwarz_pick(b, pts)
    best = float(np.max(sp))
    arg = complex(pts[int(np.argmax(sp))])
    h = 2.0 / grid_n
    for idx in np.argsort(sp)[::-1][:refine]:
        z0 = complex(pts[idx])
        g = complex(log_derivative(b, z0)).conjugate()
        if g == 0:
            continue
        tang = 1j * g / abs(g)

        def neg(sig):
            z = _project_to_level(b, z0 + sig * tang, t)
            return 0.0 if z is None else -float(schwarz_pick(b, z))

        res = minimize_scalar(neg, bounds=(-2 * h, 2 * h), method="bounded",
                              options={"xatol": 1e-12})
        if -res.fun > best:
            z = _project_to_level(b, z0 + res.x * tang, t)
            if z is not None:
                best, arg = -res.fun, z
    return best, arg, pts
