"""Chebyshev polynomials of the first kind and the polynomial distortion bound

    |P'(z)| <= 2^((1-n)/n) |c_n|^(1/n) T_n'(T_n^{-1}(|P(z)|)),

valid when every critical value of ``P`` lies in the closed unit disk.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blaschke import polish_polynomial_root, polynomial_roots
from .errors import DomainError


@dataclass(frozen=True)
class Polynomial:
    """``P(z) = c_0 + c_1 z + ... + c_n z^n`` (ascending coefficients)."""

    coeffs: tuple

    def __init__(self, coeffs):
        c = tuple(complex(x) for x in coeffs)
        if len(c) < 3:
            raise DomainError("polynomial degree must be at least 2")
        if abs(c[-1]) <= 1e-14:
            raise DomainError("leading coefficient must be nonzero")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return np.polyval(np.array(self.coeffs[::-1]), np.asarray(z, dtype=complex))

    def derivative(self, z):
        c = np.array(self.coeffs[::-1])
        return np.polyval(np.polyder(c), np.asarray(z, dtype=complex))

    def scaled(self, factor: float) -> "Polynomial":
        return Polynomial([factor * x for x in self.coeffs])


def _cast(v, x):
    if np.ndim(x) == 0:
        return complex(v) if np.iscomplexobj(v) else float(v)
    return v


def chebyshev_t(n: int, x):
    """``T_n(x)`` by the three-term recurrence."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    x = np.asarray(x)
    t0, t1 = np.ones_like(x, dtype=np.result_type(x, float)), x * 1.0
    if n == 0:
        return _cast(t0, x)
    for _ in range(n - 1):
        t0, t1 = t1, 2.0 * x * t1 - t0
    return _cast(t1, x)


def chebyshev_u(n: int, x):
    """``U_n(x)``, second kind."""
    x = np.asarray(x)
    u0, u1 = np.ones_like(x, dtype=np.result_type(x, float)), 2.0 * x
    if n == 0:
        return _cast(u0, x)
    for _ in range(n - 1):
        u0, u1 = u1, 2.0 * x * u1 - u0
    return _cast(u1, x)


def chebyshev_t_derivative(n: int, x):
    """``T_n'(x) = n U_{n-1}(x)``."""
    if n == 0:
        return _cast(np.zeros_like(np.asarray(x), dtype=float), x)
    return _cast(n * np.asarray(chebyshev_u(n - 1, x)), x)


def chebyshev_inverse_branch(n: int, y):
    """``x >= cos(pi/(2n))`` with ``T_n(x) = y`` for ``y >= 0``.

    Bisection on the increasing restriction, then a few Newton steps.
    """
    if n < 1:
        raise DomainError("n must be positive")
    y = np.asarray(y, dtype=float)
    if np.any(y < 0) or np.any(~np.isfinite(y)):
        raise DomainError("inverse branch needs finite y >= 0")
    lo = np.full(y.shape, math.cos(math.pi / (2 * n)))
    # T_n(x) >= x^n for x >= 1
    hi = np.maximum(1.0, y ** (1.0 / n)) * (1.0 + 1e-12)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        up = chebyshev_t(n, mid) < y
        lo = np.where(up, mid, lo)
        hi = np.where(up, hi, mid)
    x = 0.5 * (lo + hi)
    floor = math.cos(math.pi / (2 * n))
    for _ in range(3):
        d = chebyshev_t_derivative(n, x)
        step = np.where(d > 0, (chebyshev_t(n, x) - y) / np.where(d > 0, d, 1.0), 0.0)
        x = np.maximum(x - step, floor)
    return _cast(x, y)


def inverse_closed_form(n: int, y):
    """``cos(arccos(y)/n)`` on ``[0, 1]`` and ``cosh(arccosh(y)/n)`` beyond."""
    y = np.asarray(y, dtype=float)
    out = np.where(y <= 1.0, np.cos(np.arccos(np.minimum(y, 1.0)) / n),
                   np.cosh(np.arccosh(np.maximum(y, 1.0)) / n))
    return _cast(out, y)


def critical_values(p: Polynomial) -> np.ndarray:
    """Images of the roots of ``P'`` (companion roots, Newton-polished)."""
    c = np.array(p.coeffs)
    dc = c[1:] * np.arange(1, len(c))
    roots = np.array([polish_polynomial_root(dc, r) for r in polynomial_roots(dc)])
    return p(roots)


def critical_rescale(p: Polynomial) -> float:
    """Factor that brings all critical values into the closed unit disk."""
    lam = float(np.max(np.abs(critical_values(p))))
    return 1.0 / lam if lam > 1.0 else 1.0


def bound_rhs(p: Polynomial, z):
    n = p.degree
    y = np.abs(p(z))
    x = chebyshev_inverse_branch(n, y)
    return 2.0 ** ((1.0 - n) / n) * abs(p.coeffs[-1]) ** (1.0 / n) * chebyshev_t_derivative(n, x)


def verify_polynomial_bound(p: Polynomial, grid) -> float:
    """``max (|P'(z)| - rhs(z))`` over the grid; ``<= 1e-8`` confirms the bound.

    ``P`` is first rescaled by ``1/max|critical value|`` when that exceeds 1
    (see :func:`critical_rescale`).
    """
    if p.degree < 2:
        raise DomainError("degree must be at least 2")
    q = p.scaled(critical_rescale(p))
    z = np.asarray(grid, dtype=complex)
    return float(np.max(np.abs(q.derivative(z)) - bound_rhs(q, z)))
