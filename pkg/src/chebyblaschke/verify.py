"""Verification harness for the distortion bound and its corollaries.

For a Blaschke product ``f`` of degree ``n`` whose critical values have
maximal modulus ``lam < 1``, set ``tau = lam^-2``; then

    (1 - |z|^2)|f'(z)| <= (1 - x^2)|B'(x)|,   x = B^{-1}(|f(z)|),

where ``B = B_{n tau}`` is the extremal product restricted to its real
branch.  Every check returns a :class:`VerificationReport`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import blaschke as bl
from .errors import ConsistencyError, DomainError, NumericError, RangeError
from .extremal import (
    ExtremalBranch,
    build_extremal,
    centred_chart,
    critical_values_extremal,
    dfntau0,
    f_ntau_product,
    inverse_branch,
    solve_tau,
)

INEQ_TOL = 1e-8
EQ_TOL = 1e-6
LAMBDA_FLOOR = 1e-6
LAMBDA_CEIL = 1.0 - 1e-12
LEVEL_CEIL = 1.0 - 1e-12
NEAR_TIGHT = 1e-3
# both sides tend to 1 - |f|^2 at the circle, so tightness is judged inside
INTERIOR_RADIUS = 0.9
ZERO_RADIUS = 0.95


@dataclass
class VerificationReport:
    instance_id: str
    degree: int
    lam: float
    tau: float
    grid_size: int
    max_violation: float = math.nan
    max_equality_gap: float = math.nan
    corollary_flags: dict = field(default_factory=dict)
    seed: int | None = None
    status: str = "pass"
    interior_gap: float = math.nan

    @property
    def near_tight(self) -> bool:
        """Relative gap ``(rhs - lhs)/rhs`` below ``NEAR_TIGHT`` somewhere
        with ``|z| <= INTERIOR_RADIUS``; recorded for manual study only."""
        return bool(np.isfinite(self.interior_gap) and self.interior_gap < NEAR_TIGHT)

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def as_record(self) -> dict:
        # ``lambda`` is the exported name; it is a keyword in Python
        return {
            "instance_id": self.instance_id,
            "degree": self.degree,
            "lambda": self.lam,
            "tau": self.tau,
            "grid_size": self.grid_size,
            "max_violation": self.max_violation,
            "max_equality_gap": self.max_equality_gap,
            "corollary_flags": dict(sorted(self.corollary_flags.items())),
            "seed": self.seed,
            "status": self.status,
            "interior_gap": self.interior_gap,
            "near_tight": self.near_tight,
        }


REPORT_FIELDS = ("instance_id", "degree", "lambda", "tau", "grid_size", "max_violation",
                 "max_equality_gap", "corollary_flags", "seed", "status", "interior_gap",
                 "near_tight")


def random_blaschke(n: int, seed: int) -> bl.BlaschkeProduct:
    """Seeded product: uniform unimodular factor, zeros uniform by area in
    the disk of radius 0.95."""
    if int(n) != n or n < 2:
        raise DomainError(f"degree must be an integer >= 2, got {n!r}")
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2.0 * math.pi)
    r = ZERO_RADIUS * np.sqrt(rng.uniform(0.0, 1.0, int(n)))
    zeros = r * np.exp(2j * math.pi * rng.uniform(0.0, 1.0, int(n)))
    return bl.BlaschkeProduct(complex(math.cos(theta), math.sin(theta)), zeros)


def polar_grid(grid_size: int) -> np.ndarray:
    """``grid_size**2`` points; radii ``sin(pi (i + 1/2) / (2 G))`` crowd the circle."""
    G = int(grid_size)
    if G < 1:
        raise DomainError("grid size must be positive")
    r = np.sin(math.pi * (np.arange(G) + 0.5) / (2 * G))
    th = 2.0 * math.pi * np.arange(G) / G
    return (r[:, None] * np.exp(1j * th)[None, :]).ravel()


def _lambda(f: bl.BlaschkeProduct) -> float:
    return bl.critical_points(f).lambda_min


def _centre_zero(f: bl.BlaschkeProduct) -> bl.BlaschkeProduct:
    # f o phi with phi(0) = the zero nearest 0, so that the result vanishes at 0
    a = complex(f.zarr[np.argmin(np.abs(f.zarr))])
    if abs(a) < 1e-15:
        return f
    return bl.compose_automorphism(f, -a, 0.0)


def _bound_sides(f, branch, z):
    y = np.abs(bl.evaluate(f, z))
    keep = y < LEVEL_CEIL
    lhs = bl.schwarz_pick(f, z[keep])
    rhs = branch.schwarz_pick_at_level(y[keep])
    return z[keep], y[keep], lhs, rhs


def check_theorem(f: bl.BlaschkeProduct, grid_size: int, tol: float = INEQ_TOL,
                  instance_id: str = "theorem", seed: int | None = None) -> VerificationReport:
    """Signed maximum of ``lhs - rhs`` over a polar grid."""
    n = f.degree
    if n < 2:
        raise DomainError("degree must be at least 2")
    lam = _lambda(f)
    if lam >= LAMBDA_CEIL:
        raise DomainError(f"degenerate instance: max critical modulus {lam!r} is 1")
    if lam < LAMBDA_FLOOR:
        return VerificationReport(instance_id, n, lam, math.inf if lam == 0 else lam ** -2,
                                  grid_size, seed=seed, status="degenerate-skip")
    tau = lam ** -2
    branch = ExtremalBranch(n, tau)
    z, y, lhs, rhs = _bound_sides(f, branch, polar_grid(grid_size))
    worst = float(np.max(lhs - rhs)) if y.size else math.nan
    inner = np.abs(z) <= INTERIOR_RADIUS
    rel = float(np.min((rhs[inner] - lhs[inner]) / rhs[inner])) if np.any(inner) else math.nan
    status = "pass" if not worst > tol else "fail"
    return VerificationReport(instance_id, n, lam, tau, grid_size, max_violation=worst,
                              seed=seed, status=status, interior_gap=rel)


def check_equality(n: int, tau: float, trials: int = 20, seed: int = 0,
                   tol: float = EQ_TOL) -> VerificationReport:
    """Equality along the branch for ``f = B o phi``.

    For each trial a random automorphism ``phi`` and a level ``y`` are drawn;
    the test point is ``phi^{-1}(x)`` with ``x = B^{-1}(y)`` in ``[z_beta, 1)``.
    """
    e = build_extremal(n, tau)
    lam = float(np.max(np.abs(critical_values_extremal(e))))
    rng = np.random.default_rng(seed)
    gaps = []
    for _ in range(trials):
        a = 0.9 * math.sqrt(rng.uniform()) * complex(np.exp(2j * math.pi * rng.uniform()))
        theta = rng.uniform(0.0, 2.0 * math.pi)
        y = rng.uniform(0.0, 0.99)
        x = inverse_branch(e, y)
        rot = complex(math.cos(theta), -math.sin(theta))
        z0 = (rot * x + a) / (1.0 + np.conj(a) * rot * x)
        f = bl.compose_automorphism(e.blaschke_form, a, theta)
        lhs = float(bl.schwarz_pick(f, z0))
        rhs = float(e.branch.schwarz_pick_at_level(abs(bl.evaluate(f, z0))))
        gaps.append(abs(lhs - rhs))
    gap = float(max(gaps))
    return VerificationReport(f"equality-n{n}-tau{tau:g}", n, lam, lam ** -2, trials,
                              max_equality_gap=gap, seed=seed,
                              status="pass" if gap <= tol else "fail")


def check_corollary_51(n: int, tau: float, grid_size: int = 1024,
                       tol: float = EQ_TOL) -> VerificationReport:
    """Extremal case: the maximum of the Schwarz-Pick quantity over
    ``{|B| = tau^-1/2}`` equals ``|B'(0)|`` and ``|B(0)| = tau^-1/2``.

    The level set is probed and traced for the centred conjugate
    ``B o psi``, which resolves clustered zeros, and traced again for ``B``
    itself, which resolves the neighbourhood of 0.  The level set and the
    Schwarz-Pick quantity both transform under ``psi``, so the two maxima
    describe the same curve; the larger is kept.
    """
    e = build_extremal(n, tau)
    b, _ = centred_chart(e)
    t = 1.0 / math.sqrt(tau)
    probe = bl.lemniscate_probe(b, t, grid_size)
    if not probe.connected:
        raise ConsistencyError(f"extremal lemniscate at level {t!r} reported disconnected")
    best = max(bl.max_schwarz_pick_on_level(b, t, grid_size)[0],
               bl.max_schwarz_pick_on_level(e.blaschke_form, t, grid_size)[0])
    d0 = float(abs(e.branch.dB_ds(0.0)))
    gap = abs(best - d0)
    at0 = abs(abs(complex(bl.evaluate(e.blaschke_form, 0.0))) - t)
    flags = {"cor51_max": bool(gap <= tol), "cor51_origin": bool(at0 <= 1e-8)}
    return VerificationReport(f"cor51-n{n}-tau{tau:g}", n, t, tau, grid_size,
                              max_violation=best - d0, max_equality_gap=gap,
                              corollary_flags=flags,
                              status="pass" if all(flags.values()) else "fail")


def check_corollary_51_random(f: bl.BlaschkeProduct, grid_size: int = 512, tol: float = INEQ_TOL,
                              instance_id: str = "cor51", seed: int | None = None):
    """``max (1 - |z|^2)|f'|`` over ``L_f(lam)`` against ``|B'_{n tau}(0)|``.

    Returns ``None`` when the probe does not report a connected lemniscate
    (the statement does not apply).
    """
    n = f.degree
    lam = _lambda(f)
    if not LAMBDA_FLOOR <= lam < LAMBDA_CEIL:
        return None
    probe = bl.lemniscate_probe(f, lam, grid_size)
    if not probe.connected:
        return None
    best, _, _ = bl.max_schwarz_pick_on_level(f, lam, grid_size)
    bound = float(abs(ExtremalBranch(n, lam ** -2).dB_ds(0.0)))
    v = best - bound
    return VerificationReport(instance_id, n, lam, lam ** -2, grid_size, max_violation=v,
                              corollary_flags={"cor51": bool(v <= tol)}, seed=seed,
                              status="pass" if v <= tol else "fail")


def check_corollary_52(f: bl.BlaschkeProduct, tol: float = INEQ_TOL) -> tuple:
    """``|f'(0)| <= |f'_{n tau}(0)|`` after moving a zero of ``f`` to 0.

    Returns ``(passed, data)``; ``passed`` is ``None`` below the lambda floor.
    """
    g = _centre_zero(f)
    lam = _lambda(g)
    d = abs(complex(bl.derivative(g, 0.0)))
    if lam < LAMBDA_FLOOR:
        return None, {"lambda": lam, "df0": d}
    if lam >= LAMBDA_CEIL:
        raise DomainError("degenerate instance: max critical modulus is 1")
    bound = dfntau0(g.degree, lam ** -2)
    return bool(d <= bound + tol), {"lambda": lam, "df0": d, "bound": bound}


def check_corollary_53(f: bl.BlaschkeProduct, tol: float = INEQ_TOL) -> tuple:
    """``max |critical value| >= tau^-1/2`` where ``|f'_{n tau}(0)| = |f'(0)|``.

    Returns ``(passed, data)``; ``passed`` is ``None`` when ``|f'(0)|`` is
    out of the range that ``solve_tau`` can reach.
    """
    g = _centre_zero(f)
    d = abs(complex(bl.derivative(g, 0.0)))
    if not 0.0 < d <= 1.0:
        raise DomainError(f"|f'(0)| = {d!r} outside (0, 1]")
    lam = _lambda(g)
    try:
        tau = solve_tau(g.degree, d)
    except RangeError:
        return None, {"lambda": lam, "df0": d}
    floor = 1.0 / math.sqrt(tau)
    return bool(lam >= floor - tol), {"lambda": lam, "df0": d, "tau": tau, "floor": floor}


def check_corollary_53_extremal(n: int, tau0: float, tol: float = EQ_TOL) -> VerificationReport:
    """Equality case: ``f = f_{n tau0}`` recovers ``tau0`` and ``lam = tau0^-1/2``."""
    e = build_extremal(n, tau0)
    f = f_ntau_product(e)
    lam = float(np.max(np.abs(critical_values_extremal(e))))
    d = abs(complex(bl.derivative(f, 0.0)))
    tau = solve_tau(n, d)
    floor = 1.0 / math.sqrt(tau)
    gap = max(abs(lam - floor), abs(tau - tau0) / tau0)
    flags = {"cor53_equality": bool(gap <= tol)}
    return VerificationReport(f"cor53-n{n}-tau{tau0:g}", n, lam, tau, 0,
                              max_violation=floor - lam, max_equality_gap=gap,
                              corollary_flags=flags, status="pass" if gap <= tol else "fail")


def check_lemma_51(n: int, tau_grid) -> VerificationReport:
    """``tau -> |f'_{n tau}(0)|`` strictly decreasing with values in ``(0, 1]``
    and tending to 1 as ``tau -> 1+``."""
    taus = np.asarray(tau_grid, dtype=float)
    if taus.ndim != 1 or len(taus) < 2 or np.any(taus <= 1.0) or np.any(np.diff(taus) <= 0):
        raise DomainError("tau grid must be strictly increasing and > 1")
    vals = np.array([dfntau0(n, t) for t in taus])
    near1 = dfntau0(n, 1.0 + 1e-4)
    flags = {
        "lemma51_decreasing": bool(np.all(np.diff(vals) < 0)),
        "lemma51_range": bool(np.all((vals > 0) & (vals <= 1.0))),
        "lemma51_limit": bool(abs(near1 - 1.0) <= 0.05),
    }
    return VerificationReport(f"lemma51-n{n}", n, math.nan, math.nan, len(taus),
                              max_violation=float(np.max(np.diff(vals))),
                              corollary_flags=flags,
                              status="pass" if all(flags.values()) else "fail")


def instance_seed(seed: int, i: int) -> int:
    """Per-instance seed, independent of how many instances run."""
    return int(np.random.SeedSequence([int(seed), int(i)]).generate_state(1)[0])


def random_suite(n: int, trials: int, seed: int, grid_size: int, tol: float = INEQ_TOL) -> list:
    """Inequality, derivative-at-0 and critical-value-floor checks on ``trials`` seeded products."""
    reports = []
    for i in range(trials):
        s = instance_seed(seed, i)
        f = random_blaschke(n, s)
        rep = check_theorem(f, grid_size, tol=tol, instance_id=f"random-{i:04d}", seed=s)
        for name, check in (("cor52", check_corollary_52), ("cor53", check_corollary_53)):
            try:
                ok, _ = check(f, tol=tol)
            except NumericError:
                ok = False
            if ok is not None:
                rep.corollary_flags[name] = ok
        if rep.status == "pass" and not all(rep.corollary_flags.values()):
            rep.status = "fail"
        reports.append(rep)
    return reports
