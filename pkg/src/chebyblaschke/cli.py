"""Command-line front end.

Subcommands: extremal, verify, solve-modulus, lemniscate, bound-table.
Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import blaschke as bl
from . import verify as vf
from .elliptic import Modulus
from .errors import ChebyBlaschkeError
from .extremal import (
    ExtremalBranch,
    build_extremal,
    centred_chart,
    critical_values_extremal,
    kappa_from_tau,
)
from .zolotarev import solve_modulus

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

EXTREMAL_KEYS = ("n", "tau", "kappa", "k", "residual", "zeros", "z_beta",
                 "critical_values", "dfntau0", "samples")
SAMPLE_COLUMNS = ("x", "B", "dB")
BOUND_COLUMNS = ("y", "x", "rhs")
LEMNISCATE_COLUMNS = ("re", "im", "schwarz_pick")
MODULUS_KEYS = ("n", "kappa", "k", "kprime", "K_k", "Kprime_k", "K_kappa", "Kprime_kappa",
                "ratio", "residual")


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    tau: float | None = None
    lam: float | None = None
    kappa: float | None = None
    seed: int = 0
    trials: int = 100
    grid: int | None = None
    tol: float = vf.INEQ_TOL
    output_path: str | None = None
    format: str = "json"


class UsageError(ChebyBlaschkeError):
    pass


def resolve_tau(cfg: RunConfig) -> float:
    """``tau`` from ``--tau`` or ``--lambda`` (``tau = lambda^-2``)."""
    if (cfg.tau is None) == (cfg.lam is None):
        raise UsageError("give exactly one of --tau and --lambda")
    if cfg.lam is not None:
        if not 0.0 < cfg.lam < 1.0:
            raise UsageError(f"--lambda must lie in (0, 1), got {cfg.lam!r}")
        return cfg.lam ** -2
    if not cfg.tau > 1.0 or not math.isfinite(cfg.tau):
        raise UsageError(f"--tau must be finite and > 1, got {cfg.tau!r}")
    return cfg.tau


def _need_n(cfg: RunConfig, least: int = 2) -> int:
    if cfg.n is None or cfg.n < least:
        raise UsageError(f"--n must be an integer >= {least}")
    return cfg.n


# formatting

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, dict):
        return ";".join(f"{k}={'pass' if x else 'fail'}" for k, x in v.items())
    if isinstance(v, complex):
        raise TypeError("complex values go in separate re/im columns")
    return format(float(v), ".17g")


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(r[c]) for c in columns) + "\n")
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": _jsonable(v.real), "im": _jsonable(v.imag)}
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False) + "\n"


def write_output(text: str, path: str | None) -> None:
    """Write once; a file target is replaced atomically."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        # mkstemp is 0600; match a plain open()
        mask = os.umask(0)
        os.umask(mask)
        os.chmod(tmp, 0o666 & ~mask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# commands

def _samples(br: ExtremalBranch, count: int) -> list:
    lo, hi = br.sigma_range
    sig = np.linspace(lo, hi, count, endpoint=False)
    x = br.x(sig)
    B = br.value(sig)
    # s = artanh(x): dB/dx = (dB/ds) / (1 - x^2), with 1 - x^2 = gap (2 - gap)
    g = br.gap(sig)
    dB = br.dB_ds(sig) / (g * (2.0 - g))
    return [{"x": float(a), "B": float(b), "dB": float(c)} for a, b, c in zip(x, B, dB)]


def cmd_extremal(cfg: RunConfig) -> tuple:
    n = _need_n(cfg)
    tau = resolve_tau(cfg)
    e = build_extremal(n, tau)
    samples = _samples(e.branch, cfg.grid or 64)
    if cfg.format == "csv":
        return EXIT_OK, to_csv(SAMPLE_COLUMNS, samples)
    doc = {
        "n": n,
        "tau": tau,
        "kappa": e.kappa.k,
        "k": e.zparams.k.k,
        "residual": e.zparams.residual,
        "zeros": list(e.zeros_z),
        "z_beta": e.z_beta,
        "critical_values": critical_values_extremal(e),
        "dfntau0": e.branch.dfntau0,
        "samples": samples,
    }
    assert tuple(doc) == EXTREMAL_KEYS
    return EXIT_OK, to_json(doc)


def cmd_solve_modulus(cfg: RunConfig) -> tuple:
    n = _need_n(cfg, 1)
    if cfg.kappa is not None:
        if cfg.tau is not None or cfg.lam is not None:
            raise UsageError("give one of --kappa, --tau, --lambda")
        if not 0.0 < cfg.kappa < 1.0:
            raise UsageError(f"--kappa must lie in (0, 1), got {cfg.kappa!r}")
        kappa = Modulus.from_k(cfg.kappa)
    else:
        kappa = kappa_from_tau(resolve_tau(cfg))
    p = solve_modulus(n, kappa)
    rec = {
        "n": n, "kappa": p.kappa.k, "k": p.k.k, "kprime": p.k.kprime,
        "K_k": p.ek.bigK, "Kprime_k": p.ek.bigKprime,
        "K_kappa": p.ekappa.bigK, "Kprime_kappa": p.ekappa.bigKprime,
        "ratio": p.ratio, "residual": p.residual,
    }
    if cfg.format == "csv":
        return EXIT_OK, to_csv(MODULUS_KEYS, [rec])
    return EXIT_OK, to_json(rec)


def cmd_bound_table(cfg: RunConfig) -> tuple:
    n = _need_n(cfg)
    tau = resolve_tau(cfg)
    br = ExtremalBranch(n, tau)
    G = cfg.grid or 64
    y = np.arange(G) / G
    sig = br.solve(y)
    rows = [{"y": float(a), "x": float(b), "rhs": float(c)}
            for a, b, c in zip(y, br.x(sig) + 0.0, np.abs(br.dB_ds(sig)))]
    if cfg.format == "csv":
        return EXIT_OK, to_csv(BOUND_COLUMNS, rows)
    return EXIT_OK, to_json({"n": n, "tau": tau, "rows": rows})


def cmd_lemniscate(cfg: RunConfig) -> tuple:
    """Trace ``{|B| = tau^-1/2}`` for the extremal product."""
    n = _need_n(cfg)
    tau = resolve_tau(cfg)
    e = build_extremal(n, tau)
    t = 1.0 / math.sqrt(tau)
    G = cfg.grid or 512
    chart, _ = centred_chart(e)
    probe = bl.lemniscate_probe(chart, t, G)
    b = e.blaschke_form
    pts = bl.trace_lemniscate(b, t, G)
    # raster order is deterministic; sort by angle about the zeros' centre for plotting
    ctr = np.mean(b.zarr)
    pts = pts[np.lexsort((np.abs(pts - ctr), np.angle(pts - ctr)))]
    sp = bl.schwarz_pick(b, pts)
    rows = [{"re": float(z.real), "im": float(z.imag), "schwarz_pick": float(s)}
            for z, s in zip(pts, sp)]
    if cfg.format == "csv":
        return EXIT_OK, to_csv(LEMNISCATE_COLUMNS, rows)
    doc = {"n": n, "tau": tau, "level": t, "connected": probe.connected,
           "components": probe.components, "dB0": float(abs(e.branch.dB_ds(0.0))),
           "points": rows}
    return EXIT_OK, to_json(doc)


def verify_reports(cfg: RunConfig) -> list:
    n = _need_n(cfg)
    if cfg.trials < 1:
        raise UsageError("--trials must be >= 1")
    grid = cfg.grid or 64
    reports = vf.random_suite(n, cfg.trials, cfg.seed, grid, tol=cfg.tol)
    for tau in (4.0, 9.0):
        reports.append(vf.check_equality(n, tau, seed=vf.instance_seed(cfg.seed, 10_000)))
    reports.append(vf.check_corollary_51(n, 4.0))
    reports.append(vf.check_corollary_53_extremal(n, 6.0))
    reports.append(vf.check_lemma_51(n, [1.001, 1.5, 2.0, 5.0, 20.0, 200.0]))
    return reports


def cmd_verify(cfg: RunConfig) -> tuple:
    reports = verify_reports(cfg)
    rows = [r.as_record() for r in reports]
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    if cfg.format == "csv":
        return code, to_csv(vf.REPORT_FIELDS, rows)
    return code, to_json(rows)


COMMANDS = {
    "extremal": cmd_extremal,
    "verify": cmd_verify,
    "solve-modulus": cmd_solve_modulus,
    "lemniscate": cmd_lemniscate,
    "bound-table": cmd_bound_table,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chebyblaschke", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--n", type=int)
        g = p.add_mutually_exclusive_group()
        g.add_argument("--tau", type=float)
        g.add_argument("--lambda", dest="lam", type=float)
        if name == "solve-modulus":
            p.add_argument("--kappa", type=float)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trials", type=int, default=100)
        p.add_argument("--grid", type=int)
        p.add_argument("--tol", type=float, default=vf.INEQ_TOL)
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--out", dest="output_path")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    try:
        if cfg.grid is not None and cfg.grid < 1:
            raise UsageError("--grid must be positive")
        code, text = COMMANDS[cfg.command](cfg)
        write_output(text, cfg.output_path)
    except (ChebyBlaschkeError, ValueError, OSError) as exc:
        print(f"chebyblaschke {cfg.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
