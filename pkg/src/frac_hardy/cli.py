"""Command-line front end.

Subcommands: ``constants``, ``exponent``, ``profile``, ``solve``, ``verify``.
Exit codes: 0 success, 2 domain/config/input error, 3 non-convergence,
4 failed check.  ``FRAC_HARDY_THREADS`` caps the BLAS thread pools.
"""

from __future__ import annotations

import argparse
import configparser
import io
import json
import os
import sys
import traceback
from dataclasses import asdict
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .constants import (
    DomainError,
    NonConvergenceError,
    Params,
    cns_closed,
    cns_integral,
    lambda_ns,
)
from .exponents import solve_alpha
from .radial_calculus.grid import atomic_write_text, make_grid, profile, read_csv, write_csv

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NONCONV = 3
EXIT_CHECK = 4


class ConfigError(ValueError):
    """Malformed or incomplete configuration."""


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class RunRecord:
    """Provenance of one command: inputs, outputs, timing, outcome."""

    def __init__(self, command: str, path: str | None):
        self.path = path
        self.data = {
            "command": command,
            "params": None,
            "config": None,
            "outputs": [],
            "started": _now(),
            "finished": None,
            "version": __version__,
            "status": "running",
            "exit_code": None,
            "error": None,
        }

    def output(self, path: str) -> None:
        self.data["outputs"].append(os.fspath(path))

    def finish(self, code: int, error: str | None = None) -> None:
        self.data.update(finished=_now(), exit_code=code, error=error,
                         status="ok" if code == 0 else "error")
        if self.path:
            atomic_write_text(self.path, json.dumps(self.data, indent=2) + "\n")


def _emit(rows: list[list], header: list[str], csv_path: str | None, rec: RunRecord,
          append: bool = False) -> None:
    def fmt(v):
        if isinstance(v, float):
            return format(v, ".17g")
        return str(v)

    lines = [",".join(fmt(v) for v in r) for r in rows]
    text = ",".join(header) + "\n" + "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if csv_path:
        if append and os.path.exists(csv_path):
            with open(csv_path, encoding="utf-8") as fh:
                old = fh.read()
            if old and not old.endswith("\n"):
                old += "\n"
            text = old + "\n".join(lines) + "\n" if old.startswith(",".join(header)) else text
        atomic_write_text(csv_path, text)
        rec.output(csv_path)


def _theta(args, N: int, s: float) -> float:
    if args.theta is not None and args.theta_frac is not None:
        raise ConfigError("give --theta or --theta-frac, not both")
    if args.theta_frac is not None:
        return args.theta_frac * lambda_ns(N, s)
    return 0.0 if args.theta is None else args.theta


def cmd_constants(args, rec: RunRecord) -> int:
    N, s = args.N, args.s
    rec.data["params"] = {"N": N, "s": s}
    lam = lambda_ns(N, s)
    if s < 1.0:
        closed = cns_closed(N, s)
        integ = cns_integral(N, s) if N <= 3 else "n/a"
    else:
        closed = integ = "n/a"
    _emit([[N, s, lam, closed, integ]], ["N", "s", "lambda", "cns_closed", "cns_integral"],
          args.csv, rec, append=True)
    return EXIT_OK


def cmd_exponent(args, rec: RunRecord) -> int:
    N, s = args.N, args.s
    theta = _theta(args, N, s)
    rec.data["params"] = {"N": N, "s": s, "theta": theta}
    if args.sweep and args.sweep > 1:
        thetas = [theta * k / (args.sweep - 1) for k in range(args.sweep)]
    else:
        thetas = [theta]
    rows = []
    for th in thetas:
        ex = solve_alpha(Params(N, s, th))
        rows.append([N, s, th, ex.lam, ex.alpha, ex.eta, ex.inner_slope, ex.outer_slope])
    _emit(rows, ["N", "s", "theta", "lambda", "alpha", "eta", "inner_slope", "outer_slope"],
          args.csv, rec)
    return EXIT_OK


def cmd_profile(args, rec: RunRecord) -> int:
    N, s = args.N, args.s
    p = Params(N, s, _theta(args, N, s))
    rec.data["params"] = p.as_dict()
    ex = solve_alpha(p)
    grid = make_grid(args.r_min, args.r_max, args.count, N)
    P = profile(grid, s, ex.eta)
    if args.out:
        write_csv(P, args.out)
        rec.output(args.out)
    else:
        buf = io.StringIO()
        for r, v in zip(grid.nodes, P.values):
            buf.write(f"{r:.17g},{v:.17g}\n")
        sys.stdout.write("r,value\n" + buf.getvalue())
    return EXIT_OK


def load_config(path: str):
    """Parse a solve configuration into ``(Params, SolveConfig)``."""
    from .variational import SolveConfig

    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for sec in ("params", "grid", "solver"):
        if not cp.has_section(sec):
            raise ConfigError(f"config lacks section [{sec}]")
    try:
        pr = cp["params"]
        N, s = pr.getint("N"), pr.getfloat("s")
        if N is None or s is None:
            raise ConfigError("[params] needs N and s")
        if "theta_frac" in pr and "theta" in pr:
            raise ConfigError("give theta or theta_frac, not both")
        if "theta_frac" in pr:
            p = Params.from_fraction(N, s, pr.getfloat("theta_frac"))
        else:
            p = Params(N, s, pr.getfloat("theta", 0.0))
        gr, so = cp["grid"], cp["solver"]
        kw = {}
        for key in ("r_min", "r_max"):
            if key in gr:
                kw[key] = gr.getfloat(key)
        if "count" in gr:
            kw["count"] = gr.getint("count")
        for key, conv in (("max_iters", so.getint), ("step", so.getfloat), ("tol", so.getfloat),
                          ("seed", so.getint), ("perturbation", so.getfloat)):
            if key in so:
                kw[key] = conv(key)
        if "init" in so:
            kw["init"] = so.get("init")
        cfg = SolveConfig(**kw)
    except (ValueError, KeyError) as exc:
        if isinstance(exc, (ConfigError, DomainError)):
            raise
        raise ConfigError(f"bad value in {path}: {exc}") from None
    return p, cfg


def cmd_solve(args, rec: RunRecord) -> int:
    from .variational import maximize_Q

    p, cfg = load_config(args.config)
    rec.data["params"] = p.as_dict()
    rec.data["config"] = asdict(cfg)
    os.makedirs(args.out_dir, exist_ok=True)
    prefix = os.path.join(args.out_dir, args.prefix)
    rep = maximize_Q(p, cfg)
    for path in rep.write(prefix):
        rec.output(path)
    print(f"S_theta={rep.S_theta:.17g} iterations={rep.iterations} "
          f"el_residual={rep.el_residual:.3g} "
          f"slopes=({rep.inner_slope_fit:.6g}, {rep.outer_slope_fit:.6g}) "
          f"expected=({rep.exponents.inner_slope:.6g}, {rep.exponents.outer_slope:.6g})")
    return EXIT_OK if rep.converged else EXIT_NONCONV


def cmd_verify(args, rec: RunRecord) -> int:
    from .verify import run_suite, suite_csv

    u = read_csv(args.solution)
    if u.s is None and args.s is None:
        raise ConfigError("order s missing from the CSV header; pass --s")
    s = args.s if args.s is not None else u.s
    N = u.N
    if args.report:
        with open(args.report, encoding="utf-8") as fh:
            pdata = json.load(fh)["params"]
        p = Params(pdata["N"], pdata["s"], pdata["theta"])
    else:
        p = Params(N, s, _theta(args, N, s))
    if p.N != N or abs(p.s - s) > 1e-15:
        raise ConfigError("parameters disagree with the solution grid")
    u.s = p.s
    rec.data["params"] = p.as_dict()
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    rec.data["config"] = {"checks": checks, "solution": args.solution}
    reports = run_suite(u, p, checks)
    text = suite_csv(reports, args.out)
    if args.out:
        rec.output(args.out)
    sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="frac-hardy", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--record", help="write a JSON run record to this path")
    sub = ap.add_subparsers(dest="command", required=True)

    def ns(p, need_theta=False):
        p.add_argument("--N", type=int, required=True)
        p.add_argument("--s", type=float, required=True)
        if need_theta:
            p.add_argument("--theta", type=float)
            p.add_argument("--theta-frac", dest="theta_frac", type=float)

    c = sub.add_parser("constants", help="c_{N,s} (both forms) and Lambda_{N,s}")
    ns(c)
    c.add_argument("--csv", help="append the row to this CSV")
    c.set_defaults(func=cmd_constants)

    e = sub.add_parser("exponent", help="alpha_theta, eta_theta and the slopes")
    ns(e, True)
    e.add_argument("--sweep", type=int, default=0, help="rows from theta=0 up to theta")
    e.add_argument("--csv")
    e.set_defaults(func=cmd_exponent)

    pr = sub.add_parser("profile", help="sample P_eta to CSV")
    ns(pr, True)
    pr.add_argument("--r-min", dest="r_min", type=float, default=1e-3)
    pr.add_argument("--r-max", dest="r_max", type=float, default=1e3)
    pr.add_argument("--count", type=int, default=256)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_profile)

    so = sub.add_parser("solve", help="maximise the quotient from an INI config")
    so.add_argument("config")
    so.add_argument("--out-dir", dest="out_dir", default=".")
    so.add_argument("--prefix", default="solve")
    so.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="run checks on a solution CSV")
    v.add_argument("solution")
    v.add_argument("--report", help="solve JSON report supplying the parameters")
    v.add_argument("--s", type=float)
    v.add_argument("--theta", type=float)
    v.add_argument("--theta-frac", dest="theta_frac", type=float)
    v.add_argument("--checks", default="sandwich,linfty,weighted_equation,harnack")
    v.add_argument("--out", help="suite CSV path")
    v.set_defaults(func=cmd_verify)
    return ap


def _limit_threads():
    n = os.environ.get("FRAC_HARDY_THREADS")
    if not n:
        return None
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=max(1, int(n)))


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    record_path = args.record
    if record_path is None and args.command == "solve":
        record_path = os.path.join(args.out_dir, f"{args.prefix}.run.json")
    if record_path is None and args.command == "verify" and args.out:
        record_path = args.out + ".run.json"
    rec = RunRecord(args.command, record_path)
    code, err = EXIT_OK, None
    limiter = _limit_threads()
    try:
        code = args.func(args, rec)
    except NonConvergenceError as exc:
        code, err = EXIT_NONCONV, f"non-convergence: {exc}"
    except (DomainError, ConfigError, ValueError, OSError) as exc:
        code, err = EXIT_DOMAIN, f"{type(exc).__name__}: {exc}"
    except Exception as exc:  # pragma: no cover - reported, not swallowed
        code, err = 1, "".join(traceback.format_exception(exc))
    finally:
        if limiter is not None:
            limiter.restore_original_limits()
    if err:
        print(f"error: {err}", file=sys.stderr)
    rec.finish(code, err)
    return code


if __name__ == "__main__":
    sys.exit(main())
