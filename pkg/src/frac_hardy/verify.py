"""Numerical checks of the structural identities and bounds.

Every check returns a :class:`CheckReport`; ``passed`` is exactly
``relative_error <= tolerance``.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .constants import Params, cns_closed, critical_exponent, psi_sn, sphere_area
from .exponents import solve_alpha
from .radial_calculus.forms import form_matrix, hardy_term, seminorm_sq, weighted_seminorm_sq
from .radial_calculus.grid import RadialFunction, atomic_write_text, bubble, profile
from .radial_calculus.kernel import AngularKernel, angular_kernel

__all__ = [
    "BallOutsideGridError",
    "CheckReport",
    "PositivityError",
    "SupportError",
    "bubble_deviation",
    "gsr_check",
    "harnack_ratio",
    "linfty_check",
    "run_suite",
    "sandwich_check",
    "suite_csv",
    "weighted_equation_check",
]

_FLOOR = 1e-14


class SupportError(ValueError):
    """The function touches the padded ends of the grid."""


class PositivityError(ValueError):
    """A check that needs a positive function received something else."""


class BallOutsideGridError(ValueError):
    """A ball used by the Harnack diagnostic leaves the grid."""


@dataclass
class CheckReport:
    """Outcome of one numerical check."""

    name: str
    lhs: float
    rhs: float
    relative_error: float
    tolerance: float
    passed: bool
    metadata: dict = field(default_factory=dict)

    @classmethod
    def make(cls, name, lhs, rhs, err, tol, **meta) -> "CheckReport":
        err = float(err)
        return cls(name, lhs, rhs, err, float(tol), bool(err <= tol), meta)

    def as_dict(self) -> dict:
        def plain(x):
            if isinstance(x, np.ndarray):
                return x.tolist()
            if isinstance(x, (np.floating, np.integer)):
                return x.item()
            return x

        return {
            "name": self.name,
            "lhs": plain(self.lhs),
            "rhs": plain(self.rhs),
            "relative_error": self.relative_error,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "metadata": {k: plain(v) for k, v in self.metadata.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), allow_nan=True)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / (max(abs(a), abs(b)) + _FLOOR)


def _grid_meta(u: RadialFunction, p: Params | None = None) -> dict:
    g = u.grid
    out = {"N": g.N, "r_min": g.r_min, "r_max": g.r_max, "count": g.count}
    if p is not None:
        out.update(s=p.s, theta=p.theta)
    return out


def gsr_check(
    u: RadialFunction, p: Params, ker: AngularKernel, pad: int = 5, tol: float = 1e-3
) -> CheckReport:
    """Ground-state representation on a function supported inside the grid.

    LHS: ``seminorm_sq(u) - Psi(alpha) int u^2/|x|^{2s}``.
    RHS: the weighted Gagliardo form of ``v = |x|^alpha u`` with weight
    ``|x|^{-alpha} |y|^{-alpha}``, ``alpha = alpha_theta``.
    """
    v = u.values
    if np.any(v[:pad] != 0.0) or np.any(v[-pad:] != 0.0):
        raise SupportError(f"u must vanish on the first and last {pad} cells")
    alpha = solve_alpha(p).alpha
    meta = _grid_meta(u, p)
    meta["alpha"] = alpha
    if not np.any(v):
        return CheckReport.make("gsr", 0.0, 0.0, 0.0, tol, **meta)
    uz = u.replace(inner_power=None, outer_power=None)
    lhs = seminorm_sq(uz, ker) - psi_sn(p.N, p.s, alpha) * hardy_term(uz, p.s)
    vz = uz.replace(v * u.grid.nodes**alpha)
    rhs = weighted_seminorm_sq(vz, ker, alpha)
    return CheckReport.make("gsr", lhs, rhs, _rel(lhs, rhs), tol, **meta)


def _bumps(u: RadialFunction, count: int, width: float) -> list[np.ndarray]:
    g = u.grid
    x = g.x
    lo = math.log(g.r_min) + math.log(10.0)
    hi = math.log(g.r_max) - math.log(10.0)
    out = []
    for c in np.linspace(lo, hi, count):
        z = (x - c) / width
        phi = np.where(np.abs(z) < 1.0, np.exp(-1.0 / np.maximum(1.0 - z * z, 1e-300)), 0.0)
        out.append(phi)
    return out


def weighted_equation_check(
    u: RadialFunction,
    p: Params,
    ker: AngularKernel | None = None,
    tests=None,
    count: int = 10,
    width: float = 1.0,
    tol: float = 0.1,
) -> CheckReport:
    """Weak form of the weighted equation for ``v = |x|^alpha u``.

    Compares ``(c/2) iint (v(x)-v(y))(phi(x)-phi(y)) |x-y|^{-N-2s}
    |x|^{-alpha} |y|^{-alpha}`` with ``int v^{2*-1} phi |x|^{-alpha 2*}`` for
    smooth bumps ``phi`` (in ``log r``) spread across the grid.
    """
    g = u.grid
    ker = ker or angular_kernel(g, p.s)
    alpha = solve_alpha(p).alpha
    pc = critical_exponent(p.N, p.s)
    shift = lambda q: None if q is None else q + alpha  # noqa: E731
    vv = u.values * g.nodes**alpha
    tests = _bumps(u, count, width) if tests is None else [np.asarray(t, float) for t in tests]
    b = p.beta - alpha
    M = form_matrix(ker, g.x, b, shift(u.inner_power), shift(u.outer_power))
    c = cns_closed(p.N, p.s)
    bil = 0.5 * c * ker.area * (M @ vv)
    wrhs = sphere_area(p.N) * g.h * np.exp((p.N - alpha * pc) * g.x)
    lhs, rhs, errs = [], [], []
    for phi in tests:
        if np.any(phi[:3] != 0.0) or np.any(phi[-3:] != 0.0):
            raise SupportError("test functions must vanish near the grid ends")
        a = float(bil @ phi)
        r = float(np.dot(wrhs * np.abs(vv) ** (pc - 1.0), phi))
        lhs.append(a)
        rhs.append(r)
        errs.append(_rel(a, r))
    err = max(errs) if errs else 0.0
    meta = _grid_meta(u, p)
    meta.update(alpha=alpha, tests=len(tests))
    return CheckReport.make(
        "weighted_equation", np.array(lhs), np.array(rhs), err, tol, **meta
    )


def linfty_check(u: RadialFunction, p: Params, tol: float = 0.1) -> CheckReport:
    """Boundedness of ``v = |x|^alpha u`` toward the origin.

    Passes iff the maximum of ``v`` over the innermost decade of the grid
    exceeds its maximum over the next decade by less than ``tol``
    (relative); an unbounded ``v`` grows by a fixed factor per decade.
    """
    g = u.grid
    alpha = solve_alpha(p).alpha
    v = u.values * g.nodes**alpha
    d1 = g.nodes <= 10.0 * g.r_min
    d2 = (g.nodes > 10.0 * g.r_min) & (g.nodes <= 100.0 * g.r_min)
    if not d2.any():
        raise ValueError("grid spans less than two decades")
    m1, m2 = float(v[d1].max()), float(v[d2].max())
    err = max(0.0, m1 / m2 - 1.0) if m2 > 0.0 else math.inf
    meta = _grid_meta(u, p)
    meta.update(alpha=alpha, max_v=float(v.max()))
    return CheckReport.make("linfty", m1, m2, err, tol, **meta)


def harnack_ratio(
    v: RadialFunction,
    q: float,
    r: float,
    alpha: float = 0.0,
    reference: float | None = None,
    tol: float = 0.2,
    s: float | None = None,
) -> CheckReport:
    """Weak-Harnack ratio ``(int_{B_r} v^q dmu)^{1/q} / inf_{B_{3r/2}} v``.

    ``dmu = |x|^{-2 alpha} dx``.  The constant of the inequality is not
    known explicitly, so the check only asks for a finite ratio and, when
    ``reference`` (the same ratio on a refined grid) is given, agreement
    with it to ``tol``.
    """
    g = v.grid
    N = g.N
    s = v.s if s is None else s
    if s is None:
        raise ValueError("order s unknown")
    qmax = N / (N - 2.0 * s)
    if not 1.0 <= q < qmax:
        raise ValueError(f"need 1 <= q < {qmax}, got {q}")
    if not (g.r_min < r and 1.5 * r <= g.r_max):
        raise BallOutsideGridError(f"balls of radius {r} and {1.5 * r} leave the grid")
    if np.any(v.values < 0.0):
        raise PositivityError("v must be nonnegative")
    area = sphere_area(N)
    x = g.x
    F = np.abs(v.values) ** q * np.exp((N - 2.0 * alpha) * x)
    cum = np.concatenate(([0.0], np.cumsum(0.5 * g.h * (F[1:] + F[:-1]))))
    lr = math.log(r)
    k = min(int((lr - x[0]) / g.h), g.count - 2)
    frac = (lr - x[k]) / g.h
    # trapezoid on the partial cell with the linearly interpolated integrand
    Fr = F[k] + frac * (F[k + 1] - F[k])
    integral = cum[k] + 0.5 * frac * g.h * (F[k] + Fr)
    if v.inner_power is not None:
        e = q * v.inner_power + N - 2.0 * alpha
        integral += F[0] / e if e > 0.0 else math.inf
    integral *= area

    R = 1.5 * r
    inside = g.nodes <= R
    cand = [float(v.values[inside].min()), float(v(R))]
    if v.inner_power is None or v.inner_power > 0.0:
        cand.append(0.0)
    low = min(cand)
    ratio = integral ** (1.0 / q) / low if low > 0.0 else math.inf
    meta = {"N": N, "q": q, "r": r, "alpha": alpha, "count": g.count}
    if not math.isfinite(ratio):
        return CheckReport.make("harnack", ratio, reference, math.inf, tol, **meta)
    err = 0.0 if reference is None else abs(ratio - reference) / abs(reference)
    return CheckReport.make("harnack", ratio, reference, err, tol, **meta)


def sandwich_check(u: RadialFunction, p: Params, tol: float = 10.0) -> CheckReport:
    """Two-sided comparison ``c P_eta <= u <= C P_eta`` on ``[2 r_min, r_max/2]``.

    ``relative_error`` is the spread ``C/c``; the check passes iff it is at
    most ``tol``.
    """
    if np.any(u.values <= 0.0):
        raise PositivityError("u must be positive on the grid")
    g = u.grid
    ex = solve_alpha(p)
    P = profile(g, p.s, ex.eta)
    sel = (g.nodes >= 2.0 * g.r_min) & (g.nodes <= 0.5 * g.r_max)
    ratio = u.values[sel] / P.values[sel]
    lo, hi = float(ratio.min()), float(ratio.max())
    meta = _grid_meta(u, p)
    meta.update(eta=ex.eta)
    return CheckReport.make("sandwich", lo, hi, hi / lo, tol, **meta)


def bubble_deviation(u: RadialFunction, s: float) -> tuple[float, float, float]:
    """Best fit of ``c (t/(t^2+r^2))^{(N-2s)/2}`` to ``u`` in ``L^2(R^N)``.

    Returns ``(c, t, relative L^2 deviation)`` over the grid.
    """
    g = u.grid
    w = g.cell_weights
    f = u.values

    def resid(logt):
        b = bubble(g, s, math.exp(logt)).values
        c = np.dot(w, f * b) / np.dot(w, b * b)
        return np.dot(w, (f - c * b) ** 2), c

    span = (math.log(g.r_min), math.log(g.r_max))
    res = minimize_scalar(lambda z: resid(z)[0], bounds=span, method="bounded",
                          options={"xatol": 1e-10})
    err, c = resid(res.x)
    return float(c), math.exp(res.x), math.sqrt(err / np.dot(w, f * f))


def run_suite(u: RadialFunction, p: Params, checks=("sandwich", "linfty", "weighted_equation", "harnack"),
              ker: AngularKernel | None = None, q: float = 1.0) -> list[CheckReport]:
    """Run the named checks on a solution ``u``."""
    out = []
    ker_ = ker
    for name in checks:
        if name == "sandwich":
            out.append(sandwich_check(u, p))
        elif name == "linfty":
            out.append(linfty_check(u, p))
        elif name == "weighted_equation":
            ker_ = ker_ or angular_kernel(u.grid, p.s)
            out.append(weighted_equation_check(u, p, ker_))
        elif name == "harnack":
            alpha = solve_alpha(p).alpha
            v = u.replace(u.values * u.grid.nodes**alpha,
                          inner_power=None if u.inner_power is None else u.inner_power + alpha,
                          outer_power=None if u.outer_power is None else u.outer_power + alpha)
            out.append(harnack_ratio(v, q, 1.0, alpha=alpha, s=p.s))
        elif name == "gsr":
            ker_ = ker_ or angular_kernel(u.grid, p.s)
            out.append(gsr_check(u, p, ker_))
        else:
            raise ValueError(f"unknown check {name!r}")
    return out


def suite_csv(reports, path=None) -> str:
    """CSV summary ``name,relative_error,tolerance,pass`` (written atomically)."""
    buf = io.StringIO()
    buf.write("name,relative_error,tolerance,pass\n")
    for rep in reports:
        buf.write(f"{rep.name},{rep.relative_error:.17g},{rep.tolerance:.17g},"
                  f"{str(rep.passed).lower()}\n")
    text = buf.getvalue()
    if path is not None:
        atomic_write_text(path, text)
    return text
