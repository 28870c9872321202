"""Ansatz exponent alpha_theta and the asymptotic slopes it controls."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import DomainError, Params, lambda_ns, psi_sn

__all__ = [
    "BracketError",
    "exponent_for",
    "ExponentResult",
    "local_eta",
    "s_to_one_consistency",
    "solve_alpha",
]


class BracketError(DomainError):
    """theta does not lie in the range [0, Lambda) of Psi."""


@dataclass(frozen=True)
class ExponentResult:
    """Exponents attached to one parameter triple.

    Attributes
    ----------
    lam : float
        Hardy constant Lambda_{N,s}.
    alpha : float
        Root of Psi(alpha) = theta in [0, (N-2s)/2].
    eta : float
        1 - 2 alpha/(N-2s).
    inner_slope, outer_slope : float
        Log-log slopes of solutions at 0 and at infinity.
    """

    lam: float
    alpha: float
    eta: float
    inner_slope: float
    outer_slope: float

    @classmethod
    def from_alpha(cls, N: int, s: float, lam: float, alpha: float) -> "ExponentResult":
        d = N - 2.0 * s
        inner = 0.0 - alpha
        # stored so that inner + outer == -(N - 2s) holds exactly in floating point
        outer = -d - inner
        return cls(lam, alpha, 1.0 - 2.0 * alpha / d, inner, outer)

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "alpha": self.alpha,
            "eta": self.eta,
            "inner_slope": self.inner_slope,
            "outer_slope": self.outer_slope,
        }


def solve_alpha(p: Params, tol: float = 1e-13) -> ExponentResult:
    """Solve Psi_{s,N}(alpha) = theta.

    Bisection shrinks the bracket [0, (N-2s)/2] to width 1e-3, then a
    secant iteration safeguarded by the bracket polishes the root until the
    residual is at most ``max(tol, 4 ulp(theta))``.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    N, s, theta = p.N, p.s, p.theta
    lam = p.lam
    if not 0.0 <= theta < lam:
        raise BracketError(f"theta={theta} outside [0, {lam})")
    top = 0.5 * (N - 2.0 * s)
    if theta == 0.0:
        return ExponentResult.from_alpha(N, s, lam, 0.0)

    def f(a: float) -> float:
        return psi_sn(N, s, a) - theta

    lo, hi = 0.0, top
    flo, fhi = -theta, lam - theta
    while hi - lo > 1e-3:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return ExponentResult.from_alpha(N, s, lam, mid)
        if fm < 0.0:
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm

    goal = max(tol, 4.0 * math.ulp(theta))
    a0, f0 = lo, flo
    a1, f1 = hi, fhi
    best, fbest = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    for _ in range(200):
        if f1 != f0:
            a2 = a1 - f1 * (a1 - a0) / (f1 - f0)
        else:
            a2 = 0.5 * (lo + hi)
        if not lo < a2 < hi:
            a2 = 0.5 * (lo + hi)
        f2 = f(a2)
        if abs(f2) < abs(fbest):
            best, fbest = a2, f2
        if abs(f2) <= goal or hi - lo <= 4.0 * math.ulp(hi):
            break
        if f2 < 0.0:
            lo = a2
        else:
            hi = a2
        a0, f0, a1, f1 = a1, f1, a2, f2
    return ExponentResult.from_alpha(N, s, lam, best)


def local_eta(N: int, A: float) -> float:
    """(1 - 4A/(N-2)^2)^{1/2}, the exponent of the local (s = 1) problem."""
    if int(N) != N or N < 3:
        raise DomainError(f"need an integer N >= 3, got {N!r}")
    h = 0.25 * (N - 2) ** 2
    if not 0.0 <= A < h:
        raise DomainError(f"need 0 <= A < {h}, got A={A}")
    return math.sqrt(1.0 - A / h)


def s_to_one_consistency(N: int, A: float, s_seq) -> list[float]:
    """Gaps |eta_theta(s) - eta_A| along a sequence of orders s -> 1."""
    target = local_eta(N, A)
    out = []
    for s in s_seq:
        res = solve_alpha(Params(N, s, A))
        out.append(abs(res.eta - target))
    return out


def exponent_for(N: int, s: float, frac: float) -> ExponentResult:
    """Shortcut: exponents at theta = frac * Lambda_{N,s}."""
    return solve_alpha(Params(N, s, frac * lambda_ns(N, s)))
