"""Named constants of the fractional Hardy-Sobolev problem.

All Gamma products are formed as sums of ``ln|Gamma|`` so nothing overflows
for large dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .gammafn import gamma, ln_gamma_abs

__all__ = [
    "DomainError",
    "NonConvergenceError",
    "Params",
    "QuadratureSpec",
    "bubble_constant",
    "cns_closed",
    "cns_integral",
    "critical_exponent",
    "lambda_ns",
    "phi_sn",
    "plancherel_constant",
    "psi_sn",
    "sphere_area",
]


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


class NonConvergenceError(RuntimeError):
    """An iterative or refining computation failed to settle."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


def _check_ns(
    N: int, s: float, s_max_inclusive: bool = True, need_subcritical: bool = True
) -> None:
    if int(N) != N or N < 1:
        raise DomainError(f"dimension N must be a positive integer, got {N!r}")
    if not (s > 0.0 and (s <= 1.0 if s_max_inclusive else s < 1.0)):
        raise DomainError(f"order s={s!r} out of range")
    if need_subcritical and not N > 2.0 * s:
        raise DomainError(f"need N > 2s, got N={N}, s={s}")


def sphere_area(N: int) -> float:
    """Surface measure of the unit sphere S^{N-1} in R^N (2 for N = 1)."""
    return 2.0 * math.pi ** (N / 2.0) / gamma(N / 2.0)


def critical_exponent(N: int, s: float) -> float:
    """Fractional critical Sobolev exponent 2N/(N-2s)."""
    return 2.0 * N / (N - 2.0 * s)


def lambda_ns(N: int, s: float) -> float:
    """Sharp Hardy constant 2^{2s} Gamma^2((N+2s)/4) / Gamma^2((N-2s)/4)."""
    _check_ns(N, s)
    lg_num, _ = ln_gamma_abs((N + 2.0 * s) / 4.0)
    lg_den, _ = ln_gamma_abs((N - 2.0 * s) / 4.0)
    return math.exp(2.0 * s * math.log(2.0) + 2.0 * (lg_num - lg_den))


def cns_closed(N: int, s: float) -> float:
    """Normalising constant of the fractional Laplacian, closed form.

    Equals ``s 2^{2s} Gamma((N+2s)/2) / (pi^{N/2} Gamma(1-s))``, which is the
    reciprocal of ``int (1 - cos xi_1) |xi|^{-N-2s} d xi`` and twice
    :func:`plancherel_constant`.
    """
    _check_ns(N, s, s_max_inclusive=False, need_subcritical=False)
    lg_a, _ = ln_gamma_abs((N + 2.0 * s) / 2.0)
    lg_b, _ = ln_gamma_abs(1.0 - s)
    return s * math.exp(
        2.0 * s * math.log(2.0) - 0.5 * N * math.log(math.pi) + lg_a - lg_b
    )


def plancherel_constant(N: int, s: float) -> float:
    """``2^{2s-1} pi^{-N/2} Gamma((N+2s)/2) / |Gamma(-s)|``.

    The constant with ``int |xi|^{2s} |F u|^2 = a * iint |u(x)-u(y)|^2 /
    |x-y|^{N+2s}``; it is exactly half of :func:`cns_closed`.
    """
    _check_ns(N, s, s_max_inclusive=False, need_subcritical=False)
    lg_a, _ = ln_gamma_abs((N + 2.0 * s) / 2.0)
    lg_b, _ = ln_gamma_abs(-s)
    return math.exp(
        (2.0 * s - 1.0) * math.log(2.0) - 0.5 * N * math.log(math.pi) + lg_a - lg_b
    )


def bubble_constant(N: int, s: float) -> float:
    """lambda with (-Delta)^s (1+|x|^2)^{-(N-2s)/2} = lambda (1+|x|^2)^{-(N+2s)/2}."""
    _check_ns(N, s)
    lg_a, _ = ln_gamma_abs((N + 2.0 * s) / 2.0)
    lg_b, _ = ln_gamma_abs((N - 2.0 * s) / 2.0)
    return math.exp(2.0 * s * math.log(2.0) + lg_a - lg_b)


@dataclass(frozen=True)
class Params:
    """Problem triple (N, s, theta) with 0 <= theta < Lambda_{N,s}.

    ``s = 1`` is admitted as the local limit so exponent computations can be
    compared with the classical case; numerical solvers require ``s < 1``.
    """

    N: int
    s: float
    theta: float = 0.0
    lam: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.N) != self.N:
            raise DomainError(f"dimension must be an integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "theta", float(self.theta))
        if not 0.0 < self.s <= 1.0:
            raise DomainError(f"need 0 < s <= 1, got s={self.s}")
        lam = lambda_ns(self.N, self.s)
        if not 0.0 <= self.theta < lam:
            raise DomainError(
                f"need 0 <= theta < Lambda_(N,s) = {lam:.17g}, got theta={self.theta}"
            )
        object.__setattr__(self, "lam", lam)

    @classmethod
    def from_fraction(cls, N: int, s: float, frac: float) -> "Params":
        """Params with theta = frac * Lambda_{N,s}."""
        return cls(N, s, frac * lambda_ns(N, s))

    @property
    def beta(self) -> float:
        """Scaling exponent (N - 2s)/2."""
        return 0.5 * (self.N - 2.0 * self.s)

    @property
    def p_crit(self) -> float:
        return critical_exponent(self.N, self.s)

    def as_dict(self) -> dict:
        return {"N": self.N, "s": self.s, "theta": self.theta}


@dataclass(frozen=True)
class QuadratureSpec:
    """Panel layout for the oscillatory integral behind :func:`cns_integral`.

    ``panels`` Gauss-Legendre panels of ``order`` nodes cover
    ``[2 pi, truncation_radius]``; the remaining tail is summed from its
    asymptotic expansion.
    """

    panels: int = 512
    rule: str = "gauss-legendre"
    truncation_radius: float = 2.0 * math.pi * 256
    order: int = 20

    def __post_init__(self):
        if self.panels < 8:
            raise ValueError("need at least 8 panels")
        if not self.truncation_radius > 2.0 * math.pi:
            raise ValueError("truncation_radius must exceed 2*pi")
        if self.rule != "gauss-legendre":
            raise ValueError(f"unknown rule {self.rule!r}")


def _cos_tail(p: float, R: float, terms: int = 30) -> tuple[float, float]:
    """Asymptotic value of int_R^inf cos(t) t^{-p} dt and a bound on the rest.

    Uses int_R^inf e^{it} t^{-p} dt = i e^{iR} sum_k (-i)^k (p)_k R^{-p-k}.
    """
    total = 0j
    term_mag = R**-p
    poch = 1.0
    last = math.inf
    for k in range(terms):
        mag = poch * R ** (-p - k)
        if mag > last:
            break
        total += (-1j) ** k * mag
        last = mag
        poch *= p + k
    val = (1j * complex(math.cos(R), math.sin(R)) * total).real
    del term_mag
    return val, last


def _one_minus_cos_integral(s: float, q: QuadratureSpec) -> tuple[float, float]:
    """int_0^inf (1 - cos t) t^{-1-2s} dt by panel quadrature, with a tail bound."""
    two_pi = 2.0 * math.pi
    # [0, 2pi]: integrand = t^{1-2s} * (1 - cos t)/t^2, Gauss-Jacobi in t
    xj, wj = roots_jacobi(q.order + 10, 0.0, 1.0 - 2.0 * s)
    t = 0.5 * two_pi * (1.0 + xj)
    smooth = np.where(t > 1e-4, (1.0 - np.cos(t)) / np.maximum(t, 1e-300) ** 2, 0.5 - t**2 / 24.0)
    head = (0.5 * two_pi) ** (2.0 - 2.0 * s) * np.dot(wj, smooth)

    R = q.truncation_radius
    xl, wl = roots_legendre(q.order)
    edges = np.linspace(two_pi, R, q.panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    tt = mid + half * xl[None, :]
    body = np.sum(half * wl[None, :] * (1.0 - np.cos(tt)) * tt ** (-1.0 - 2.0 * s))

    p = 1.0 + 2.0 * s
    cos_tail, bound = _cos_tail(p, R)
    tail = R ** (-2.0 * s) / (2.0 * s) - cos_tail
    return float(head + body + tail), bound


def _angular_factor(N: int, s: float, order: int = 40) -> float:
    """|S^{N-2}| int_0^pi |cos phi|^{2s} sin^{N-2} phi d phi (2 for N = 1)."""
    if N == 1:
        return 2.0
    a = 0.5 * (N - 3.0)
    xj, wj = roots_jacobi(order, a, 2.0 * s)
    # t = (1 + x)/2 on [0, 1]; weight t^{2s} (1 - t)^a, leftover (1 + t)^a
    t = 0.5 * (1.0 + xj)
    inner = 0.5 ** (a + 2.0 * s + 1.0) * np.dot(wj, (1.0 + t) ** a)
    return sphere_area(N - 1) * 2.0 * float(inner)


def cns_integral(N: int, s: float, q: QuadratureSpec | None = None) -> float:
    """Reciprocal of ``int_{R^N} (1 - cos xi_1) / |xi|^{N+2s} d xi`` by quadrature.

    The integral is reduced to radial-angular form: substituting
    ``t = rho |cos phi|`` factors it into a one-dimensional oscillatory
    integral and an angular integral, each done numerically.  The result is
    accepted once halving the panel count moves it by less than 1e-3.
    """
    if N not in (1, 2, 3):
        raise DomainError(f"cns_integral supports N in {{1, 2, 3}}, got {N}")
    _check_ns(N, s, s_max_inclusive=False, need_subcritical=False)
    q = q or QuadratureSpec()
    radial, _ = _one_minus_cos_integral(s, q)
    coarse = QuadratureSpec(
        panels=max(8, q.panels // 2),
        rule=q.rule,
        truncation_radius=q.truncation_radius,
        order=q.order,
    )
    radial_coarse, _ = _one_minus_cos_integral(s, coarse)
    if abs(radial - radial_coarse) > 1e-3 * abs(radial):
        raise NonConvergenceError(
            f"panel refinement moved the integral from {radial_coarse} to {radial}"
        )
    return 1.0 / (radial * _angular_factor(N, s))


def _check_alpha(N: int, s: float, alpha: float) -> float:
    _check_ns(N, s)
    top = 0.5 * (N - 2.0 * s)
    if not 0.0 <= alpha <= top:
        raise DomainError(f"alpha={alpha!r} outside [0, {top}]")
    return top


def psi_sn(N: int, s: float, alpha: float) -> float:
    """Lambda_{N,s} + Phi_{s,N}(alpha), increasing from 0 to Lambda_{N,s}.

    Equivalently the constant ``C`` in ``(-Delta)^s |x|^{-alpha} =
    C |x|^{-alpha-2s}``.
    """
    top = _check_alpha(N, s, alpha)
    if alpha == 0.0:
        return 0.0
    if alpha == top:
        return lambda_ns(N, s)
    lg = (
        ln_gamma_abs(0.5 * (alpha + 2.0 * s))[0]
        + ln_gamma_abs(0.5 * (N - alpha))[0]
        - ln_gamma_abs(0.5 * (N - alpha - 2.0 * s))[0]
        - ln_gamma_abs(0.5 * alpha)[0]
    )
    return math.exp(2.0 * s * math.log(2.0) + lg)


def phi_sn(N: int, s: float, alpha: float) -> float:
    """Phi_{s,N}(alpha) in [-Lambda_{N,s}, 0]; endpoint values are exact."""
    top = _check_alpha(N, s, alpha)
    lam = lambda_ns(N, s)
    if alpha == 0.0:
        return -lam
    if alpha == top:
        return 0.0
    return psi_sn(N, s, alpha) - lam
