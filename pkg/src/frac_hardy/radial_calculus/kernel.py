"""Angular reduction of the kernel |x - y|^{-(N+2s)} for radial functions.

For ``x = r e_1`` and ``y = rho omega`` write ``r = e^x``, ``rho = e^y``.
Then

    K(r, rho) = int_{S^{N-1}} |r e_1 - rho omega|^{-(N+2s)} d sigma(omega)
              = (r rho)^{-(N+2s)/2} kappa(x - y),

with the one-variable reduced kernel

    kappa(t) = |S^{N-2}| int_0^pi (4 sinh^2(t/2) + 4 sin^2(phi/2))^{-a}
               sin^{N-2}(phi) d phi,     a = (N+2s)/2.

On a log-spaced grid ``K`` is therefore Toeplitz up to diagonal scalings, and
only ``kappa(d h)`` for integer ``d`` is ever needed.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from ..constants import NonConvergenceError, sphere_area
from ..gammafn import gamma
from .grid import RadialGrid

__all__ = ["AngularKernel", "angular_kernel", "kappa", "singular_coefficient"]

_TAIL_SPAN = 20.0  # kappa is tabulated out to (n - 1) h + _TAIL_SPAN


@lru_cache(maxsize=16)
def _legendre(m: int):
    return roots_legendre(m)


def singular_coefficient(N: int, s: float) -> float:
    """C0 with ``kappa(t) ~ C0 |t|^{-1-2s}`` as ``t -> 0``."""
    return math.pi ** (0.5 * (N - 1)) * gamma(0.5 + s) / gamma(0.5 * N + s)


def _kappa_panels(N: int, s: float, t: np.ndarray, m: int) -> np.ndarray:
    a = 0.5 * (N + 2.0 * s)
    xl, wl = _legendre(m)
    tmin = float(t.min())
    # geometric breakpoints t, 2t, 4t, ... resolve the peak at phi = 0
    kmax = max(1, int(math.ceil(math.log2(math.pi / tmin))) + 1)
    mult = np.concatenate(([0.0], 2.0 ** np.arange(kmax)))
    edges = np.minimum(t[:, None] * mult[None, :], math.pi)
    edges = np.concatenate((edges, np.full((t.size, 1), math.pi)), axis=1)
    lo, hi = edges[:, :-1], edges[:, 1:]
    half = 0.5 * (hi - lo)
    phi = (0.5 * (hi + lo))[..., None] + half[..., None] * xl
    sh = 4.0 * np.sinh(0.5 * t) ** 2
    base = sh[:, None, None] + 4.0 * np.sin(0.5 * phi) ** 2
    f = base ** (-a)
    if N > 2:
        f = f * np.sin(phi) ** (N - 2)
    val = np.einsum("tp,tpk,k->t", half, f, wl)
    return sphere_area(N - 1) * val


def kappa(N: int, s: float, t, rtol: float = 1e-8, max_order: int = 256) -> np.ndarray:
    """Reduced kernel ``kappa(t)`` for ``t != 0``.

    N = 1 uses the two-point formula; N >= 2 uses Gauss-Legendre panels in
    the polar angle whose order is doubled until two successive results
    agree to ``rtol``.

    Raises
    ------
    NonConvergenceError
        If ``max_order`` is reached without agreement.
    """
    t = np.abs(np.atleast_1d(np.asarray(t, dtype=float)))
    if np.any(t == 0.0):
        raise ValueError("kappa is singular at t = 0")
    if N == 1:
        p = -1.0 - 2.0 * s
        return (2.0 * np.sinh(0.5 * t)) ** p + (2.0 * np.cosh(0.5 * t)) ** p
    m = 16
    prev = _kappa_panels(N, s, t, m)
    while True:
        m *= 2
        cur = _kappa_panels(N, s, t, m)
        err = np.max(np.abs(cur - prev) / np.abs(cur))
        if err <= rtol:
            return cur
        if m >= max_order:
            raise NonConvergenceError(
                f"angular quadrature stalled at relative change {err:.3g} (order {m})"
            )
        prev = cur


class AngularKernel:
    """Tabulated reduced kernel for one grid and order.

    Attributes
    ----------
    N, s : int, float
        Dimension and order.
    h : float
        Log spacing of the grid.
    kap : ndarray
        ``kap[d] = kappa(d h)`` for ``d = 0..dmax`` (``kap[0] = inf``).
    """

    def __init__(self, grid: RadialGrid, s: float):
        if not 0.0 < s < 1.0:
            raise ValueError(f"need 0 < s < 1, got {s}")
        self.grid = grid
        self.N = grid.N
        self.s = float(s)
        self.h = grid.h
        self.a = 0.5 * (self.N + 2.0 * self.s)
        self.area = sphere_area(self.N)
        self.C0 = singular_coefficient(self.N, self.s)
        n = grid.count
        self.dmax = (n - 1) + int(math.ceil(_TAIL_SPAN / self.h))
        d = np.arange(1, self.dmax + 1)
        kap = np.empty(self.dmax + 1)
        kap[0] = np.inf
        kap[1:] = kappa(self.N, self.s, d * self.h)
        self.kap = kap
        self._suffix_cache: dict[float, np.ndarray] = {}

    def matches(self, grid: RadialGrid) -> bool:
        return abs(grid.h - self.h) <= 1e-12 * self.h and grid.N == self.N and grid.count <= self.grid.count

    def suffix(self, b: float) -> np.ndarray:
        """Array ``S`` with ``S[D] = sum_{d >= D} e^{b d h} kappa(d h)``, D >= 1.

        Terms beyond the table use the far-field form
        ``kappa ~ |S^{N-1}| e^{-a t}``; ``b < a`` is required.
        """
        key = float(b)
        hit = self._suffix_cache.get(key)
        if hit is not None:
            return hit
        if not b < self.a:
            raise ValueError(f"kernel sum diverges for b={b} >= a={self.a}")
        h, dmax = self.h, self.dmax
        d = np.arange(1, dmax + 1)
        terms = np.exp(b * d * h) * self.kap[1:]
        q = math.exp((b - self.a) * h)
        rem = self.area * q ** (dmax + 1) / (1.0 - q)
        out = np.empty(dmax + 2)
        out[0] = np.nan
        out[1:dmax + 1] = np.cumsum(terms[::-1])[::-1] + rem
        out[dmax + 1] = rem
        self._suffix_cache[key] = out
        return out

    def S(self, b: float, D):
        """``sum_{d >= D} e^{b d h} kappa(d h)`` for integer ``D >= 1`` (vectorised)."""
        tab = self.suffix(b)
        D = np.asarray(D)
        if np.any(D < 1):
            raise ValueError("suffix sums start at D >= 1")
        Dc = np.minimum(D, self.dmax + 1)
        extra = np.maximum(D - (self.dmax + 1), 0)
        # beyond the table the sum is a pure geometric tail
        fac = np.exp((b - self.a) * self.h * extra)
        return tab[Dc] * fac

    def K(self, r, rho):
        """``K(r, rho)`` at arbitrary radii (fresh quadrature)."""
        r = np.asarray(r, dtype=float)
        rho = np.asarray(rho, dtype=float)
        t = np.log(r / rho)
        out = np.full(np.broadcast(r, rho).shape, np.inf)
        mask = np.broadcast_to(t != 0.0, out.shape)
        tt = np.broadcast_to(t, out.shape)[mask]
        pref = np.broadcast_to((r * rho) ** (-self.a), out.shape)[mask]
        if tt.size:
            out[mask] = pref * kappa(self.N, self.s, tt)
        return out if out.ndim else float(out)

    @property
    def table(self) -> np.ndarray:
        """Matrix ``K(r_i, r_j)``; the diagonal is ``inf`` (handled by the
        singular-cell rule, never read)."""
        n = self.grid.count
        idx = np.arange(n)
        d = np.abs(idx[:, None] - idx[None, :])
        r = self.grid.nodes
        return (r[:, None] * r[None, :]) ** (-self.a) * self.kap[d]


def angular_kernel(grid: RadialGrid, s: float) -> AngularKernel:
    """Build the :class:`AngularKernel` for ``grid`` and order ``s``."""
    return AngularKernel(grid, s)
