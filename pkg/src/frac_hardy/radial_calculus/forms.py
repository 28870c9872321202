"""Quadratic forms, norms and the operator on radial functions.

Everything lives on the infinite log lattice ``x_k = x_0 + k h``: the grid
samples are the nodes ``0..n-1`` and the function is continued outside by
its power-law tails, which turns every sum over the exterior into a
geometric series with a closed form.  With ``g = u e^{b x}`` the Gagliardo
double integral becomes

    iint (u_x - u_y)^2 e^{b(x+y)} kappa(x-y) dx dy
      = iint (g_x e^{-bt/2} - g_y e^{bt/2})^2 kappa(t) dx dy,  t = x - y,

and its lattice sum skips the singular diagonal.  The missing diagonal
contribution is the generalised Euler-Maclaurin (zeta) correction for the
``|t|^{1-2s}`` singularity of the integrand, ``-2 zeta(2s-1) h^{2-2s} C0``
times ``(u')^2 e^{2bx}``, where ``C0`` is the singular coefficient of kappa.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import zeta

from ..constants import Params, cns_closed, critical_exponent, sphere_area
from .grid import GridMismatchError, RadialFunction
from .kernel import AngularKernel

__all__ = [
    "BoundaryProximityError",
    "ZeroDenominatorError",
    "critical_norm",
    "critical_weights",
    "form_matrix",
    "frac_lap_matrix",
    "frac_lap_nodes",
    "frac_lap_radial",
    "hardy_term",
    "hardy_weights",
    "quadratic_form",
    "quotient_Q",
    "seminorm_sq",
    "weighted_seminorm_sq",
]

# sixth-order central stencils
_D1 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
_D2 = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0
_HALF = 3


class BoundaryProximityError(ValueError):
    """Evaluation point too close to a grid end."""


class ZeroDenominatorError(ArithmeticError):
    """The quadratic form vanishes (numerically) so the quotient is undefined."""


def _check(u: RadialFunction, ker: AngularKernel) -> None:
    g = u.grid
    if g.N != ker.N or g.count != ker.grid.count or abs(g.h - ker.h) > 1e-12 * ker.h:
        raise GridMismatchError("function and kernel live on different grids")


def _order(u: RadialFunction, s: float | None) -> float:
    s = u.s if s is None else s
    if s is None:
        raise ValueError("order s unknown: pass s or set u.s")
    return float(s)


def _ratio(power: float | None, b: float, h: float, side: str) -> float:
    """Lattice ratio of ``g = u e^{bx}`` one step further into a tail."""
    if power is None:
        return 0.0
    lam = math.exp(-(power + b) * h) if side == "in" else math.exp((power + b) * h)
    if lam >= 1.0:
        raise ValueError(
            f"{side}ner tail r^{power} does not decay against weight e^({b} x)"
        )
    return lam


def _ghost_matrix(n: int, h: float, p_in, p_out) -> np.ndarray:
    """Map nodal values to values on nodes ``-3..n+2`` using the tails."""
    E = np.zeros((n + 2 * _HALF, n))
    E[_HALF:_HALF + n] = np.eye(n)
    for m in range(1, _HALF + 1):
        if p_in is not None:
            E[_HALF - m, 0] = math.exp(-p_in * m * h)
        if p_out is not None:
            E[_HALF + n - 1 + m, n - 1] = math.exp(p_out * m * h)
    return E


def _diff_matrices(n: int, h: float, p_in, p_out):
    E = _ghost_matrix(n, h, p_in, p_out)
    D1 = np.zeros((n, n))
    D2 = np.zeros((n, n))
    for k in range(2 * _HALF + 1):
        D1 += _D1[k] * E[k:k + n]
        D2 += _D2[k] * E[k:k + n]
    return D1 / h, D2 / h**2


def _navot(ker: AngularKernel) -> float:
    """Diagonal correction factor ``-2 zeta(2s-1) h^{2-2s} C0`` (positive)."""
    s = ker.s
    return -2.0 * float(zeta(2.0 * s - 1.0)) * ker.h ** (2.0 - 2.0 * s) * ker.C0


def form_matrix(
    ker: AngularKernel, x: np.ndarray, b: float, p_in, p_out
) -> np.ndarray:
    """Symmetric ``M`` with ``u^T M u`` equal to the lattice value of
    ``iint (u_x - u_y)^2 e^{b(x+y)} kappa(x - y) dx dy``.

    ``p_in``/``p_out`` are the tail powers of ``u`` (``None``: zero tail).
    """
    n = x.size
    h = ker.h
    lamL = _ratio(p_in, b, h, "in")
    lamR = _ratio(p_out, b, h, "out")
    idx = np.arange(n)
    d = np.abs(idx[:, None] - idx[None, :])
    kap = ker.kap
    Kb = float(ker.S(b, 1) + ker.S(-b, 1))

    # interior-interior part in g variables
    Mg = -kap[np.maximum(d, 1)] * (d > 0)
    Mg[idx, idx] += Kb
    tauL = lamL**2 / (1.0 - lamL**2)
    tauR = lamR**2 / (1.0 - lamR**2)
    Mg[0, 0] += Kb * tauL
    Mg[-1, -1] += Kb * tauR

    if lamL > 0.0:
        muL = -math.log(lamL) / h
        L = np.exp(muL * idx * h) * ker.S(-muL, idx + 1)
        Mg[0, :] -= L
        Mg[:, 0] -= L
        Mg[0, 0] -= 2.0 * tauL * float(ker.S(-muL, 1))
    if lamR > 0.0:
        muR = -math.log(lamR) / h
        jj = n - 1 - idx
        R = np.exp(muR * jj * h) * ker.S(-muR, jj + 1)
        Mg[-1, :] -= R
        Mg[:, -1] -= R
        Mg[-1, -1] -= 2.0 * tauR * float(ker.S(-muR, 1))
    if lamL > 0.0 and lamR > 0.0:
        m = np.arange(2, ker.dmax - (n - 1) + 1)
        lo, hi = min(lamL, lamR), max(lamL, lamR)
        # sum_{k=1}^{m-1} lamL^k lamR^{m-k}, written to stay stable when lamL ~ lamR
        ratio = lo / hi
        if abs(1.0 - ratio) < 1e-9:
            c = (m - 1) * hi**m
        else:
            c = hi**m * ratio * (1.0 - ratio ** (m - 1)) / (1.0 - ratio)
        LR = float(np.dot(kap[n - 1 + m], c))
        Mg[0, -1] -= LR
        Mg[-1, 0] -= LR

    eb = np.exp(b * x)
    M = (2.0 * h * h) * (eb[:, None] * Mg * eb[None, :])

    # diagonal (zeta) correction: h * nu * sum (u')^2 e^{2bx}, tails included
    nu = _navot(ker)
    D1, _ = _diff_matrices(n, h, p_in, p_out)
    w = np.exp(2.0 * b * x)
    N1 = D1.T @ (w[:, None] * D1)
    if p_in is not None:
        N1[0, 0] += p_in**2 * w[0] * tauL
    if p_out is not None:
        N1[-1, -1] += p_out**2 * w[-1] * tauR
    M += h * nu * N1
    return 0.5 * (M + M.T)


def _is_flat(u: RadialFunction) -> bool:
    v = u.values
    if not np.any(v):
        return True
    return bool(np.all(v == v[0])) and u.inner_power == 0.0 and u.outer_power == 0.0


def seminorm_sq(
    u: RadialFunction, ker: AngularKernel, N: int | None = None, s: float | None = None
) -> float:
    """``(c_{N,s}/2) iint |u(x) - u(y)|^2 |x - y|^{-N-2s} dx dy`` for radial u.

    In radial variables this is ``(c/2) |S^{N-1}| iint (u(r)-u(rho))^2
    K(r, rho) r^{N-1} rho^{N-1} dr drho``.
    """
    _check(u, ker)
    if N is not None and N != ker.N:
        raise GridMismatchError(f"N={N} but kernel has N={ker.N}")
    if s is not None and abs(s - ker.s) > 1e-15:
        raise GridMismatchError(f"s={s} but kernel has s={ker.s}")
    if _is_flat(u):
        return 0.0
    beta = 0.5 * (ker.N - 2.0 * ker.s)
    M = form_matrix(ker, u.grid.x, beta, u.inner_power, u.outer_power)
    f = u.values
    c = cns_closed(ker.N, ker.s)
    return max(0.0, 0.5 * c * ker.area * float(f @ M @ f))


def weighted_seminorm_sq(v: RadialFunction, ker: AngularKernel, alpha: float) -> float:
    """``(c/2) iint |v(x)-v(y)|^2 |x-y|^{-N-2s} |x|^{-alpha} |y|^{-alpha} dx dy``."""
    _check(v, ker)
    if not np.any(v.values):
        return 0.0
    b = 0.5 * (ker.N - 2.0 * ker.s) - alpha
    M = form_matrix(ker, v.grid.x, b, v.inner_power, v.outer_power)
    f = v.values
    c = cns_closed(ker.N, ker.s)
    return max(0.0, 0.5 * c * ker.area * float(f @ M @ f))


def hardy_weights(u: RadialFunction, s: float) -> np.ndarray:
    """Diagonal ``w`` with ``hardy_term(u) = sum w u^2`` (tails folded in)."""
    g = u.grid
    h = g.h
    beta = 0.5 * (g.N - 2.0 * s)
    w = sphere_area(g.N) * h * np.exp(2.0 * beta * g.x)
    lamL = _ratio(u.inner_power, beta, h, "in")
    lamR = _ratio(u.outer_power, beta, h, "out")
    w[0] *= 1.0 + lamL**2 / (1.0 - lamL**2)
    w[-1] *= 1.0 + lamR**2 / (1.0 - lamR**2)
    return w


def hardy_term(u: RadialFunction, s: float | None = None) -> float:
    """``int u^2 |x|^{-2s} dx`` for radial u, tails included.

    Raises ``ValueError`` if a tail makes the integral diverge.
    """
    s = _order(u, s)
    if not np.any(u.values):
        return 0.0
    return float(np.dot(hardy_weights(u, s), u.values**2))


def critical_weights(u: RadialFunction, s: float) -> np.ndarray:
    """Diagonal ``w`` with ``int |u|^{2*} dx = sum w |u|^{2*}``."""
    g = u.grid
    h = g.h
    N = g.N
    p = critical_exponent(N, s)
    w = sphere_area(N) * h * np.exp(N * g.x)
    if u.inner_power is not None:
        q = math.exp(-(p * u.inner_power + N) * h)
        if q >= 1.0:
            raise ValueError("inner tail is not in L^{2*}")
        w[0] *= 1.0 + q / (1.0 - q)
    if u.outer_power is not None:
        q = math.exp((p * u.outer_power + N) * h)
        if q >= 1.0:
            raise ValueError("outer tail is not in L^{2*}")
        w[-1] *= 1.0 + q / (1.0 - q)
    return w


def critical_norm(u: RadialFunction, s: float | None = None) -> float:
    """``(int |u|^{2*_s} dx)^{1/2*_s}``, ``2*_s = 2N/(N-2s)``."""
    s = _order(u, s)
    if not np.any(u.values):
        return 0.0
    p = critical_exponent(u.N, s)
    total = float(np.dot(critical_weights(u, s), np.abs(u.values) ** p))
    return total ** (1.0 / p)


def quadratic_form(u: RadialFunction, p: Params, ker: AngularKernel) -> float:
    """``seminorm_sq(u) - theta * hardy_term(u)``."""
    if not np.any(u.values):
        return 0.0
    val = seminorm_sq(u, ker)
    if p.theta != 0.0:
        val -= p.theta * hardy_term(u, ker.s)
    return val


def quotient_Q(
    u: RadialFunction, p: Params, ker: AngularKernel, floor: float = 1e-300
) -> float:
    """``||u||_{2*}^{2*} / L(u)^{2*/2}``, the quantity maximised by S(theta)."""
    E = quadratic_form(u, p, ker)
    if not E > floor:
        raise ZeroDenominatorError(f"quadratic form {E!r} is not positive")
    pc = critical_exponent(p.N, p.s)
    nrm = critical_norm(u, p.s) ** pc
    return nrm / E ** (0.5 * pc)


def frac_lap_matrix(ker: AngularKernel, x: np.ndarray, p_in, p_out) -> np.ndarray:
    """Matrix ``L`` with ``(L u)_i`` the lattice value of ``(-Delta)^s u(r_i)``."""
    n = x.size
    h = ker.h
    N, s = ker.N, ker.s
    beta = 0.5 * (N - 2.0 * s)
    idx = np.arange(n)
    d = idx[None, :] - idx[:, None]  # j - i
    W = np.exp(beta * d * h) * ker.kap[np.maximum(np.abs(d), 1)] * (d != 0)
    L = -W
    diag = W.sum(axis=1) + ker.S(-beta, idx + 1) + ker.S(beta, n - idx)
    L[idx, idx] = diag
    if p_in is not None:
        L[:, 0] -= np.exp(p_in * idx * h) * ker.S(-beta - p_in, idx + 1)
    if p_out is not None:
        L[:, -1] -= np.exp(-p_out * (n - 1 - idx) * h) * ker.S(beta + p_out, n - idx)
    L *= h
    D1, D2 = _diff_matrices(n, h, p_in, p_out)
    # zeta correction of the principal value: the even Taylor part of the
    # integrand near the diagonal, -(u''/2 + beta u') t^2
    L -= _navot(ker) * (0.5 * D2 + beta * D1)
    c = cns_closed(N, s)
    return c * np.exp(-2.0 * s * x)[:, None] * L


def frac_lap_nodes(u: RadialFunction, ker: AngularKernel) -> np.ndarray:
    """``(-Delta)^s u`` at every grid node."""
    _check(u, ker)
    L = frac_lap_matrix(ker, u.grid.x, u.inner_power, u.outer_power)
    return L @ u.values


def frac_lap_radial(u: RadialFunction, ker: AngularKernel, p: Params | None, r):
    """``(-Delta)^s u`` at radius ``r`` (scalar or array).

    Node values come from :func:`frac_lap_nodes`; off-node radii are
    interpolated by a cubic spline of ``r^{2s} (-Delta)^s u`` in ``log r``.

    Raises
    ------
    BoundaryProximityError
        If ``r`` lies within two cells of either end of the grid.
    """
    g = u.grid
    if p is not None and (p.N != ker.N or abs(p.s - ker.s) > 1e-15):
        raise GridMismatchError("Params disagree with the kernel")
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    k = (np.log(r_arr) - math.log(g.r_min)) / g.h
    if np.any(k < 2.0) or np.any(k > g.count - 3.0):
        raise BoundaryProximityError(f"radius within two cells of the grid ends: {r}")
    vals = frac_lap_nodes(u, ker)
    ki = np.rint(k)
    on_node = np.abs(k - ki) < 1e-9
    out = np.empty_like(r_arr)
    out[on_node] = vals[ki[on_node].astype(int)]
    if not np.all(on_node):
        from scipy.interpolate import CubicSpline

        spl = CubicSpline(g.x, vals * g.nodes ** (2.0 * ker.s))
        off = ~on_node
        out[off] = spl(np.log(r_arr[off])) * r_arr[off] ** (-2.0 * ker.s)
    return out if np.ndim(r) else float(out[0])
