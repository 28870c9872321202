"""Kelvin transform and decreasing rearrangement of radial functions."""

from __future__ import annotations

import numpy as np

from ..constants import critical_exponent
from .grid import RadialFunction

__all__ = ["NegativeValueError", "decreasing_rearrangement", "kelvin_transform"]


class NegativeValueError(ValueError):
    """Rearrangement of a function taking negative values."""


def kelvin_transform(u: RadialFunction, s: float | None = None) -> RadialFunction:
    """``u*(r) = r^{2s-N} u(1/r)`` on the reciprocal grid ``[1/r_max, 1/r_min]``.

    The reciprocal of a log grid is the same log grid reversed, so the
    values are exact; tail powers map as ``q -> 2s - N - q`` with the inner
    and outer tails exchanged.
    """
    s = u.s if s is None else s
    if s is None:
        raise ValueError("order s unknown")
    g = u.grid
    new = g.reciprocal()
    shift = 2.0 * s - g.N
    vals = new.nodes**shift * u.values[::-1]

    def flip(q):
        return None if q is None else shift - q

    return RadialFunction(
        new,
        vals,
        monotone_flag=False,
        s=s,
        inner_power=flip(u.outer_power),
        outer_power=flip(u.inner_power),
        meta=dict(u.meta),
    )


def decreasing_rearrangement(
    u: RadialFunction, p: float | None = None
) -> RadialFunction:
    """Radially nonincreasing function equimeasurable with ``u``.

    Each node carries the measure of its lattice cell (``r^N h``, with the
    ``p``-integral of the power-law tails folded into the end cells).  Nodal values are sorted in decreasing
    order and laid out along the cells ordered by radius, conserving
    measure; every new cell receives the ``p``-power mean of the sorted
    values falling into it, so ``int |u|^p`` is conserved exactly.  ``p``
    defaults to the critical exponent of ``u.s`` (2 if ``s`` is unknown).
    Already nonincreasing input is returned unchanged.  Otherwise the inner
    tail becomes ``min(inner_power, 0)`` (constant when ``u`` had none), since
    the largest values belong next to the origin.
    """
    v = u.values
    if np.any(v < 0.0):
        raise NegativeValueError("rearrangement needs u >= 0")
    if p is None:
        p = critical_exponent(u.N, u.s) if u.s is not None else 2.0
    if np.all(np.diff(v) <= 0.0):
        return u.replace(v.copy(), monotone_flag=True)
    g = u.grid
    inner = 0.0 if u.inner_power is None else min(u.inner_power, 0.0)
    mass_in = _cell_mass(u, u.inner_power, p)
    mass = _cell_mass(u, inner, p)
    order = np.argsort(-v, kind="stable")
    vs = v[order]
    ms = mass_in[order]
    # cumulative measure and cumulative integral of v^p along the sorted list
    cm = np.concatenate(([0.0], np.cumsum(ms)))
    ci = np.concatenate(([0.0], np.cumsum(ms * vs**p)))
    tm = np.concatenate(([0.0], np.cumsum(mass)))
    # the sorted layout is piecewise constant, so its v^p integral is
    # piecewise linear in the measure coordinate
    at = np.interp(tm, cm, ci)
    out = (np.diff(at) / mass) ** (1.0 / p)
    # guard against rounding producing tiny increases
    out = np.minimum.accumulate(out)
    return u.replace(out, monotone_flag=True, inner_power=inner)


def _cell_mass(u: RadialFunction, p_in, p: float) -> np.ndarray:
    g = u.grid
    h, N = g.h, g.N
    m = h * g.nodes**N
    if p_in is not None:
        q = np.exp(-(p * p_in + N) * h)
        m[0] /= 1.0 - q
    if u.outer_power is not None:
        q = np.exp((p * u.outer_power + N) * h)
        if q >= 1.0:
            raise ValueError("outer tail is not p-integrable")
        m[-1] /= 1.0 - q
    return m
