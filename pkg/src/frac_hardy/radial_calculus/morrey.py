"""Sampled Morrey norm of radial functions."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import betainc

from ..constants import sphere_area
from .grid import RadialFunction

__all__ = ["MorreySample", "cap_fraction", "morrey_norm", "morrey_samples"]

# centre distances |x| sampled as multiples of the radius R
_OFFSETS = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0)


def cap_fraction(N: int, rho, xi: float, R: float):
    """Fraction of the sphere ``|y| = rho`` inside the ball ``B_R(xi e_1)``."""
    rho = np.asarray(rho, dtype=float)
    if xi == 0.0:
        return (rho < R).astype(float)
    if N == 1:
        return 0.5 * ((np.abs(rho - xi) < R).astype(float) + (rho + xi < R))
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = (rho**2 + xi**2 - R**2) / (2.0 * rho * xi)
    mu = np.clip(np.nan_to_num(mu, nan=1.0, posinf=1.0, neginf=-1.0), -1.0, 1.0)
    half = 0.5 * betainc(0.5 * (N - 1), 0.5, 1.0 - mu**2)
    return np.where(mu >= 0.0, half, 1.0 - half)


class MorreySample(tuple):
    """``(R, |x|, value)`` of one sampled ball."""

    __slots__ = ()

    def __new__(cls, R, xi, value):
        return super().__new__(cls, (R, xi, value))


def morrey_samples(u: RadialFunction, samples: int = 64, s: float | None = None):
    """Evaluate ``R^{N-2s} / |B_R| int_{B_R(x)} u^2`` on a sample set.

    Radii are log-spaced over ``[r_min, r_max / 5]`` (grid-relative, so a
    dilated grid samples dilated balls); centres sit at ``|x| = c R`` for
    ``c`` in a fixed set, and only balls inside ``B_{r_max}`` are kept.
    """
    s = u.s if s is None else s
    if s is None:
        raise ValueError("order s unknown")
    if samples < 16:
        raise ValueError("need at least 16 radius samples")
    g = u.grid
    N = g.N
    area = sphere_area(N)
    vol = area / N
    w = g.h * g.nodes**N * u.values**2 * area
    inner = area * u.tail_mass(N, "inner") if u.inner_power is not None else 0.0
    Rs = g.r_min * np.exp(np.linspace(0.0, math.log(g.r_max / g.r_min / 5.0), samples))
    out = []
    for R in Rs:
        for c in _OFFSETS:
            xi = c * R
            if xi + R > g.r_max:
                continue
            mass = float(np.dot(w, cap_fraction(N, g.nodes, xi, R)))
            if R - xi >= g.r_min:
                mass += inner
            out.append(MorreySample(R, xi, R ** (N - 2.0 * s) * mass / (vol * R**N)))
    return out


def morrey_norm(u: RadialFunction, samples: int = 64, s: float | None = None) -> float:
    """Lower bound for the Morrey norm: square root of the largest sample."""
    if not np.any(u.values):
        return 0.0
    best = max(v for _, _, v in morrey_samples(u, samples, s))
    return math.sqrt(best)
