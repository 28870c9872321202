"""Log-spaced radial grids and sampled radial functions."""

from __future__ import annotations

import io
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GridMismatchError",
    "RadialFunction",
    "RadialGrid",
    "bubble",
    "make_grid",
    "profile",
    "atomic_write_text",
    "read_csv",
    "write_csv",
]


class GridMismatchError(ValueError):
    """Two objects that must share a grid do not."""


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Log-spaced nodes ``r_i = r_min * exp(i h)``.

    Attributes
    ----------
    r_min, r_max : float
        End nodes.
    nodes : ndarray
        Strictly increasing radii.
    cell_weights : ndarray
        Trapezoid-in-log weights for ``int f r^{N-1} dr``, i.e.
        ``h r_i^N`` with half weight at the two ends.
    N : int
        Ambient dimension.
    """

    r_min: float
    r_max: float
    nodes: np.ndarray
    cell_weights: np.ndarray
    N: int

    @property
    def count(self) -> int:
        return self.nodes.size

    @property
    def h(self) -> float:
        """Log spacing."""
        return math.log(self.r_max / self.r_min) / (self.count - 1)

    @property
    def x(self) -> np.ndarray:
        """Log radii."""
        return math.log(self.r_min) + self.h * np.arange(self.count)

    def same_as(self, other: "RadialGrid") -> bool:
        return (
            other is self
            or (
                self.N == other.N
                and self.count == other.count
                and math.isclose(self.r_min, other.r_min, rel_tol=1e-12)
                and math.isclose(self.r_max, other.r_max, rel_tol=1e-12)
            )
        )

    def shifted(self, k: int) -> "RadialGrid":
        """Grid moved by ``k`` log-steps (a dilation by ``exp(k h)``)."""
        f = math.exp(k * self.h)
        return make_grid(self.r_min * f, self.r_max * f, self.count, self.N)

    def reciprocal(self) -> "RadialGrid":
        """Grid on ``[1/r_max, 1/r_min]``."""
        return make_grid(1.0 / self.r_max, 1.0 / self.r_min, self.count, self.N)

    def index_of(self, r: float) -> float:
        """Fractional node index of radius ``r``."""
        return (math.log(r) - math.log(self.r_min)) / self.h


def make_grid(r_min: float, r_max: float, count: int, N: int) -> RadialGrid:
    """Log-spaced grid with ``count`` nodes from ``r_min`` to ``r_max``.

    Examples
    --------
    >>> make_grid(0.01, 100, 3, 3).nodes
    array([  0.01,   1.  , 100.  ])
    """
    if not (r_min > 0.0 and r_max > r_min and math.isfinite(r_max)):
        raise ValueError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
    if int(count) != count or count < 3:
        raise ValueError(f"need at least 3 nodes, got {count}")
    if int(N) != N or N < 1:
        raise ValueError(f"dimension must be a positive integer, got {N}")
    count, N = int(count), int(N)
    lo, hi = math.log(r_min), math.log(r_max)
    h = (hi - lo) / (count - 1)
    x = lo + h * np.arange(count)
    nodes = np.exp(x)
    # pin the ends so they are bit-identical to the inputs
    nodes[0], nodes[-1] = r_min, r_max
    w = h * nodes**N
    w[0] *= 0.5
    w[-1] *= 0.5
    nodes.setflags(write=False)
    w.setflags(write=False)
    return RadialGrid(float(r_min), float(r_max), nodes, w, N)


@dataclass(eq=False)
class RadialFunction:
    """Samples ``u(r_i)`` of a radial function on a :class:`RadialGrid`.

    Outside the grid the function is continued by power laws
    ``u(r) = u(r_min) (r/r_min)^inner_power`` and
    ``u(r) = u(r_max) (r/r_max)^outer_power``; a power of ``None`` means the
    function is zero there.  ``s`` records the order the function belongs
    to, when that matters (Kelvin transform, critical exponent).
    """

    grid: RadialGrid
    values: np.ndarray
    monotone_flag: bool = False
    s: float | None = None
    inner_power: float | None = None
    outer_power: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.count,):
            raise GridMismatchError(
                f"{v.shape[0] if v.ndim else 0} values for {self.grid.count} nodes"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        if self.monotone_flag and np.any(np.diff(v) > 0.0):
            raise ValueError("monotone_flag set but values increase")
        self.values = v

    @property
    def r(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def N(self) -> int:
        return self.grid.N

    def replace(self, values=None, **kw) -> "RadialFunction":
        """Copy with new values (and any other fields overridden)."""
        args = dict(
            grid=self.grid,
            values=self.values if values is None else values,
            monotone_flag=False if values is not None else self.monotone_flag,
            s=self.s,
            inner_power=self.inner_power,
            outer_power=self.outer_power,
            meta=dict(self.meta),
        )
        args.update(kw)
        return RadialFunction(**args)

    def __mul__(self, c: float) -> "RadialFunction":
        out = self.replace(self.values * c)
        out.monotone_flag = self.monotone_flag and c >= 0
        return out

    __rmul__ = __mul__

    def rescale(self, sigma: float, s: float | None = None) -> "RadialFunction":
        """``u_sigma(r) = sigma^{(N-2s)/2} u(sigma r)`` on the dilated grid.

        Values are copied onto ``grid.nodes / sigma`` so no interpolation is
        involved; the forms and norms are invariant under this map.
        """
        s = self.s if s is None else s
        if s is None:
            raise ValueError("order s unknown")
        g = self.grid
        new = make_grid(g.r_min / sigma, g.r_max / sigma, g.count, g.N)
        beta = 0.5 * (g.N - 2.0 * s)
        return self.replace(
            sigma**beta * self.values, grid=new, monotone_flag=self.monotone_flag
        )

    def tail_mass(self, power_shift: float, which: str) -> float:
        """``int u^2 r^{power_shift-1} dr`` over the inner or outer tail."""
        g = self.grid
        if which == "inner":
            q = self.inner_power
            if q is None:
                return 0.0
            e = 2.0 * q + power_shift
            if e <= 0.0:
                return math.inf
            return self.values[0] ** 2 * g.r_min**power_shift / e
        q = self.outer_power
        if q is None:
            return 0.0
        e = 2.0 * q + power_shift
        if e >= 0.0:
            return math.inf
        return -self.values[-1] ** 2 * g.r_max**power_shift / e

    def __call__(self, r):
        """Evaluate by interpolation linear in ``log r``, with the power-law tails."""
        g = self.grid
        r = np.asarray(r, dtype=float)
        v = self.values
        out = np.interp(np.log(r), g.x, v)
        lo = r < g.r_min
        hi = r > g.r_max
        if np.any(lo):
            out = np.where(
                lo,
                0.0 if self.inner_power is None
                else v[0] * (r / g.r_min) ** self.inner_power,
                out,
            )
        if np.any(hi):
            out = np.where(
                hi,
                0.0 if self.outer_power is None
                else v[-1] * (r / g.r_max) ** self.outer_power,
                out,
            )
        return out if out.ndim else float(out)


def profile(grid: RadialGrid, s: float, eta: float) -> RadialFunction:
    """``P_eta(r) = (r^{1-eta} (1 + r^{2 eta}))^{-(N-2s)/2}``.

    The two-sided comparison profile: slope ``-(1-eta)(N-2s)/2`` at the
    origin and ``-(1+eta)(N-2s)/2`` at infinity.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    beta = 0.5 * (grid.N - 2.0 * s)
    x = grid.x
    # log-space evaluation: stable for r far from 1
    logp = -beta * ((1.0 - eta) * x + np.logaddexp(0.0, 2.0 * eta * x))
    return RadialFunction(
        grid,
        np.exp(logp),
        monotone_flag=True,
        s=s,
        inner_power=-(1.0 - eta) * beta,
        outer_power=-(1.0 + eta) * beta,
        meta={"kind": "profile", "eta": eta},
    )


def bubble(grid: RadialGrid, s: float, scale: float = 1.0) -> RadialFunction:
    """``(t/(t^2 + r^2))^{(N-2s)/2}`` with ``t = scale``; at ``t = 1`` it is P_1."""
    beta = 0.5 * (grid.N - 2.0 * s)
    x = grid.x - math.log(scale)
    vals = np.exp(-beta * (math.log(scale) + np.logaddexp(0.0, 2.0 * x)))
    return RadialFunction(
        grid,
        vals,
        monotone_flag=True,
        s=s,
        inner_power=0.0,
        outer_power=-2.0 * beta,
        meta={"kind": "bubble", "scale": scale},
    )


def _fmt(v) -> str:
    return "none" if v is None else format(v, ".17g")


def write_csv(u: RadialFunction, path) -> None:
    """Write ``(r, value)`` rows with a one-line metadata comment.

    The file is written to a temporary name and renamed into place.
    """
    g = u.grid
    buf = io.StringIO()
    buf.write(
        f"# N={g.N} s={_fmt(u.s)} r_min={_fmt(g.r_min)} r_max={_fmt(g.r_max)} "
        f"count={g.count} inner_power={_fmt(u.inner_power)} "
        f"outer_power={_fmt(u.outer_power)}\n"
    )
    buf.write("r,value\n")
    for r, v in zip(g.nodes, u.values):
        buf.write(f"{r:.17g},{v:.17g}\n")
    atomic_write_text(path, buf.getvalue())


def atomic_write_text(path, text: str) -> None:
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(path) -> RadialFunction:
    """Inverse of :func:`write_csv`; values round-trip exactly."""
    with open(path, encoding="utf-8") as fh:
        head = fh.readline()
        if not head.startswith("#"):
            raise ValueError(f"{path}: missing metadata line")
        meta = {}
        for tok in head[1:].split():
            k, _, v = tok.partition("=")
            meta[k] = v
        cols = fh.readline().strip()
        if cols != "r,value":
            raise ValueError(f"{path}: unexpected header {cols!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)

    def num(key):
        v = meta.get(key, "none")
        return None if v == "none" else float(v)

    try:
        N = int(meta["N"])
        count = int(meta["count"])
        r_min, r_max = float(meta["r_min"]), float(meta["r_max"])
    except KeyError as exc:
        raise ValueError(f"{path}: metadata lacks {exc}") from None
    if data.shape != (count, 2):
        raise ValueError(f"{path}: expected {count} rows, found {data.shape[0]}")
    grid = make_grid(r_min, r_max, count, N)
    if not np.allclose(grid.nodes, data[:, 0], rtol=1e-12, atol=0.0):
        raise GridMismatchError(f"{path}: radii are not the declared log grid")
    vals = data[:, 1]
    return RadialFunction(
        grid,
        vals,
        monotone_flag=bool(np.all(np.diff(vals) <= 0.0)),
        s=num("s"),
        inner_power=num("inner_power"),
        outer_power=num("outer_power"),
    )


def volume_check(grid: RadialGrid) -> float:
    """``sum(cell_weights)`` against ``(r_max^N - r_min^N)/N``, relative."""
    exact = (grid.r_max**grid.N - grid.r_min**grid.N) / grid.N
    return abs(grid.cell_weights.sum() - exact) / exact
