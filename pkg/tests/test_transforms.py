import numpy as np
import pytest

from frac_hardy.constants import Params
from frac_hardy.exponents import solve_alpha
from frac_hardy.radial_calculus import (
    NegativeValueError,
    RadialFunction,
    angular_kernel,
    critical_norm,
    decreasing_rearrangement,
    frac_lap_nodes,
    hardy_term,
    kelvin_transform,
    profile,
    seminorm_sq,
)


@pytest.mark.parametrize("frac", [0.0, 0.3, 0.5, 0.7, 0.99])
def test_profile_kelvin_fixed_point(gk, frac):
    g, _ = gk(3, 0.5)
    eta = solve_alpha(Params.from_fraction(3, 0.5, frac)).eta
    P = profile(g, 0.5, eta)
    K = kelvin_transform(P)
    assert K.grid.same_as(g)
    assert np.max(np.abs(K.values / P.values - 1)) < 1e-12
    assert K.inner_power == pytest.approx(P.inner_power, abs=1e-14)
    assert K.outer_power == pytest.approx(P.outer_power, abs=1e-14)


def test_kelvin_involution(gk):
    g, _ = gk(4, 0.25)
    v = np.exp(-(g.x**2)) + 0.1
    u = RadialFunction(g, v, s=0.25, inner_power=0.0, outer_power=-1.0)
    back = kelvin_transform(kelvin_transform(u))
    assert np.allclose(back.values, u.values, rtol=1e-13)
    assert back.outer_power == pytest.approx(-1.0)


def test_kelvin_operator_identity(gk):
    g, k = gk(3, 0.5)
    x = g.x
    v = np.exp(-(((x - 0.5) / 1.0) ** 2))
    v[np.abs(x - 0.5) > 4] = 0.0
    u = RadialFunction(g, v, s=0.5)
    us = kelvin_transform(u)
    L = frac_lap_nodes(u, k)
    Ls = frac_lap_nodes(us, angular_kernel(us.grid, 0.5))
    pred = us.grid.nodes ** (-3 - 1.0) * L[::-1]
    assert np.max(np.abs(Ls - pred)) / np.max(np.abs(pred)) < 1e-5


def test_kelvin_needs_order(gk):
    g, _ = gk(3, 0.5)
    with pytest.raises(ValueError):
        kelvin_transform(RadialFunction(g, np.ones(g.count)))


def _rough(g, rng, s):
    x = g.x
    v = np.abs(np.exp(-(((x - rng.uniform(-2, 2)) / 1.5) ** 2)) * (1 + 0.5 * rng.standard_normal(g.count)))
    v[:5] = 0.0
    v[-5:] = 0.0
    return RadialFunction(g, v, s=s)


def test_rearrangement_properties(gk):
    g, k = gk(3, 0.5)
    rng = np.random.default_rng(5)
    for _ in range(10):
        u = _rough(g, rng, 0.5)
        r = decreasing_rearrangement(u)
        assert r.monotone_flag and np.all(np.diff(r.values) <= 0)
        assert critical_norm(r) == pytest.approx(critical_norm(u), rel=1e-12)
        assert seminorm_sq(r, k) <= seminorm_sq(u, k)
        assert hardy_term(r) >= hardy_term(u) * (1 - 1e-9)


def test_rearrangement_of_monotone_is_identity(gk):
    g, _ = gk(3, 0.5)
    P = profile(g, 0.5, 0.4)
    R = decreasing_rearrangement(P)
    assert np.array_equal(R.values, P.values)
    assert R.inner_power == P.inner_power


def test_rearrangement_keeps_tail_mass(gk):
    g, _ = gk(3, 0.5)
    P = profile(g, 0.5, 0.4)
    bumpy = P.replace(P.values * (1 + 0.2 * np.sin(g.x)))
    R = decreasing_rearrangement(bumpy)
    assert R.inner_power == min(bumpy.inner_power, 0.0)
    assert critical_norm(R) == pytest.approx(critical_norm(bumpy), rel=1e-12)


def test_rearrangement_negative(gk):
    g, _ = gk(3, 0.5)
    with pytest.raises(NegativeValueError):
        decreasing_rearrangement(RadialFunction(g, -np.ones(g.count), s=0.5))
