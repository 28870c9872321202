import json
import math

import numpy as np
import pytest
from scipy.special import beta as beta_fn

from frac_hardy.constants import (
    DomainError,
    NonConvergenceError,
    Params,
    bubble_constant,
    critical_exponent,
    sphere_area,
)
from frac_hardy.radial_calculus import (
    BoundaryProximityError,
    angular_kernel,
    bubble,
    critical_norm,
    profile,
    quadratic_form,
    quotient_Q,
    read_csv,
)
from frac_hardy.variational import (
    SolveConfig,
    WindowError,
    el_residual,
    fit_slopes,
    lagrange_normalize,
    maximize_Q,
)


def test_config_validation():
    with pytest.raises(ValueError):
        SolveConfig(max_iters=0)
    with pytest.raises(ValueError):
        SolveConfig(init="zero")
    with pytest.raises(ValueError):
        SolveConfig(count=8)
    with pytest.raises(ValueError):
        SolveConfig(r_min=2.0, r_max=1.0)


def test_sobolev_constant(solve):
    # the bubble attains S(0); S = Q(U) = mass / (lam mass)^{p/2}
    rep = solve(3, 0.5, 0.0)
    mass = sphere_area(3) * beta_fn(1.5, 1.5) / 2
    pc = critical_exponent(3, 0.5)
    exact = mass / (bubble_constant(3, 0.5) * mass) ** (pc / 2)
    assert rep.converged
    assert rep.S_theta == pytest.approx(exact, rel=1e-6)


@pytest.mark.parametrize("frac", [0.3, 0.5, 0.7])
def test_maximizer_beats_profile(solve, frac):
    rep = solve(3, 0.5, frac)
    p = rep.params
    ker = angular_kernel(rep.maximizer.grid, 0.5)
    P = profile(rep.maximizer.grid, 0.5, rep.exponents.eta)
    assert rep.S_theta >= quotient_Q(P, p, ker) * (1 - 1e-12)
    assert quadratic_form(rep.maximizer, p, ker) == pytest.approx(1.0, rel=1e-10)


def test_monotone_in_theta(solve):
    vals = [solve(3, 0.5, f).S_theta for f in (0.0, 0.3, 0.5, 0.7)]
    assert np.all(np.diff(vals) > 0)


def test_trace_monotone(solve):
    rep = solve(3, 0.5, 0.5)
    qs = [q for _, q, _ in rep.trace]
    assert all(b >= a * (1 - 1e-14) for a, b in zip(qs, qs[1:]))


def test_random_start_agrees(solve):
    a = solve(3, 0.5, 0.5)
    b = solve(3, 0.5, 0.5, init="random", seed=4)
    assert b.S_theta == pytest.approx(a.S_theta, rel=1e-8)


def test_determinism():
    p = Params.from_fraction(3, 0.25, 0.4)
    cfg = SolveConfig(count=128, init="random", seed=9)
    a, b = maximize_Q(p, cfg), maximize_Q(p, cfg)
    assert a.S_theta == b.S_theta
    assert np.array_equal(a.solution.values, b.solution.values)


def test_solution_equation(solve):
    rep = solve(3, 0.5, 0.5)
    assert rep.el_residual < 1e-2
    assert np.all(rep.solution.values > 0)
    assert rep.solution.monotone_flag or np.all(np.diff(rep.solution.values) <= 0)


def test_lagrange_scale(solve):
    rep = solve(3, 0.5, 0.3)
    p = rep.params
    ker = angular_kernel(rep.maximizer.grid, 0.5)
    u = lagrange_normalize(rep.maximizer, p, ker)
    assert np.allclose(u.values, rep.solution.values, rtol=1e-12)
    pc = critical_exponent(3, 0.5)
    nrm = critical_norm(rep.maximizer) ** pc
    k = nrm ** (-1 / (pc - 2))
    assert u.values[0] / rep.maximizer.values[0] == pytest.approx(k, rel=1e-12)
    with pytest.raises(ValueError):
        lagrange_normalize(rep.maximizer * 2.0, p, ker)


def test_el_residual_window(solve):
    rep = solve(3, 0.5, 0.3)
    ker = angular_kernel(rep.solution.grid, 0.5)
    with pytest.raises(BoundaryProximityError):
        el_residual(rep.solution, rep.params, ker, [rep.solution.grid.nodes[2]])
    assert el_residual(rep.solution, rep.params, ker, [0.1, 1.0, 10.0]) < 1e-2


def test_fit_slopes_exact_profile(gk):
    g, _ = gk(3, 0.5)
    P = profile(g, 0.5, 0.6)
    inner, outer = fit_slopes(P, (1e-3, 1e-2), (1e2, 1e3))
    assert inner == pytest.approx(-0.4, abs=2e-3)
    assert outer == pytest.approx(-1.6, abs=2e-3)
    with pytest.raises(WindowError):
        fit_slopes(P, (1e-5, 1e-2))
    with pytest.raises(WindowError):
        fit_slopes(P, (1.0, 1.01))


def test_local_order_rejected():
    with pytest.raises(DomainError):
        maximize_Q(Params(3, 1.0, 0.0))


def test_iteration_cap():
    with pytest.raises(NonConvergenceError) as exc:
        maximize_Q(Params.from_fraction(3, 0.5, 0.5), SolveConfig(count=64, max_iters=2, init="random"))
    assert exc.value.trace


def test_write(tmp_path, solve):
    rep = solve(3, 0.5, 0.5)
    paths = rep.write(tmp_path / "run")
    data = json.loads(open(paths[2]).read())
    assert data["S_theta"] == rep.S_theta
    assert data["params"]["N"] == 3
    u = read_csv(paths[1])
    assert np.array_equal(u.values, rep.solution.values)
    assert math.isclose(u.s, 0.5)


def test_bubble_recovered_at_zero(solve):
    rep = solve(3, 0.5, 0.0)
    U = bubble(rep.solution.grid, 0.5)
    ratio = rep.solution.values / U.values
    mid = (U.r > 0.01) & (U.r < 100)
    # solution is a dilate of the bubble, so this ratio varies smoothly
    assert np.all(ratio[mid] > 0)


def test_seed_robustness():
    p = Params.from_fraction(3, 0.25, 0.5)
    a = maximize_Q(p, SolveConfig(count=128, init="random", seed=1))
    b = maximize_Q(p, SolveConfig(count=128, init="random", seed=2))
    assert b.S_theta == pytest.approx(a.S_theta, rel=2e-2)
