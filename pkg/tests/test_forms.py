import numpy as np
import pytest
from scipy.special import beta as beta_fn

from frac_hardy.constants import (
    Params,
    bubble_constant,
    critical_exponent,
    lambda_ns,
    psi_sn,
    sphere_area,
)
from frac_hardy.exponents import solve_alpha
from frac_hardy.radial_calculus import (
    BoundaryProximityError,
    GridMismatchError,
    RadialFunction,
    ZeroDenominatorError,
    angular_kernel,
    bubble,
    critical_norm,
    frac_lap_nodes,
    frac_lap_radial,
    hardy_term,
    make_grid,
    quadratic_form,
    quotient_Q,
    seminorm_sq,
    weighted_seminorm_sq,
)


def bump(g, c, w, s):
    x = g.x
    v = np.exp(-(((x - c) / w) ** 2))
    v[np.abs(x - c) > 5 * w] = 0.0
    return RadialFunction(g, v, s=s)


@pytest.mark.parametrize("N, s", [(3, 0.5), (3, 0.25), (4, 0.75), (2, 0.5)])
def test_bubble_energy(gk, N, s):
    g, k = gk(N, s)
    U = bubble(g, s)
    lam = bubble_constant(N, s)
    mass = sphere_area(N) * beta_fn(N / 2, N / 2) / 2
    # leading lattice error is O(h^{4-2s})
    tol = 1e-6 if s <= 0.5 else 1e-5
    assert seminorm_sq(U, k) == pytest.approx(lam * mass, rel=tol)
    assert critical_norm(U) ** critical_exponent(N, s) == pytest.approx(mass, rel=1e-6)


def test_energy_convergence_rate():
    N, s = 4, 0.75
    exact = bubble_constant(N, s) * sphere_area(N) * beta_fn(N / 2, N / 2) / 2
    errs = []
    for n in (128, 256, 512):
        g = make_grid(1e-3, 1e3, n, N)
        errs.append(abs(seminorm_sq(bubble(g, s), angular_kernel(g, s)) / exact - 1))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(rates > 2.3)


@pytest.mark.parametrize("N, s", [(3, 0.5), (4, 0.25)])
def test_bubble_equation(gk, N, s):
    g, k = gk(N, s)
    U = bubble(g, s)
    ratio = frac_lap_nodes(U, k) / U.values ** (critical_exponent(N, s) - 1)
    mid = (g.nodes > 0.1) & (g.nodes < 10)
    assert np.max(np.abs(ratio[mid] / bubble_constant(N, s) - 1)) < 1e-6


@pytest.mark.parametrize("N, s, a", [(3, 0.5, 0.3), (3, 0.25, 0.8), (4, 0.75, 1.0), (2, 0.5, 0.2)])
def test_power_eigenvalue(gk, N, s, a):
    g, k = gk(N, s)
    u = RadialFunction(g, g.nodes**-a, s=s, inner_power=-a, outer_power=-a)
    L = frac_lap_nodes(u, k) * g.nodes ** (a + 2 * s)
    assert np.max(np.abs(L / psi_sn(N, s, a) - 1)) < 1e-5


def test_frac_lap_radial_off_node(gk):
    g, k = gk(3, 0.5)
    U = bubble(g, 0.5)
    p = Params(3, 0.5, 0.0)
    r = np.array([0.0731, 1.234, 17.7])
    val = frac_lap_radial(U, k, p, r)
    ref = bubble_constant(3, 0.5) * (1 + r**2) ** -2.0
    assert val == pytest.approx(ref, rel=1e-5)
    with pytest.raises(BoundaryProximityError):
        frac_lap_radial(U, k, p, g.nodes[1])
    with pytest.raises(GridMismatchError):
        frac_lap_radial(U, k, Params(3, 0.25, 0.0), 1.0)


@pytest.mark.parametrize("N", [3, 4])
@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
def test_ground_state_representation(gk, N, s):
    g, k = gk(N, s)
    for frac in (0.3, 0.7):
        a = solve_alpha(Params.from_fraction(N, s, frac)).alpha
        for c, w in [(0.0, 0.7), (1.5, 1.2), (-2.0, 0.4)]:
            u = bump(g, c, w, s)
            lhs = seminorm_sq(u, k) - psi_sn(N, s, a) * hardy_term(u)
            v = u.replace(u.values * g.nodes**a)
            rhs = weighted_seminorm_sq(v, k, a)
            assert lhs == pytest.approx(rhs, rel=1e-4)


def test_hardy_inequality(gk):
    g, k = gk(3, 0.5)
    rng = np.random.default_rng(3)
    lam = lambda_ns(3, 0.5)
    for _ in range(20):
        u = bump(g, rng.uniform(-3, 3), rng.uniform(0.3, 2), 0.5)
        u = u.replace(u.values * np.clip(1 + 0.3 * rng.standard_normal(g.count), 0.2, None))
        assert lam * hardy_term(u) < seminorm_sq(u, k)


def test_dilation_invariance(gk):
    g, k = gk(3, 0.5, 128, 1e-2, 1e2)
    u = bump(g, 0.2, 0.8, 0.5)
    v = u.rescale(np.exp(7 * g.h))
    kv = angular_kernel(v.grid, 0.5)
    assert seminorm_sq(v, kv) == pytest.approx(seminorm_sq(u, k), rel=1e-12)
    assert hardy_term(v) == pytest.approx(hardy_term(u), rel=1e-12)
    assert critical_norm(v) == pytest.approx(critical_norm(u), rel=1e-12)


def test_zero_and_constant(gk):
    g, k = gk(3, 0.5)
    z = RadialFunction(g, np.zeros(g.count), s=0.5)
    assert seminorm_sq(z, k) == 0.0 and hardy_term(z) == 0.0 and critical_norm(z) == 0.0
    one = RadialFunction(g, np.ones(g.count), s=0.5, inner_power=0.0, outer_power=0.0)
    assert seminorm_sq(one, k) == 0.0
    with pytest.raises(ZeroDenominatorError):
        quotient_Q(z, Params(3, 0.5, 0.0), k)


def test_quotient_scale_invariant(gk):
    g, k = gk(3, 0.5)
    p = Params.from_fraction(3, 0.5, 0.5)
    u = bump(g, 0.0, 1.0, 0.5)
    assert quotient_Q(u * 3.7, p, k) == pytest.approx(quotient_Q(u, p, k), rel=1e-12)
    assert quadratic_form(u, p, k) > 0


def test_mismatch(gk):
    g, k = gk(3, 0.5)
    other = make_grid(1e-3, 1e3, 100, 3)
    u = RadialFunction(other, np.ones(100), s=0.5)
    with pytest.raises(GridMismatchError):
        seminorm_sq(u, k)
    with pytest.raises(GridMismatchError):
        seminorm_sq(bump(g, 0, 1, 0.5), k, N=4)


def test_divergent_tail(gk):
    g, _ = gk(3, 0.5)
    u = RadialFunction(g, np.ones(g.count), s=0.5, inner_power=-1.5)
    with pytest.raises(ValueError):
        hardy_term(u)
