import math

import numpy as np
import pytest

from frac_hardy.radial_calculus import angular_kernel, make_grid
from frac_hardy.radial_calculus.kernel import kappa, singular_coefficient

# |S^{N-2}| B((N-1)/2, 1/2) (2 cosh t)^{-a} 2F1(a/2, (a+1)/2; N/2; cosh^{-2} t),
# a = (N+2s)/2, evaluated with mpmath at 30 digits
KAPPA_REF = {
    (2, 0.5): [(0.01, 20001.129449017364), (0.3, 22.489618260348337), (2.0, 0.3260911485977001),
               (8.0, 3.8605234557627695e-05)],
    (3, 0.25): [(0.01, 4187.283091739496), (0.3, 23.89301022624409), (2.0, 0.38984203251386723),
                (8.0, 1.0449299775613012e-05)],
    (3, 0.75): [(0.01, 251324.35003471235), (0.3, 50.07692876200955), (2.0, 0.14653752748797863),
                (8.0, 1.9138562645747602e-07)],
    (4, 0.5): [(0.01, 41878.361956260385), (0.3, 42.395512548751924), (2.0, 0.13769426567581527),
               (8.0, 4.0685550311472914e-08)],
}


@pytest.mark.parametrize("key", list(KAPPA_REF))
def test_kappa_against_hypergeometric(key):
    N, s = key
    t = np.array([p[0] for p in KAPPA_REF[key]])
    ref = np.array([p[1] for p in KAPPA_REF[key]])
    assert kappa(N, s, t) == pytest.approx(ref, rel=1e-9)


def test_kappa_one_dimension_closed_form():
    t = np.array([0.1, 1.0, 5.0])
    a = 0.5 * (1 + 2 * 0.3)
    ref = (2 * np.cosh(t) - 2) ** -a + (2 * np.cosh(t) + 2) ** -a
    assert kappa(1, 0.3, t) == pytest.approx(ref, rel=1e-14)


def test_kappa_singular_leading_term():
    N, s = 3, 0.4
    t = 1e-4
    lead = singular_coefficient(N, s) * t ** (-1 - 2 * s)
    assert float(kappa(N, s, t)[0]) / lead == pytest.approx(1.0, abs=1e-3)


def test_kappa_rejects_zero():
    with pytest.raises(ValueError):
        kappa(3, 0.5, 0.0)


def test_kernel_table_and_K():
    g = make_grid(1e-2, 1e2, 64, 3)
    k = angular_kernel(g, 0.5)
    T = k.table
    assert T.shape == (64, 64)
    assert np.all(np.isinf(np.diag(T)))
    off = T[~np.eye(64, dtype=bool)]
    assert np.all(off > 0)
    assert np.allclose(T, T.T)
    r, rho = g.nodes[10], g.nodes[20]
    assert k.K(r, rho) == pytest.approx(T[10, 20], rel=1e-12)
    # direct spherical average of |x - y|^{-N-2s}
    ref = float(kappa(3, 0.5, g.x[20] - g.x[10])[0]) * (r * rho) ** -2.0
    assert T[10, 20] == pytest.approx(ref, rel=1e-9)


def test_suffix_sums_match_direct():
    g = make_grid(1e-2, 1e2, 32, 3)
    k = angular_kernel(g, 0.5)
    b = 0.3
    d = np.arange(1, int(60 / k.h))
    direct = np.sum(np.exp(b * d * k.h) * kappa(3, 0.5, d * k.h))
    assert k.S(b, 1) == pytest.approx(direct, rel=1e-7)


def test_suffix_divergent():
    k = angular_kernel(make_grid(1e-2, 1e2, 16, 3), 0.5)
    with pytest.raises(ValueError):
        k.suffix(k.a)
    with pytest.raises(ValueError):
        k.S(0.1, 0)


def test_kernel_matches_grid():
    g = make_grid(1e-2, 1e2, 16, 3)
    k = angular_kernel(g, 0.5)
    assert k.matches(make_grid(1e-2, 1e2, 16, 3))
    assert not k.matches(make_grid(1e-2, 1e2, 17, 3))
    assert math.isfinite(k.C0)
    with pytest.raises(ValueError):
        angular_kernel(g, 1.0)
