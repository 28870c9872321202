import numpy as np
import pytest

from frac_hardy.radial_calculus import RadialFunction, morrey_norm, morrey_samples, profile
from frac_hardy.radial_calculus.morrey import cap_fraction


def test_cap_fraction_limits():
    assert cap_fraction(3, np.array([0.5, 1.5]), 0.0, 1.0) == pytest.approx([1.0, 0.0])
    # sphere |y| = rho touching the ball: R = xi, rho tiny -> half
    assert cap_fraction(3, 1e-9, 1.0, 1.0) == pytest.approx(0.5, abs=1e-6)
    # N = 3 cap area is linear in mu
    rho, xi, R = 1.0, 1.2, 0.5
    mu = (rho**2 + xi**2 - R**2) / (2 * rho * xi)
    assert cap_fraction(3, rho, xi, R) == pytest.approx(0.5 * (1 - mu), rel=1e-12)
    assert cap_fraction(1, np.array([0.5, 2.5]), 1.0, 1.0) == pytest.approx([0.5, 0.0])


def test_morrey_dilation_invariant(gk):
    g, _ = gk(3, 0.5)
    P = profile(g, 0.5, 0.5)
    a = morrey_norm(P)
    b = morrey_norm(P.rescale(np.exp(10 * g.h)))
    assert b == pytest.approx(a, rel=1e-12)


def test_morrey_homogeneous(gk):
    g, _ = gk(3, 0.5)
    P = profile(g, 0.5, 0.5)
    assert morrey_norm(P * 2.0) == pytest.approx(2.0 * morrey_norm(P), rel=1e-12)
    assert morrey_norm(P * 0.0) == 0.0


def test_morrey_sample_count(gk):
    g, _ = gk(3, 0.5)
    P = profile(g, 0.5, 0.5)
    smp = morrey_samples(P, 16)
    assert len(smp) >= 16 and all(v >= 0 for _, _, v in smp)
    assert morrey_norm(P, 128) >= 0.95 * morrey_norm(P, 16)
    with pytest.raises(ValueError):
        morrey_samples(P, 8)
    with pytest.raises(ValueError):
        morrey_samples(RadialFunction(g, P.values), 32)
