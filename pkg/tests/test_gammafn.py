import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frac_hardy.gammafn import PoleError, gamma, ln_gamma_abs

mpmath.mp.dps = 30


@pytest.mark.parametrize(
    "x, expected",
    [(1.0, 1.0), (0.5, 1.7724538509055159), (5.0, 24.0), (-0.5, -3.5449077018110318)],
)
def test_gamma_examples(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize(
    "x, expected, sign",
    [(1.0, 0.0, 1), (0.5, 0.5723649429247001, 1), (-0.5, 1.2655121234846454, -1)],
)
def test_ln_gamma_examples(x, expected, sign):
    lg, sg = ln_gamma_abs(x)
    assert lg == pytest.approx(expected, abs=1e-15)
    assert sg == sign


# values from mpmath at 30 digits
@pytest.mark.parametrize(
    "x, expected",
    [
        (2.5, 1.32934038817913702047362561251),
        (-3.7, 0.251643995902422643510108134681),
        (10.1, 454760.751441585950867335836832),
        (0.1, 9.51350769866873183629248717727),
        (-0.001, -1000.57820562935864799009761532),
        (150.3, 1.71129699921947927812234994081e261),
        (-150.3, -1.50975980477504108665326128962e-263),
    ],
)
def test_gamma_against_mpmath(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-13)


def test_gamma_dense_sweep_relative_error():
    rng = np.random.default_rng(7)
    xs = np.concatenate([rng.uniform(-170, 170, 400), rng.uniform(-3, 3, 200)])
    worst = 0.0
    for x in xs:
        if abs(x - round(x)) < 1e-6 and x <= 0:
            continue
        ref = mpmath.gamma(mpmath.mpf(float(x)))
        worst = max(worst, abs(gamma(float(x)) / float(ref) - 1.0))
    assert worst <= 1e-13


@pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -37.0])
def test_poles(x):
    with pytest.raises(PoleError):
        gamma(x)
    with pytest.raises(PoleError):
        ln_gamma_abs(x)


def test_overflow():
    with pytest.raises(OverflowError):
        gamma(172.0)
    with pytest.raises(OverflowError):
        gamma(200.5)


def test_recurrence_random():
    rng = np.random.default_rng(1)
    for x in rng.uniform(0.1, 50.0, 1000):
        assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-12)


def test_reflection():
    for x in np.linspace(1e-3, 1 - 1e-3, 301):
        val = gamma(x) * gamma(1.0 - x) * math.sin(math.pi * x) / math.pi
        assert val == pytest.approx(1.0, abs=1e-11)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=-160.0, max_value=160.0))
def test_log_consistency(x):
    if abs(x) < 1e-300 or (x <= 0 and abs(x - round(x)) < 1e-9):
        return
    lg, sg = ln_gamma_abs(x)
    assert sg * math.exp(lg) == pytest.approx(gamma(x), rel=1e-12)


def test_exact_small_arguments():
    assert gamma(20.0) == float(math.factorial(19))
    assert gamma(-19.5) == pytest.approx(float(mpmath.gamma(-19.5)), rel=1e-15)
