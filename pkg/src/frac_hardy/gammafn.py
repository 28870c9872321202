"""Real Gamma and log-Gamma.

Lanczos approximation (g = 671/128, fourteen terms) with the reflection
formula for arguments below one half.  Integers and half-integers of modulus
at most 20 are returned from exact closed forms.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = ["PoleError", "gamma", "ln_gamma_abs"]

_G = 671.0 / 128.0
_C0 = 0.999999999999997092
_COEFFS = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = 2.5066282746310005
_SQRT_PI = math.sqrt(math.pi)
_EXACT_LIMIT = 20


class PoleError(ValueError):
    """Raised for arguments at a pole of Gamma (0, -1, -2, ...)."""


def _check_pole(x: float) -> None:
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at x={x!r}")


def _sinpi(x: float) -> float:
    # argument reduction keeps sin(pi x) accurate for large |x|
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def _exact(x: float) -> float | None:
    """Closed form for integers and half-integers with |x| <= 20."""
    if abs(x) > _EXACT_LIMIT:
        return None
    if x == math.floor(x):
        return float(math.factorial(int(x) - 1))
    twice = 2.0 * x
    if twice != math.floor(twice):
        return None
    n = int(math.floor(x))  # x = n + 1/2
    if n >= 0:
        ratio = Fraction(math.factorial(2 * n), 4**n * math.factorial(n))
    else:
        m = -n  # x = 1/2 - m
        ratio = Fraction((-4) ** m * math.factorial(m), math.factorial(2 * m))
    return float(ratio) * _SQRT_PI


def _lanczos_series(x: float) -> float:
    a = _C0
    for j, c in enumerate(_COEFFS, start=1):
        a += c / (x + j)
    return a


def _gamma_right(x: float, dx: float = 0.0) -> float:
    """Gamma(x + dx) for x >= 0.5, where dx is a rounding-size remainder."""
    t = x + _G
    y = x + 0.5
    # exact rounding errors of t and y (Fast2Sum); the large exponent
    # amplifies both
    t_err = x - (t - _G)
    y_err = 0.5 - (y - x)
    half = 0.5 * y
    try:
        pw = t**half
    except OverflowError:
        raise OverflowError(f"Gamma({x!r}) overflows") from None
    t_err += dx
    y_err += dx
    corr = math.exp(y * math.log1p(t_err / t) - t_err + y_err * math.log(t))
    val = _SQRT_2PI * _lanczos_series(x) / x * pw * (pw * math.exp(-t)) * corr
    if math.isinf(val):
        raise OverflowError(f"Gamma({x!r}) overflows")
    return val


def gamma(x: float) -> float:
    """Gamma function of a real argument.

    Raises
    ------
    PoleError
        If ``x`` is zero or a negative integer.
    OverflowError
        If the result is not representable as a double.
    """
    x = float(x)
    if math.isnan(x):
        return math.nan
    _check_pole(x)
    exact = _exact(x)
    if exact is not None:
        return exact
    if x < 0.5:
        other = 1.0 - x
        if other > 171.7:
            # Gamma(1 - x) overflows; go through logs
            lg, sign = ln_gamma_abs(x)
            return sign * math.exp(lg)
        other_err = (1.0 - other) - x
        return math.pi / (_sinpi(x) * _gamma_right(other, other_err))
    return _gamma_right(x)


def ln_gamma_abs(x: float) -> tuple[float, int]:
    """Return ``(ln|Gamma(x)|, sign(Gamma(x)))``."""
    x = float(x)
    _check_pole(x)
    if x < 0.5:
        sp = _sinpi(x)
        lg_other, _ = ln_gamma_abs(1.0 - x)
        sign = 1 if sp > 0 else -1
        return math.log(math.pi) - math.log(abs(sp)) - lg_other, sign
    exact = _exact(x)
    if exact is not None:
        return math.log(exact), 1
    t = x + _G
    lg = (x + 0.5) * math.log(t) - t + math.log(_SQRT_2PI * _lanczos_series(x) / x)
    return lg, 1
