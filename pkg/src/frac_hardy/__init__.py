"""Fractional Hardy-Sobolev equation: constants, exponents, radial solver and checks.

The problem is

    (-Delta)^s u - theta u / |x|^{2s} = u^{2*_s - 1},  u > 0 in R^N,

with ``0 < s < 1``, ``N > 2s`` and ``0 <= theta < Lambda_{N,s}``.
"""

from .constants import (
    DomainError,
    NonConvergenceError,
    Params,
    QuadratureSpec,
    bubble_constant,
    cns_closed,
    cns_integral,
    critical_exponent,
    lambda_ns,
    phi_sn,
    plancherel_constant,
    psi_sn,
    sphere_area,
)
from .exponents import BracketError, ExponentResult, local_eta, s_to_one_consistency, solve_alpha
from .gammafn import PoleError, gamma, ln_gamma_abs

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "DomainError",
    "ExponentResult",
    "NonConvergenceError",
    "Params",
    "PoleError",
    "QuadratureSpec",
    "bubble_constant",
    "cns_closed",
    "cns_integral",
    "critical_exponent",
    "gamma",
    "lambda_ns",
    "ln_gamma_abs",
    "local_eta",
    "phi_sn",
    "plancherel_constant",
    "psi_sn",
    "s_to_one_consistency",
    "solve_alpha",
    "sphere_area",
]
