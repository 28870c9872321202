"""
Blow-up exponents of the Hardy problem
======================================

For ``0 <= theta < Lambda`` the solution behaves like ``|x|^{-alpha}`` at
the origin, where ``alpha`` solves ``Psi(alpha) = theta``.  The decay rate
at infinity follows by the Kelvin symmetry ``alpha -> N - 2s - alpha``.
"""

import numpy as np

from frac_hardy.constants import Params, lambda_ns
from frac_hardy.exponents import local_eta, solve_alpha
from frac_hardy.radial_calculus import kelvin_transform, make_grid, profile

N, s = 3, 0.5
lam = lambda_ns(N, s)
print(f"Lambda = {lam:.10f}")
for frac in np.linspace(0.0, 0.9, 10):
    ex = solve_alpha(Params.from_fraction(N, s, frac))
    print(f"theta/Lambda={frac:.1f}  alpha={ex.alpha:.8f}  eta={ex.eta:.8f}  "
          f"slopes=({ex.inner_slope:+.4f}, {ex.outer_slope:+.4f})")

# approach to the local problem: fix theta = 1/8 in three dimensions
for order in (0.9, 0.99, 0.999, 0.9999):
    eta = solve_alpha(Params(3, order, 0.125)).eta
    print(f"s={order}  eta={eta:.6f}  local eta={local_eta(3, 0.125):.6f}  gap={abs(eta - local_eta(3, 0.125)):.2e}")

# the comparison profile with these slopes is its own Kelvin transform
g = make_grid(1e-3, 1e3, 128, N)
P = profile(g, s, solve_alpha(Params.from_fraction(N, s, 0.5)).eta)
print("Kelvin fixed point defect:", np.max(np.abs(kelvin_transform(P).values / P.values - 1)))
