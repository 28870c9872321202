"""
Maximising the Hardy-Sobolev quotient
=====================================

``maximize_Q`` searches the radially nonincreasing cone for the maximiser
of ``||u||^{2*} / (seminorm - theta * Hardy)^{2*/2}`` on a log grid, then
rescales it into a solution of the equation with unit coefficients.
"""

import time

from frac_hardy.constants import Params
from frac_hardy.variational import SolveConfig, maximize_Q
from frac_hardy.verify import bubble_deviation

cfg = SolveConfig(r_min=1e-3, r_max=1e3, count=256)

for frac in (0.0, 0.3, 0.5, 0.7):
    p = Params.from_fraction(3, 0.5, frac)
    t0 = time.perf_counter()
    rep = maximize_Q(p, cfg)
    ex = rep.exponents
    print(f"theta/Lambda={frac}: S={rep.S_theta:.8f} after {rep.iterations} steps "
          f"({time.perf_counter() - t0:.2f}s)")
    print(f"   inner slope {rep.inner_slope_fit:+.4f} (expected {ex.inner_slope:+.4f}), "
          f"outer slope {rep.outer_slope_fit:+.4f} (expected {ex.outer_slope:+.4f})")
    if frac == 0.0:
        # without the Hardy term the maximiser is a bubble
        c, t, err = bubble_deviation(rep.solution, 0.5)
        print(f"   bubble fit: amplitude {c:.6f}, scale {t:.6f}, L2 deviation {err:.1e}")

# results can be written for plotting elsewhere
rep.write("/tmp/frac_hardy_demo")
print("wrote /tmp/frac_hardy_demo.json and the two CSV files")
