"""
Checking a computed solution
============================

The verification suite tests the computed solution against the structural
facts the problem is known to satisfy: two-sided comparison with the
profile, boundedness after removing the singularity, the weighted equation
and a weak Harnack ratio.
"""

import numpy as np

from frac_hardy.constants import Params
from frac_hardy.radial_calculus import RadialFunction, angular_kernel, make_grid
from frac_hardy.variational import SolveConfig, maximize_Q
from frac_hardy.verify import gsr_check, run_suite

p = Params.from_fraction(3, 0.5, 0.5)
rep = maximize_Q(p, SolveConfig(count=256))
for r in run_suite(rep.solution, p):
    print(f"{r.name:18s} error={r.relative_error:.3e}  tol={r.tolerance:g}  {'pass' if r.passed else 'FAIL'}")

# the ground-state representation is an identity for any compactly supported u
g = make_grid(1e-3, 1e3, 512, 3)
ker = angular_kernel(g, 0.5)
v = np.exp(-(g.x / 0.8) ** 2)
v[np.abs(g.x) > 4] = 0.0
print(gsr_check(RadialFunction(g, v, s=0.5), p, ker).to_json())
