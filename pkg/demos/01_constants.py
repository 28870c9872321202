"""
Normalising constants and the Hardy threshold
=============================================

The fractional Laplacian carries the factor ``c_{N,s}``; the Hardy
inequality is sharp at ``Lambda_{N,s}``.  Both come from gamma functions,
and ``c_{N,s}`` can also be recovered from its defining integral.
"""

import math

from frac_hardy.constants import cns_closed, cns_integral, lambda_ns, psi_sn

# closed form against quadrature, for the dimensions the quadrature covers
for N in (1, 2, 3):
    for s in (0.25, 0.5, 0.75):
        a, b = cns_closed(N, s), cns_integral(N, s)
        print(f"N={N} s={s:4}  c_closed={a:.12f}  c_integral={b:.12f}  rel={abs(a / b - 1):.1e}")

# the Hardy threshold in three dimensions at s = 1/2 is 2/pi
print("Lambda_{3,1/2} =", lambda_ns(3, 0.5), " 2/pi =", 2 / math.pi)

# s = 1 recovers the classical ((N-2)/2)^2
for N in (3, 4, 5):
    print(f"Lambda_{{{N},1}} = {lambda_ns(N, 1.0)}")

# Psi(alpha) is the eigenvalue of the operator on |x|^{-alpha}; it rises
# from 0 at alpha = 0 to Lambda at the symmetric point (N-2s)/2
N, s = 3, 0.5
for alpha in (0.0, 0.25, 0.5, 0.75, 1.0):
    print(f"alpha={alpha:4}  Psi={psi_sn(N, s, alpha):.6f}")
