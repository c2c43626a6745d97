"""
The drift map and its exponential semiconjugacy
===============================================

The map f(z) = z + 1 + e^(-z) pushes the right half plane toward
+infinity by roughly one unit per step.  Conjugating by w = e^(-z)
turns it into the gentle interior map h(w) = w * e^(-w) / e, an
identity the library exposes and that we can check to machine
precision.
"""

import cmath

from expbouquet import fatou_classify, fatou_eval, fatou_orbit, h_eval, report_line, semiconj_residual

# One unit of drift per step, plus an exponentially small correction.
z = 3.0 + 0.5j
for n in range(5):
    print(f"f^{n}(z) = {z:.12f}")
    z = fatou_eval(z)

# Classification: certified drift, bounded orbits, or undecided.
for z0 in (10 + 0j, -10 + 0j, 1j * cmath.pi, -800 + 0j):
    print(f"z0 = {z0!s:>10} -> {report_line(fatou_classify(z0))}")

# The semiconjugacy e^(-f(z)) = h(e^(-z)) holds to rounding error.
for z0 in (0.3 + 1.1j, -2 + 0.7j, 4 - 3j):
    lhs = cmath.exp(-fatou_eval(z0))
    rhs = h_eval(cmath.exp(-z0))
    print(f"z = {z0}: |lhs - rhs| = {abs(lhs - rhs):.2e}, "
          f"residual helper = {semiconj_residual(z0):.2e}")

# Fixed points sit at odd multiples of pi*i, where e^(-z) = -1.
for k in (-1, 0, 1):
    w = (2 * k + 1) * cmath.pi * 1j
    print(f"|f(z) - z| at z = (2*{k}+1)*pi*i:", abs(fatou_eval(w) - w))

# Orbit sampling shares the tower magnitude track with the e^z + a maps.
print("\norbit from z = 60 (drift ~ 1 per step):")
for s in fatou_orbit(60 + 0j, depth=3):
    print(f"  n={s.n}  z={s.z}  status={s.status}")
