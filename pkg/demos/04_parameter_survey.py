"""
Classifying parameters by the fate of the singular value
========================================================

For z -> e^z + a the point a is the single singular value, and its
orbit decides the global dynamics: an attracting or parabolic cycle
captures it, a postsingularly finite parameter lands it exactly on a
repelling cycle, and for many real a >= -1 ... well, it just escapes.
"""

import cmath
import math

from expbouquet import Params, classify_param, find_cycle, report_line

SURVEY = (
    -2 + 0j,              # attracting fixed point
    -1 + 0j,              # multiplier 1: parabolic suspect
    5 + 3.14j,            # attracting 2-cycle
    2.06 + 1.57j,         # attracting 3-cycle
    1.004 + 2.9j,         # attracting 26-cycle
    complex(math.log(math.pi), math.pi / 2),  # postsingularly finite
    10 + 0j,              # singular value escapes
    1j * math.pi,         # attracting fixed point at -W(1) (Omega constant)
)

for a in SURVEY:
    verdict = classify_param(Params(a=a))
    print(f"a = {a!s:>24} -> {report_line(verdict)}")

# find_cycle polishes a cycle to full precision given any nearby start.
p = Params(a=5 + 3.14j)
cycle, mult = find_cycle(p, 5 + 3.14j, period=2)
print("\npolished 2-cycle for a = 5+3.14i:")
for z in cycle:
    print("   ", z)
print("multiplier:", mult, "| product of derivatives:", cmath.exp(cycle[0] + cycle[1]))

# The postsingularly finite example: the orbit of a is eventually fixed.
a = complex(math.log(math.pi), math.pi / 2)
z = a
for n in range(4):
    print(f"f^{n}(a) = {z}")
    z = cmath.exp(z) + a
