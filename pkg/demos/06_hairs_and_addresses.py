"""
Hairs, external addresses, and separation of endpoints
======================================================

Escaping orbits organize into curves ("hairs") labeled by the sequence
of horizontal strips of width 2*pi their iterates visit -- the external
address.  Pulling inverse branches back along an address traces the
hair and converges to its finite endpoint; distinct addresses separate
at the first index where they disagree.
"""

from expbouquet import (
    ExternalAddress,
    Params,
    endpoint_estimate,
    itinerary,
    separation_index,
    strip_index,
    trace_hair,
)

p = Params(a=-2 + 0j)

# Addresses are "prefix|repeating tail" sequences of strip indices.
zero = ExternalAddress.parse("|0")
one = ExternalAddress.parse("|1")
detour = ExternalAddress.parse("0,1|0")
print("addresses:", zero, one, detour)

# Tracing at increasing depth walks down the hair toward its endpoint.
for depth in (4, 8, 16, 32):
    pt = trace_hair(p, zero, depth=depth)
    print(f"depth {depth:2d}: z = {pt.z:.15f}  residual = {pt.residual:.2e}")

# endpoint_estimate deepens until the pullbacks stabilize.
for address in (zero, one, detour):
    ep = endpoint_estimate(p, address, tol=1e-10)
    print(f"endpoint of {address!s:>6}: {ep.z:.12f} (converged={ep.converged})")

# The endpoint of |0 is the repelling real fixed point of e^z - 2;
# its forward itinerary reproduces the address.
ep = endpoint_estimate(p, zero, tol=1e-10)
print("itinerary of the endpoint:", itinerary(p, ep.z, 6))

# Strip indices partition the plane into 2*pi-tall horizontal bands.
for z in (0 + 0j, 0 + 4j, 0 - 4j, 0 + 10j):
    print(f"strip_index({z}) = {strip_index(z)}")

# Endpoints of different addresses separate exactly at the first
# position where the addresses disagree.
e_one = endpoint_estimate(p, one, tol=1e-10)
e_detour = endpoint_estimate(p, detour, tol=1e-10)
print("separation |0 vs |1     :", separation_index(p, ep.z, e_one.z, depth=16))
print("separation |0 vs 0,1|0  :", separation_index(p, ep.z, e_detour.z, depth=16))
