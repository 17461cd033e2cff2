"""Points, distances, and affine charts on complex projective space.
================================================================

A point of P^k is a nonzero homogeneous vector up to complex scale.  The
library stores a canonical representative, measures distances with the
Fubini-Study geodesic metric (diameter pi/2), and reads points through the
k+1 affine charts where one component is scaled to 1.
"""

import numpy as np

import projcut as pc

# Two descriptions of the same point: scaling is invisible.
p = pc.ProjectivePoint([1.0, 2.0 - 1.0j])
q = pc.ProjectivePoint([(0.3 + 0.4j) * 1.0, (0.3 + 0.4j) * (2.0 - 1.0j)])
print("same point despite scaling:", p == q)

# Distances: arccos of the normalised Hermitian pairing.
origin = pc.ProjectivePoint([1.0, 0.0])
print("d([1:0],[0:1]) =", pc.fs_distance(origin, pc.ProjectivePoint([0.0, 1.0])),
      "(the diameter pi/2)")
print("d([1:0],[1:1]) =", pc.fs_distance(origin, pc.ProjectivePoint([1.0, 1.0])),
      "(pi/4)")

# Charts: divide by one component.  The default picks the largest one.
far = pc.ProjectivePoint([1.0, 10.0])
c = pc.to_chart(far)
print("chart", c.chart_index, "coordinates", c.coords)
print("norm without the unit slot:", pc.chart_norm(c),
      "| full norm:", pc.full_norm(c))

# A compact set: a union of closed balls, with its JSON form.
K = pc.CompactSetSpec((
    pc.Ball(pc.ProjectivePoint([1.0, 0.2 + 0.1j]), 0.05),
    pc.Ball(pc.ProjectivePoint([0.3, 1.0]), 0.05),
))
print("JSON:", K.to_json())
z = pc.ProjectivePoint([1.0, 1.0])
print("dist of [1:1] to the set:", pc.dist_to_set(z, K))

# Chart-Euclidean balls sit inside Fubini-Study balls after shrinking by
# (r/2) * full_norm; the report samples the inclusion and records the worst
# observed ratio of fs-distance to r.
for coords in ([1.0, 0.0], [1.0, 5.0]):
    chart_pt = pc.ChartCoordinates(0, np.array(coords, dtype=complex))
    rep = pc.ball_comparison_check(chart_pt, r=0.1, trials=20000, seed=1)
    print(f"inclusion at {coords}: all inside = {rep.ok}, "
          f"worst ratio = {rep.worst_ratio:.3f}")
