"""The curve itself: evaluation, polylines and the midpoint witnesses.

Run: python3 demos/02_curve_and_witnesses.py
"""
from fractions import Fraction

import numpy as np

from cubefill import analysis, curve, param

# Gaps of the parameter scaffold are mapped onto straight connections.
gap = param.gap_interval((), 3)
print("gap I(3) =", (gap.lo.value, gap.hi.value))
print("curve at t = 1/2:", curve.evaluate(curve.Fractal(Fraction(1, 2)), 4).point)

# Limit points only come with an error radius; endpoints of K_s are exact.
p = curve.evaluate(curve.Fractal(Fraction(1, 7)), 3)
print("curve at t = 1/7:", p.point, "error <=", p.error)

# Polygons through the depth-n entry/exit vertices get longer without bound.
for n in range(4):
    stats = curve.length_stats(n)
    print(f"n={n}: {2 * 8 ** n:5d} vertices  length {stats.polyline_length:8.3f}  "
          f"lower bound {float(stats.lower_bound):8.3f}")

# Consecutive polygons are close in the Hausdorff metric.
polys = [curve.build_polyline(n).as_array() for n in range(4)]
for n in range(3):
    print(f"d_H(P{n}, P{n + 1}) = {analysis.hausdorff(polys[n], polys[n + 1]):.4f}"
          f"  (<= {np.sqrt(3) * 3.0 ** -n:.4f})")

# Every point of the cube is the midpoint of two curve points, up to 2 sqrt(3) 3^-N.
y = (Fraction(1, 2), Fraction(1, 5), Fraction(7, 8))
a, b = curve.witness_pair(y, 6)
print("witness parameters:", float(a.t), float(b.t))
print("midpoint error:", float(curve.witness_deviation_sq(y, 6)) ** 0.5,
      "bound:", float(curve.witness_bound_sq(6)) ** 0.5)
