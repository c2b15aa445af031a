"""Why a rectifiable curve cannot do the same: its midpoint set has volume zero.

Run: python3 demos/03_rectifiable_curves.py
"""
from cubefill import analysis, samples

pts, closed = samples.named_curve("circle")

# Cut the circle greedily into pieces of diameter epsilon and cover the midpoint
# set by (n+1)^2 cubes; the total volume goes to zero with epsilon.
for eps in (0.5, 0.2, 0.1, 0.05):
    dec = analysis.greedy_partition(pts, eps, closed=closed)
    r = analysis.measure_bound(dec)
    print(f"eps={eps:<5} pieces={r['n_pieces']:3d}  64 eps^3 (n+1)^2 = {r['paper_bound']:9.3f}"
          f"  with 2eps cubes: {r['tight_cube_bound']:8.3f}")

# Sampled midpoints tell the same story: the occupied volume shrinks like h.
sweep = analysis.voxel_sweep(pts, pts, [0.08, 0.04, 0.02, 0.01], symmetric=True)
for row in sweep["sweep"]:
    print(f"h={row['h']:<5} voxels={row['voxel_count']:6d} volume={row['volume']:.4f}")
print(f"linear fit R^2 = {sweep['r2']:.4f}, log-log slope = {sweep['loglog_exponent']:.2f}")
