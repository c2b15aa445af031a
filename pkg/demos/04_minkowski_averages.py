"""Minkowski averages (1/k)(G + ... + G) creep towards the convex hull.

Run: python3 demos/04_minkowski_averages.py
"""
from cubefill import analysis, samples

# The boundary of a square bounds a convex set, so one halving already fills it.
for row in analysis.sf_sequence(samples.square(400), 2):
    print("square", row)

# An L gets there only gradually.
for row in analysis.sf_sequence(samples.l_polyline(200), 3):
    print("L     ", row)
