"""Searching for the traversal pattern of the corner cubes.

Run: python3 demos/01_pattern_search.py
"""
from cubefill import pattern

# The root node: the curve enters at (1/3, 0, 0) and leaves at (2/3, 0, 0),
# so the closing segment between them lies on an edge of the unit cube.
table = pattern.pattern_closure()

print("root order:", table.root.order)
print("root entry/exit labels per slot:")
for slot, (h, e, x) in enumerate(zip(table.root.order, table.root.entry, table.root.exit)):
    print(f"  slot {slot}: cube {h}  enter {e}  leave {x}  ({pattern.pair_class(e, x)})")

# Children only ever need three kinds of entry/exit pairs, one per Hamming distance.
print("classes found:", sorted(table.classes), "after", table.iterations, "closure rounds")

# Any node's pattern is a cube symmetry applied to its class pattern.
node = pattern.locate(table, (4, 2))
print("node (4, 2):", node.box.lo, "side", node.box.side, "entry", node.entry, "exit", node.exit)

for depth in range(4):
    report = pattern.validate_tree(table, depth)
    print(f"depth {depth}: {sum(report.checks.values()):6d} exact checks, ok={report.ok}")
