"""Corner-cube recursion, exact segment predicates and the traversal-pattern search.

A node of the recursion is a closed cube together with an entry point and
an exit point.  Its eight corner sub-cubes (side 1/3 of the parent) are
visited in some order; consecutive sub-cubes are joined by open straight
segments from the exit vertex of one to the entry vertex of the next.  A
*pattern* fixes the order and the vertex choices such that

* the first sub-cube is entered at the parent's entry, the last left at the
  parent's exit;
* every sub-cube is entered and left at two different vertices;
* no connecting segment touches a closed sub-cube;
* connecting segments are pairwise disjoint (and, at the root, disjoint
  from the closing segment).

Inside a node everything is expressed in *local units* (a third of the
child side, so the node cube is ``[0, 3]^3`` and child ``h`` is
``[2h, 2h + 1]``).  Patterns are stored once per class of (entry, exit)
vertex pairs and carried to other nodes by the 48 cube symmetries.

All predicates are exact: they accept ``int`` or ``Fraction`` coordinates
and never touch floating point.
"""
from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

Point = tuple  # three exact numbers
Label = tuple[int, int, int]

CORNERS: tuple[Label, ...] = tuple(itertools.product((0, 1), repeat=3))

ROOT_ENTRY = (Fraction(1, 3), Fraction(0), Fraction(0))
ROOT_EXIT = (Fraction(2, 3), Fraction(0), Fraction(0))

CLASS_EXITS = {
    "edge": (1, 0, 0),
    "face": (1, 1, 0),
    "space": (1, 1, 1),
}
CLASS_BY_DISTANCE = {1: "edge", 2: "face", 3: "space"}


class NotFound(LookupError):
    """No pattern satisfies the constraints."""


# ---------------------------------------------------------------- geometry


@dataclass(frozen=True)
class Box3:
    """Closed axis-aligned cube ``corner + [0, 3**-depth]^3``."""

    corner: Point
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "corner", tuple(Fraction(c) for c in self.corner))
        if len(self.corner) != 3:
            raise ValueError("corner must have three coordinates")
        if self.depth < 0:
            raise ValueError("negative depth")
        if any(c < 0 or c + self.side > 1 for c in self.corner):
            raise ValueError("box leaves the unit cube")

    @property
    def side(self) -> Fraction:
        return Fraction(1, 3 ** self.depth)

    @property
    def lo(self) -> Point:
        return self.corner

    @property
    def hi(self) -> Point:
        return tuple(c + self.side for c in self.corner)

    def vertex(self, label: Label) -> Point:
        return tuple(c + self.side * v for c, v in zip(self.corner, label))

    def vertices(self) -> list[Point]:
        return [self.vertex(v) for v in CORNERS]

    def contains(self, p: Point) -> bool:
        return all(lo <= x <= hi for lo, x, hi in zip(self.lo, p, self.hi))

    def vertex_label(self, p: Point) -> Optional[Label]:
        """Label of ``p`` if it is a vertex of this box, else ``None``."""
        label = []
        for c, x in zip(self.corner, p):
            if x == c:
                label.append(0)
            elif x == c + self.side:
                label.append(1)
            else:
                return None
        return tuple(label)

    def to_local(self, p: Point) -> Point:
        """Coordinates in units of a third of the child side (box = [0, 3]^3)."""
        unit = self.side / 3
        return tuple((x - c) / unit for x, c in zip(p, self.corner))

    def from_local(self, p: Point) -> Point:
        unit = self.side / 3
        return tuple(c + unit * x for x, c in zip(p, self.corner))


UNIT_BOX = Box3((0, 0, 0), 0)


@dataclass(frozen=True)
class Segment3:
    """Open segment ``(a, b)``: the closed hull of ``{a, b}`` minus both endpoints."""

    a: Point
    b: Point

    def __post_init__(self):
        if tuple(self.a) == tuple(self.b):
            raise ValueError("degenerate segment")


def subdivide(box: Box3) -> dict[Label, Box3]:
    """The eight corner cubes of ``box``, keyed by corner selector ``h``."""
    step = 2 * box.side / 3
    return {
        h: Box3(tuple(c + step * hl for c, hl in zip(box.corner, h)), box.depth + 1)
        for h in CORNERS
    }


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def open_segment_misses_box(a: Point, b: Point, lo: Point, hi: Point) -> bool:
    """Slab clipping of the closed segment ``[a, b]`` against ``[lo, hi]``.

    The clip interval ``[t0, t1]`` is kept as two fractions ``n/d`` with
    ``d > 0`` and compared by cross multiplication.  The open segment misses
    the box iff the interval is empty or collapses to ``t = 0`` or ``t = 1``.
    """
    n0, d0, n1, d1 = 0, 1, 1, 1
    for ax in range(3):
        d = b[ax] - a[ax]
        if d == 0:
            if a[ax] < lo[ax] or a[ax] > hi[ax]:
                return True
            continue
        p, q = lo[ax] - a[ax], hi[ax] - a[ax]
        if d < 0:
            p, q, d = -q, -p, -d
        if p * d0 > n0 * d:
            n0, d0 = p, d
        if q * d1 < n1 * d:
            n1, d1 = q, d
        if n0 * d1 > n1 * d0:
            return True
    if n0 * d1 == n1 * d0:
        return n0 == 0 or n0 == d0
    return False


def segment_box_disjoint(seg: Segment3, box: Box3) -> bool:
    """True iff the open segment and the closed box share no point."""
    return open_segment_misses_box(seg.a, seg.b, box.lo, box.hi)


def open_segments_disjoint(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True iff open segments ``(a, b)`` and ``(c, d)`` share no point."""
    r = _sub(b, a)
    e = _sub(d, c)
    n = _cross(r, e)
    w = _sub(c, a)
    if n != (0, 0, 0):
        if _dot(w, n) != 0:
            return True
        nn = _dot(n, n)
        s = _dot(_cross(w, e), n)
        u = _dot(_cross(w, r), n)
        return not (0 < s < nn and 0 < u < nn)
    if _cross(w, r) != (0, 0, 0):
        return True
    # collinear: compare the projections onto r, scaled by |r|^2
    rr = _dot(r, r)
    sc = _dot(w, r)
    sd = _dot(_sub(d, a), r)
    return not max(0, min(sc, sd)) < min(rr, max(sc, sd))


def segments_disjoint(s1: Segment3, s2: Segment3) -> bool:
    return open_segments_disjoint(s1.a, s1.b, s2.a, s2.b)


def point_on_open_segment(p: Point, a: Point, b: Point) -> bool:
    r = _sub(b, a)
    w = _sub(p, a)
    if _cross(w, r) != (0, 0, 0):
        return False
    t = _dot(w, r)
    return 0 < t < _dot(r, r)


def boxes_disjoint(b1: Box3, b2: Box3) -> bool:
    return any(h1 < l2 or h2 < l1 for l1, h1, l2, h2 in zip(b1.lo, b1.hi, b2.lo, b2.hi))


def box_inside(inner: Box3, outer: Box3) -> bool:
    return all(
        ol <= il and ih <= oh for il, ih, ol, oh in zip(inner.lo, inner.hi, outer.lo, outer.hi)
    )


# ---------------------------------------------------------------- polylines
# A connection is a tuple of 2 (straight) or 3 (two-leg chain) points.


def legs(chain: Sequence[Point]) -> list[tuple[Point, Point]]:
    return list(zip(chain[:-1], chain[1:]))


def chain_misses_box(chain, lo, hi) -> bool:
    for a, b in legs(chain):
        if not open_segment_misses_box(a, b, lo, hi):
            return False
    for w in chain[1:-1]:
        if all(l <= x <= h for l, x, h in zip(lo, w, hi)):
            return False
    return True


def _on_chain(p, chain) -> bool:
    if p in chain[1:-1]:
        return True
    return any(point_on_open_segment(p, a, b) for a, b in legs(chain))


def chains_disjoint(c1, c2) -> bool:
    """Open polygonal chains (endpoints excluded, waypoints included) share no point."""
    for a, b in legs(c1):
        for c, d in legs(c2):
            if not open_segments_disjoint(a, b, c, d):
                return False
    if any(_on_chain(w, c2) for w in c1[1:-1]):
        return False
    if any(_on_chain(w, c1) for w in c2[1:-1]):
        return False
    return True


def chain_is_simple(chain) -> bool:
    if len(chain) == 2:
        return chain[0] != chain[1]
    a, w, b = chain
    if a == w or w == b or a == b:
        return False
    return open_segments_disjoint(a, w, w, b)


# ---------------------------------------------------------------- symmetry


@dataclass(frozen=True)
class Symmetry:
    """Cube isometry: axis permutation followed by reflections."""

    perm: tuple[int, int, int]
    flip: tuple[int, int, int]

    def label(self, v: Label) -> Label:
        return tuple(v[self.perm[i]] ^ self.flip[i] for i in range(3))

    def point(self, p: Point, size=3) -> Point:
        return tuple(
            size - p[self.perm[i]] if self.flip[i] else p[self.perm[i]] for i in range(3)
        )


SYMMETRIES: tuple[Symmetry, ...] = tuple(
    Symmetry(perm, flip)
    for perm in itertools.permutations(range(3))
    for flip in itertools.product((0, 1), repeat=3)
)


def pair_class(entry: Label, exit_: Label) -> str:
    dist = sum(a != b for a, b in zip(entry, exit_))
    if dist == 0:
        raise ValueError("entry and exit coincide")
    return CLASS_BY_DISTANCE[dist]


def canonical_symmetry(entry: Label, exit_: Label) -> Symmetry:
    """First symmetry carrying the canonical pair of the class onto ``(entry, exit_)``."""
    x0 = CLASS_EXITS[pair_class(entry, exit_)]
    for g in SYMMETRIES:
        if g.label((0, 0, 0)) == entry and g.label(x0) == exit_:
            return g
    raise AssertionError("cube symmetry group is transitive on pairs of a class")


# ---------------------------------------------------------------- patterns


@dataclass(frozen=True)
class Pattern:
    """Traversal order and vertex choices inside one node (local units).

    ``order[i]`` is the corner selector of the child visited in slot ``i``;
    ``entry[i]``/``exit[i]`` are vertex labels of that child;
    ``waypoints[j]`` is ``None`` for a straight connection ``j`` or an
    interior point (local units) for a two-leg chain.
    """

    order: tuple[Label, ...]
    entry: tuple[Label, ...]
    exit: tuple[Label, ...]
    waypoints: tuple = (None,) * 7

    def child_vertex(self, slot: int, label: Label) -> Point:
        h = self.order[slot]
        return tuple(2 * hh + v for hh, v in zip(h, label))

    def connections(self) -> list[tuple]:
        out = []
        for j in range(7):
            a = self.child_vertex(j, self.exit[j])
            b = self.child_vertex(j + 1, self.entry[j + 1])
            w = self.waypoints[j]
            out.append((a, b) if w is None else (a, tuple(w), b))
        return out

    @property
    def kind(self) -> str:
        return "straight" if all(w is None for w in self.waypoints) else "chain"

    def transformed(self, g: Symmetry) -> "Pattern":
        return Pattern(
            tuple(g.label(h) for h in self.order),
            tuple(g.label(v) for v in self.entry),
            tuple(g.label(v) for v in self.exit),
            tuple(None if w is None else g.point(w) for w in self.waypoints),
        )

    def child_classes(self) -> list[str]:
        return [pair_class(e, x) for e, x in zip(self.entry, self.exit)]


def _child_boxes_local():
    return {h: (tuple(2 * x for x in h), tuple(2 * x + 1 for x in h)) for h in CORNERS}


def _owner(p: Point) -> list[tuple[Label, Label]]:
    """(child, vertex label) pairs of local point ``p``."""
    found = []
    for h in CORNERS:
        v = tuple(x - 2 * hh for x, hh in zip(p, h))
        if all(c in (0, 1) for c in v):
            found.append((h, tuple(int(c) for c in v)))
    return found


def _waypoint_grid():
    # interior points on the fallback lattice (a ninth of the node side)
    ticks = [Fraction(k, 3) for k in range(10)]
    return [p for p in itertools.product(ticks, repeat=3)]


def find_pattern(
    entry: Point,
    exit_: Point,
    box: Box3 = UNIT_BOX,
    extra_avoid: Iterable[Segment3] = (),
    chains: bool = False,
    straight: bool = True,
) -> Pattern:
    """Backtracking search for a pattern in ``box``.

    ``entry`` and ``exit_`` must each be a vertex of exactly one child cube.
    Segments in ``extra_avoid`` must be missed by every connection.  With
    ``chains=True`` a connection may bend once at a waypoint of the
    ninth-of-side lattice; straight connections are still tried first
    unless ``straight=False``.
    Raises ``NotFound`` when the search exhausts.
    """
    e_loc = box.to_local(entry)
    x_loc = box.to_local(exit_)
    if e_loc == x_loc:
        raise NotFound("entry equals exit")
    e_own, x_own = _owner(e_loc), _owner(x_loc)
    if len(e_own) != 1 or len(x_own) != 1:
        raise ValueError("entry/exit must be a vertex of exactly one child cube")
    (h_first, v_first), (h_last, v_last) = e_own[0], x_own[0]
    if h_first == h_last:
        raise NotFound("entry and exit lie in the same child cube")
    avoid = [(box.to_local(s.a), box.to_local(s.b)) for s in extra_avoid]
    boxes = list(_child_boxes_local().values())
    grid = _waypoint_grid() if chains else []

    order = [h_first]
    entries = [v_first]
    exits: list[Label] = []
    conns: list[tuple] = []

    def admissible(chain) -> bool:
        if not chain_is_simple(chain):
            return False
        if not all(chain_misses_box(chain, lo, hi) for lo, hi in boxes):
            return False
        if not all(chains_disjoint(chain, c) for c in conns):
            return False
        return all(chains_disjoint(chain, c) for c in avoid)

    def candidates(a, b):
        if straight:
            yield (a, b)
        for w in grid:
            yield (a, w, b)

    def dfs() -> bool:
        k = len(order)
        if k == 8:
            return True
        rest = [h_last] if k == 7 else [h for h in CORNERS if h not in order and h != h_last]
        for h in rest:
            for vo in CORNERS:
                if vo == entries[-1]:
                    continue
                a = tuple(2 * hh + v for hh, v in zip(order[-1], vo))
                for vi in CORNERS:
                    if k == 7 and vi == v_last:
                        continue
                    b = tuple(2 * hh + v for hh, v in zip(h, vi))
                    for chain in candidates(a, b):
                        if not admissible(chain):
                            continue
                        exits.append(vo)
                        order.append(h)
                        entries.append(vi)
                        conns.append(chain)
                        if dfs():
                            return True
                        exits.pop()
                        order.pop()
                        entries.pop()
                        conns.pop()
        return False

    if not dfs():
        raise NotFound("search exhausted")
    exits.append(v_last)
    waypoints = tuple(c[1] if len(c) == 3 else None for c in conns)
    return Pattern(tuple(order), tuple(entries), tuple(exits), waypoints)


def closing_segment(entry: Point = ROOT_ENTRY, exit_: Point = ROOT_EXIT) -> Segment3:
    """The return segment from the root exit back to the root entry."""
    return Segment3(tuple(exit_), tuple(entry))


@dataclass
class PatternTable:
    """Root pattern plus one canonical pattern per vertex-pair class."""

    root: Pattern
    classes: dict[str, Pattern]
    root_entry: Point = ROOT_ENTRY
    root_exit: Point = ROOT_EXIT
    iterations: int = 0
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def oriented(self, entry: Label, exit_: Label) -> Pattern:
        """Pattern of a node entered at vertex ``entry`` and left at ``exit_``."""
        key = (entry, exit_)
        pat = self._cache.get(key)
        if pat is None:
            g = canonical_symmetry(entry, exit_)
            pat = self.classes[pair_class(entry, exit_)].transformed(g)
            self._cache[key] = pat
        return pat

    @property
    def closing(self) -> Segment3:
        return closing_segment(self.root_entry, self.root_exit)


def _search_with_fallback(entry, exit_, box, extra_avoid):
    try:
        return find_pattern(entry, exit_, box, extra_avoid)
    except NotFound:
        return find_pattern(entry, exit_, box, extra_avoid, chains=True)


def pattern_closure(root_entry: Point = ROOT_ENTRY, root_exit: Point = ROOT_EXIT) -> PatternTable:
    """Root pattern and the class-closed family of node patterns."""
    root_entry = tuple(Fraction(c) for c in root_entry)
    root_exit = tuple(Fraction(c) for c in root_exit)
    closing = closing_segment(root_entry, root_exit)
    root = _search_with_fallback(root_entry, root_exit, UNIT_BOX, [closing])
    classes: dict[str, Pattern] = {}
    pending = sorted(set(root.child_classes()))
    iterations = 0
    while pending:
        iterations += 1
        new = []
        for name in pending:
            exit_vertex = UNIT_BOX.vertex(CLASS_EXITS[name])
            pat = _search_with_fallback(UNIT_BOX.vertex((0, 0, 0)), exit_vertex, UNIT_BOX, [])
            classes[name] = pat
            new.extend(pat.child_classes())
        pending = sorted(set(new) - set(classes))
    return PatternTable(root, classes, root_entry, root_exit, iterations)


# ---------------------------------------------------------------- tree


@dataclass(frozen=True)
class Node:
    address: tuple[int, ...]
    box: Box3
    entry: Point
    exit: Point

    @property
    def entry_label(self) -> Optional[Label]:
        return self.box.vertex_label(self.entry) if self.address else None

    @property
    def exit_label(self) -> Optional[Label]:
        return self.box.vertex_label(self.exit) if self.address else None


def root_node(table: PatternTable) -> Node:
    return Node((), UNIT_BOX, table.root_entry, table.root_exit)


def node_pattern(table: PatternTable, node: Node) -> Pattern:
    if not node.address:
        return table.root
    return table.oriented(node.entry_label, node.exit_label)


def child(table: PatternTable, node: Node, slot: int) -> Node:
    """The child visited in ``slot``."""
    pat = node_pattern(table, node)
    step = 2 * node.box.side / 3
    box = Box3(
        tuple(c + step * hl for c, hl in zip(node.box.corner, pat.order[slot])), node.box.depth + 1
    )
    return Node(
        node.address + (slot,), box, box.vertex(pat.entry[slot]), box.vertex(pat.exit[slot])
    )


def children(table: PatternTable, node: Node) -> list[Node]:
    """Children in traversal (= parameter) order."""
    return [child(table, node, i) for i in range(8)]


def node_connections(table: PatternTable, node: Node) -> list[tuple]:
    """The 7 connections of ``node`` in global coordinates."""
    pat = node_pattern(table, node)
    return [tuple(node.box.from_local(p) for p in c) for c in pat.connections()]


def locate(table: PatternTable, address: Sequence[int]) -> Node:
    node = root_node(table)
    for d in address:
        node = child(table, node, d)
    return node


def walk(table: PatternTable, depth: int) -> Iterator[Node]:
    """Nodes of exactly ``depth`` in parameter order."""
    def rec(node):
        if len(node.address) == depth:
            yield node
            return
        for c in children(table, node):
            yield from rec(c)

    yield from rec(root_node(table))


def descend_corner_word(table: PatternTable, word: Sequence[Label]) -> Node:
    """Node whose cubes follow the corner selectors of ``word`` level by level."""
    node = root_node(table)
    for h in word:
        slot = node_pattern(table, node).order.index(tuple(h))
        node = child(table, node, slot)
    return node


# ---------------------------------------------------------------- validation

CLAUSES = (
    "pattern_available",
    "endpoint_coherence",  # slot 0 enters at the parent entry, slot 7 leaves at its exit
    "distinct_vertices",  # each child entered and left at two different vertices
    "sibling_cubes_disjoint",
    "connection_containment",
    "connection_avoids_cubes",
    "connections_disjoint",
    "closing_avoids_cubes",
    "closing_avoids_connections",
    "nesting",
)


@dataclass
class ValidationReport:
    depth: int
    mode: str
    checks: dict[str, int] = field(default_factory=lambda: {c: 0 for c in CLAUSES})
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, clause, *addresses, detail=""):
        self.violations.append(
            {"clause": clause, "addresses": [list(a) for a in addresses], "detail": detail}
        )

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "mode": self.mode,
            "checks": dict(self.checks),
            "total_checks": sum(self.checks.values()),
            "violations": self.violations,
            "ok": self.ok,
            "locality": (
                "cross-subtree clauses reduce to per-node checks: every connection of a node "
                "lies in its cube and outside all its child cubes, deeper geometry lies inside "
                "the child cubes, and sibling cubes are disjoint"
                if self.mode == "local"
                else "all pairs checked directly"
            ),
        }


def _local_node_checks(table, node, kids, conns, report):
    pat = node_pattern(table, node)
    report.checks["endpoint_coherence"] += 2
    if kids[0].entry != node.entry:
        report.fail("endpoint_coherence", node.address, detail="slot 0 entry")
    if kids[7].exit != node.exit:
        report.fail("endpoint_coherence", node.address, detail="slot 7 exit")
    for k in kids:
        report.checks["distinct_vertices"] += 1
        if (
            k.entry == k.exit
            or k.box.vertex_label(k.entry) is None
            or k.box.vertex_label(k.exit) is None
        ):
            report.fail("distinct_vertices", k.address)
        report.checks["nesting"] += 1
        if not box_inside(k.box, node.box):
            report.fail("nesting", k.address, node.address)
    for i, j in itertools.combinations(range(8), 2):
        report.checks["sibling_cubes_disjoint"] += 1
        if not boxes_disjoint(kids[i].box, kids[j].box):
            report.fail("sibling_cubes_disjoint", kids[i].address, kids[j].address)
    for j, c in enumerate(conns):
        report.checks["connection_containment"] += 1
        if not all(node.box.contains(p) for p in c):
            report.fail("connection_containment", node.address, detail=f"connection {j}")
        # endpoints must be the neighbouring children's exit/entry
        if c[0] != kids[j].exit or c[-1] != kids[j + 1].entry:
            report.fail("endpoint_coherence", node.address, detail=f"connection {j} endpoints")
        for k in kids:
            report.checks["connection_avoids_cubes"] += 1
            if not chain_misses_box(c, k.box.lo, k.box.hi):
                report.fail(
                    "connection_avoids_cubes", node.address, k.address, detail=f"connection {j}"
                )
    for j, l in itertools.combinations(range(7), 2):
        report.checks["connections_disjoint"] += 1
        if not chains_disjoint(conns[j], conns[l]):
            report.fail("connections_disjoint", node.address, detail=f"connections {j}, {l}")
    return pat


def validate_tree(table: PatternTable, depth: int, brute: bool = False) -> ValidationReport:
    """Exact check of the recursion down to cubes of ``depth``.

    Nodes of depth < ``depth`` carry connections; cubes exist down to
    ``depth``.  In the default local mode, disjointness across subtrees is
    implied by per-node checks plus nesting; ``brute=True`` checks every
    pair directly (quadratic, meant for small depths).
    """
    report = ValidationReport(depth, "brute" if brute else "local")
    if depth <= 0:
        return report
    closing = table.closing
    all_conns: list[tuple[tuple, tuple]] = []
    all_boxes: list[Node] = []

    def rec(node):
        report.checks["pattern_available"] += 1
        try:
            kids = children(table, node)
            conns = node_connections(table, node)
        except (KeyError, ValueError) as exc:
            report.fail("pattern_available", node.address, detail=str(exc))
            return
        _local_node_checks(table, node, kids, conns, report)
        if not node.address:
            for k in kids:
                report.checks["closing_avoids_cubes"] += 1
                if not open_segment_misses_box(closing.a, closing.b, k.box.lo, k.box.hi):
                    report.fail("closing_avoids_cubes", k.address)
            for j, c in enumerate(conns):
                report.checks["closing_avoids_connections"] += 1
                if not chains_disjoint((closing.a, closing.b), c):
                    report.fail("closing_avoids_connections", (), detail=f"connection {j}")
        if brute:
            all_conns.extend(((node.address, j), c) for j, c in enumerate(conns))
            all_boxes.extend(kids)
        if len(node.address) + 1 < depth:
            for k in kids:
                rec(k)

    rec(root_node(table))

    if brute:
        for (addr, j), c in all_conns:
            for k in all_boxes:
                if len(k.address) <= len(addr) + 1:
                    continue  # children handled above; shallower cubes contain the node
                report.checks["connection_avoids_cubes"] += 1
                if not chain_misses_box(c, k.box.lo, k.box.hi):
                    report.fail("connection_avoids_cubes", addr, k.address, detail=f"connection {j}")
        for ((a1, j1), c1), ((a2, j2), c2) in itertools.combinations(all_conns, 2):
            if a1 == a2:
                continue
            report.checks["connections_disjoint"] += 1
            if not chains_disjoint(c1, c2):
                report.fail("connections_disjoint", a1, a2, detail=f"connections {j1}, {j2}")
        for k in all_boxes:
            if len(k.address) < 2:
                continue
            report.checks["closing_avoids_cubes"] += 1
            if not open_segment_misses_box(closing.a, closing.b, k.box.lo, k.box.hi):
                report.fail("closing_avoids_cubes", k.address)
        for (addr, j), c in all_conns:
            if not addr:
                continue
            report.checks["closing_avoids_connections"] += 1
            if not chains_disjoint((closing.a, closing.b), c):
                report.fail("closing_avoids_connections", addr, detail=f"connection {j}")
    return report


# ---------------------------------------------------------------- JSON

FORMAT = "cubefill-pattern/1"


def encode_rational(x) -> list[int]:
    """``[numerator, e]`` with ``x = numerator / 3**e``."""
    x = Fraction(x)
    den, e = x.denominator, 0
    while den % 3 == 0:
        den //= 3
        e += 1
    if den != 1:
        raise ValueError(f"{x} is not a triadic rational")
    return [x.numerator, e]


def decode_rational(pair) -> Fraction:
    num, e = pair
    return Fraction(int(num), 3 ** int(e))


def _encode_point(p):
    return [encode_rational(c) for c in p]


def _decode_point(p):
    return tuple(decode_rational(c) for c in p)


def pattern_to_dict(pat: Pattern) -> dict:
    return {
        "order": [list(h) for h in pat.order],
        "entry": [list(v) for v in pat.entry],
        "exit": [list(v) for v in pat.exit],
        "waypoints": [None if w is None else _encode_point(w) for w in pat.waypoints],
        "connections": [[_encode_point(p) for p in c] for c in pat.connections()],
        "kind": pat.kind,
    }


def pattern_from_dict(d: dict) -> Pattern:
    def labels(key):
        out = tuple(tuple(int(x) for x in v) for v in d[key])
        if len(out) != 8 or any(len(v) != 3 or set(v) - {0, 1} for v in out):
            raise ValueError(f"malformed {key}")
        return out

    order = labels("order")
    if sorted(order) != list(CORNERS):
        raise ValueError("order is not a permutation of the corners")
    waypoints = tuple(
        None if w is None else _decode_point(w) for w in d.get("waypoints", [None] * 7)
    )
    return Pattern(order, labels("entry"), labels("exit"), waypoints)


def table_to_dict(table: PatternTable, report: Optional[ValidationReport] = None) -> dict:
    classes = {name: pattern_to_dict(p) for name, p in sorted(table.classes.items())}
    for name, d in classes.items():
        d["entry_vertex"] = [0, 0, 0]
        d["exit_vertex"] = list(CLASS_EXITS[name])
    out = {
        "format": FORMAT,
        "root": {
            "entry": _encode_point(table.root_entry),
            "exit": _encode_point(table.root_exit),
            "pattern": pattern_to_dict(table.root),
        },
        "classes": classes,
        "closure_iterations": table.iterations,
        "occurring_classes": sorted(table.classes),
    }
    if report is not None:
        out["validation"] = report.to_dict()
    out["digest"] = table_digest(table)
    return out


def table_from_dict(d: dict) -> PatternTable:
    if d.get("format") != FORMAT:
        raise ValueError("not a pattern table")
    root = d["root"]
    table = PatternTable(
        pattern_from_dict(root["pattern"]),
        {name: pattern_from_dict(p) for name, p in d["classes"].items()},
        _decode_point(root["entry"]),
        _decode_point(root["exit"]),
        int(d.get("closure_iterations", 0)),
    )
    return table


def table_digest(table: PatternTable) -> str:
    core = {
        "root": pattern_to_dict(table.root),
        "classes": {n: pattern_to_dict(p) for n, p in sorted(table.classes.items())},
        "entry": _encode_point(table.root_entry),
        "exit": _encode_point(table.root_exit),
    }
    blob = json.dumps(core, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


@lru_cache(maxsize=1)
def default_table() -> PatternTable:
    return pattern_closure()
