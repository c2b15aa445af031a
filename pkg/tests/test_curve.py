import itertools
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from cubefill import curve, param
from cubefill import pattern as P
from cubefill.curve import Fractal, Return


@pytest.fixture(scope="module")
def table():
    return P.default_table()


def dist_sq(p, q):
    return sum((a - b) ** 2 for a, b in zip(p, q))


# ------------------------------------------------------------ positions


def test_positions_validate():
    with pytest.raises(ValueError):
        Fractal(F(3, 2))
    with pytest.raises(ValueError):
        Return(0)
    with pytest.raises(ValueError):
        Return(1)


def test_circle_distance_wraps():
    assert curve.circle_distance(Fractal(0), Fractal(1)) == pytest.approx(1.0)
    near_end = Return(F(999_999, 1_000_000))
    assert curve.circle_distance(Fractal(0), near_end) < 1e-5


# ------------------------------------------------------------ evaluation


@pytest.mark.parametrize("n", [0, 1, 3, 6])
def test_eval_examples(table, n):
    p = curve.evaluate(Fractal(0), n, table)
    assert p.point == P.ROOT_ENTRY and p.error_sq <= F(3, 9 ** n)
    p = curve.evaluate(Fractal(1), n, table)
    assert p.point == P.ROOT_EXIT and p.error_sq <= F(3, 9 ** n)
    p = curve.evaluate(Return(F(1, 2)), n, table)
    assert p.point == (F(1, 2), 0, 0) and p.error_sq == 0


def test_gap_eval_is_affine(table):
    for s in param.addresses(2):
        node = P.locate(table, s)
        conns = P.node_connections(table, node)
        for j in range(7):
            g = param.gap_interval(s, j)
            a, b = conns[j]
            for frac in (F(1, 4), F(1, 2), F(2, 3)):
                got = curve.evaluate(Fractal(g.lo.value + frac * g.length), 5, table)
                assert got.error_sq == 0
                assert got.point == tuple(x + frac * (y - x) for x, y in zip(a, b))


def test_endpoint_coherence(table):
    for n in range(4):
        for x in param.addresses(n):
            t = param.address_to_param(x, param.ZERO)
            node = P.locate(table, x)
            for depth in (n, n + 1, 5):
                assert curve.evaluate(Fractal(t), depth, table).point == node.entry
            t = param.address_to_param(x, param.SEVEN)
            assert curve.evaluate(Fractal(t), n + 2, table).point == node.exit


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=0, max_value=1, max_denominator=15 ** 7), st.integers(0, 4))
def test_limit_error_bound_holds(t, n):
    table = P.default_table()
    coarse = curve.evaluate(Fractal(t), n, table)
    fine = curve.evaluate(Fractal(t), n + 4, table)
    # both values sit in the same depth-n cube
    if coarse.error_sq == 0:
        assert fine.point == coarse.point
    else:
        assert dist_sq(coarse.point, fine.point) <= coarse.error_sq
    for c in fine.point:
        assert 0 <= c <= 1


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=0, max_value=1, max_denominator=10 ** 6))
def test_gap_values_stable_under_depth(t):
    table = P.default_table()
    a = curve.evaluate(Fractal(t), 4, table)
    if a.error_sq == 0:
        assert curve.evaluate(Fractal(t), 7, table).point == a.point


# ------------------------------------------------------------ polylines


def test_polyline_depth_zero(table):
    poly = curve.build_polyline(0, table)
    assert poly.points == [P.ROOT_ENTRY, P.ROOT_EXIT]
    assert poly.closed and poly.kinds == ["chord", "return"]


def test_polyline_depth_one(table):
    poly = curve.build_polyline(1, table)
    assert len(poly) == 16
    assert poly.kinds.count("chord") == 8 and poly.kinds.count("connection") == 7
    assert poly.kinds[-1] == "return"


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_polyline_invariants(table, n):
    poly = curve.build_polyline(n, table)
    assert len(poly) == 2 * 8 ** n
    assert len(set(poly.points)) == len(poly.points)
    ts = [p.t for p in poly.positions]
    assert ts == sorted(ts) and len(set(ts)) == len(ts)
    for pos, pt in zip(poly.positions, poly.points):
        assert all(0 <= c <= 1 for c in pt)
        # the vertex is the curve value at its parameter, and sits in every prefix cube
        assert curve.evaluate(pos, n, table).point == pt
        found = param.classify_param(pos.t, n)
        if isinstance(found, param.LimitPrefix):
            for k in range(n + 1):
                assert P.locate(table, found.address[:k]).box.contains(pt)


@pytest.mark.parametrize("n", [1, 2])
def test_polyline_is_simple(table, n):
    poly = curve.build_polyline(n, table)
    pts = poly.points
    m = len(pts)
    edges = [(pts[i], pts[(i + 1) % m]) for i in range(m)]
    for i, j in itertools.combinations(range(m), 2):
        a, b = edges[i]
        c, d = edges[j]
        assert P.open_segments_disjoint(a, b, c, d), (i, j)
        if j - i > 1 and not (i == 0 and j == m - 1):
            # non-adjacent edges share no endpoint either
            assert not {a, b} & {c, d}
            assert not P.point_on_open_segment(c, a, b)
            assert not P.point_on_open_segment(a, c, d)


def test_csv_positions_are_15_adic_with_chains(table):
    name = "edge"
    chain = P.find_pattern((0, 0, 0), (1, 0, 0), chains=True, straight=False)
    fam = P.PatternTable(table.root, {**table.classes, name: chain}, table.root_entry, table.root_exit)
    poly = curve.build_polyline(2, fam)
    assert "connection" in poly.kinds
    for pos in poly.positions:
        assert 15 ** 4 % pos.t.denominator == 0
    for pos, pt in zip(poly.positions, poly.points):
        assert curve.evaluate(pos, 2, fam).point == pt


# ------------------------------------------------------------ witnesses


def test_witness_examples(table):
    # both words select the origin corner at every level; the positions coincide
    a, b = curve.witness_pair((0, 0, 0), 5, table)
    assert a == b
    assert curve.witness_deviation_sq((0, 0, 0), 5, table) <= F(3, 9 ** 5)
    for n in (3, 6):
        dev = curve.witness_deviation_sq((1, 1, 1), n, table)
        assert dev <= curve.witness_bound_sq(n)
    dev = curve.witness_deviation_sq((F(1, 2),) * 3, 6, table)
    assert dev <= curve.witness_bound_sq(6)
    assert math.sqrt(curve.witness_bound_sq(6)) == pytest.approx(0.00475, abs=1e-5)


def test_witness_soundness_random(table):
    rng = random.Random(20240601)
    n = 5
    bound = curve.witness_bound_sq(n)
    for _ in range(1000):
        y = tuple(F(rng.randrange(10 ** 6 + 1), 10 ** 6) for _ in range(3))
        p1, p2 = curve.witness_pair(y, n, table)
        a = curve.evaluate(p1, n, table).point
        b = curve.evaluate(p2, n, table).point
        assert dist_sq([(u + v) / 2 for u, v in zip(a, b)], y) <= bound


def test_witness_on_cantor_point(table):
    # a point of C^3 is split into two identical words
    y = (F(2, 3), F(2, 9), F(8, 9))
    p1, p2 = curve.witness_pair(y, 4, table)
    assert p1 == p2
    assert curve.witness_deviation_sq(y, 4, table) <= F(3, 9 ** 4)


# ------------------------------------------------------------ length


def test_lower_bound_examples():
    assert curve.connection_lower_bound(1) == F(7, 3)
    assert curve.connection_lower_bound(3) == F(679, 27)
    for n in range(11):
        assert curve.connection_lower_bound(n) == F(7, 5) * (F(8, 3) ** n - 1)
        assert curve.connection_lower_bound(n + 1) > curve.connection_lower_bound(n)


def test_polyline_length_exceeds_bound(table):
    for n in range(4):
        s = curve.length_stats(n, table)
        assert s.polyline_length >= float(s.lower_bound)
    assert curve.length_stats(3, table).polyline_length > 25
    assert curve.length_stats(2, table).to_dict()["lower_bound"] == [77, 9]


def test_connections_join_separated_siblings(table):
    # each level-k connection is at least 3^-(k+1) long (sibling cubes are that far apart)
    for n in range(3):
        for node in P.walk(table, n):
            for c in P.node_connections(table, node):
                a, b = c[0], c[-1]
                assert max(abs(x - y) for x, y in zip(a, b)) >= F(1, 3 ** (n + 1))


# ------------------------------------------------------------ modulus


def test_modulus_shrinks(table):
    r1 = curve.modulus_check(1, 4, table)
    r2 = curve.modulus_check(2, 4, table)
    r3 = curve.modulus_check(3, 4, table)
    assert r2["max_adjacent_distance"] < r1["max_adjacent_distance"]
    # with m fixed the top-level connection chunks stop the decrease
    assert r3["max_adjacent_distance"] <= r2["max_adjacent_distance"]
    assert r3["max_chord"] < r2["max_chord"] < r1["max_chord"]
    for r in (r1, r2, r3):
        assert r["within_bound"]


def test_modulus_return_chunk(table):
    r = curve.modulus_check(2, 5, table)
    assert r["wrap_distance"] == pytest.approx(math.sqrt(float(dist_sq(P.ROOT_ENTRY, P.ROOT_EXIT))) / 5)


def test_modulus_rejects_bad_input(table):
    with pytest.raises(ValueError):
        curve.modulus_check(0, 4, table)
    with pytest.raises(ValueError):
        curve.modulus_check(2, 0, table)


def test_return_segment_samples_are_exact(table):
    # adjacent samples on the return segment are |closing| / m apart
    m = 6
    pts = [curve.evaluate(Return(F(i, m)), 0, table).point for i in range(1, m)]
    step = dist_sq(P.ROOT_ENTRY, P.ROOT_EXIT) / m ** 2
    for a, b in zip(pts, pts[1:]):
        assert dist_sq(a, b) == step
