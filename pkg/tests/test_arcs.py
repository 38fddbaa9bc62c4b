import itertools
import random
from fractions import Fraction

import pytest

from ffcurves.arcs import (ArcInstance, arc_bounds, envelope_degree, extending_points, field_for,
                           greedy_complete_arc, is_arc, is_complete, parse_points, plane_points, nu4_bound,
                           secant_stats)
from ffcurves.errors import UsageError
from oracles import OracleField, det3, first_irreducible_bruteforce, segre_odd_exact


def conic(q):
    F = field_for(q)
    return [(1, t, F.mul(t, t)) for t in range(q)] + [(0, 0, 1)]


def oracle(q):
    for p in (2, 3, 5, 7):
        k = 1
        while p ** k < q:
            k += 1
        if p ** k == q:
            return OracleField(p, first_irreducible_bruteforce(p, k))
    raise ValueError(q)


def oracle_is_arc(F, pts):
    return all(det3(F, *T) != 0 for T in itertools.combinations(pts, 3))


def oracle_complete(F, pts):
    others = [R for R in plane_points(field_for(F.Q)) if R not in set(pts)]
    return all(not oracle_is_arc(F, pts + [R]) for R in others)


@pytest.mark.parametrize("q", [5, 7, 9])
def test_conic_is_complete_oval(q):
    pts = conic(q)
    ok, bad = is_arc(pts, q)
    assert ok and bad is None and len(pts) == q + 1
    assert is_complete(pts, q) == (True, None)
    F = oracle(q)
    assert oracle_is_arc(F, pts)
    assert oracle_complete(F, pts)
    st = secant_stats(pts, q)
    assert st["t"] == 1 and st["total_tangents"] == q + 1 and st["consistent"]


def test_conic_minus_point():
    pts = conic(7)
    removed = pts.pop()
    ok, ext = is_complete(pts, 7)
    assert not ok and ext == removed
    assert extending_points(ArcInstance.build(7, pts)) == [removed]


def test_small_examples():
    assert is_arc([(1, 0, 0), (0, 1, 0)], 5)[0]
    ok, bad = is_arc([(1, 0, 0), (0, 1, 0), (1, 1, 0)], 5)
    assert not ok and bad == ((1, 0, 0), (0, 1, 0), (1, 1, 0))
    assert is_complete([(1, 0, 0)], 3)[0] is False
    st = secant_stats([(1, 0, 0), (0, 1, 0)], 3)
    assert st["t"] == 3 and all(p["tangents"] == 3 for p in st["per_point"])


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
def test_random_sets_against_determinant_oracle(q):
    rng = random.Random(q)
    F = oracle(q)
    plane = plane_points(field_for(q))
    for _ in range(25):
        pts = rng.sample(plane, rng.randint(3, min(q + 2, 7)))
        ok, bad = is_arc(pts, q)
        assert ok == oracle_is_arc(F, pts)
        if not ok:
            assert det3(F, *bad) == 0
        else:
            st = secant_stats(pts, q)
            assert st["consistent"]
            assert all(p["tangents"] == q + 2 - len(pts) for p in st["per_point"])


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9, 11])
def test_greedy_outputs_complete(q):
    arc = greedy_complete_arc(q)
    assert is_arc(arc)[0]
    assert is_complete(arc)[0]
    m2q = q + 1 if q % 2 else q + 2
    assert arc.k <= m2q
    if q <= 9:
        assert oracle_complete(oracle(q), list(arc.points))


def test_greedy_examples():
    assert greedy_complete_arc(5, [(1, 0, 0), (0, 1, 0)]).k <= 6
    assert 6 <= greedy_complete_arc(9).k <= 10
    start = conic(5)
    assert greedy_complete_arc(5, start).points == ArcInstance.build(5, start).points
    with pytest.raises(UsageError, match="not an arc"):
        greedy_complete_arc(5, [(1, 0, 0), (0, 1, 0), (1, 1, 0)])


def test_segre_values_exact():
    for q, r, expect in ((9, 3, 10), (25, 5, 25), (49, 7, 49)):
        b = arc_bounds(q)["segre"]
        assert Fraction(b["exact"]) == segre_odd_exact(q, r)
        assert b["floor"] == expect
    assert segre_odd_exact(25, 5) == Fraction(51, 2)


def test_bounds_table():
    b = arc_bounds(9, nu4=4)
    assert b["m2q"] == 10
    assert Fraction(b["ratio_44_45"]["exact"]) == Fraction(436, 45)
    assert b["ratio_44_45"]["floor"] == 9
    assert "char3_ratio_52_53" in b
    assert b["nu4_bound"]["exact"] == str(min(Fraction(9) - 1 + Fraction(7, 4), Fraction(436, 45)))
    e = arc_bounds(16)
    assert e["m2q"] == 18 and e["segre"]["floor"] == 13 and Fraction(e["segre"]["exact"]) == 13
    assert "thas" not in e and e["notes"]
    t = arc_bounds(25)
    assert Fraction(t["thas"]["exact"]) == 25 - Fraction(5, 4) + Fraction(25, 16)
    assert Fraction(t["hirschfeld_korchmaros"]["exact"]) == 25 - Fraction(5, 2) + Fraction(5, 2)
    with pytest.raises(UsageError):
        arc_bounds(10)
    with pytest.raises(UsageError):
        arc_bounds(9, nu4=0)


@pytest.mark.parametrize("q", [9, 25, 27, 49, 121])
def test_nu4_bound_monotone(q):
    vals = [nu4_bound(q, n) for n in range(1, 40)]
    first = [q - Fraction(n, 4) + Fraction(7, 4) for n in range(1, 40)]
    second = [Fraction((28 + 4 * n) * q + 32 + 2 * n, 29 + 4 * n) for n in range(1, 40)]
    assert all(a >= b for a, b in zip(first, first[1:]))
    # second = q + 1/2 - (2q - 35)/(2(29 + 4 nu4)): monotone towards q + 1/2,
    # increasing exactly when q > 35/2
    if q > 17:
        assert all(a < b < q + Fraction(1, 2) for a, b in zip(second, second[1:]))
    else:
        assert all(a > b > q + Fraction(1, 2) for a, b in zip(second, second[1:]))
    assert vals == [min(a, b) for a, b in zip(first, second)]
    s = int(q ** 0.5)
    if s * s == q and q % 2:
        segre = Fraction(arc_bounds(q)["segre"]["exact"])
        assert all(v <= segre for n, v in enumerate(vals, 1) if n >= s)
    assert nu4_bound(q, 4) == min(q + Fraction(3, 4), Fraction(44 * q + 40, 45))


def test_envelope_degree():
    assert envelope_degree(7, 8) == 2
    assert envelope_degree(9, 6) == 10
    with pytest.raises(UsageError):
        envelope_degree(7, 10)


def test_parse_points():
    F = field_for(9)
    text = "# header\n(1:0:0)\n0, 1, 0\n\n1 1 1  # trailing\n"
    assert parse_points(F, text) == [(1, 0, 0), (0, 1, 0), (1, 1, 1)]
    with pytest.raises(UsageError, match="line 1"):
        parse_points(F, "1 2")
    with pytest.raises(UsageError):
        ArcInstance.build(5, [(0, 0, 0)])
    with pytest.raises(UsageError, match="duplicate"):
        ArcInstance.build(5, [(1, 0, 0), (2, 0, 0)])
