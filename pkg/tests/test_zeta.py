import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffcurves.errors import InconsistencyError, UsageError
from ffcurves.zeta import (QuadExt, ZetaData, bound_table, check_root_moduli, classify, counts_from_numerator,
                           explicit_formula_bound, numerator_from_counts, positivity_min, root_moduli,
                           squarefree_factors)
from oracles import counts_via_roots

KLEIN = (2, 3, (3, 5, 24))
HERMITIAN3 = (9, 3, (28, 28, 892))


def _binom_poly(root, e):
    return [math.comb(e, k) * root ** (e - k) for k in range(e + 1)]


def _suzuki():
    # h = (t^2 + 4t + 8)^14, constant term first
    h = [1]
    for _ in range(14):
        nxt = [0] * (len(h) + 2)
        for i, x in enumerate(h):
            for j, y in enumerate((8, 4, 1)):
                nxt[i + j] += x * y
        h = nxt
    return ZetaData(8, 14, (65,) * 14, tuple(reversed(h)))


def test_klein_numerator():
    z = numerator_from_counts(*KLEIN)
    assert z.a == (1, 0, 0, 5, 0, 0, 8)
    assert z.h_coeffs == (8, 0, 0, 5, 0, 0, 1)


def test_hermitian_numerator():
    z = numerator_from_counts(*HERMITIAN3)
    assert z.h_coeffs == tuple(_binom_poly(3, 6))


def test_genus_zero():
    z = numerator_from_counts(7, 0, ())
    assert z.a == (1,)
    assert counts_from_numerator(z, 3) == 344
    assert classify(z)[0] == "maximal"


def _hermitian4():
    # maximal over F_16: counts follow from h = (t+4)^12
    z0 = ZetaData(16, 6, (), tuple(reversed(_binom_poly(4, 12))))
    return 16, 6, tuple(counts_from_numerator(z0, i) for i in range(1, 7))


@pytest.mark.parametrize("data", [KLEIN, HERMITIAN3, (4, 1, (9,)), _hermitian4()],
                         ids=["klein", "hermitian3", "hermitian2", "hermitian4"])
def test_round_trip(data):
    q, g, counts = data
    z = numerator_from_counts(q, g, counts)
    assert tuple(counts_from_numerator(z, i) for i in range(1, g + 1)) == tuple(counts)
    for i in range(1, g + 1):
        assert z.a[2 * g - i] == q ** (g - i) * z.a[i]
    assert check_root_moduli(z) < 1e-6


def test_counts_match_root_oracle():
    for q, g, counts in (KLEIN, HERMITIAN3):
        z = numerator_from_counts(q, g, counts)
        high_first = list(z.a)  # h reversed is a: high-degree coefficient of h is a_0
        for n in range(1, 6):
            assert counts_from_numerator(z, n) == counts_via_roots(high_first, q, n)


def test_klein_over_f8():
    assert counts_from_numerator(numerator_from_counts(*KLEIN), 3) == 24


def test_suzuki_counts():
    z = _suzuki()
    assert [counts_from_numerator(z, i) for i in (1, 2, 3, 4)] == [65, 65, 65, 5889]
    assert check_root_moduli(z) < 1e-6
    assert classify(q=8, g=14, n1=65)[0] == "none"


def test_squarefree_split():
    # (t+3)^6 is one factor of multiplicity 6
    facs = squarefree_factors(_binom_poly(3, 6)[::-1])
    assert [m for _, m in facs] == [6]
    assert len(root_moduli(numerator_from_counts(*HERMITIAN3))) == 6


def test_inconsistent_counts():
    with pytest.raises(InconsistencyError):
        numerator_from_counts(2, 3, (3, 6, 24))
    with pytest.raises(UsageError):
        numerator_from_counts(2, 3, (3, 5))
    with pytest.raises(UsageError):
        numerator_from_counts(6, 1, (3,))
    with pytest.raises(UsageError):
        counts_from_numerator(numerator_from_counts(*KLEIN), 0)


def test_classify():
    assert classify(numerator_from_counts(*HERMITIAN3))[0] == "maximal"
    label, notes = classify(q=8, g=3, n1=24)
    assert label == "serre-maximal"
    assert classify(q=9, g=3, n1=10 - 18)[0] == "minimal"
    assert classify(q=8, g=3, n1=9 - 15)[0] == "serre-minimal"
    assert classify(q=9, g=3, n1=11)[0] == "none"
    label, notes = classify(q=5, g=0, n1=6)
    assert label == "maximal" and notes
    with pytest.raises(InconsistencyError):
        classify(q=5, g=0, n1=5)


def test_maximal_count_with_wrong_h_is_caught():
    z = ZetaData(9, 1, (16,), (1, 5, 9))
    with pytest.raises(InconsistencyError):
        classify(z)


def test_bound_table():
    t = bound_table(8, 3)
    assert t["serre_upper"] == 24
    assert t["floor_2sqrt_q"] == 5
    t = bound_table(9, 3)
    assert t["weil_upper"] == 28
    assert t["hermitian_genus_max"] == 3 and t["maximal_admissible"]
    assert not bound_table(9, 4)["maximal_admissible"]
    z = bound_table(5, 0)
    assert z["serre_upper"] == z["serre_lower"] == 6
    assert bound_table(8, 1, n1=2)["lewittes"] == 17
    assert bound_table(8, 3)["serre_maximal_genus_max"] == Fraction(56, 14)
    with pytest.raises(UsageError):
        bound_table(12, 1)


# ---------------------------------------------------------------------------
# explicit formula


S2, S3 = QuadExt.sqrt(2), QuadExt.sqrt(3)


def test_explicit_formula_values():
    c2 = [S2 / 2, QuadExt(Fraction(1, 4))]
    assert explicit_formula_bound(8, 14, c2) == QuadExt(Fraction(65))
    assert explicit_formula_bound(32, 124, c2) == QuadExt(Fraction(1025))
    q0, q = 3, 27
    g = 3 * q0 * (q - 1) * (q + q0 + 1) // 2
    c4 = [S3 / 2, QuadExt(Fraction(7, 12)), S3 / 6, QuadExt(Fraction(1, 12))]
    assert explicit_formula_bound(q, g, c4) == QuadExt(Fraction(19684))


@pytest.mark.parametrize("q", [4, 8, 9, 27, 32])
@pytest.mark.parametrize("g", [0, 1, 5, 14])
def test_explicit_formula_recovers_weil(q, g):
    got = explicit_formula_bound(q, g, [Fraction(1, 2)])
    assert got == q + 1 + 2 * QuadExt.sqrt(q) * g


def test_explicit_formula_errors():
    with pytest.raises(InconsistencyError):
        explicit_formula_bound(8, 3, [QuadExt(Fraction(1))])
    with pytest.raises(UsageError):
        explicit_formula_bound(8, 3, [])
    # 1 + cos(theta) touches 0 at pi, which the grid only approaches
    assert 0 <= positivity_min([Fraction(1, 2)]) < 1e-6


# ---------------------------------------------------------------------------
# quadratic extension arithmetic

fr = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def quads(draw, m=st.sampled_from([2, 3, 5])):
    return QuadExt(draw(fr), draw(fr), draw(m))


@given(st.sampled_from([2, 3, 7]).flatmap(lambda m: st.tuples(*[quads(st.just(m))] * 3)))
def test_quadext_ring_axioms(xyz):
    x, y, z = xyz
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x - x == 0 * x
    if x != 0 * x:
        assert x * x.inverse() == 1 + 0 * x
        assert (y / x) * x == y
    assert x.norm() == (x * x.conjugate()).a


@given(quads())
def test_quadext_order_and_floor(x):
    v = float(x)
    assert x.sign() == (v > 0) - (v < 0) or abs(v) < 1e-12
    f = x.floor()
    assert f <= v + 1e-9 and v < f + 1 + 1e-9
    assert QuadExt(Fraction(f)) <= x < QuadExt(Fraction(f + 1))


def test_quadext_basics():
    assert S2 * S2 == 2
    assert str(S2 / 2)
    assert QuadExt.sqrt(12) == 2 * S3
    assert QuadExt.sqrt(16) == 4
    assert (25 - 5 / QuadExt.sqrt(25) * 0).floor() == 25
    with pytest.raises(UsageError):
        QuadExt(Fraction(1), Fraction(1), 4)
