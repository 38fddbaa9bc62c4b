import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffcurves.errors import UsageError
from ffcurves.numsg import (buchweitz_check, classify_symmetry, from_gaps, from_generators, iter_semigroups,
                            parse_int_list, sumset, weight)
from oracles import semigroup_gaps_bruteforce

# number of numerical semigroups by genus
GENUS_COUNTS = [1, 1, 2, 4, 7, 12, 23, 39, 67]


def test_suzuki_semigroups():
    H = from_generators([8, 10, 12, 13])
    assert H.genus == 14
    assert H.frobenius_number == 27
    assert classify_symmetry(H)["class"] == "symmetric"
    assert from_generators([8, 11, 12, 13]).genus == 13


def test_buchweitz_example():
    H = from_gaps(parse_int_list("1..12,19,21,24,25"))
    assert H.genus == 16
    two = sumset(H, 2)
    assert two == set(range(2, 51)) - {39, 41, 47}
    res = buchweitz_check(H, 2)
    assert (res["card"], res["bound"], res["pass"]) == (46, 45, False)


def test_hyperelliptic_sumset_sizes():
    # gaps of <2, 2g+1> are the odd numbers below 2g, so n-fold sums form an
    # arithmetic progression of length n(g-1)+1
    for g in range(2, 12):
        H = from_generators([2, 2 * g + 1])
        for n in (2, 3, 4):
            res = buchweitz_check(H, n)
            assert res["card"] == n * (g - 1) + 1
            assert res["pass"]


def test_non_hyperelliptic_symmetric_attain_equality():
    seen = 0
    for g in range(3, 10):
        for H in iter_semigroups(g):
            info = classify_symmetry(H)
            if info["class"] != "symmetric" or info["hyperelliptic"]:
                continue
            seen += 1
            for n in (2, 3, 4):
                res = buchweitz_check(H, n)
                assert res["card"] == res["bound"], (H, n)
    assert seen > 20


def test_enumeration_counts():
    assert [sum(1 for _ in iter_semigroups(g)) for g in range(9)] == GENUS_COUNTS


@given(st.lists(st.integers(2, 30), min_size=1, max_size=4))
def test_gaps_match_bruteforce(gens):
    from math import gcd
    from functools import reduce
    if reduce(gcd, gens) != 1:
        gens = gens + [max(gens) + 1]
    H = from_generators(gens)
    bound = H.conductor + max(gens) + 2
    assert list(H.gaps) == semigroup_gaps_bruteforce(gens, bound)
    assert from_gaps(H.gaps).generators == H.generators
    assert all(n in H for n in H.generators)


def test_weight_formulas_random():
    rng = random.Random(20240611)
    done = 0
    while done < 500:
        gens = rng.sample(range(2, 42), rng.randint(2, 5))
        try:
            H = from_generators(gens)
        except UsageError:
            continue
        if H.genus > 20:
            continue
        weight(H)  # raises if the two formulas disagree
        done += 1


@pytest.mark.parametrize("g", range(1, 9))
def test_weight_bounds_exhaustive(g):
    for H in iter_semigroups(g):
        w = weight(H)
        assert 0 <= w <= g * (g - 1) // 2
        assert (w == g * (g - 1) // 2) == (2 in H)
        classify_symmetry(H)


def test_symmetry_classes():
    assert classify_symmetry(from_generators([3, 4]))["class"] == "symmetric"
    assert classify_symmetry(from_generators([3, 5, 7]))["class"] == "quasi-symmetric"
    assert classify_symmetry(from_generators([4, 5, 11]))["class"] == "neither"
    info = classify_symmetry(from_generators([2, 11]))
    assert info["hyperelliptic"] and info["weight"] == 10


def test_semigroup_accessors():
    H = from_generators([3, 5])
    assert H.gaps == (1, 2, 4, 7)
    assert H.non_gaps(4) == [3, 5, 6, 8]
    assert H.n(0) == 0 and H.n(2) == 5
    assert H.conductor == 8 and H.multiplicity == 3
    N0 = from_generators([1])
    assert N0.genus == 0 and N0.frobenius_number == -1


def test_errors():
    with pytest.raises(UsageError, match="gcd"):
        from_generators([4, 6])
    with pytest.raises(UsageError, match="not a semigroup"):
        from_gaps([1, 3, 4])  # 2 + 2 = 4
    with pytest.raises(UsageError):
        from_gaps([0, 1])
    with pytest.raises(UsageError):
        buchweitz_check(from_generators([2, 3]), 1)
    with pytest.raises(UsageError):
        parse_int_list("3..1")
    assert parse_int_list("1..3, 7") == [1, 2, 3, 7]
