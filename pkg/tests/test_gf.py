import itertools

import pytest
from hypothesis import given, strategies as st

from ffcurves.errors import UsageError
from ffcurves.gf import (embed, embedding, enumerate_field, find_roots, first_irreducible, format_element,
                         frobenius, is_irreducible, make_field, parse_element, prime_power)
from checks import field_axioms, field_tables
from oracles import first_irreducible_bruteforce, irreducible_bruteforce

PRIME_POWERS_512 = [q for q in range(2, 513) if prime_power(q)]


def test_known_moduli():
    assert make_field(2, 2).modulus == (1, 1, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)
    assert make_field(2, 3).modulus == (1, 0, 1, 1)
    assert make_field(2, 4).modulus == (1, 0, 0, 1, 1)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)])
def test_modulus_is_lexicographically_first(p, k):
    assert first_irreducible(p, k) == first_irreducible_bruteforce(p, k)


@pytest.mark.parametrize("p,k", [(2, 4), (3, 3), (5, 2), (2, 6)])
def test_irreducibility_matches_bruteforce(p, k):
    for low in itertools.product(range(p), repeat=k):
        f = tuple(low) + (1,)
        assert is_irreducible(f, p) == irreducible_bruteforce(f, p)


def test_bad_inputs():
    with pytest.raises(UsageError):
        make_field(4, 1)
    with pytest.raises(UsageError):
        make_field(2, 0)
    with pytest.raises(ZeroDivisionError):
        make_field(3, 2).inv(0)


@pytest.mark.parametrize("q", PRIME_POWERS_512)
def test_field_axioms_exhaustive(q):
    field_axioms(q)


@pytest.mark.parametrize("q", [4, 8, 9, 25, 27, 49, 64, 81, 121, 125])
def test_scalar_ops_match_tables(q):
    F = make_field(*prime_power(q))
    M, A = field_tables(F)
    for a in range(q):
        for b in range(q):
            assert F.mul(a, b) == M[a, b] and F.add(a, b) == A[a, b]
            assert F.add(F.sub(a, b), b) == a
        if a:
            assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, q) == a
        assert F.pow(a, q) == F.dense_pow(a, q)


def test_large_field_without_tables_agrees():
    F = make_field(2, 17)
    assert not F.has_tables
    a, b, c = 12345, 99991, 77777
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.inv(a)) == 1
    assert F.pow(a, F.order) == a


@given(st.sampled_from([(2, 3), (3, 2), (5, 2), (2, 8), (7, 1), (3, 5)]), st.data())
def test_element_api(pk, data):
    F = make_field(*pk)
    a = F(data.draw(st.integers(0, F.order - 1).map(F.coeffs)))
    b = F(data.draw(st.integers(1, F.order - 1).map(F.coeffs)))
    assert (a * b) / b == a
    assert a - a == F.zero
    assert a ** F.order == a
    assert parse_element(F, format_element(F, a.code)) == a.code


def test_parse_and_format():
    F = make_field(3, 2)
    assert format_element(F, F.from_coeffs([1, 2])) == "2*g+1"
    assert parse_element(F, "2*g+1") == F.from_coeffs([1, 2])
    assert parse_element(F, "g^2") == F.from_coeffs([2])  # g^2 = -1
    assert parse_element(F, "-1") == 2
    with pytest.raises(UsageError):
        parse_element(F, "g**")


@pytest.mark.parametrize("src,tgt", [((2, 2), (2, 4)), ((2, 3), (2, 6)), ((3, 2), (3, 4)), ((2, 1), (2, 5))])
def test_embedding_is_ring_homomorphism(src, tgt):
    S, T = make_field(*src), make_field(*tgt)
    e = embedding(S, T)
    for a in range(S.order):
        for b in range(S.order):
            assert e(S.mul(a, b)) == T.mul(e(a), e(b))
            assert e(S.add(a, b)) == T.add(e(a), e(b))
    assert len({e(a) for a in range(S.order)}) == S.order
    assert all(T.in_subfield(e(a), S.k) for a in range(S.order))


def test_embed_root_of_source_modulus():
    z = embed(make_field(2, 2).elt(2), make_field(2, 4))
    assert z * z + z + 1 == z.ctx.zero


def test_frobenius():
    F = make_field(3, 4)
    a = F(F.coeffs(17))
    assert frobenius(a, 3) == a ** 3
    assert frobenius(frobenius(a, 9), 9) == a
    with pytest.raises(UsageError):
        frobenius(a, 6)


def test_find_roots_and_enumeration():
    F = make_field(2, 3)
    assert [r.code for r in find_roots([0, 1, 0, 1], F)] == [0, 1]  # Y^3 + Y
    assert [e.code for e in enumerate_field(F)] == list(range(8))
    G = make_field(5, 1)
    assert sorted(r.code for r in find_roots([-1, 0, 1], G)) == [1, 4]
