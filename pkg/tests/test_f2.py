from __future__ import annotations

from itertools import product

import pytest
from hypothesis import given, strategies as st

from kummer import f2


def brute_span(vectors):
    vs = list(vectors)
    out = set()
    for coeffs in product((0, 1), repeat=len(vs)):
        x = 0
        for c, v in zip(coeffs, vs):
            if c:
                x ^= v
        out.add(x)
    return out


vectors = st.lists(st.integers(min_value=0, max_value=63), max_size=6)


@given(vectors)
def test_rank_matches_span_size(vs):
    assert 2 ** f2.rank(vs) == len(brute_span(vs))


@given(vectors)
def test_span_is_brute_force_span(vs):
    assert f2.span(vs) == brute_span(vs)


@given(vectors, st.integers(min_value=0, max_value=63))
def test_reduce_mod_is_coset_invariant(vs, v):
    span = brute_span(vs)
    r = f2.reduce_mod(v, vs)
    assert (r ^ v) in span
    assert all(f2.reduce_mod(v ^ s, vs) == r for s in span)
    assert (r == 0) == (v in span)


def test_echelon_basis_add_and_contains():
    eb = f2.EchelonBasis()
    assert eb.add(0b011)
    assert eb.add(0b101)
    assert not eb.add(0b110)
    assert eb.contains(0b110) and not eb.contains(0b001)
    assert eb.rank == 2


def test_is_independent():
    assert f2.is_independent([1, 2, 4])
    assert not f2.is_independent([1, 2, 3])
    assert not f2.is_independent([0])


def test_matrix_helpers():
    swap = ((0, 1), (1, 0))
    assert f2.matmul(swap, swap) == f2.identity(2)
    assert f2.matvec(swap, (1, 0)) == (0, 1)
    assert f2.matrix_rank(f2.matadd(f2.identity(2), swap)) == 1
    m = ((1, 1, 0), (0, 1, 0), (0, 1, 1))
    assert f2.matmul(m, f2.inverse(m)) == f2.identity(3)


def test_inverse_of_singular_matrix_raises():
    with pytest.raises(ValueError):
        f2.inverse(((1, 1), (1, 1)))
