from __future__ import annotations

from collections import Counter

import pytest

from kummer.abelian import (
    abelian_groups,
    element_label,
    kummer_of,
    make_group,
    make_twisted,
    parse_group,
    parse_involution,
    shift_involution,
    standard_twisted,
    twisted_invariants,
    twisted_kummer_of,
)
from kummer.errors import GroupError


def order_profile(G):
    """Multiset of element orders, an isomorphism invariant of finite abelian groups."""
    def order(x):
        k, y = 1, x
        while y != G.zero():
            y = G.add(y, x)
            k += 1
        return k

    return Counter(order(x) for x in G.elements())


@pytest.mark.parametrize(
    "factors, expected",
    [([2, 4], (4, 2)), ([4, 2], (4, 2)), ([6, 4], (12, 2)), ([2, 3], (6,)), ([3, 3], (3, 3)), ([], ())],
)
def test_make_group_normalises(factors, expected):
    assert make_group(factors).factors == expected


def test_normalisation_preserves_isomorphism_type():
    # the order profile of the direct product must survive normalisation
    from itertools import product

    for raw in ([2, 4], [6, 4], [2, 2, 3], [10, 4, 6]):
        elems = list(product(*(range(d) for d in raw)))

        def order(x):
            from math import gcd, lcm

            o = 1
            for a, d in zip(x, raw):
                o = lcm(o, d // gcd(a, d))
            return o

        assert Counter(order(x) for x in elems) == order_profile(make_group(raw))


@pytest.mark.parametrize("bad", [[0, 2], [1], [-3], [2.0]])
def test_invalid_factors(bad):
    with pytest.raises(GroupError):
        make_group(bad)


def test_parse_group():
    assert parse_group("4,4,2").factors == (4, 4, 2)
    assert parse_group("").order == 1
    with pytest.raises(GroupError):
        parse_group("4,x")
    with pytest.raises(GroupError):
        parse_group("0,2")


@pytest.mark.parametrize("n, count", [(1, 1), (8, 3), (16, 5), (24, 3), (32, 7), (36, 4), (12, 2)])
def test_abelian_group_counts(n, count):
    groups = abelian_groups(n)
    assert len(groups) == count
    assert all(G.order == n for G in groups)
    assert len({G.factors for G in groups}) == count


def test_group_operations():
    G = make_group([4, 2])
    x, y = (3, 1), (2, 1)
    assert G.add(x, y) == (1, 0)
    assert G.sub(x, y) == (1, 0)
    assert G.neg(x) == (1, 1)
    assert G.mul(2, x) == (2, 0)
    assert len(G.two_torsion()) == 4
    assert str(G) == "Z/4 + Z/2" and G.notation() == "4,2"


def test_kummer_of_z4_table():
    K = kummer_of(make_group([4]))
    assert K.elements == ("0", "1", "2")
    expected = {("0", "0"): ("0", "0"), ("1", "1"): ("0", "2"), ("1", "2"): ("1", "1"), ("2", "2"): ("0", "0")}
    for (a, b), (c, d) in expected.items():
        assert K.table[K[a]][K[b]] == tuple(sorted((K[c], K[d])))


@pytest.mark.parametrize("factors", [[5], [4, 2], [8], [3, 3], [6, 2], [2, 2, 2], [12], [4, 4]])
def test_kummer_size(factors):
    G = make_group(factors)
    assert len(kummer_of(G)) == (G.order + len(G.two_torsion())) // 2


def test_element_labels():
    assert element_label((3,), (12,)) == "3"
    assert element_label((0, 1, 3), (4, 4, 4)) == "013"
    assert element_label((11, 3), (12, 4)) == "11.3"
    assert element_label((), ()) == "0"


def test_involution_validation():
    G = make_group([2, 2])
    with pytest.raises(GroupError):
        make_twisted(G, [[1, 1], [1, 1]])
    with pytest.raises(GroupError):
        make_twisted(make_group([4]), [[1]])
    with pytest.raises(GroupError):
        make_twisted(G, [[1, 0]])
    with pytest.raises(GroupError):
        parse_involution("01;1x")
    assert parse_involution("01;10") == ((0, 1), (1, 0))


@pytest.mark.parametrize("a, b", [(0, 0), (1, 0), (0, 3), (1, 1), (2, 0), (2, 2), (3, 0)])
def test_standard_twisted_invariants(a, b):
    T = standard_twisted(a, b)
    assert T.rank == 2 * a + b
    assert twisted_invariants(T) == (a, b)


def test_shift_involution_is_three_swaps():
    assert twisted_invariants(shift_involution(6, 3)) == (3, 0)


def test_twisted_kummer_sizes():
    # orbits of iota: fixed points count once, the rest pair up
    for a, b in [(1, 0), (1, 1), (2, 0), (3, 0), (0, 3)]:
        K = twisted_kummer_of(standard_twisted(a, b))
        k = 2 * a + b
        assert len(K) == (2**k + 2 ** (a + b)) // 2


def test_twisted_kummer_of_swap_matches_kummer_of_z4_under_explicit_bijection():
    K = kummer_of(make_group([4]))
    T = twisted_kummer_of(standard_twisted(1, 0))
    phi = {"0": "00", "1": "01", "2": "11"}
    for a in K.elements:
        for b in K.elements:
            c, d = K.table[K[a]][K[b]]
            img = tuple(sorted((T[phi[K.label(c)]], T[phi[K.label(d)]])))
            assert T.table[T[phi[a]]][T[phi[b]]] == img
