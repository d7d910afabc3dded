"""Standard collections of groups, twisted groups and structures used for checking."""

from __future__ import annotations

from typing import Iterator

from .abelian import (
    FinAbGroup,
    TwistedGroup,
    abelian_groups,
    kummer_of,
    shift_involution,
    standard_twisted,
    twisted_invariants,
    twisted_kummer_of,
)
from .core import KummerStructure


def groups_up_to(max_order: int) -> list[FinAbGroup]:
    """Every abelian group of order 1..max_order, up to isomorphism."""
    return [G for n in range(1, max_order + 1) for G in abelian_groups(n)]


def twisted_up_to(max_rank: int) -> list[TwistedGroup]:
    """One twisted group per conjugacy class of involution, ranks 0..max_rank.

    Involutions of (Z/2)^k are classified by a = rank(1 + iota), so the
    standard ((Z/2)^2, iota_2)^a + (Z/2, 1)^(k-2a) cover every class.
    """
    return [standard_twisted(a, k - 2 * a) for k in range(max_rank + 1) for a in range(k // 2 + 1)]


def named_structures(max_order: int = 32, max_rank: int = 6, max_size: int | None = None) -> Iterator[tuple[str, KummerStructure]]:
    """``("K(4,2)", K)`` and ``("tK(a,b)", K)`` pairs, optionally capped by |K|."""
    for G in groups_up_to(max_order):
        if max_size is not None and (G.order + len(G.two_torsion())) // 2 > max_size:
            continue
        yield f"K({G.notation() or '0'})", kummer_of(G)
    for T in twisted_up_to(max_rank):
        a, b = twisted_invariants(T)
        if max_size is not None and (2**T.rank + 2 ** (a + b)) // 2 > max_size:
            continue
        yield f"tK({a},{b})", twisted_kummer_of(T)


def shift_structure() -> KummerStructure:
    """tK((Z/2)^6, iota) with iota moving each basis vector three places along."""
    return twisted_kummer_of(shift_involution(6, 3))
