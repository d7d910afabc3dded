"""Classification of 4-torsion Kummer structures.

For 4-torsion K the doubling image 2K is a subgroup of K[2], K[2] acts on
K by ``a x -> (a+x) (a+x)``, and after choosing representatives ``e_x``
(``2 e_x = x``) the table is determined by the pairing

    e_x e_y -> (e_{x+y} + eps(x, y)) *      eps(x, y) in K[2] / <x, y>.

K[2] elements are handled through their F2 coordinate masks
(``TwoTorsionGroup.coords``); K elements through carrier indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterable, Mapping, Sequence

from . import f2
from .abelian import make_group
from .core import KummerStructure, TwoTorsionGroup, two_torsion_group
from .errors import DomainError, InvariantError
from .recovery import Classification


@dataclass(frozen=True)
class TorsorData:
    structure: KummerStructure
    t2: TwoTorsionGroup
    two_k: tuple[int, ...]
    reps: Mapping[int, int]

    def act(self, a: int, x: int) -> int:
        """a + x for x in K[2]."""
        c, d = self.structure.table[a][x]
        if c != d:
            raise InvariantError(f"{self.structure.fmt(a, x)} is not a doubleton of equal entries")
        return c

    def mask(self, x: int) -> int:
        return self.t2.coords[x]

    def elem(self, mask: int) -> int:
        return self.t2.element_of[mask]

    def rep(self, x: int) -> int:
        return self.reps[x]

    def offsets(self, a: int) -> list[int]:
        """Masks u with e_{2a} + u = a."""
        e = self.reps[self.structure.double[a]]
        return [m for m, u in self.t2.element_of.items() if self.act(e, u) == a]

    def offset(self, a: int) -> int:
        return min(self.offsets(a))

    @property
    def two_k_masks(self) -> list[int]:
        return [self.mask(x) for x in self.two_k]


def _require_four_torsion(K: KummerStructure) -> None:
    K.require_verified()
    if not K.is_four_torsion():
        raise DomainError("structure is not 4-torsion")


def torsor(K: KummerStructure, reps: Mapping[int, int] | None = None) -> TorsorData:
    """The K[2]-action, 2K, and representatives e_x (default: smallest index, e_0 = 0).

    All action laws are verified exhaustively.
    """
    _require_four_torsion(K)
    t2 = two_torsion_group(K)
    z, dbl = K.zero, K.double
    two_k = tuple(sorted(set(dbl)))
    masks = {t2.coords[x] for x in two_k}
    if f2.span(masks) != masks:
        raise InvariantError("2K is not a subgroup of K[2]")

    chosen = {z: z}
    for a in range(len(K)):
        chosen.setdefault(dbl[a], a)
    if reps is not None:
        chosen.update(reps)
    for x, e in chosen.items():
        if x not in two_k or dbl[e] != x:
            raise DomainError(f"invalid representative {K.label(e)} for {K.label(x)}")
    if chosen[z] != z:
        raise DomainError("e_0 must be the zero element")

    td = TorsorData(K, t2, two_k, dict(chosen))
    _verify_action(td)
    return td


def _verify_action(td: TorsorData) -> None:
    K, t2 = td.structure, td.t2
    dbl = K.double
    for a in range(len(K)):
        if td.act(a, t2.zero) != a:
            raise InvariantError("a + 0 != a")
        for x in t2.elements:
            ax = td.act(a, x)
            if dbl[ax] != dbl[a]:
                raise InvariantError("2(a + x) != 2a")
            for y in t2.elements:
                if td.act(ax, y) != td.act(a, t2.add(x, y)):
                    raise InvariantError("(a + x) + y != a + (x + y)")
        offs = td.offsets(a)
        want = 1 if dbl[a] == K.zero else 2
        if len(offs) != want or (want == 2 and offs[0] ^ offs[1] != td.mask(dbl[a])):
            raise InvariantError(f"decomposition of {K.label(a)} over e_(2a) is not unique mod 2a")


def _eps_mask(td: TorsorData, xm: int, ym: int) -> int:
    """eps for masks xm, ym in 2K, reduced modulo <x, y>."""
    K = td.structure
    ex, ey = td.reps[td.elem(xm)], td.reps[td.elem(ym)]
    a = K.table[ex][ey][0]
    if td.mask(K.double[a]) != xm ^ ym:
        raise InvariantError("2a != x + y in the eps pairing")
    return f2.reduce_mod(td.offset(a), (xm, ym))


def epsilon(K: KummerStructure, td: TorsorData, x: int, y: int) -> int:
    """Canonical representative in K[2] of the coset eps_{x,y} + <x, y>."""
    if x not in td.two_k or y not in td.two_k:
        raise DomainError("epsilon is defined on 2K only")
    return td.elem(_eps_mask(td, td.mask(x), td.mask(y)))


def _disjoint_subsets(n: int, k: int) -> Iterable[tuple[int, ...]]:
    """k-tuples of pairwise disjoint nonempty subsets of range(n) as bitmasks."""
    for labels in product(range(k + 1), repeat=n):
        parts = [0] * k
        for i, lab in enumerate(labels):
            if lab:
                parts[lab - 1] |= 1 << i
        if all(parts):
            yield tuple(parts)


def _combine(basis_masks: Sequence[int], subset: int) -> int:
    v = 0
    for i, m in enumerate(basis_masks):
        if (subset >> i) & 1:
            v ^= m
    return v


def is_standard(td: TorsorData, basis: Sequence[int]) -> bool:
    """Check the standard-form conditions for a basis (given as K[2] elements)."""
    bm = [td.mask(x) for x in basis]
    n = len(bm)
    for sa, sb in _disjoint_subsets(n, 2):
        if _eps_mask(td, _combine(bm, sa), _combine(bm, sb)):
            return False
    for sa, sb, sc in _disjoint_subsets(n, 3):
        a, b, c = (_combine(bm, s) for s in (sa, sb, sc))
        if f2.reduce_mod(_eps_mask(td, a ^ b, a ^ c), (a, b, c)):
            return False
    return True


def standardize(K: KummerStructure, td: TorsorData, basis: Sequence[int]) -> TorsorData:
    """Re-choose e_x on X = <basis> so eps vanishes on disjoint basis sums.

    Inductive over the basis: e_{x_n} is kept; for a in X' = <x_1..x_{n-1}>
    the rep e_{a+x_n} is taken from kappa{e_a, e_{x_n}} (so eps(a, x_n) = 0)
    and shifted by x_n when needed to kill eps(a + x_n, T' + a), where T'
    is the sum of the earlier basis vectors.  T' itself is handled first.
    """
    masks = [td.mask(x) if x in td.t2 else -1 for x in basis]
    two_k = set(td.two_k_masks)
    if any(m not in two_k for m in masks):
        raise DomainError("basis must lie in 2K")
    if not f2.is_independent(masks):
        raise DomainError("dependent basis")

    reps = dict(td.reps)
    work = TorsorData(K, td.t2, td.two_k, reps)

    def set_rep(mask: int, e: int) -> None:
        reps[work.elem(mask)] = e

    for k, xn in enumerate(masks):
        prev = masks[:k]
        t_prime = _combine(prev, (1 << k) - 1)
        span_prev = sorted(f2.span(prev))
        order = ([t_prime] if k else []) + [a for a in span_prev if a not in (0, t_prime)]
        e_xn = reps[work.elem(xn)]
        for a in order:
            c, _ = K.table[reps[work.elem(a)]][e_xn]
            set_rep(a ^ xn, c)
            if a == t_prime:
                continue
            u, v = a ^ xn, t_prime ^ a
            if _eps_mask(work, u, v):
                set_rep(u, work.act(c, work.elem(xn)))
                if _eps_mask(work, u, v):
                    raise InvariantError("standard form: neither choice of representative works")

    out = TorsorData(K, td.t2, td.two_k, dict(reps))
    if not is_standard(out, basis):
        raise InvariantError("standardize produced a non-standard pairing")
    return out


def two_k_basis(td: TorsorData) -> list[int]:
    """Greedy F2 basis of 2K in carrier order."""
    eb = f2.EchelonBasis()
    out = []
    for x in td.two_k:
        if eb.add(td.mask(x)):
            out.append(x)
    return out


def ind_for_basis(K: KummerStructure, td: TorsorData, basis: Sequence[int]) -> int:
    """ind_X for X = <a, b, c> via eps on U = <a+b, a+c> after standardisation."""
    std = standardize(K, td, basis)
    a, b, c = (std.mask(x) for x in basis)
    # the six rank-2 subgroups other than U must have trivial eps
    for u, v in ((a, b), (a, c), (b, c), (a, b ^ c), (b, a ^ c), (c, a ^ b)):
        if _eps_mask(std, u, v):
            raise InvariantError("standard form leaves eps nonzero outside U")
    return 0 if _eps_mask(std, a ^ b, a ^ c) == 0 else 1


def rank3_subgroups(td: TorsorData) -> list[frozenset[int]]:
    masks = sorted(td.two_k_masks)
    seen = []
    for trip in combinations([m for m in masks if m], 3):
        if f2.is_independent(list(trip)):
            s = frozenset(f2.span(trip))
            if s not in seen:
                seen.append(s)
    return seen


def ind_of(K: KummerStructure, exhaustive: bool = False, td: TorsorData | None = None) -> int | None:
    """The ind bit of a 4-torsion, non-2-torsion K; None when rank 2K < 3.

    With ``exhaustive`` the value is recomputed for every rank-3 subgroup
    and every ordered basis of it, and all results must agree.
    """
    _require_four_torsion(K)
    if K.is_two_torsion():
        raise DomainError("ind is defined for structures that are not 2-torsion")
    td = td or torsor(K)
    basis = two_k_basis(td)
    if len(basis) < 3:
        return None
    ind = ind_for_basis(K, td, basis[:3])
    if exhaustive:
        for X in rank3_subgroups(td):
            for trip in permutations(sorted(m for m in X if m), 3):
                if not f2.is_independent(list(trip)):
                    continue
                other = ind_for_basis(K, td, [td.elem(m) for m in trip])
                if other != ind:
                    raise InvariantError(f"ind differs between bases: {ind} vs {other}")
    return ind


def classify_4torsion(K: KummerStructure) -> Classification:
    _require_four_torsion(K)
    if K.is_two_torsion():
        raise DomainError("structure is 2-torsion")
    td = torsor(K)
    r = td.t2.rank
    a = len(two_k_basis(td))
    ind = ind_of(K, td=td)
    kummer = make_group([4] * a + [2] * (r - a)) if a <= 2 or ind == 1 else None
    twisted = (a, r - a) if a <= 2 or ind == 0 else None
    return Classification(r, a, ind, kummer, twisted)
