"""Recover the group (or twisted group) behind a Kummer structure from its strings."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import strings as st
from .abelian import FinAbGroup, _prime_factors, invariant_factors_from_primary, make_group
from .core import KummerStructure, two_torsion_group
from .errors import DomainError, InvariantError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Classification:
    two_torsion_rank: int
    two_k_rank: int
    ind: Optional[int] = None
    kummer_of: Optional[FinAbGroup] = None
    twisted_of: Optional[tuple[int, int]] = None
    generator_report: dict[str, tuple[bool, bool]] = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "two_torsion_rank": self.two_torsion_rank,
            "two_k_rank": self.two_k_rank,
            "ind": self.ind,
            "kummer_of": None if self.kummer_of is None else self.kummer_of.notation(),
            "twisted_of": None if self.twisted_of is None else {"a": self.twisted_of[0], "b": self.twisted_of[1]},
        }


class StringGroup:
    """K_g with a binary operation computed by string arithmetic.

    ``table[i][j]`` is the index of ``elements[i] op elements[j]``, or None
    where the operation is undefined.
    """

    def __init__(self, K: KummerStructure, g: int, op: str = "add", table=None):
        self.structure = K
        self.g = g
        self.op = op
        self.elements = st.all_strings(K, g)
        self.index = {s.key: i for i, s in enumerate(self.elements)}
        self.zero = self.index[st.zero_string(K, g).key]
        self.rho = [self.index[st.reverse(s).key] for s in self.elements]
        if table is None:
            table = op_tables(K, g, (op,), self.elements, self.index)[op]
        self.table: list[list[Optional[int]]] = table

    def __len__(self) -> int:
        return len(self.elements)

    def is_total(self) -> bool:
        return all(x is not None for row in self.table for x in row)

    def law_failures(self) -> list[str]:
        """Names of the abelian-group laws (with o, rho) that fail."""
        n, T, z = len(self), self.table, self.zero
        if not self.is_total():
            return ["totality"]
        bad = []
        if any(T[i][j] != T[j][i] for i in range(n) for j in range(n)):
            bad.append("commutativity")
        if any(T[i][z] != i for i in range(n)):
            bad.append("identity")
        if any(T[i][self.rho[i]] != z for i in range(n)):
            bad.append("inverse")
        if not self._associative():
            bad.append("associativity")
        return bad

    def _associative(self) -> bool:
        """Light's test: (xy)s = x(ys) for s in a generating set suffices."""
        n, T = len(self), self.table
        return all(T[T[i][j]][s] == T[i][T[j][s]] for s in self._generators() for i in range(n) for j in range(n))

    def _generators(self) -> list[int]:
        T, gens = self.table, []
        closure = {self.zero}
        for x in range(len(self)):
            if x in closure:
                continue
            gens.append(x)
            frontier = [x]
            closure.add(x)
            while frontier:
                y = frontier.pop()
                for z in list(closure):
                    for w in (T[y][z], T[z][y]):
                        if w not in closure:
                            closure.add(w)
                            frontier.append(w)
        return gens

    def twisted_law_failures(self) -> list[str]:
        """Laws of a twisted group: 2-torsion group with rho an involutive automorphism."""
        n, T, z, rho = len(self), self.table, self.zero, self.rho
        if not self.is_total():
            return ["totality"]
        bad = []
        if any(T[i][j] != T[j][i] for i in range(n) for j in range(n)):
            bad.append("commutativity")
        if any(T[i][z] != i for i in range(n)):
            bad.append("identity")
        if any(T[i][i] != z for i in range(n)):
            bad.append("2-torsion")
        if not self._associative():
            bad.append("associativity")
        if any(rho[rho[i]] != i for i in range(n)):
            bad.append("involution")
        if any(rho[T[i][j]] != T[rho[i]][rho[j]] for i in range(n) for j in range(n)):
            bad.append("automorphism")
        return bad

    def multiple(self, k: int, i: int) -> int:
        acc, base = self.zero, i
        while k:
            if k & 1:
                acc = self.table[acc][base]
            base = self.table[base][base]
            k >>= 1
        return acc

    def kummer_map_is_isomorphism(self) -> bool:
        """alpha -> alpha_0 induces an isomorphism K(K_g) -> K."""
        K = self.structure
        img = {}
        for i, s in enumerate(self.elements):
            cls = frozenset((i, self.rho[i]))
            if img.setdefault(cls, s.a0) != s.a0:
                return False
        if sorted(img.values()) != list(range(len(K))):
            return False
        rep = {i: self.elements[i].a0 for i in range(len(self))}
        for i in range(len(self)):
            for j in range(len(self)):
                s, d = self.table[i][j], self.table[i][self.rho[j]]
                got = K.table[rep[i]][rep[j]]
                want = tuple(sorted((rep[s], rep[d])))
                if got != want:
                    return False
        return True


class TwistedStringGroup(StringGroup):
    def __init__(self, K: KummerStructure, g: int, table=None):
        super().__init__(K, g, op="oadd", table=table)

    def involution_image_rank(self) -> int:
        """F2-rank of (1 + rho) K_g."""
        img = {self.table[i][self.rho[i]] for i in range(len(self))}
        return len(img).bit_length() - 1


def op_tables(
    K: KummerStructure, g: int, ops, elements=None, index=None, check_rules: bool = False
) -> dict[str, list[list[Optional[int]]]]:
    """Operation tables on K_g for each op in ``ops``, one colouring window per pair.

    The diamond-rule assertion is off by default here; acceptance of every
    entry still re-verifies its defining relation over the whole window.
    """
    elements = st.all_strings(K, g) if elements is None else elements
    index = {s.key: i for i, s in enumerate(elements)} if index is None else index
    n = len(elements)
    tables = {op: [[None] * n for _ in range(n)] for op in ops}
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            window = st.colour_window(a, b, check_rules)
            for op in ops:
                r = st.combine(a, b, op, window)
                tables[op][i][j] = None if r is None else index[r.key]
    return tables


def string_groups(K: KummerStructure, g: int) -> tuple[StringGroup | None, TwistedStringGroup | None]:
    """build_string_group and build_twisted_string_group sharing one pass over the windows."""
    _require_generator(K, g)
    tables = op_tables(K, g, ("add", "oadd"))
    return _checked_group(StringGroup(K, g, "add", tables["add"])), _checked_twisted(TwistedStringGroup(K, g, tables["oadd"]))


def pick_generator(K: KummerStructure) -> int | None:
    """First element with 4g != 0, else first with 2g != 0, else None."""
    K.require_verified()
    z, dbl = K.zero, K.double
    for a in range(len(K)):
        if dbl[dbl[a]] != z:
            return a
    for a in range(len(K)):
        if dbl[a] != z:
            return a
    return None


def _require_generator(K: KummerStructure, g: int) -> None:
    K.require_verified()
    if K.double[g] == K.zero:
        raise DomainError(f"generator {K.label(g)} is 2-torsion")


def build_string_group(K: KummerStructure, g: int) -> StringGroup | None:
    """(K_g, +, o, rho) if it is an abelian group, else None.

    When ``4g != 0`` a group is guaranteed and failure raises InvariantError.
    """
    _require_generator(K, g)
    return _checked_group(StringGroup(K, g, "add"))


def _checked_group(sg: StringGroup) -> StringGroup | None:
    K, g = sg.structure, sg.g
    bad = sg.law_failures()
    if bad:
        if K.double[K.double[g]] != K.zero:
            raise InvariantError(f"string group with 4g != 0 fails: {bad}")
        log.debug("string group for g=%s fails %s", K.label(g), bad)
        return None
    return sg


def build_twisted_string_group(K: KummerStructure, g: int) -> TwistedStringGroup | None:
    _require_generator(K, g)
    return _checked_twisted(TwistedStringGroup(K, g))


def _checked_twisted(tg: TwistedStringGroup) -> TwistedStringGroup | None:
    bad = tg.twisted_law_failures()
    if bad:
        log.debug("twisted string group for g=%s fails %s", tg.structure.label(tg.g), bad)
        return None
    return tg


def invariant_factors(group: StringGroup) -> FinAbGroup:
    """Invariant factors from the sizes of the p^k-torsion subgroups."""
    n = len(group)
    primary: dict[int, list[int]] = {}
    for p, e in _prime_factors(n).items():
        sizes = [1]
        k = 1
        while sizes[-1] < p**e:
            q = p**k
            sizes.append(sum(1 for i in range(n) if group.multiple(q, i) == group.zero))
            k += 1
        # number of cyclic p-factors of exponent >= k is log_p(|G[p^k]| / |G[p^(k-1)]|)
        ge = [_log(sizes[k] // sizes[k - 1], p) for k in range(1, len(sizes))]
        exps = [sum(1 for c in ge if c > i) for i in range(ge[0])] if ge else []
        primary[p] = exps
    return make_group([]) if n == 1 else FinAbGroup(tuple(invariant_factors_from_primary(primary)))


def _log(x: int, p: int) -> int:
    k = 0
    while x > 1:
        if x % p:
            raise InvariantError("torsion subgroup size is not a prime power")
        x //= p
        k += 1
    return k


def twisted_group_invariants(tg: TwistedStringGroup) -> tuple[int, int]:
    a = tg.involution_image_rank()
    r = len(tg).bit_length() - 1
    return a, r - 2 * a


def _two_k_rank(K: KummerStructure) -> int:
    t2 = two_torsion_group(K)
    return t2.span_rank({d for d in K.double if d in t2})


def recover(
    K: KummerStructure,
    generator: int | None = None,
    all_generators: bool = False,
) -> Classification:
    """Classify K and recover its group and/or twisted group.

    The string constructions are run for ``generator`` (default: the
    preferred generator) or for every non-2-torsion element when
    ``all_generators`` is set; their outcomes must agree with the
    classification.
    """
    K.require_verified()
    t2 = two_torsion_group(K)
    r = t2.rank
    if K.is_two_torsion():
        G = make_group([2] * r)
        return Classification(r, 0, None, G, (0, r))

    two_k = _two_k_rank(K)
    dbl, z = K.double, K.zero
    gens = [a for a in range(len(K)) if dbl[a] != z] if all_generators else [generator if generator is not None else pick_generator(K)]

    if not K.is_four_torsion():
        kummer = None
        report = {}
        for g in gens:
            sg, tw = string_groups(K, g)
            report[K.label(g)] = (sg is not None, tw is not None)
            if tw is not None:
                raise InvariantError("twisted string group exists for a non-4-torsion structure")
            if sg is None:
                raise InvariantError(f"string group fails for g={K.label(g)} in a non-4-torsion structure")
            G = invariant_factors(sg)
            if kummer is not None and G != kummer:
                raise InvariantError("generators recover different groups")
            kummer = G
        return Classification(r, two_k, None, kummer, None, report)

    from .fourtorsion import classify_4torsion

    cls = classify_4torsion(K)
    report = {}
    for g in gens:
        sg, tw = string_groups(K, g)
        report[K.label(g)] = (sg is not None, tw is not None)
        if (sg is not None) != (cls.kummer_of is not None) or (tw is not None) != (cls.twisted_of is not None):
            raise InvariantError(f"string constructions for g={K.label(g)} disagree with the 4-torsion classification")
        if sg is not None and invariant_factors(sg) != cls.kummer_of:
            raise InvariantError("string group differs from the predicted group")
        if tw is not None and twisted_group_invariants(tw) != cls.twisted_of:
            raise InvariantError("twisted string group differs from the predicted twisted group")
    return Classification(cls.two_torsion_rank, cls.two_k_rank, cls.ind, cls.kummer_of, cls.twisted_of, report)
