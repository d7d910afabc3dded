"""Classification, isomorphism testing, and exhaustive enumeration of small structures."""

from __future__ import annotations

import csv
import io
import time
from itertools import permutations, product
from typing import Iterable, Sequence, TextIO

from .core import KummerStructure, verify_axioms
from .errors import DomainError
from .recovery import Classification, recover

__all__ = [
    "Classification",
    "classify",
    "are_isomorphic",
    "enumerate_structures",
    "canonical_form",
    "census_rows",
    "write_census",
    "q8_structure",
    "MAX_ENUMERATION_SIZE",
]

MAX_ENUMERATION_SIZE = 5


def classify(K: KummerStructure, all_generators: bool = False) -> Classification:
    """Which group and/or twisted group K is the Kummer of."""
    return recover(K, all_generators=all_generators)


# ---------------------------------------------------------------- isomorphism


def _depth(K: KummerStructure, a: int) -> tuple[int, int]:
    """(steps until the doubling orbit of a repeats, length of the cycle reached)."""
    seen: dict[int, int] = {}
    x, k = a, 0
    while x not in seen:
        seen[x] = k
        x = K.double[x]
        k += 1
    return seen[x], k - seen[x]


def _refine(structures: Sequence[KummerStructure], rounds: int | None = None) -> list[list[int]]:
    """Colour refinement run jointly, so colours are comparable across structures."""
    cols = [[hash(_depth(K, a)) for a in range(len(K))] for K in structures]
    cols = _compress(cols)
    n_classes = len({c for cs in cols for c in cs})
    for _ in range(rounds if rounds is not None else max((len(K) for K in structures), default=0)):
        sigs = []
        for K, cs in zip(structures, cols):
            T = K.table
            row_sigs = []
            for a in range(len(K)):
                nb = sorted((cs[b], min(cs[c], cs[d]), max(cs[c], cs[d])) for b, (c, d) in enumerate(T[a]))
                row_sigs.append((cs[a], tuple(nb)))
            sigs.append(row_sigs)
        cols = _compress(sigs)
        m = len({c for cs in cols for c in cs})
        if m == n_classes:
            break
        n_classes = m
    return cols


def _compress(sigs: list[list]) -> list[list[int]]:
    ids: dict = {}
    for s in sorted({x for row in sigs for x in row}, key=repr):
        ids[s] = len(ids)
    return [[ids[x] for x in row] for row in sigs]


class _Search:
    """Backtracking for a kappa-preserving bijection with forced propagation."""

    def __init__(self, K1: KummerStructure, K2: KummerStructure, c1, c2, deadline: float | None):
        self.K1, self.K2 = K1, K2
        self.c1, self.c2 = c1, c2
        n = len(K1)
        self.fwd: list[int | None] = [None] * n
        self.bwd: list[int | None] = [None] * n
        self.assigned: list[int] = []
        self.deadline = deadline
        self.order = sorted(range(n), key=lambda a: (sum(1 for x in c1 if x == c1[a]), a))

    def _bind(self, a: int, b: int, queue: list[int]) -> bool:
        fa, gb = self.fwd[a], self.bwd[b]
        if fa is not None or gb is not None:
            return fa == b and gb == a
        if self.c1[a] != self.c2[b]:
            return False
        self.fwd[a], self.bwd[b] = b, a
        self.assigned.append(a)
        queue.append(a)
        return True

    def _propagate(self, queue: list[int]) -> bool:
        T1, T2 = self.K1.table, self.K2.table
        while queue:
            a = queue.pop()
            fa = self.fwd[a]
            for b in list(self.assigned):
                c, d = T1[a][b]
                c2, d2 = T2[fa][self.fwd[b]]
                if (c == d) != (c2 == d2):
                    return False
                if c == d:
                    if not self._bind(c, c2, queue):
                        return False
                    continue
                fc, fd = self.fwd[c], self.fwd[d]
                if fc is not None and fd is not None:
                    if {fc, fd} != {c2, d2}:
                        return False
                elif fc is not None:
                    if fc not in (c2, d2) or not self._bind(d, d2 if fc == c2 else c2, queue):
                        return False
                elif fd is not None:
                    if fd not in (c2, d2) or not self._bind(c, c2 if fd == d2 else d2, queue):
                        return False
                else:
                    # two unbound elements must land on the pair, colour-compatibly
                    if sorted((self.c1[c], self.c1[d])) != sorted((self.c2[c2], self.c2[d2])):
                        return False
        return True

    def _undo(self, mark: int) -> None:
        while len(self.assigned) > mark:
            a = self.assigned.pop()
            b = self.fwd[a]
            self.fwd[a] = None
            self.bwd[b] = None

    def run(self) -> list[int] | None:
        z1, z2 = self.K1.zero, self.K2.zero
        queue: list[int] = []
        if not self._bind(z1, z2, queue) or not self._propagate(queue):
            return None
        return self._extend()

    def _extend(self) -> list[int] | None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeoutError("isomorphism search exceeded its time budget")
        a = next((x for x in self.order if self.fwd[x] is None), None)
        if a is None:
            return list(self.fwd)  # type: ignore[arg-type]
        for b in range(len(self.K2)):
            if self.bwd[b] is not None or self.c2[b] != self.c1[a]:
                continue
            mark = len(self.assigned)
            queue: list[int] = []
            if self._bind(a, b, queue) and self._propagate(queue):
                found = self._extend()
                if found is not None:
                    return found
            self._undo(mark)
        return None


def is_isomorphism(K1: KummerStructure, K2: KummerStructure, phi: Sequence[int]) -> bool:
    n = len(K1)
    if len(K2) != n or sorted(phi) != list(range(n)):
        return False
    T1, T2 = K1.table, K2.table
    for a, b in K1.pairs():
        c, d = T1[a][b]
        x, y = phi[c], phi[d]
        if T2[phi[a]][phi[b]] != ((x, y) if x <= y else (y, x)):
            return False
    return True


def find_isomorphism(K1: KummerStructure, K2: KummerStructure, timeout: float | None = None) -> list[int] | None:
    """A bijection (as a list ``phi[a]``) transporting kappa of K1 to K2, or None.

    Raises TimeoutError if ``timeout`` seconds pass before the search ends.
    """
    K1.require_verified()
    K2.require_verified()
    if len(K1) != len(K2):
        return None
    c1, c2 = _refine([K1, K2])
    if sorted(c1) != sorted(c2):
        return None
    deadline = None if timeout is None else time.monotonic() + timeout
    phi = _Search(K1, K2, c1, c2, deadline).run()
    if phi is not None and not is_isomorphism(K1, K2, phi):
        raise AssertionError("search returned a map that is not an isomorphism")
    return phi


def are_isomorphic(K1: KummerStructure, K2: KummerStructure, timeout: float | None = None) -> bool:
    """Exact isomorphism test: zero is sent to zero, the rest by backtracking.

    >>> from kummer.abelian import kummer_of, make_group
    >>> are_isomorphic(kummer_of(make_group([2])), kummer_of(make_group([3])))
    False
    """
    return find_isomorphism(K1, K2, timeout) is not None


# ---------------------------------------------------------------- enumeration


def canonical_form(K: KummerStructure) -> tuple:
    """Lexicographically least relabelled table over permutations fixing zero at index 0.

    Factorial in |K|; used only for the small enumeration census.
    """
    n = len(K)
    z = K.zero
    rest = [a for a in range(n) if a != z]
    T = K.table
    best = None
    for perm in permutations(rest):
        order = (z, *perm)
        pos = {a: i for i, a in enumerate(order)}
        key = []
        for i in range(n):
            for j in range(i, n):
                c, d = T[order[i]][order[j]]
                pc, pd = pos[c], pos[d]
                key.append((pc, pd) if pc <= pd else (pd, pc))
        key = tuple(key)
        if best is None or key < best:
            best = key
    return best


def _from_canonical(n: int, key: tuple) -> KummerStructure:
    table = [[None] * n for _ in range(n)]
    it = iter(key)
    for i in range(n):
        for j in range(i, n):
            table[i][j] = table[j][i] = next(it)
    return KummerStructure([str(i) for i in range(n)], table)


def _pair_options(n: int, a: int, b: int, dbl: Sequence[int]) -> list[tuple[int, int]]:
    """Candidates for kappa{a, b}, a != b nonzero, from the lemma consequences.

    Zero never occurs off the diagonal, and the two values coincide exactly
    when a or b is 2-torsion.
    """
    equal = dbl[a] == 0 or dbl[b] == 0
    if equal:
        return [(c, c) for c in range(1, n)]
    return [(c, d) for c in range(1, n) for d in range(c + 1, n)]


def _enumerate_tables(n: int) -> Iterable[list[list[tuple[int, int]]]]:
    """Complete tables on 0..n-1 with 0 as the zero, pruned by the lemma consequences."""
    if n == 1:
        yield [[(0, 0)]]
        return
    offdiag = [(a, b) for a in range(1, n) for b in range(a + 1, n)]
    for dbl_rest in _doubling_maps(n):
        dbl = (0, *dbl_rest)
        table: list[list[tuple[int, int] | None]] = [[None] * n for _ in range(n)]
        for a in range(n):
            table[a][0] = table[0][a] = (a, a)
            table[a][a] = (0, dbl[a]) if dbl[a] else (0, 0)
        yield from _fill(n, table, dbl, offdiag, 0)


def _doubling_maps(n: int) -> Iterable[tuple[int, ...]]:
    """Doubling maps on 1..n-1, one per orbit under relabelling the nonzero elements.

    Every structure is isomorphic to one whose doubling map is the least
    in its orbit, so the others need not be searched.
    """
    perms = [(0, *p) for p in permutations(range(1, n))]
    for dbl in product(range(n), repeat=n - 1):
        full = (0, *dbl)
        if all(_relabel(full, p) >= full for p in perms):
            yield dbl


def _relabel(dbl: tuple[int, ...], p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(dbl)
    for a, x in enumerate(dbl):
        out[p[a]] = p[x]
    return tuple(out)


def _fill(n, table, dbl, offdiag, k):
    if k == len(offdiag):
        yield [list(row) for row in table]
        return
    a, b = offdiag[k]
    for val in _pair_options(n, a, b, dbl):
        table[a][b] = table[b][a] = val
        if _consistent(n, table, dbl, a, b):
            yield from _fill(n, table, dbl, offdiag, k + 1)
    table[a][b] = table[b][a] = None


def _consistent(n: int, T, dbl, a: int, b: int) -> bool:
    """Partial checks touching the newly assigned entry kappa{a, b}."""
    c, d = T[a][b]
    # x in kappa{y, o} <-> o in kappa{y, x}, for {y, o} = {a, b}
    for y, o in ((a, b), (b, a)):
        row = T[y]
        for x in range(n):
            e = row[x]
            if e is not None and (x == c or x == d) != (o in e):
                return False
    # kappa{c, d} = {2a, 2b}
    e = T[c][d]
    if e is not None and e != _sorted2(dbl[a], dbl[b]):
        return False
    # A4 on this pair: kappa{2a, 2b} = {2c, 2d}
    e = T[dbl[a]][dbl[b]]
    if e is not None and e != _sorted2(dbl[c], dbl[d]):
        return False
    return True


def _sorted2(x: int, y: int) -> tuple[int, int]:
    return (x, y) if x <= y else (y, x)


def enumerate_structures(n: int) -> list[KummerStructure]:
    """One representative per isomorphism class of Kummer structures on n elements.

    Representatives are in canonical form with labels ``"0".."n-1"`` and
    ``"0"`` as the zero; the list is sorted by canonical key.
    """
    if not isinstance(n, int) or n < 1:
        raise DomainError("size must be a positive integer")
    if n > MAX_ENUMERATION_SIZE:
        raise DomainError(f"enumeration is limited to n <= {MAX_ENUMERATION_SIZE}")
    keys = set()
    for table in _enumerate_tables(n):
        K = KummerStructure([str(i) for i in range(n)], table)
        if verify_axioms(K).ok:
            keys.add(canonical_form(K))
    return [_from_canonical(n, key) for key in sorted(keys)]


# ---------------------------------------------------------------- census


CENSUS_COLUMNS = ("size", "class_index", "two_torsion_rank", "two_k_rank", "ind", "kummer_of", "twisted_a", "twisted_b")


def census_rows(n: int, structures: Sequence[KummerStructure] | None = None) -> list[dict]:
    structures = enumerate_structures(n) if structures is None else structures
    rows = []
    for i, K in enumerate(structures):
        c = classify(K)
        rows.append({
            "size": n,
            "class_index": i,
            "two_torsion_rank": c.two_torsion_rank,
            "two_k_rank": c.two_k_rank,
            "ind": "" if c.ind is None else c.ind,
            "kummer_of": "" if c.kummer_of is None else c.kummer_of.notation(),
            "twisted_a": "" if c.twisted_of is None else c.twisted_of[0],
            "twisted_b": "" if c.twisted_of is None else c.twisted_of[1],
        })
    return rows


def write_census(rows: Iterable[dict], out: TextIO | None = None) -> str:
    buf = out or io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CENSUS_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue() if out is None else ""


# ---------------------------------------------------------------- fixtures

_Q8_UNITS = {"1": (1, 0), "-1": (-1, 0), "i": (1, 1), "-i": (-1, 1), "j": (1, 2), "-j": (-1, 2), "k": (1, 3), "-k": (-1, 3)}
_Q8_CLASS = {"1": "1", "-1": "-1", "i": "i", "-i": "i", "j": "j", "-j": "j", "k": "k", "-k": "k"}


def _q8_mul(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    (s, u), (t, v) = x, y
    if u == 0 or v == 0:
        return s * t, u + v
    if u == v:
        return -s * t, 0
    w = 6 - u - v
    sign = 1 if (v - u) % 3 == 1 else -1
    return s * t * sign, w


def q8_structure() -> KummerStructure:
    """The Kummer-style quotient of the quaternion group: {x, x^-1} with {x, y} -> {xy, xy^-1}.

    It satisfies A1-A3 but not A4.
    """
    from .core import from_table

    names = {v: k for k, v in _Q8_UNITS.items()}
    elements = ["1", "-1", "i", "j", "k"]
    entries = {}
    for a_i, a in enumerate(elements):
        for b in elements[a_i:]:
            x, y = _Q8_UNITS[a], _Q8_UNITS[b]
            inv_y = (y[0] if y[1] == 0 else -y[0], y[1])
            p = _Q8_CLASS[names[_q8_mul(x, y)]]
            q = _Q8_CLASS[names[_q8_mul(x, inv_y)]]
            entries[(a, b)] = (p, q)
    return from_table(elements, entries)
