"""Kummer structures: the kappa table, axioms A1-A4, lemmas L1-L7, and K[2].

Elements are stored as indices ``0..n-1`` into ``K.elements`` (string
labels).  ``K.table[a][b]`` is the sorted pair of indices kappa{a, b}.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Iterable, Mapping, Sequence

from . import f2
from .errors import InvariantError, NotVerifiedError, TableError

Pair = tuple[int, int]

LABEL_RE = re.compile(r"[A-Za-z0-9_.+-]+\Z")


def _pair(c: int, d: int) -> Pair:
    return (c, d) if c <= d else (d, c)


class KummerStructure:
    """A finite set with a symmetric map kappa on unordered pairs.

    The zero element and doubling map are derived from the table but not
    validated; run :func:`verify_axioms` (or :meth:`require_verified`).
    """

    def __init__(self, elements: Sequence[str], table: Sequence[Sequence[Pair]]):
        self._elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self._elements)}
        self._table = tuple(tuple(_pair(*v) for v in row) for row in table)
        self._zero = self._find_zero()
        self._double = self._find_double()
        self._report: AxiomReport | None = None
        # derived data that other modules compute once per structure (strings)
        self.memo: dict = {}

    def _zero_candidates(self) -> list[int]:
        n = len(self._elements)
        return [z for z in range(n) if all(self._table[a][z] == (a, a) for a in range(n))]

    def _find_zero(self) -> int | None:
        cands = self._zero_candidates()
        return cands[0] if len(cands) == 1 else None

    def _find_double(self) -> tuple[int, ...] | None:
        z = self._zero
        if z is None:
            return None
        out = []
        for a in range(len(self._elements)):
            c, d = self._table[a][a]
            if c == z:
                out.append(d)
            elif d == z:
                out.append(c)
            else:
                return None
        return tuple(out)

    @property
    def elements(self) -> tuple[str, ...]:
        return self._elements

    @property
    def table(self) -> tuple[tuple[Pair, ...], ...]:
        return self._table

    @property
    def zero(self) -> int | None:
        return self._zero

    @property
    def double(self) -> tuple[int, ...] | None:
        return self._double

    def __len__(self) -> int:
        return len(self._elements)

    def __getitem__(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown element {label!r}") from None

    def label(self, i: int) -> str:
        return self._elements[i]

    def kappa(self, a: int, b: int) -> Pair:
        return self._table[a][b]

    def dbl(self, a: int) -> int:
        self.require_verified()
        return self._double[a]

    def pairs(self) -> Iterable[tuple[int, int]]:
        n = len(self._elements)
        for a in range(n):
            for b in range(a, n):
                yield a, b

    def is_two_torsion(self) -> bool:
        self.require_verified()
        return all(d == self._zero for d in self._double)

    def is_four_torsion(self) -> bool:
        self.require_verified()
        dd = self._double
        return all(dd[dd[a]] == self._zero for a in range(len(self)))

    @property
    def report(self) -> AxiomReport:
        if self._report is None:
            self._report = verify_axioms(self)
        return self._report

    def require_verified(self) -> None:
        if not self.report.ok:
            raise NotVerifiedError("structure does not satisfy A1-A4: " + self.report.summary())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KummerStructure):
            return NotImplemented
        return self._elements == other._elements and self._table == other._table

    def __hash__(self) -> int:
        return hash((self._elements, self._table))

    def __repr__(self) -> str:
        return f"KummerStructure(n={len(self)}, elements={list(self._elements)[:8]}{'...' if len(self) > 8 else ''})"

    def fmt(self, a: int, b: int) -> str:
        """``'a b -> c d'`` in labels."""
        c, d = self._table[a][b]
        L = self._elements
        return f"{L[a]} {L[b]} -> {L[c]} {L[d]}"


def from_table(
    elements: Sequence[str],
    pair_map: Mapping[tuple[str, str], tuple[str, str]] | Iterable[tuple[tuple[str, str], tuple[str, str]]],
) -> KummerStructure:
    """Build a structure from labelled entries ``(a, b) -> (c, d)``.

    ``pair_map`` may be a mapping or an iterable of entries; every unordered
    pair (including ``{a, a}``) must appear exactly once.
    """
    elements = tuple(elements)
    if len(set(elements)) != len(elements):
        raise TableError("duplicate element identifiers")
    for e in elements:
        if not isinstance(e, str) or not LABEL_RE.match(e):
            raise TableError(f"invalid element identifier {e!r}")
    idx = {e: i for i, e in enumerate(elements)}
    entries = pair_map.items() if isinstance(pair_map, Mapping) else pair_map
    n = len(elements)
    table: list[list[Pair | None]] = [[None] * n for _ in range(n)]

    def lookup(x: str) -> int:
        try:
            return idx[x]
        except KeyError:
            raise TableError(f"unknown element {x!r}") from None

    for (a, b), (c, d) in entries:
        ia, ib, ic, id_ = lookup(a), lookup(b), lookup(c), lookup(d)
        if table[ia][ib] is not None:
            raise TableError(f"duplicate entry for pair {{{a}, {b}}}")
        table[ia][ib] = table[ib][ia] = _pair(ic, id_)
    for a, b in product(range(n), repeat=2):
        if table[a][b] is None:
            raise TableError(f"missing entry for pair {{{elements[a]}, {elements[b]}}}")
    return KummerStructure(elements, table)


# ---------------------------------------------------------------- axioms


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "skipped"
    witness: dict[str, Any] | None = None
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def line(self) -> str:
        head = f"{self.name} {self.status.upper()}"
        return f"{head}: {self.message}" if self.message else head


@dataclass(frozen=True)
class AxiomReport:
    results: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def summary(self) -> str:
        return "; ".join(r.line() for r in self.results)

    def lines(self) -> list[str]:
        return [r.line() for r in self.results]


LemmaReport = AxiomReport


def a3_diagrams(K: KummerStructure, a: int, b: int, c: int) -> list[tuple[int, int, int, int, int, int, int, int]]:
    """All completions ``(p0, p1, q0, q1, s0, s1, s2, s3)`` of the A3 diagram.

    The orders of ``(p0, p1)`` and ``(q0, q1)`` are fixed to the sorted
    kappa values; reordering them only permutes the ``s`` labels.
    """
    T = K.table
    p0, p1 = T[a][b]
    q0, q1 = T[c][b]
    r0, r1 = T[a][q0], T[a][q1]
    col0, col1 = T[c][p0], T[c][p1]
    out = []
    seen = set()
    for s0, s1 in (r0, r0[::-1]):
        for s2, s3 in (r1, r1[::-1]):
            if _pair(s0, s2) == col0 and _pair(s1, s3) == col1:
                key = (s0, s1, s2, s3)
                if key not in seen:
                    seen.add(key)
                    out.append((p0, p1, q0, q1, s0, s1, s2, s3))
    return out


def _a3_ok(T, a: int, b: int, c: int) -> bool:
    p0, p1 = T[a][b]
    q0, q1 = T[c][b]
    x0, x1 = T[a][q0]
    y0, y1 = T[a][q1]
    tc = T[c]
    col0, col1 = tc[p0], tc[p1]
    for s0, s1 in ((x0, x1), (x1, x0)):
        for s2, s3 in ((y0, y1), (y1, y0)):
            if ((s0, s2) if s0 <= s2 else (s2, s0)) == col0 and (
                (s1, s3) if s1 <= s3 else (s3, s1)
            ) == col1:
                return True
    return False


def _a3_witness(K: KummerStructure, a: int, b: int, c: int) -> dict[str, Any]:
    T = K.table
    L = K.elements
    p0, p1 = T[a][b]
    q0, q1 = T[c][b]
    consulted = {
        "a b": (a, b), "c b": (c, b), "a q0": (a, q0), "a q1": (a, q1), "c p0": (c, p0), "c p1": (c, p1),
    }
    return {
        "a": L[a], "b": L[b], "c": L[c],
        "kappa": {k: (L[T[x][y][0]], L[T[x][y][1]]) for k, (x, y) in consulted.items()},
    }


def verify_axioms(K: KummerStructure) -> AxiomReport:
    """Check A1-A4 exhaustively; report the first witness for each failing axiom."""
    n = len(K)
    T = K.table
    L = K.elements
    results: list[CheckResult] = []

    cands = K._zero_candidates()
    if len(cands) == 1:
        results.append(CheckResult("A1", "pass"))
    else:
        msg = "no zero element" if not cands else "multiple zero candidates: " + " ".join(L[z] for z in cands)
        wit: dict[str, Any] = {"candidates": [L[z] for z in cands]}
        if not cands and n:
            # Nearest miss for the first element: where does it fail?
            z = 0
            a = next(a for a in range(n) if T[a][z] != (a, a))
            wit["example"] = K.fmt(a, z)
        results.append(CheckResult("A1", "fail", wit, msg))
        for name in ("A2", "A3", "A4"):
            results.append(CheckResult(name, "skipped", None, "requires A1"))
        return AxiomReport(tuple(results))

    zero = cands[0]
    bad = next((a for a in range(n) if zero not in T[a][a]), None)
    if bad is None:
        results.append(CheckResult("A2", "pass"))
    else:
        results.append(CheckResult("A2", "fail", {"a": L[bad], "kappa": K.fmt(bad, bad)},
                                   f"{K.fmt(bad, bad)} does not contain 0 = {L[zero]}"))

    witness = None
    for a in range(n):
        for b in range(n):
            for c in range(a, n):
                if not _a3_ok(T, a, b, c):
                    witness = (a, b, c)
                    break
            if witness:
                break
        if witness:
            break
    if witness is None:
        results.append(CheckResult("A3", "pass"))
    else:
        a, b, c = witness
        results.append(CheckResult("A3", "fail", _a3_witness(K, a, b, c),
                                   f"no diagram for a={L[a]} b={L[b]} c={L[c]}"))

    dbl = K.double
    if dbl is None:
        results.append(CheckResult("A4", "skipped", None, "requires A2"))
        return AxiomReport(tuple(results))
    for a, b in K.pairs():
        c, d = T[a][b]
        got = T[dbl[a]][dbl[b]]
        want = _pair(dbl[c], dbl[d])
        if got != want:
            wit = {
                "a": L[a], "b": L[b], "c": L[c], "d": L[d],
                "2a": L[dbl[a]], "2b": L[dbl[b]],
                "got": (L[got[0]], L[got[1]]),
                "expected": (L[want[0]], L[want[1]]),
            }
            msg = f"witness {K.fmt(a, b)}; {K.fmt(dbl[a], dbl[b])}"
            results.append(CheckResult("A4", "fail", wit, msg))
            break
    else:
        results.append(CheckResult("A4", "pass"))
    return AxiomReport(tuple(results))


# ---------------------------------------------------------------- lemmas


def lemma_suite(K: KummerStructure) -> AxiomReport:
    """Check L1-L7 exhaustively on a verified structure.

    These are theorems; any failure is reported with a witness and points
    at a bug, not at the structure.
    """
    K.require_verified()
    n = len(K)
    T = K.table
    Lb = K.elements
    z = K.zero
    dbl = K.double
    res: list[CheckResult] = []

    def record(name: str, wit: Any) -> None:
        if wit is None:
            res.append(CheckResult(name, "pass"))
        else:
            res.append(CheckResult(name, "fail", {"elements": wit}, "witness " + " ".join(Lb[x] for x in wit)))

    record("L1", None if dbl[z] == z else (z,))

    wit = None
    for a, b, c in product(range(n), repeat=3):
        if (c in T[a][b]) != (a in T[b][c]):
            wit = (a, b, c)
            break
    record("L2", wit)

    wit = next(((a, b) for a, b in product(range(n), repeat=2) if (z in T[a][b]) != (a == b)), None)
    record("L3", wit)

    wit = None
    for a, b in K.pairs():
        c, d = T[a][b]
        if T[c][d] != _pair(dbl[a], dbl[b]):
            wit = (a, b, c, d)
            break
    record("L4", wit)

    wit = None
    for a, b in K.pairs():
        c, d = T[a][b]
        if (c == d) != (dbl[a] == z or dbl[b] == z):
            wit = (a, b, c, d)
            break
    record("L5", wit)

    tors = [a for a in range(n) if dbl[a] == z]
    wit = None
    for a in tors:
        for b in tors:
            c, d = T[a][b]
            if c != d or dbl[c] != z:
                wit = (a, b, c, d)
                break
        if wit:
            break
    record("L6", wit)

    wit = None
    for a, b, c in product(range(n), repeat=3):
        if not _l7_ok(K, a, b, c):
            wit = (a, b, c)
            break
    record("L7", wit)
    return AxiomReport(tuple(res))


def _l7_ok(K: KummerStructure, a: int, b: int, c: int) -> bool:
    T = K.table
    r = T[c][a]
    diagrams = a3_diagrams(K, a, b, c)
    if not diagrams:
        return False
    for *_, s0, s1, s2, s3 in diagrams:
        want0, want1 = _pair(s0, s3), _pair(s2, s1)
        if not any(T[b][r0] == want0 and T[b][r1] == want1 for r0, r1 in (r, r[::-1])):
            return False
    return True


# ---------------------------------------------------------------- K[2]


class TwoTorsionGroup:
    """K[2] = {a : 2a = 0} with a + b = c where a b -> c c.

    ``coords[a]`` is the F2 coordinate bitmask of ``a`` relative to
    ``basis``; ``element_of[mask]`` inverts it.
    """

    def __init__(self, K: KummerStructure):
        K.require_verified()
        self.structure = K
        z = K.zero
        dbl = K.double
        self.elements = tuple(a for a in range(len(K)) if dbl[a] == z)
        self.zero = z
        members = set(self.elements)
        self._sum: dict[tuple[int, int], int] = {}
        for a in self.elements:
            for b in self.elements:
                c, d = K.table[a][b]
                if c != d or c not in members:
                    raise InvariantError(f"L6 fails for {K.fmt(a, b)}")
                self._sum[a, b] = c

        basis: list[int] = []
        spanned = {z}
        for a in self.elements:
            if a not in spanned:
                basis.append(a)
                spanned |= {self._sum[s, a] for s in spanned}
        self.basis = tuple(basis)
        self.coords: dict[int, int] = {z: 0}
        for i, x in enumerate(self.basis):
            for a, m in list(self.coords.items()):
                self.coords[self._sum[a, x]] = m | (1 << i)
        if len(self.coords) != len(self.elements):
            raise InvariantError("K[2] is not spanned by its extracted basis")
        self.element_of = {m: a for a, m in self.coords.items()}

    @property
    def rank(self) -> int:
        return len(self.basis)

    def add(self, a: int, b: int) -> int:
        return self._sum[a, b]

    def __contains__(self, a: int) -> bool:
        return a in self.coords

    def __len__(self) -> int:
        return len(self.elements)

    def span_rank(self, elems: Iterable[int]) -> int:
        return f2.rank(self.coords[a] for a in elems)


def two_torsion_group(K: KummerStructure) -> TwoTorsionGroup:
    return TwoTorsionGroup(K)
