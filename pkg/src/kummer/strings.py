"""Strings K_g, diamond-grid colourings, and the partial operations on strings.

A string is a bi-infinite sequence with ``alpha_n g -> alpha_{n-1}
alpha_{n+1}``.  On a finite carrier every string is purely periodic, so a
string is stored as one period of values.

String sums are computed on the periodic window ``[0, P)^2`` with
``P = lcm(period alpha, period beta, 2)``.  A consistent colouring of a grid
component is a pair of functions ``Gamma(n + m)`` and ``Delta(n - m)``
(indices mod ``P``) whose values at each node form that node's value set.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Iterator, Optional, Sequence

from .core import KummerStructure
from .errors import DomainError, InvariantError

OPS = ("add", "sub", "oadd", "osub")


class GString:
    """One string of K_g, identified by ``(g, alpha_0, alpha_1)``."""

    __slots__ = ("structure", "g", "values")

    def __init__(self, structure: KummerStructure, g: int, values: Sequence[int]):
        self.structure = structure
        self.g = g
        self.values = tuple(values)

    @property
    def a0(self) -> int:
        return self.values[0]

    @property
    def a1(self) -> int:
        return self.values[1 % len(self.values)]

    @property
    def period(self) -> int:
        return len(self.values)

    @property
    def key(self) -> tuple[int, int]:
        return self.a0, self.a1

    def at(self, n: int) -> int:
        return self.values[n % len(self.values)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GString):
            return NotImplemented
        return self.structure is other.structure and self.g == other.g and self.key == other.key

    def __hash__(self) -> int:
        return hash((id(self.structure), self.g, self.key))

    def __repr__(self) -> str:
        L = self.structure.elements
        vals = ",".join(L[v] for v in self.values)
        return f"GString(g={L[self.g]}, period={self.period}, [{vals}])"

    def labels(self) -> tuple[str, str]:
        L = self.structure.elements
        return L[self.a0], L[self.a1]


def _other(pair: tuple[int, int], x: int) -> int | None:
    c, d = pair
    if c == x:
        return d
    if d == x:
        return c
    return None


def extend(K: KummerStructure, g: int, a0: int, a1: int) -> GString:
    """The unique string with ``alpha_0 = a0`` and ``alpha_1 = a1``."""
    cache = K.memo.setdefault("strings", {})
    s = cache.get((g, a0, a1))
    if s is None:
        s = cache[g, a0, a1] = _walk(K, g, a0, a1)
    return s


def _walk(K: KummerStructure, g: int, a0: int, a1: int) -> GString:
    K.require_verified()
    if K.double[g] == K.zero:
        raise DomainError(f"generator {K.label(g)} is 2-torsion")
    T = K.table
    if a1 not in T[a0][g]:
        raise DomainError(f"invalid seed: {K.label(a1)} is not in kappa{{{K.label(a0)}, {K.label(g)}}}")
    n = len(K)
    values = [a0, a1]
    prev, cur = a0, a1
    while True:
        nxt = _other(T[cur][g], prev)
        if nxt is None:
            raise InvariantError(f"string step failed at {K.fmt(cur, g)}")
        prev, cur = cur, nxt
        if (prev, cur) == (a0, a1):
            values.pop()
            break
        values.append(cur)
        if len(values) > n * n + 1:
            raise InvariantError("string period exceeds |K|^2")
    s = GString(K, g, values)
    if not is_string_sequence(K, g, s.values):
        raise InvariantError("constructed string violates the string condition")
    return s


def is_string_sequence(K: KummerStructure, g: int, seq: Sequence[int]) -> bool:
    """True iff the cyclic sequence satisfies ``s_r g -> s_{r-1} s_{r+1}``."""
    P = len(seq)
    T = K.table
    for r in range(P):
        lo, hi = seq[r - 1], seq[(r + 1) % P]
        if T[seq[r]][g] != ((lo, hi) if lo <= hi else (hi, lo)):
            return False
    return True


def zero_string(K: KummerStructure, g: int) -> GString:
    """The string o with o_0 = 0 (and hence o_1 = g)."""
    K.require_verified()
    return extend(K, g, K.zero, g)


def reverse(alpha: GString) -> GString:
    """rho(alpha)_n = alpha_{-n}."""
    v = alpha.values
    return GString(alpha.structure, alpha.g, (v[0],) + tuple(reversed(v[1:])))


def at(alpha: GString, n: int) -> int:
    return alpha.at(n)


def double_step_check(alpha: GString) -> bool:
    """Check ``alpha_n 2g -> alpha_{n-2} alpha_{n+2}`` over one period."""
    K = alpha.structure
    g2 = K.double[alpha.g]
    T = K.table
    for n in range(alpha.period):
        lo, hi = alpha.at(n - 2), alpha.at(n + 2)
        if T[alpha.at(n)][g2] != ((lo, hi) if lo <= hi else (hi, lo)):
            return False
    return True


def all_strings(K: KummerStructure, g: int) -> list[GString]:
    """Every string in K_g, one per kappa-adjacent seed ``(a0, a1)``."""
    K.require_verified()
    out = []
    seen = set()
    for a0 in range(len(K)):
        for a1 in K.table[a0][g]:
            if (a0, a1) not in seen:
                seen.add((a0, a1))
                out.append(extend(K, g, a0, a1))
    return out


# ---------------------------------------------------------------- colouring


@dataclass(frozen=True)
class Colouring:
    """A consistent colouring of one component ``D_p``.

    ``gamma[s]`` is Gamma on the falling line ``n + m = s`` and ``delta[t]``
    is Delta on the rising line ``n - m = t``; entries of the other parity
    are None.
    """

    parity: int
    gamma: tuple[Optional[int], ...]
    delta: tuple[Optional[int], ...]


@dataclass(frozen=True)
class GridWindow:
    size: int
    values: tuple[tuple[tuple[int, int], ...], ...]
    colourings: tuple[tuple[Colouring, ...], tuple[Colouring, ...]]

    def counts(self) -> tuple[int, int]:
        return len(self.colourings[0]), len(self.colourings[1])

    @property
    def ambiguous(self) -> bool:
        return 2 in self.counts()

    def joint_colourings(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Full ``(Gamma, Delta)`` over both components."""
        for c0 in self.colourings[0]:
            for c1 in self.colourings[1]:
                gamma = tuple(x if x is not None else y for x, y in zip(c0.gamma, c1.gamma))
                delta = tuple(x if x is not None else y for x, y in zip(c0.delta, c1.delta))
                yield gamma, delta


def _check_same_base(alpha: GString, beta: GString) -> None:
    if alpha.structure is not beta.structure or alpha.g != beta.g:
        raise DomainError("strings belong to different (K, g)")


def _check_diamonds(values, P: int) -> None:
    # Diamond centred at (n, m): left (n-1, m), top (n, m+1), right (n+1, m), bottom (n, m-1).
    for n in range(P):
        row_l, row_c, row_r = values[n - 1], values[n], values[(n + 1) % P]
        for m in range(P):
            left, right = row_l[m], row_r[m]
            top, bottom = row_c[(m + 1) % P], row_c[m - 1]
            if not _diamond_ok(left, top, right, bottom):
                raise InvariantError(f"diamond rule fails around node ({n}, {m})")


def _diamond_ok(left, top, right, bottom) -> bool:
    for a, b in (left, left[::-1]):
        c = _other(top, b)
        d = _other(bottom, a)
        if c is None or d is None:
            continue
        if right == ((c, d) if c <= d else (d, c)):
            return True
    return False


def _colour_component(values, P: int, p: int) -> tuple[Colouring, ...]:
    """Consistent colourings of ``D_p``.

    Falling line s and rising line t of the same parity meet (twice) on
    the torus, so Gamma on one falling line forces Delta on every rising
    line, which forces Gamma everywhere.  Gamma on the line through
    ``(0, p)`` is one of that node's two values, so at most two
    candidates need checking.
    """
    found = []
    for c in sorted(set(values[0][p])):
        colouring = _force(values, P, p, p, c)
        if colouring is not None:
            found.append(colouring)
    if not found:
        raise InvariantError(f"grid component D_{p} has no consistent colouring")
    return tuple(found)


def _force(values, P: int, p: int, s0: int, c: int) -> Colouring | None:
    gamma: list[Optional[int]] = [None] * P
    delta: list[Optional[int]] = [None] * P
    gamma[s0] = c
    for n in range(P):
        x, y = values[n][(s0 - n) % P]
        d = y if x == c else x if y == c else None
        t = (2 * n - s0) % P
        if d is None or delta[t] not in (None, d):
            return None
        delta[t] = d
    t0 = p
    d0 = delta[t0]
    for n in range(P):
        x, y = values[n][(n - t0) % P]
        g = y if x == d0 else x if y == d0 else None
        s = (2 * n - t0) % P
        if g is None or gamma[s] not in (None, g):
            return None
        gamma[s] = g
    for n in range(P):
        row = values[n]
        for m in range((p - n) % 2, P, 2):
            G, D = gamma[(n + m) % P], delta[(n - m) % P]
            if row[m] != ((G, D) if G <= D else (D, G)):
                return None
    return Colouring(p, tuple(gamma), tuple(delta))


def colour_window(alpha: GString, beta: GString, check_rules: bool = True) -> GridWindow:
    """All consistent colourings of the periodic diamond grid of ``(alpha, beta)``.

    A consistent colouring exists on both components or InvariantError is
    raised; it witnesses the linear rule (every line has a common value).
    With ``check_rules`` the diamond rule is asserted too.  Both components
    admitting two colourings is also an InvariantError.
    """
    _check_same_base(alpha, beta)
    K = alpha.structure
    P = lcm(alpha.period, beta.period, 2)
    T = K.table
    av = [alpha.at(n) for n in range(P)]
    bv = [beta.at(m) for m in range(P)]
    values = tuple(tuple(T[a][b] for b in bv) for a in av)
    if check_rules:
        _check_diamonds(values, P)
    comps = (_colour_component(values, P, 0), _colour_component(values, P, 1))
    if len(comps[0]) == 2 and len(comps[1]) == 2:
        raise InvariantError("both grid components have two colourings")
    return GridWindow(P, values, comps)


def line_commons(window: GridWindow) -> tuple[list[set[int]], list[set[int]]]:
    """Common values of each falling line ``n + m = s`` and rising line ``n - m = t``."""
    values, P = window.values, window.size
    falling, rising = [], []
    for s in range(P):
        falling.append(set.intersection(*(set(values[n][(s - n) % P]) for n in range(P))))
        rising.append(set.intersection(*(set(values[n][(n - s) % P]) for n in range(P))))
    return falling, rising


# ---------------------------------------------------------------- operations


def _relation_holds(values, P: int, gamma, delta, twisted: bool) -> bool:
    for n in range(P):
        row = values[n]
        for m in range(P):
            if twisted and n % 2 and m % 2:
                x, y = gamma[(n - m) % P], delta[(n + m) % P]
            else:
                x, y = gamma[(n + m) % P], delta[(n - m) % P]
            if row[m] != ((x, y) if x <= y else (y, x)):
                return False
    return True


def _candidate_pairs(window: GridWindow, twisted: bool, K: KummerStructure, g: int):
    """(sum, difference) sequence pairs offered by the colourings.

    Untwisted: (Gamma, Delta) directly.  Twisted: no node (n, 0) has both
    coordinates odd, so the twisted sum takes one of the two values
    {Gamma(n), Delta(n)} of that node at every n; its first two entries
    fix it as a string, and the difference takes the remaining value.
    """
    P = window.size
    for Gamma, Delta in window.joint_colourings():
        if not twisted:
            yield Gamma, Delta
            continue
        for c0 in {Gamma[0], Delta[0]}:
            for c1 in {Gamma[1], Delta[1]}:
                gt = _window_values(K, g, c0, c1, P)
                if gt is None or any(x not in (Gamma[r], Delta[r]) for r, x in enumerate(gt)):
                    continue
                dt = tuple(Gamma[r] + Delta[r] - x for r, x in enumerate(gt))
                yield gt, dt


def _window_values(K: KummerStructure, g: int, a0: int, a1: int, P: int) -> tuple[int, ...] | None:
    try:
        s = extend(K, g, a0, a1)
    except DomainError:
        return None
    return tuple(s.at(r) for r in range(P))


def _as_string(K: KummerStructure, g: int, seq: Sequence[int]) -> GString | None:
    if not is_string_sequence(K, g, seq):
        return None
    s = extend(K, g, seq[0], seq[1])
    if any(s.at(i) != x for i, x in enumerate(seq)):
        raise InvariantError("string window disagrees with its extension")
    return s


def accepted_candidates(alpha: GString, beta: GString, op: str, window: GridWindow | None = None) -> list[GString]:
    """Every distinct string the colourings offer for ``op`` that passes acceptance.

    A colouring yields a pair (sum, difference) of sequences; it is
    accepted when both are strings and the defining kappa-relation holds
    across the whole window.
    """
    if op not in OPS:
        raise ValueError(f"unknown op {op!r}")
    _check_same_base(alpha, beta)
    window = window or colour_window(alpha, beta)
    K, g, P = alpha.structure, alpha.g, window.size
    twisted = op in ("oadd", "osub")
    out: list[GString] = []
    for gam, dlt in _candidate_pairs(window, twisted, K, g):
        sg = _as_string(K, g, gam)
        sd = _as_string(K, g, dlt)
        if sg is None or sd is None:
            continue
        if not _relation_holds(window.values, P, gam, dlt, twisted):
            continue
        res = sg if op in ("add", "oadd") else sd
        if res not in out:
            out.append(res)
    return out


def combine(alpha: GString, beta: GString, op: str, window: GridWindow | None = None) -> GString | None:
    found = accepted_candidates(alpha, beta, op, window)
    if len(found) > 1:
        raise InvariantError(f"{op} accepted {len(found)} distinct strings")
    return found[0] if found else None


def combine_all(alpha: GString, beta: GString) -> dict[str, GString | None]:
    """All four operations from a single window."""
    window = colour_window(alpha, beta)
    return {op: combine(alpha, beta, op, window) for op in OPS}


def add(alpha: GString, beta: GString) -> GString | None:
    """alpha + beta, or None where undefined."""
    return combine(alpha, beta, "add")


def sub(alpha: GString, beta: GString) -> GString | None:
    return combine(alpha, beta, "sub")


def oadd(alpha: GString, beta: GString) -> GString | None:
    """Twisted sum: nodes with n and m both odd carry (diff, sum) instead of (sum, diff)."""
    return combine(alpha, beta, "oadd")


def osub(alpha: GString, beta: GString) -> GString | None:
    return combine(alpha, beta, "osub")


# ---------------------------------------------------------------- N-action


def nat_mul(K: KummerStructure, n: int, a: int) -> int:
    """n*a via 0a = 0, 1a = a and na a -> (n-1)a (n+1)a."""
    K.require_verified()
    if n < 0:
        raise ValueError("n must be non-negative")
    prev, cur = K.zero, a
    if n == 0:
        return prev
    for _ in range(n - 1):
        nxt = _other(K.table[cur][a], prev)
        if nxt is None:
            raise InvariantError(f"N-action step inconsistent at {K.fmt(cur, a)}")
        prev, cur = cur, nxt
    return cur
