"""Finite abelian groups, twisted groups, and their (twisted) Kummers."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import prod
from typing import Iterator, Sequence

from . import f2
from .core import KummerStructure
from .errors import GroupError


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def invariant_factors_from_primary(primary: dict[int, list[int]]) -> list[int]:
    """Combine per-prime exponent lists into invariant factors d1 >= d2 >= ..."""
    length = max((len(v) for v in primary.values()), default=0)
    out = []
    for i in range(length):
        d = 1
        for p, exps in primary.items():
            exps = sorted(exps, reverse=True)
            if i < len(exps):
                d *= p ** exps[i]
        out.append(d)
    return out


def normalise_factors(factors: Sequence[int]) -> list[int]:
    primary: dict[int, list[int]] = {}
    for d in factors:
        if not isinstance(d, int) or d < 2:
            raise GroupError(f"invalid factor {d!r}: factors must be integers >= 2")
        for p, e in _prime_factors(d).items():
            primary.setdefault(p, []).append(e)
    return invariant_factors_from_primary(primary)


@dataclass(frozen=True)
class FinAbGroup:
    """Z/d1 + ... + Z/dk in invariant-factor form (d_{i+1} | d_i)."""

    factors: tuple[int, ...]

    def __post_init__(self) -> None:
        fs = self.factors
        if any(d < 2 for d in fs):
            raise GroupError(f"invalid factor in {fs}")
        if any(fs[i] % fs[i + 1] for i in range(len(fs) - 1)):
            raise GroupError(f"{fs} is not an invariant-factor chain; use make_group")

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def elements(self) -> Iterator[tuple[int, ...]]:
        return product(*(range(d) for d in self.factors))

    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.factors)

    def add(self, x, y) -> tuple[int, ...]:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.factors))

    def neg(self, x) -> tuple[int, ...]:
        return tuple(-a % d for a, d in zip(x, self.factors))

    def sub(self, x, y) -> tuple[int, ...]:
        return tuple((a - b) % d for a, b, d in zip(x, y, self.factors))

    def mul(self, n: int, x) -> tuple[int, ...]:
        return tuple(n * a % d for a, d in zip(x, self.factors))

    def two_torsion(self) -> list[tuple[int, ...]]:
        z = self.zero()
        return [x for x in self.elements() if self.mul(2, x) == z]

    def is_two_torsion(self) -> bool:
        return all(d == 2 for d in self.factors)

    def notation(self) -> str:
        return ",".join(map(str, self.factors))

    def __str__(self) -> str:
        return " + ".join(f"Z/{d}" for d in self.factors) or "0"


def make_group(factors: Sequence[int]) -> FinAbGroup:
    """Group from any factor list, normalised to invariant factors.

    >>> make_group([2, 4]).factors
    (4, 2)
    """
    return FinAbGroup(tuple(normalise_factors(list(factors))))


def parse_group(spec: str) -> FinAbGroup:
    """``"4,4,2"`` -> Z/4 + Z/4 + Z/2; the empty string is the trivial group."""
    spec = spec.strip()
    if not spec:
        return make_group([])
    try:
        fs = [int(t) for t in spec.split(",")]
    except ValueError:
        raise GroupError(f"cannot parse group spec {spec!r}") from None
    return make_group(fs)


def abelian_groups(order: int) -> list[FinAbGroup]:
    """All abelian groups of the given order up to isomorphism."""
    if order < 1:
        raise GroupError("order must be positive")
    per_prime = []
    for p, e in sorted(_prime_factors(order).items()):
        per_prime.append([(p, part) for part in _partitions(e)])
    groups = []
    for choice in product(*per_prime):
        primary = {p: list(part) for p, part in choice}
        groups.append(FinAbGroup(tuple(invariant_factors_from_primary(primary))))
    return sorted(groups, key=lambda G: G.factors)


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


# ---------------------------------------------------------------- twisted


@dataclass(frozen=True)
class TwistedGroup:
    """A 2-torsion group (Z/2)^k with an F2-linear involution (column vectors)."""

    group: FinAbGroup
    involution: f2.Matrix

    def __post_init__(self) -> None:
        k = self.group.rank
        if not self.group.is_two_torsion():
            raise GroupError(f"{self.group} is not 2-torsion")
        m = self.involution
        if len(m) != k or any(len(row) != k for row in m):
            raise GroupError(f"involution must be a {k}x{k} matrix")
        if any(x not in (0, 1) for row in m for x in row):
            raise GroupError("involution entries must be 0 or 1")
        if f2.matmul(m, m) != f2.identity(k):
            raise GroupError("matrix does not square to the identity over F2")

    def apply(self, x) -> tuple[int, ...]:
        return f2.matvec(self.involution, x)

    @property
    def rank(self) -> int:
        return self.group.rank


def make_twisted(group: FinAbGroup, involution: Sequence[Sequence[int]]) -> TwistedGroup:
    return TwistedGroup(group, tuple(tuple(int(x) for x in row) for row in involution))


def parse_involution(spec: str) -> f2.Matrix:
    """``"01;10"`` -> [[0, 1], [1, 0]]."""
    rows = [r.strip() for r in spec.strip().split(";")] if spec.strip() else []
    if any(set(r) - {"0", "1"} for r in rows):
        raise GroupError(f"cannot parse involution {spec!r}")
    return tuple(tuple(int(ch) for ch in r) for r in rows)


def involution_notation(m: f2.Matrix) -> str:
    return ";".join("".join(map(str, row)) for row in m)


def block_sum(*tgs: TwistedGroup) -> TwistedGroup:
    k = sum(t.rank for t in tgs)
    m = [[0] * k for _ in range(k)]
    off = 0
    for t in tgs:
        for i, row in enumerate(t.involution):
            for j, x in enumerate(row):
                m[off + i][off + j] = x
        off += t.rank
    return make_twisted(make_group([2] * k), m)


def swap_involution() -> TwistedGroup:
    """((Z/2)^2, iota_2) with iota_2 exchanging the factors."""
    return make_twisted(make_group([2, 2]), [[0, 1], [1, 0]])


def standard_twisted(a: int, b: int) -> TwistedGroup:
    """((Z/2)^2, iota_2)^a + (Z/2, 1)^b."""
    trivial = make_twisted(make_group([2]), [[1]])
    return block_sum(*([swap_involution()] * a + [trivial] * b))


def shift_involution(k: int, shift: int) -> TwistedGroup:
    """(Z/2)^k with basis vector x_i sent to x_{(i+shift) mod k}."""
    m = [[0] * k for _ in range(k)]
    for i in range(k):
        m[(i + shift) % k][i] = 1
    return make_twisted(make_group([2] * k), m)


def twisted_invariants(tg: TwistedGroup) -> tuple[int, int]:
    """(a, b) with (G, iota) ~ ((Z/2)^2, iota_2)^a + (Z/2, 1)^b."""
    k = tg.rank
    a = f2.matrix_rank(f2.matadd(f2.identity(k), tg.involution))
    return a, k - 2 * a


# ---------------------------------------------------------------- Kummers


def element_label(x: Sequence[int], factors: Sequence[int]) -> str:
    if not x:
        return "0"
    if len(x) == 1:
        return str(x[0])
    if max(factors) <= 10:
        return "".join(map(str, x))
    return ".".join(map(str, x))


def _quotient(elements: list[tuple[int, ...]], other) -> tuple[list, dict]:
    """Orbit representatives (lexicographically smallest) for x ~ other(x)."""
    rep_of = {}
    reps = []
    for x in elements:
        r = min(x, other(x))
        rep_of[x] = r
        if r == x:
            reps.append(x)
    return reps, rep_of


def _build(reps, rep_of, factors, combine) -> KummerStructure:
    idx = {r: i for i, r in enumerate(reps)}
    n = len(reps)
    table = [[None] * n for _ in range(n)]
    for i, x in enumerate(reps):
        for j in range(i, n):
            u, v = combine(x, reps[j])
            table[i][j] = table[j][i] = (idx[rep_of[u]], idx[rep_of[v]])
    labels = [element_label(r, factors) for r in reps]
    return KummerStructure(labels, table)


def kummer_of(G: FinAbGroup) -> KummerStructure:
    """K(G): classes {x, -x} with {x, y} -> {x+y, x-y}."""
    elems = sorted(G.elements())
    reps, rep_of = _quotient(elems, G.neg)
    return _build(reps, rep_of, G.factors, lambda x, y: (G.add(x, y), G.sub(x, y)))


def twisted_kummer_of(tg: TwistedGroup) -> KummerStructure:
    """tK(G, iota): classes {x, iota x} with {x, y} -> {x+y, x+iota y}."""
    G = tg.group
    elems = sorted(G.elements())
    reps, rep_of = _quotient(elems, tg.apply)
    return _build(reps, rep_of, G.factors, lambda x, y: (G.add(x, y), G.add(x, tg.apply(y))))
