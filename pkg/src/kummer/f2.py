"""Linear algebra over the field with two elements.

Vectors are Python ints used as bitsets; matrices are tuples of row tuples
of 0/1 entries.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Matrix = tuple[tuple[int, ...], ...]


class EchelonBasis:
    """XOR basis with distinct leading bits, used for reduction modulo a span."""

    def __init__(self, vectors: Iterable[int] = ()):
        self._rows: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        for lead in sorted(self._rows, reverse=True):
            if (v >> lead) & 1:
                v ^= self._rows[lead]
        return v

    def add(self, v: int) -> bool:
        """Insert ``v``; return False if it was already in the span."""
        v = self.reduce(v)
        if v == 0:
            return False
        self._rows[v.bit_length() - 1] = v
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def rank(self) -> int:
        return len(self._rows)

    def vectors(self) -> list[int]:
        return [self._rows[k] for k in sorted(self._rows, reverse=True)]


def rank(vectors: Iterable[int]) -> int:
    return EchelonBasis(vectors).rank


def reduce_mod(v: int, generators: Iterable[int]) -> int:
    """Canonical representative of ``v`` modulo the span of ``generators``."""
    return EchelonBasis(generators).reduce(v)


def is_independent(vectors: Sequence[int]) -> bool:
    return rank(vectors) == len(vectors)


def span(vectors: Iterable[int]) -> set[int]:
    out = {0}
    for v in vectors:
        if v not in out:
            out |= {w ^ v for w in out}
    return out


def identity(k: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(k)) for i in range(k))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    k = len(b[0]) if b else 0
    return tuple(
        tuple(sum(row[t] & b[t][j] for t in range(len(b))) & 1 for j in range(k))
        for row in a
    )


def matvec(m: Matrix, x: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(r & xi for r, xi in zip(row, x)) & 1 for row in m)


def matadd(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x ^ y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def row_bits(row: Sequence[int]) -> int:
    return sum(bit << i for i, bit in enumerate(row))


def matrix_rank(m: Matrix) -> int:
    return rank(row_bits(row) for row in m)


def inverse(m: Matrix) -> Matrix:
    """Gauss-Jordan inverse; raises ValueError for singular matrices."""
    k = len(m)
    work = [list(row) + list(e) for row, e in zip(m, identity(k))]
    for col in range(k):
        pivot = next((r for r in range(col, k) if work[r][col]), None)
        if pivot is None:
            raise ValueError("matrix is singular over F2")
        work[col], work[pivot] = work[pivot], work[col]
        for r in range(k):
            if r != col and work[r][col]:
                work[r] = [x ^ y for x, y in zip(work[r], work[col])]
    return tuple(tuple(row[k:]) for row in work)
