"""The KST text format for kappa tables.

::

    kummer v1
    elements: 0 1 2
    map: 0 0 -> 0 0
    map: 0 1 -> 1 1
    ...

Blank lines and lines starting with ``#`` are ignored.  Every unordered
pair appears exactly once, in any order.  :func:`dumps` writes the
canonical form: carrier order, pairs ``a <= b`` row by row, values sorted
by carrier index.
"""

from __future__ import annotations

from pathlib import Path

from .core import KummerStructure, from_table
from .errors import KstParseError, TableError

HEADER = "kummer v1"


def loads(text: str) -> KummerStructure:
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise KstParseError("empty file")
    i, first = lines[0]
    if first != HEADER:
        raise KstParseError(f"expected header {HEADER!r}, got {first!r}", i)
    if len(lines) < 2:
        raise KstParseError("missing elements line")
    i, ln = lines[1]
    key, sep, rest = ln.partition(":")
    if not sep or key.strip() != "elements":
        raise KstParseError("expected 'elements: ...'", i)
    elements = rest.split()
    if not elements:
        raise KstParseError("no elements declared", i)

    entries = []
    for i, ln in lines[2:]:
        key, sep, rest = ln.partition(":")
        if not sep or key.strip() != "map":
            raise KstParseError(f"expected 'map: a b -> c d', got {ln!r}", i)
        lhs, arrow, rhs = rest.partition("->")
        ab, cd = lhs.split(), rhs.split()
        if not arrow or len(ab) != 2 or len(cd) != 2:
            raise KstParseError(f"malformed map line {ln!r}", i)
        entries.append((i, (ab[0], ab[1]), (cd[0], cd[1])))

    try:
        return from_table(elements, _checked(entries, elements))
    except TableError as e:
        raise KstParseError(str(e)) from e


def _checked(entries, elements):
    # re-raise with line numbers for the common per-line problems
    known = set(elements)
    seen = {}
    for i, (a, b), (c, d) in entries:
        for x in (a, b, c, d):
            if x not in known:
                raise KstParseError(f"unknown element {x!r}", i)
        key = frozenset((a, b))
        if key in seen:
            raise KstParseError(f"pair {{{a}, {b}}} already given on line {seen[key]}", i)
        seen[key] = i
        yield (a, b), (c, d)


def dumps(K: KummerStructure) -> str:
    L = K.elements
    out = [HEADER, "elements: " + " ".join(L)]
    for a, b in K.pairs():
        c, d = K.table[a][b]
        out.append(f"map: {L[a]} {L[b]} -> {L[c]} {L[d]}")
    return "\n".join(out) + "\n"


def load(path: str | Path) -> KummerStructure:
    return loads(Path(path).read_text(encoding="utf-8"))


def dump(K: KummerStructure, path: str | Path) -> None:
    Path(path).write_text(dumps(K), encoding="utf-8")


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture such as ``"q8.kst"``."""
    return Path(__file__).with_name("fixtures") / name
