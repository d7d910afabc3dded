"""Command-line interface: ``kummer <command> ...``.

Exit codes: 0 success, 1 semantic failure (axioms fail, not isomorphic,
operation undefined), 2 input error (unreadable or malformed input).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import kst
from . import strings as st
from .abelian import kummer_of, make_twisted, parse_group, parse_involution, twisted_kummer_of
from .classify import are_isomorphic, census_rows, classify, enumerate_structures, write_census
from .core import KummerStructure, lemma_suite, verify_axioms
from .errors import DomainError, GroupError, KstParseError, TableError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("kummer")


class InputError(Exception):
    """Bad command-line input; reported with exit code 2."""


def _load(path: str) -> KummerStructure:
    try:
        return kst.load(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from None
    except (KstParseError, TableError) as e:
        raise InputError(f"{path}: {e}") from None


def _verified(K: KummerStructure, path: str) -> bool:
    if K.report.ok:
        return True
    print(f"{path}: not a Kummer structure", file=sys.stderr)
    for line in K.report.lines():
        print(line, file=sys.stderr)
    return False


def cmd_build(args) -> int:
    try:
        G = parse_group(args.group)
        if args.twisted is not None:
            K = twisted_kummer_of(make_twisted(G, parse_involution(args.twisted)))
        else:
            K = kummer_of(G)
    except GroupError as e:
        raise InputError(str(e)) from None
    text = kst.dumps(K)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    K = _load(args.path)
    report = verify_axioms(K)
    for line in report.lines():
        print(line)
    if not report.ok:
        return EXIT_FAIL
    if args.lemmas:
        lemmas = lemma_suite(K)
        for line in lemmas.lines():
            print(line)
        if not lemmas.ok:
            return EXIT_FAIL
    return EXIT_OK


def _describe(c) -> list[str]:
    out = []
    if c.kummer_of is not None:
        out.append(f"abelian group: {c.kummer_of.notation() or 'trivial'}")
    if c.twisted_of is not None:
        a, b = c.twisted_of
        out.append(f"twisted group: a={a} b={b}")
    return out


def cmd_classify(args) -> int:
    K = _load(args.path)
    if not _verified(K, args.path):
        return EXIT_FAIL
    c = classify(K, all_generators=args.all_generators)
    if args.format == "json":
        print(json.dumps(c.to_json(), sort_keys=True))
    else:
        for key, val in c.to_json().items():
            if key in ("kummer_of", "twisted_of"):
                continue
            print(f"{key}: {'-' if val is None else val}")
        for line in _describe(c):
            print(line)
        if c.generator_report:
            for g, (plain, twisted) in c.generator_report.items():
                print(f"generator {g}: group={'yes' if plain else 'no'} twisted={'yes' if twisted else 'no'}")
    return EXIT_OK


def cmd_recover(args) -> int:
    K = _load(args.path)
    if not _verified(K, args.path):
        return EXIT_FAIL
    for line in _describe(classify(K)):
        print(line)
    return EXIT_OK


def cmd_iso(args) -> int:
    K1, K2 = _load(args.first), _load(args.second)
    if not (_verified(K1, args.first) and _verified(K2, args.second)):
        return EXIT_FAIL
    try:
        same = are_isomorphic(K1, K2, timeout=args.timeout)
    except TimeoutError:
        print("undecided: time budget exhausted", file=sys.stderr)
        return EXIT_FAIL
    print("isomorphic" if same else "not isomorphic")
    return EXIT_OK if same else EXIT_FAIL


def cmd_enumerate(args) -> int:
    try:
        structures = enumerate_structures(args.size)
    except DomainError as e:
        raise InputError(str(e)) from None
    rows = census_rows(args.size, structures)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_census(rows, fh)
    else:
        sys.stdout.write(write_census(rows))
    return EXIT_OK


def _seed(K: KummerStructure, g: int, spec: str, what: str) -> st.GString:
    parts = spec.split(",")
    if len(parts) != 2:
        raise InputError(f"--{what} expects two comma-separated element ids")
    try:
        a0, a1 = (K[p.strip()] for p in parts)
    except KeyError as e:
        raise InputError(f"--{what}: unknown element {e.args[0]!r}") from None
    try:
        return st.extend(K, g, a0, a1)
    except DomainError as e:
        raise InputError(f"--{what}: {e}") from None


def cmd_string(args) -> int:
    K = _load(args.path)
    if not _verified(K, args.path):
        return EXIT_FAIL
    try:
        g = K[args.g]
    except KeyError:
        raise InputError(f"--g: unknown element {args.g!r}") from None
    if K.double[g] == K.zero:
        raise InputError(f"--g: {args.g} is 2-torsion")
    alpha = _seed(K, g, args.alpha, "alpha")
    beta = _seed(K, g, args.beta, "beta")
    res = st.combine(alpha, beta, args.op)
    if res is None:
        print("undefined")
        return EXIT_FAIL
    name = "gamma" if args.op in ("add", "oadd") else "delta"
    print(f"{name}: {K.label(res.at(0))},{K.label(res.at(1))}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kummer", description="Finite Kummer structures.")
    p.add_argument("-v", "--verbose", action="store_true", help="debug logging to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("build", help="write K(G) or tK(G, iota) as KST")
    s.add_argument("group", help='group spec, e.g. "4,2" (empty string for the trivial group)')
    s.add_argument("--twisted", metavar="INV", help='involution matrix, e.g. "01;10"')
    s.add_argument("--out", help="output file (default stdout)")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("verify", help="check axioms A1-A4")
    s.add_argument("path")
    s.add_argument("--lemmas", action="store_true", help="also run the lemma suite L1-L7")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("classify", help="classification invariants")
    s.add_argument("path")
    s.add_argument("--format", choices=("json", "text"), default="text")
    s.add_argument("--all-generators", action="store_true", help="cross-check the string constructions for every generator")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("recover", help="the group and/or twisted group behind a structure")
    s.add_argument("path")
    s.set_defaults(func=cmd_recover)

    s = sub.add_parser("iso", help="isomorphism test (exit 0 iff isomorphic)")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--timeout", type=float, default=None, help="seconds before giving up (exit 1)")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("enumerate", help="census of all structures of a given size (CSV)")
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--out", help="CSV file (default stdout)")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("string", help="combine two strings")
    s.add_argument("path")
    s.add_argument("--g", required=True, help="generator element id")
    s.add_argument("--alpha", required=True, metavar="A0,A1")
    s.add_argument("--beta", required=True, metavar="B0,B1")
    s.add_argument("--op", choices=st.OPS, default="add")
    s.set_defaults(func=cmd_string)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse usage errors exit 2 already
        return int(e.code) if isinstance(e.code, int) else EXIT_INPUT
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
