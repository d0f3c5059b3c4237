"""Command-line front end: ``assocalg check | der | autverify | census | audit``.

Exit codes: 0 success, 1 mathematical failure, 2 parse or input error,
3 infeasible census or bad prime.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from .algebra import AlgebraTable, check_associativity
from .audit import human_report, run_audit, write_records
from .automorphisms import Status, closure_spot_check, tangent_dim, verify_family
from .catalog import find_entry, load_catalog, parse_families, parse_pattern, parse_table
from .catalog import pattern_to_subspace
from .census import DEFAULT_MAX_NAIVE, census, predicted_count
from .derivations import central_derivations, derivation_basis
from .errors import AlgebraError, BadPrimeError, InfeasibleError, ParseError
from .linalg import vec_to_mat

EXIT_OK = 0
EXIT_MATH = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3

EXTRA_CATALOG_ENV = "ASSOCALG_EXTRA_CATALOG"

log = logging.getLogger("assocalg")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ParseError(f"cannot read file: {err.strerror}", source=path) from None


def _load_table(path: str) -> AlgebraTable:
    return parse_table(_read(path), path)


def _print_matrix(mat, indent: str = "  ") -> None:
    cells = [[str(x) for x in row] for row in mat]
    width = max((len(c) for row in cells for c in row), default=1)
    for row in cells:
        print(indent + "[" + "  ".join(c.rjust(width) for c in row) + "]")


def cmd_check(args) -> int:
    table = _load_table(args.file)
    violations = check_associativity(table)
    if not violations:
        print(f"{table.name}: associative")
        return EXIT_OK
    print(f"{table.name}: {len(violations)} associativity violation(s)")
    for v in violations:
        res = ", ".join(str(x) for x in v.residual)
        print(f"  (e{v.i} e{v.j}) e{v.k} - e{v.i} (e{v.j} e{v.k}) = ({res})")
    return EXIT_MATH


def _resolve_pattern(spec: Optional[str], table: AlgebraTable, catalog):
    """A file path, a catalog name, or (when spec is None) the table's own catalog entry."""
    if spec is not None and Path(spec).is_file():
        return parse_pattern(_read(spec), spec), spec
    name = spec if spec is not None else table.name
    entry = find_entry(catalog, name)
    if entry is None or entry.expected_der is None:
        if spec is not None:
            raise ParseError(f"no pattern file or catalog entry named {spec!r}")
        return None, None
    return entry.expected_der, f"catalog {entry.name}"


def cmd_der(args) -> int:
    table = _load_table(args.file)
    basis = derivation_basis(table)
    print(f"{table.name}: dim Der = {basis.dim}")
    for k, m in enumerate(basis.mats, start=1):
        print(f"D{k} =")
        _print_matrix(m)
    c_all = central_derivations(table)
    c_der = central_derivations(table, within_derivations=True)
    print(f"central derivations C(A) (image in Z(A), zero on A^2): dim {c_all.dim}")
    print(f"C(A) intersected with Der(A): dim {c_der.dim}")
    pattern, origin = _resolve_pattern(args.pattern, table, load_catalog(_extra_dir(args)))
    if pattern is None:
        return EXIT_OK
    if pattern.dim != table.dim:
        raise ParseError(f"pattern is {pattern.dim}x{pattern.dim}, table has dim {table.dim}")
    printed = pattern_to_subspace(pattern)
    if printed == basis.space:
        print(f"pattern ({origin}): MATCH, dim {printed.dim}")
        return EXIT_OK
    print(f"pattern ({origin}): MISMATCH, computed dim {basis.dim}, pattern dim {printed.dim}")
    for v in basis.space.basis:
        if not printed.contains(v):
            print("  derivation not covered by the pattern:")
            _print_matrix(vec_to_mat(v, table.dim), "    ")
    for v in printed.basis:
        if not basis.space.contains(v):
            print("  pattern matrix that is not a derivation:")
            _print_matrix(vec_to_mat(v, table.dim), "    ")
    return EXIT_MATH


def cmd_autverify(args) -> int:
    table = _load_table(args.algfile)
    fams = parse_families(_read(args.famfile), args.famfile)
    if not fams:
        raise ParseError("no family blocks found", source=args.famfile)
    status = EXIT_OK
    for fam in fams:
        verdict = verify_family(table, fam)
        line = f"{fam.name} branch {fam.branch}: {verdict.describe()}"
        if verdict.status is Status.VERIFIED and args.closure:
            line += f", closure spot check {'ok' if closure_spot_check(table, fam) else 'FAILED'}"
        print(line)
        if verdict.status is Status.FAILED:
            status = EXIT_MATH
    print(f"tangent_dim = {tangent_dim(table)}, dim Der = {derivation_basis(table).dim}")
    return status


def cmd_census(args) -> int:
    table = _load_table(args.algfile)
    result = census(table, args.prime, threads=args.threads, max_naive=args.max_naive)
    for w in result.warnings:
        print(f"warning: {w}")
    print(f"{table.name}: {result.summary()} elapsed={result.elapsed:.3f}s")
    fams = []
    if args.family:
        fams = parse_families(_read(args.family), args.family)
    else:
        entry = find_entry(load_catalog(_extra_dir(args)), table.name)
        if entry is not None and entry.table is not None and entry.expected_aut:
            if entry.table.gamma == table.gamma:
                fams = list(entry.expected_aut)
    if len(fams) == 1 and verify_family(table, fams[0]).status is Status.VERIFIED:
        predicted = predicted_count(fams[0], args.prime)
        if predicted is None:
            print("predicted: unsupported")
        else:
            agree = "AGREE" if predicted == result.aut_count else "DISAGREE"
            print(f"predicted {predicted}, actual {result.aut_count}: {agree}")
    return EXIT_OK


def _extra_dir(args) -> Optional[str]:
    value = getattr(args, "extra_catalog", None) or os.environ.get(EXTRA_CATALOG_ENV)
    return value or None


def cmd_audit(args) -> int:
    catalog = load_catalog(_extra_dir(args))
    records = run_audit(catalog, workers=args.threads)
    if args.records == "-":
        write_records(records, sys.stdout)
    else:
        print(human_report(catalog, records))
        if args.records:
            with open(args.records, "w", encoding="utf-8", newline="\n") as fh:
                write_records(records, fh)
    if args.strict and any(r.verdict == "MISMATCH" for r in records):
        return EXIT_MATH
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assocalg",
        description="Derivations and automorphisms of finite-dimensional associative algebras.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="test associativity of a table")
    p.add_argument("file", help=".alg file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("der", help="derivation algebra of a table")
    p.add_argument("file", help=".alg file")
    p.add_argument("--pattern", help="pattern file or catalog entry name to compare against")
    p.add_argument("--extra-catalog", help="directory of extra catalog files")
    p.set_defaults(func=cmd_der)

    p = sub.add_parser("autverify", help="verify automorphism families against a table")
    p.add_argument("algfile")
    p.add_argument("famfile")
    p.add_argument("--closure", action="store_true",
                   help="also spot-check closure under products and inverses")
    p.set_defaults(func=cmd_autverify)

    p = sub.add_parser("census", help="count automorphisms and derivations over F_p")
    p.add_argument("algfile")
    p.add_argument("-p", "--prime", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-naive", type=int, default=DEFAULT_MAX_NAIVE,
                   help="upper bound on p^(n^2) (default 2^48)")
    p.add_argument("--family", help=".fam file whose predicted count is compared")
    p.add_argument("--extra-catalog", help="directory of extra catalog files")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("audit", help="compare the catalog with computed results")
    p.add_argument("--extra-catalog",
                   help=f"directory of extra .alg/.pat/.fam files (default: ${EXTRA_CATALOG_ENV})")
    p.add_argument("--records", help="write JSON-lines records here ('-' for stdout only)")
    p.add_argument("--threads", type=int, default=1, help="entries audited concurrently")
    p.add_argument("--strict", action="store_true", help="exit 1 if any record is MISMATCH")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except (BadPrimeError, InfeasibleError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except AlgebraError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
