"""Line-based text formats for tables (.alg), derivation patterns (.pat) and
automorphism families (.fam).

All three share the same conventions: UTF-8, ``#`` starts a comment, blank
lines are ignored, whitespace around operators is free.  A file may hold
several blocks; each block starts with a header line.

    algebra As_4^4 dim 4
    e1*e2 = e3
    e2*e1 = -e3

    pattern As_2^1 dim 2
    row: d11, 0
    row: d21, 2*d11

    family As_2^1 dim 2
    branch 1
    row: a11, 0
    row: a21, a11^2
    nonzero: a11
    require: a22 - a11^2 = 0
    unverifiable: radical entries
    note: free text
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..algebra import MAX_DIM, AlgebraTable
from ..automorphisms import ParametricMatrixFamily
from ..errors import ParseError
from ..linalg import Subspace, mat_to_vec
from ..scalars import (ALPHA, MultiPoly, RationalFunction, Ring, canonical_names,
                       expression_names, parse_scalar, to_ratfun, tokenize)

_HEADER = re.compile(r"^(algebra|pattern|family)\s+(\S+)\s+dim\s+(\S+)\s*$")
_BASIS = re.compile(r"^e(\d+)$")
_PRODUCT = re.compile(r"^\s*e(\d+)\s*\*\s*e(\d+)\s*=(.*)$")


@dataclass(frozen=True)
class _Line:
    number: int
    text: str      # comment stripped, right-trimmed
    indent: int    # column offset of ``text`` in the original line


def _lines(text: str) -> List[_Line]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if stripped:
            out.append(_Line(number, stripped, len(body) - len(stripped)))
    return out


def _blocks(text: str, kind: str, source: Optional[str]):
    """Split into (header match, header line, body lines) for headers of ``kind``."""
    blocks = []
    for line in _lines(text):
        m = _HEADER.match(line.text)
        if m:
            if m.group(1) != kind:
                raise ParseError(f"expected a '{kind}' block, found '{m.group(1)}'",
                                 line.number, line.indent + 1, source)
            blocks.append((m, line, []))
        elif not blocks:
            raise ParseError(f"expected header '{kind} <name> dim <n>'",
                             line.number, line.indent + 1, source)
        else:
            blocks[-1][2].append(line)
    return blocks


def _header_dim(m, line: _Line, source) -> int:
    try:
        n = int(m.group(3))
    except ValueError:
        raise ParseError(f"dimension must be an integer, got {m.group(3)!r}",
                         line.number, line.indent + m.start(3) + 1, source) from None
    if not 1 <= n <= MAX_DIM:
        raise ParseError(f"dimension must be between 1 and {MAX_DIM}",
                         line.number, line.indent + m.start(3) + 1, source)
    return n


def _reposition(err: ParseError, line: _Line, source) -> ParseError:
    return ParseError(err.message, line.number, err.col, source)


# -- tables ----------------------------------------------------------------------------

def _split_terms(rhs: str, offset: int):
    """Split a linear combination at top-level + and binary - signs.

    Yields (sign, text, column offset of text).
    """
    toks = tokenize(rhs, offset)
    depth = 0
    start = 0
    sign = 1
    parts = []
    prev = None
    for kind, val, col in toks:
        pos = col - 1 - offset
        if kind == "op" and val == "(":
            depth += 1
        elif kind == "op" and val == ")":
            depth -= 1
        elif kind == "op" and val in "+-" and depth == 0 and prev is not None and not (
                prev[0] == "op" and prev[1] in "+-*/^("):
            parts.append((sign, rhs[start:pos], offset + start))
            sign = 1 if val == "+" else -1
            start = pos + 1
        elif kind == "end":
            parts.append((sign, rhs[start:], offset + start))
        prev = (kind, val)
    return parts


def _parse_term(text: str, offset: int, n: int, ring: Optional[Ring]):
    """Returns (k, coefficient) for one term ``[+|-][coeff*]e<k>``."""
    body = text.strip()
    lead = offset + len(text) - len(text.lstrip())
    if not body:
        raise ParseError("missing term", col=lead + 1)
    if body[0] in "+-" and re.fullmatch(r"[+-]\s*e\d+", body):
        k, c = _parse_term(body[1:], lead + 1, n, ring)
        return k, (-c if body[0] == "-" else c)
    m = re.search(r"(?:^|\*)\s*(e\d+)\s*$", body)
    if m is None:
        raise ParseError(f"term {body!r} must end in a basis element e<k>", col=lead + 1)
    k = int(m.group(1)[1:])
    kcol = lead + m.start(1) + 1
    if not 1 <= k <= n:
        raise ParseError(f"index {k} outside 1..{n}", col=kcol)
    coeff_text = body[:m.start()]
    if not coeff_text.strip():
        return k, Fraction(1)
    if "*" not in body[m.start():m.start(1)]:
        raise ParseError("expected '*' before the basis element", col=kcol)
    return k, parse_scalar(coeff_text, ring, lead)


def _parse_table_block(m, header: _Line, body: Sequence[_Line], source) -> AlgebraTable:
    name = m.group(2)
    n = _header_dim(m, header, source)
    names = set()
    for line in body:
        pm = _PRODUCT.match(line.text)
        if pm:
            names |= {x for x in _safe_names(pm.group(3)) if not _BASIS.match(x)}
    # alpha is the only symbol a table may carry; other names fail in parse_scalar
    ring = Ring.of([ALPHA], name) if ALPHA in names else None
    products: Dict[Tuple[int, int], Dict[int, object]] = {}
    for line in body:
        pm = _PRODUCT.match(line.text)
        if pm is None:
            raise ParseError("expected 'e<i>*e<j> = <linear combination>'",
                             line.number, line.indent + 1, source)
        i, j = int(pm.group(1)), int(pm.group(2))
        for idx, g in ((i, 1), (j, 2)):
            if not 1 <= idx <= n:
                raise ParseError(f"index {idx} outside 1..{n}", line.number,
                                 line.indent + pm.start(g) + 1, source)
        if (i, j) in products:
            raise ParseError(f"duplicate product e{i}*e{j}", line.number, line.indent + 1, source)
        rhs = pm.group(3)
        offset = line.indent + pm.start(3)
        combo: Dict[int, object] = {}
        try:
            if rhs.strip() == "0":
                parts = []
            else:
                parts = _split_terms(rhs, offset)
            for sign, text, off in parts:
                k, c = _parse_term(text, off, n, ring)
                combo[k] = combo.get(k, Fraction(0)) + (c if sign > 0 else -c)
        except ParseError as err:
            raise _reposition(err, line, source) from None
        products[(i, j)] = combo
    return AlgebraTable.from_products(n, products, name)


def _safe_names(text: str) -> set:
    try:
        return expression_names(text)
    except ParseError:
        return set()


def parse_tables(text: str, source: Optional[str] = None) -> List[AlgebraTable]:
    return [_parse_table_block(m, h, body, source) for m, h, body in _blocks(text, "algebra", source)]


def parse_table(text: str, source: Optional[str] = None) -> AlgebraTable:
    tables = parse_tables(text, source)
    if len(tables) != 1:
        raise ParseError(f"expected exactly one algebra, found {len(tables)}", source=source)
    return tables[0]


def _coeff_text(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    return f"({c})"


def serialize_table(a: AlgebraTable) -> str:
    """Canonical text: one line per nonzero product, every coefficient written out."""
    lines = [f"algebra {a.name or 'A'} dim {a.dim}"]
    for (i, j), combo in a.products().items():
        terms = " + ".join(f"{_coeff_text(c)}*e{k}" for k, c in sorted(combo.items()))
        lines.append(f"e{i}*e{j} = {terms}")
    return "\n".join(lines) + "\n"


# -- shared matrix block helpers -------------------------------------------------------

def _split_row(text: str) -> List[Tuple[str, int]]:
    out = []
    start = 0
    for part in text.split(","):
        lead = len(part) - len(part.lstrip())
        out.append((part.strip(), start + lead))
        start += len(part) + 1
    return out


def _row_cells(line: _Line, n: int, source) -> List[Tuple[str, int]]:
    """Cells of a ``row:`` line with their 0-based column offsets in the original line."""
    rest = line.text[len("row:"):]
    base = line.indent + len("row:")
    cells = [(t, base + off) for t, off in _split_row(rest)]
    if len(cells) == 1 and cells[0][0] == "0":
        return [("0", cells[0][1])] * n
    if len(cells) != n:
        raise ParseError(f"row has {len(cells)} entries, expected {n}",
                         line.number, line.indent + 1, source)
    for t, off in cells:
        if not t:
            raise ParseError("empty entry", line.number, off + 1, source)
    return cells


def _directive(line: _Line) -> Tuple[str, str, int]:
    key, sep, rest = line.text.partition(":")
    if not sep:
        m = re.match(r"^(branch)\s+(.*)$", line.text)
        if m:
            return "branch", m.group(2).strip(), line.indent + m.start(2)
        return "", line.text, line.indent
    lead = len(rest) - len(rest.lstrip())
    return key.strip(), rest.strip(), line.indent + len(key) + 1 + lead


def _parse_cell(text: str, off: int, ring: Optional[Ring], line: _Line, source):
    try:
        return parse_scalar(text, ring, off)
    except ParseError as err:
        raise _reposition(err, line, source) from None


# -- derivation patterns ---------------------------------------------------------------

@dataclass(frozen=True)
class SymbolicPattern:
    """Printed matrix whose entries are linear forms in the pattern symbols d_ij.

    ``alpha`` may appear in coefficients.  The ring namespace is the entry name,
    so symbols of different entries never mix.
    """

    name: str
    dim: int
    ring: Ring
    entries: Tuple[Tuple[object, ...], ...]
    rows_text: Tuple[Tuple[str, ...], ...] = ()

    @property
    def symbols(self) -> Tuple[str, ...]:
        return tuple(s for s in self.ring.names if s != ALPHA)

    def specialize(self, values: Dict[str, object]):
        return tuple(tuple(_eval(x, values) for x in row) for row in self.entries)


def _eval(x, values):
    if isinstance(x, (MultiPoly, RationalFunction)):
        v = x.evaluate(values)
        if isinstance(v, (MultiPoly, RationalFunction)) and v.is_constant():
            return v.constant_value()
        if isinstance(v, MultiPoly):
            return RationalFunction(v)
        return v
    return x


def _check_linear(p: SymbolicPattern, line_of=None):
    syms = [p.ring.index(s) for s in p.symbols]
    for i, row in enumerate(p.entries):
        for j, x in enumerate(row):
            if x == 0:
                continue
            where = f"{p.name}: entry ({i + 1},{j + 1})"
            if not isinstance(x, (MultiPoly, RationalFunction)):
                raise ParseError(f"{where} is a nonzero constant; patterns are homogeneous")
            rf = to_ratfun(x, p.ring)
            if any(rf.den.degree_in(v) for v in syms):
                raise ParseError(f"{where} has a pattern symbol in a denominator")
            for exps, _ in rf.num.terms:
                deg = sum(exps[v] for v in syms)
                if deg != 1:
                    raise ParseError(f"{where} is not linear homogeneous in the pattern symbols")


def _parse_pattern_block(m, header: _Line, body: Sequence[_Line], source) -> SymbolicPattern:
    name = m.group(2)
    n = _header_dim(m, header, source)
    rows = []
    for line in body:
        key, _, _ = _directive(line)
        if key != "row":
            raise ParseError("expected 'row: <entries>'", line.number, line.indent + 1, source)
        rows.append((line, _row_cells(line, n, source)))
    if len(rows) != n:
        raise ParseError(f"pattern {name} has {len(rows)} rows, expected {n}",
                         header.number, 1, source)
    names = set()
    for line, cells in rows:
        for t, off in cells:
            try:
                names |= expression_names(t)
            except ParseError as err:
                raise ParseError(err.message, line.number, off + err.col, source) from None
    ring = Ring.of(canonical_names(names), name)
    entries = tuple(tuple(_parse_cell(t, off, ring, line, source) for t, off in cells)
                    for line, cells in rows)
    pat = SymbolicPattern(name, n, ring, entries,
                          tuple(tuple(t for t, _ in cells) for _, cells in rows))
    try:
        _check_linear(pat)
    except ParseError as err:
        raise ParseError(err.message, header.number, None, source) from None
    return pat


def parse_patterns(text: str, source: Optional[str] = None) -> List[SymbolicPattern]:
    return [_parse_pattern_block(m, h, b, source) for m, h, b in _blocks(text, "pattern", source)]


def parse_pattern(text: str, source: Optional[str] = None) -> SymbolicPattern:
    pats = parse_patterns(text, source)
    if len(pats) != 1:
        raise ParseError(f"expected exactly one pattern, found {len(pats)}", source=source)
    return pats[0]


def pattern_to_subspace(p: SymbolicPattern) -> Subspace:
    """Span of the matrices obtained by setting one symbol to 1 and the rest to 0."""
    _check_linear(p)
    n = p.dim
    vectors = []
    for s in p.symbols:
        values = {t: (1 if t == s else 0) for t in p.symbols}
        vectors.append(mat_to_vec(p.specialize(values)))
    return Subspace.span(vectors, n * n)


def anomalous_cells(p: SymbolicPattern) -> List[Tuple[int, int, str]]:
    """Cells holding a bare symbol d_kl at a position other than (k, l).

    Such cells usually come from a transposed or mistyped index.  A diagonal
    symbol repeated on the diagonal (d11 at (2,2)) is a common scaling shape
    and is not reported.
    """
    out = []
    for i, row in enumerate(p.rows_text):
        for j, t in enumerate(row):
            m = re.fullmatch(r"d(\d+)(\d)", t)
            if m is None:
                continue
            k, l = int(m.group(1)), int(m.group(2))
            if (k, l) == (i + 1, j + 1) or (k == l and i == j):
                continue
            out.append((i + 1, j + 1, t))
    return out


def serialize_pattern(p: SymbolicPattern) -> str:
    lines = [f"pattern {p.name} dim {p.dim}"]
    for row in p.entries:
        lines.append("row: " + ", ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"


# -- automorphism families -------------------------------------------------------------

def _parse_family_block(m, header: _Line, body: Sequence[_Line], source) -> ParametricMatrixFamily:
    name = m.group(2)
    n = _header_dim(m, header, source)
    rows: List[Tuple[_Line, List[Tuple[str, int]]]] = []
    nonzero: List[Tuple[_Line, str, int]] = []
    require: List[Tuple[_Line, str, int]] = []
    unverifiable = None
    note = None
    branch = 1
    for line in body:
        key, value, off = _directive(line)
        if key == "row":
            rows.append((line, _row_cells(line, n, source)))
        elif key == "nonzero":
            nonzero.append((line, value, off))
        elif key == "require":
            lhs, eq, rhs = value.partition("=")
            if not eq or rhs.strip() != "0":
                raise ParseError("expected 'require: <polynomial> = 0'",
                                 line.number, off + 1, source)
            require.append((line, lhs, off))
        elif key == "unverifiable":
            unverifiable = value or "unverifiable"
        elif key == "note":
            note = value
        elif key == "branch":
            try:
                branch = int(value)
            except ValueError:
                raise ParseError("branch must be an integer", line.number, off + 1, source) from None
        else:
            raise ParseError(f"unknown directive {key or line.text!r}",
                             line.number, line.indent + 1, source)
    if len(rows) != n:
        raise ParseError(f"family {name} has {len(rows)} rows, expected {n}",
                         header.number, 1, source)
    raw = tuple(", ".join(t for t, _ in cells) for _, cells in rows)
    if unverifiable:
        return ParametricMatrixFamily(name, n, Ring.of((), name), unverifiable=unverifiable,
                                      raw_rows=raw, note=note, branch=branch)
    names = set()
    for line, cells in rows:
        for t, off in cells:
            try:
                names |= expression_names(t)
            except ParseError as err:
                raise ParseError(err.message, line.number, off + err.col, source) from None
    for line, text, off in nonzero + require:
        names |= _safe_names(text)
    ring = Ring.of(canonical_names(names), name)
    entries = tuple(tuple(_parse_cell(t, off, ring, line, source) for t, off in cells)
                    for line, cells in rows)

    def poly(line, text, off):
        val = _parse_cell(text, off, ring, line, source)
        rf = to_ratfun(val, ring)
        if not rf.is_polynomial():
            raise ParseError("side conditions must be polynomials", line.number, off + 1, source)
        return rf.num * (1 / rf.den.constant_value())

    return ParametricMatrixFamily(
        name, n, ring, entries,
        nonvanishing=tuple(poly(*x) for x in nonzero),
        equations=tuple(poly(*x) for x in require),
        raw_rows=raw, note=note, branch=branch)


def parse_families(text: str, source: Optional[str] = None) -> List[ParametricMatrixFamily]:
    return [_parse_family_block(m, h, b, source) for m, h, b in _blocks(text, "family", source)]


def parse_family(text: str, source: Optional[str] = None) -> ParametricMatrixFamily:
    fams = parse_families(text, source)
    if len(fams) != 1:
        raise ParseError(f"expected exactly one family, found {len(fams)}", source=source)
    return fams[0]


def serialize_family(f: ParametricMatrixFamily) -> str:
    lines = [f"family {f.name} dim {f.dim}"]
    if f.branch != 1:
        lines.append(f"branch {f.branch}")
    if f.unverifiable:
        lines.append(f"unverifiable: {f.unverifiable}")
        lines.extend(f"row: {r}" for r in f.raw_rows)
    else:
        for row in f.entries:
            lines.append("row: " + ", ".join(str(x) for x in row))
        lines.extend(f"nonzero: {p}" for p in f.nonvanishing)
        lines.extend(f"require: {p} = 0" for p in f.equations)
    if f.note:
        lines.append(f"note: {f.note}")
    return "\n".join(lines) + "\n"
