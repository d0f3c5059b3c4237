"""Built-in catalog of tables, printed derivation patterns and printed automorphism families."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from ..algebra import AlgebraTable
from ..automorphisms import ParametricMatrixFamily
from .formats import (SymbolicPattern, anomalous_cells, parse_families, parse_family,
                      parse_pattern, parse_patterns, parse_table, parse_tables,
                      pattern_to_subspace, serialize_family, serialize_pattern,
                      serialize_table)

log = logging.getLogger(__name__)

__all__ = [
    "CatalogEntry", "SymbolicPattern", "anomalous_cells", "catalog_key", "load_catalog",
    "parse_families", "parse_family", "parse_pattern", "parse_patterns", "parse_table",
    "parse_tables", "pattern_to_subspace", "serialize", "serialize_family",
    "serialize_pattern", "serialize_table",
]

_BUILTIN = ("tables.alg", "derivations.pat", "automorphisms.fam")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    table: Optional[AlgebraTable] = None
    expected_der: Optional[SymbolicPattern] = None
    expected_aut: Optional[Tuple[ParametricMatrixFamily, ...]] = None
    provenance: str = ""

    @property
    def dim(self) -> int:
        for x in (self.table, self.expected_der):
            if x is not None:
                return x.dim
        return self.expected_aut[0].dim


def catalog_key(name: str):
    """As_<n>^<k> names sort by (n, k); anything else sorts after, by name."""
    m = re.fullmatch(r"As_(\d+)\^(\d+)", name)
    if m:
        return (0, int(m.group(1)), int(m.group(2)), name)
    return (1, 0, 0, name)


def _provenance(table_src, der_src, aut_src) -> str:
    parts = []
    if table_src:
        parts.append(f"table: {table_src}")
    if der_src:
        parts.append(f"derivations: {der_src}")
    if aut_src:
        parts.append(f"automorphisms: {aut_src}")
    return "; ".join(parts)


class _Builder:
    def __init__(self):
        self.tables: Dict[str, Tuple[AlgebraTable, str]] = {}
        self.patterns: Dict[str, Tuple[SymbolicPattern, str]] = {}
        self.families: Dict[str, Tuple[List[ParametricMatrixFamily], str]] = {}

    def add_text(self, text: str, filename: str, origin: str, replace_existing: bool):
        if filename.endswith(".alg"):
            for t in parse_tables(text, filename):
                self._put(self.tables, t.name, (t, origin), replace_existing)
        elif filename.endswith(".pat"):
            for p in parse_patterns(text, filename):
                self._put(self.patterns, p.name, (p, origin), replace_existing)
        elif filename.endswith(".fam"):
            grouped: Dict[str, List[ParametricMatrixFamily]] = {}
            for f in parse_families(text, filename):
                grouped.setdefault(f.name, []).append(f)
            for name, fams in grouped.items():
                fams.sort(key=lambda f: f.branch)
                self._put(self.families, name, (fams, origin), replace_existing)

    @staticmethod
    def _put(store, name, value, replace_existing):
        if name in store and replace_existing:
            log.info("user catalog replaces %s", name)
        store[name] = value

    def build(self) -> List[CatalogEntry]:
        names = set(self.tables) | set(self.patterns) | set(self.families)
        out = []
        for name in sorted(names, key=catalog_key):
            t = self.tables.get(name)
            p = self.patterns.get(name)
            f = self.families.get(name)
            out.append(CatalogEntry(
                name,
                table=t[0] if t else None,
                expected_der=p[0] if p else None,
                expected_aut=tuple(f[0]) if f else None,
                provenance=_provenance(t and t[1], p and p[1], f and f[1])))
        return out


def load_catalog(extra_dir: Optional[str | Path] = None) -> List[CatalogEntry]:
    """Built-in entries ordered by (n, k), merged with ``*.alg``/``*.pat``/``*.fam`` from extra_dir.

    A user file replaces the built-in component of the same kind for the same name.
    """
    b = _Builder()
    data = resources.files(__package__).joinpath("data")
    origins = {"tables.alg": "table written out in a proof",
               "derivations.pat": "printed derivation matrix",
               "automorphisms.fam": "printed automorphism family"}
    for fname in _BUILTIN:
        b.add_text(data.joinpath(fname).read_text(encoding="utf-8"), fname, origins[fname], False)
    if extra_dir is not None:
        for path in sorted(Path(extra_dir).iterdir()):
            if path.suffix in (".alg", ".pat", ".fam") and path.is_file():
                b.add_text(path.read_text(encoding="utf-8"), str(path),
                           f"user file {path.name}", True)
    return b.build()


def find_entry(catalog: List[CatalogEntry], name: str) -> Optional[CatalogEntry]:
    return next((e for e in catalog if e.name == name), None)


def serialize(entry: CatalogEntry) -> str:
    """All present components of an entry, as concatenated file blocks."""
    parts = []
    if entry.table is not None:
        parts.append(serialize_table(entry.table.renamed(entry.name)))
    if entry.expected_der is not None:
        parts.append(serialize_pattern(entry.expected_der))
    for fam in entry.expected_aut or ():
        parts.append(serialize_family(fam))
    return "\n".join(parts)


def with_table(entry: CatalogEntry, table: AlgebraTable) -> CatalogEntry:
    return replace(entry, table=table)
