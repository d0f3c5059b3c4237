"""Homomorphism residuals, automorphism tests and verification of parametric families.

A matrix F acts by f(e_i) = sum_j F[j][i] e_j (columns are images).
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraTable
from .errors import AlgebraError, DimensionMismatchError, MalformedFamilyError
from .linalg import det, inverse, matmul, rank
from .scalars import ALPHA, MultiPoly, RationalFunction, Ring, poly_gcd, to_ratfun


@dataclass(frozen=True)
class ParametricMatrixFamily:
    """n x n matrix of rational functions in free parameters, with side conditions.

    ``nonvanishing`` polynomials are assumed nonzero on the family; ``equations``
    are assumed zero.  A family that cannot be handled symbolically (radicals)
    carries ``unverifiable`` and keeps its rows only as text.
    """

    name: str
    dim: int
    ring: Ring
    entries: Tuple[Tuple[object, ...], ...] = ()
    nonvanishing: Tuple[MultiPoly, ...] = ()
    equations: Tuple[MultiPoly, ...] = ()
    unverifiable: Optional[str] = None
    raw_rows: Tuple[str, ...] = ()
    note: Optional[str] = None
    branch: int = 1

    @property
    def params(self) -> Tuple[str, ...]:
        return tuple(n for n in self.ring.names if n != ALPHA)

    @property
    def is_parametric_in_alpha(self) -> bool:
        return ALPHA in self.ring.names

    def entry_rf(self, i: int, j: int) -> RationalFunction:
        return to_ratfun(self.entries[i][j], self.ring)

    def evaluate(self, values: Dict[str, Fraction]):
        return tuple(tuple(_concrete(x, values) for x in row) for row in self.entries)

    def renamed_params(self, mapping: Dict[str, str]) -> "ParametricMatrixFamily":
        new_ring = Ring.of([mapping.get(n, n) for n in self.ring.names], self.ring.namespace)
        gens = {n: new_ring.gen(mapping.get(n, n)) for n in self.ring.names}

        def sub(x):
            if isinstance(x, (MultiPoly, RationalFunction)):
                return _as_scalar(x.evaluate(gens), new_ring)
            return x

        return replace(
            self, ring=new_ring,
            entries=tuple(tuple(sub(x) for x in row) for row in self.entries),
            nonvanishing=tuple(_as_poly(sub(p), new_ring) for p in self.nonvanishing),
            equations=tuple(_as_poly(sub(p), new_ring) for p in self.equations))


def _as_scalar(x, ring):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return x


def _as_poly(x, ring) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, RationalFunction) and x.is_polynomial():
        return x.num / x.den.constant_value()
    return ring.const(x)


def _concrete(x, values):
    if isinstance(x, (MultiPoly, RationalFunction)):
        v = x.evaluate(values)
        if not isinstance(v, Fraction):
            v = Fraction(v) if isinstance(v, int) else _force_fraction(v)
        return v
    return x


def _force_fraction(v):
    if isinstance(v, (MultiPoly, RationalFunction)) and v.is_constant():
        return v.constant_value()
    raise AlgebraError(f"value {v} still depends on parameters")


# -- residuals -----------------------------------------------------------------------

def _lifted_gamma(a: AlgebraTable, ring: Ring | None):
    out = []
    for i, j, k, c in a.nonzero:
        if isinstance(c, RationalFunction):
            if ring is None:
                ring = c.ring
            c = c.lift(ring)
        out.append((i, j, k, c))
    return out


def _ring_of(mat) -> Ring | None:
    for row in mat:
        for x in row:
            if isinstance(x, (MultiPoly, RationalFunction)):
                return x.ring
    return None


def hom_residual(a: AlgebraTable, f):
    """R[i][j][t] = coefficient of e_t in f(e_i) f(e_j) - f(e_i e_j); 0-based indices."""
    n = a.dim
    if len(f) != n or any(len(r) != n for r in f):
        raise DimensionMismatchError(f"expected a {n}x{n} matrix")
    gamma = _lifted_gamma(a, _ring_of(f))
    cols = [[f[r][c] for r in range(n)] for c in range(n)]
    by_pair: Dict[Tuple[int, int], List[Tuple[int, object]]] = {}
    for i, j, k, c in gamma:
        by_pair.setdefault((i, j), []).append((k, c))

    def mult(x, y):
        out = [Fraction(0)] * n
        for (p, q), lst in by_pair.items():
            if x[p] != 0 and y[q] != 0:
                xy = x[p] * y[q]
                for k, c in lst:
                    out[k] = out[k] + xy * c
        return out

    res = []
    for i in range(n):
        row = []
        for j in range(n):
            lhs = mult(cols[i], cols[j])
            for k, c in by_pair.get((i, j), ()):
                for t in range(n):
                    if cols[k][t] != 0:
                        lhs[t] = lhs[t] - c * cols[k][t]
            row.append(tuple(lhs))
        res.append(tuple(row))
    return tuple(res)


def residual_is_zero(res) -> bool:
    return all(x == 0 for plane in res for vec in plane for x in vec)


def is_automorphism(a: AlgebraTable, f) -> bool:
    if not residual_is_zero(hom_residual(a, f)):
        return False
    return det(f) != 0


# -- tangent space at the identity ---------------------------------------------------

def jacobian_at_identity(a: AlgebraTable):
    """Linearisation of hom_residual at F = I, rows indexed like the Leibniz system.

    The residual is quadratic in F, so (R(I + E) - R(I - E)) / 2 is exactly the
    derivative in direction E.
    """
    n = a.dim
    one, zero = Fraction(1), Fraction(0)
    cols = []
    for b in range(n):
        for a_ in range(n):
            plus = [[(one if r == c else zero) for c in range(n)] for r in range(n)]
            minus = [row[:] for row in plus]
            plus[a_][b] += 1
            minus[a_][b] -= 1
            rp, rm = hom_residual(a, plus), hom_residual(a, minus)
            col = []
            for i in range(n):
                for j in range(n):
                    for t in range(n):
                        col.append((rp[i][j][t] - rm[i][j][t]) / 2)
            cols.append(col)
    # columns were produced in unknown order a + n*b
    return tuple(tuple(cols[c][r] for c in range(n * n)) for r in range(n ** 3))


def tangent_dim(a: AlgebraTable) -> int:
    n = a.dim
    return n * n - rank(jacobian_at_identity(a), n * n)


def systems_equivalent(rows1, rows2) -> bool:
    """Equal as multisets of rows, allowing one global sign flip."""
    def key(rows):
        return sorted(tuple(str(x) for x in r) for r in rows)
    if key(rows1) == key(rows2):
        return True
    neg = [tuple(-x for x in r) for r in rows2]
    return key(rows1) == key(neg)


# -- family verification -------------------------------------------------------------

class Status(str, enum.Enum):
    VERIFIED = "VERIFIED"
    FAILED = "FAILED"
    UNVERIFIABLE = "UNVERIFIABLE"


@dataclass(frozen=True)
class FamilyVerdict:
    status: Status
    reason: str = ""
    witness: Optional[Dict[str, Fraction]] = None
    entry: Optional[Tuple[int, int, int]] = None  # 1-based (i, j, t) or None for det
    residual: Optional[str] = None

    def describe(self) -> str:
        if self.status is Status.VERIFIED:
            return "VERIFIED"
        if self.status is Status.UNVERIFIABLE:
            return f"UNVERIFIABLE({self.reason})"
        w = ", ".join(f"{k}={v}" for k, v in (self.witness or {}).items())
        where = f"R{self.entry}" if self.entry else "det"
        return f"FAILED({where} = {self.residual}; witness {w})"


def _strip_factors(den: MultiPoly, guards: Sequence[MultiPoly]) -> MultiPoly:
    g = den
    for nv in guards:
        h = poly_gcd(g, nv)
        while not h.is_constant():
            g = g.exact_div(h)
            h = poly_gcd(g, nv)
    return g


def _covered(den: MultiPoly, guards: Sequence[MultiPoly]) -> bool:
    rest = _strip_factors(den, guards)
    return set(rest.variables()) <= {ALPHA}


def check_well_formed(fam: ParametricMatrixFamily):
    """Every entry denominator must be a product of nonvanishing factors (alpha is generic)."""
    for i, row in enumerate(fam.entries):
        for j, x in enumerate(row):
            rf = to_ratfun(x, fam.ring)
            if not _covered(rf.den, fam.nonvanishing):
                raise MalformedFamilyError(
                    f"{fam.name}: denominator {rf.den} of entry ({i + 1},{j + 1}) "
                    f"is not covered by the nonvanishing list")


def _solve_equations(fam: ParametricMatrixFamily):
    """Eliminate ``require`` constraints by solving each for a linearly occurring parameter."""
    subs: Dict[str, object] = {}
    eqs = [to_ratfun(e, fam.ring) for e in fam.equations]
    guards = list(fam.nonvanishing)
    while eqs:
        eq = eqs.pop(0)
        if eq.is_zero():
            continue
        num = eq.num
        chosen = None
        for name in fam.params:
            v = fam.ring.index(name)
            if num.degree_in(v) != 1:
                continue
            coeffs = num.coeffs_in(v)
            lead = coeffs[1]
            if lead.is_constant() or _covered(lead, guards):
                chosen = (name, -RationalFunction(coeffs.get(0, fam.ring.zero())) / lead)
                break
        if chosen is None:
            return None
        name, value = chosen
        subs = {k: _subst(x, {name: value}) for k, x in subs.items()}
        subs[name] = value
        eqs = [to_ratfun(_subst(e, {name: value}), fam.ring) for e in eqs]
    return subs


def _subst(x, values):
    if isinstance(x, (MultiPoly, RationalFunction)):
        v = x.evaluate(values)
        return Fraction(v) if isinstance(v, int) else v
    return x


VALUE_POOL: Tuple[Fraction, ...] = tuple(
    [Fraction(k) for k in range(1, 8)] + [Fraction(-k) for k in range(1, 8)]
    + sorted({Fraction(p, q) for q in range(2, 8) for p in range(-7, 8)
              if p != 0 and Fraction(p, q).denominator != 1},
             key=lambda x: (x.denominator, abs(x.numerator), x < 0)))


def _admissible(values, guards, dens) -> bool:
    for g in list(guards) + list(dens):
        try:
            if g.evaluate(values) == 0:
                return False
        except ZeroDivisionError:
            return False
    return True


def _candidate_assignments(names: Sequence[str], seed: int = 0, random_tries: int = 2000):
    for v in VALUE_POOL:
        yield {n: v for n in names}
    rng = random.Random(seed)
    for _ in range(random_tries):
        yield {n: rng.choice(VALUE_POOL) for n in names}


def verify_family(a: AlgebraTable, fam: ParametricMatrixFamily) -> FamilyVerdict:
    if fam.unverifiable:
        return FamilyVerdict(Status.UNVERIFIABLE, fam.unverifiable)
    if fam.dim != a.dim:
        raise DimensionMismatchError(f"family is {fam.dim}x{fam.dim}, algebra has dim {a.dim}")
    check_well_formed(fam)
    subs = _solve_equations(fam)
    if subs is None:
        return FamilyVerdict(Status.UNVERIFIABLE, "constraints not solvable for a parameter")
    ring = fam.ring
    if a.is_parametric and ALPHA not in ring.names:
        ring = Ring.of(list(ring.names) + [ALPHA], ring.namespace)
    entries = [[to_ratfun(_subst(x, subs) if subs else x, fam.ring).lift(ring)
                for x in row] for row in fam.entries]
    guards = [g.lift(ring) for g in fam.nonvanishing]
    dens = [e.den for row in entries for e in row if not e.den.is_constant()]
    free = [n for n in ring.names if n not in subs]

    res = hom_residual(a, entries)
    n = a.dim
    for i in range(n):
        for j in range(n):
            for t in range(n):
                r = res[i][j][t]
                if r != 0:
                    return _failed(r, (i + 1, j + 1, t + 1), free, guards, dens, subs)
    d = det(entries)
    if d == 0:
        return _failed(to_ratfun(d, ring), None, free, guards, dens, subs)
    return FamilyVerdict(Status.VERIFIED)


def _failed(r, entry, free, guards, dens, subs) -> FamilyVerdict:
    rf = r if isinstance(r, RationalFunction) else None
    for values in _candidate_assignments(free):
        if not _admissible(values, guards, dens):
            continue
        try:
            val = rf.evaluate(values) if rf is not None else r
        except ZeroDivisionError:
            continue
        if entry is None or val != 0:
            witness = dict(values)
            for name, expr in subs.items():
                witness[name] = _concrete(expr, values)
            return FamilyVerdict(Status.FAILED, "nonzero residual" if entry else "singular",
                                 witness, entry, str(r))
    return FamilyVerdict(Status.FAILED, "nonzero residual, no small witness found",
                         None, entry, str(r))


def closure_spot_check(a: AlgebraTable, fam: ParametricMatrixFamily, trials: int = 10,
                       seed: int = 0, max_retries: int = 200) -> bool:
    """Sample members; products and inverses must again be automorphisms."""
    if fam.unverifiable:
        raise AlgebraError(f"{fam.name}: cannot sample an unverifiable family")
    subs = _solve_equations(fam) or {}
    free = [n for n in fam.ring.names if n not in subs]
    dens = [to_ratfun(x, fam.ring).den for row in fam.entries for x in row]
    rng = random.Random(seed)

    def sample():
        for _ in range(max_retries):
            values = {n: rng.choice(VALUE_POOL) for n in free}
            try:
                for name, expr in subs.items():
                    values[name] = _concrete(expr, values)
                if not _admissible(values, fam.nonvanishing, dens):
                    continue
                return fam.evaluate(values)
            except ZeroDivisionError:
                continue
        raise AlgebraError(f"{fam.name}: could not sample an admissible member")

    for _ in range(trials):
        f, g = sample(), sample()
        if det(f) == 0 or det(g) == 0:
            return False
        for m in (f, g, matmul(f, g), inverse(f)):
            if not is_automorphism(a, m):
                return False
    return True
