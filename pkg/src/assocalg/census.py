"""Brute-force automorphism and derivation counts over a prime field.

Automorphisms are enumerated column by column.  After each column is fixed,
every residual component whose inputs are all assigned is checked, and the new
column must lie outside the span of the earlier ones; both cut the search
tree.  Candidate columns for one level are tested together with numpy.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .algebra import AlgebraTable
from .automorphisms import ParametricMatrixFamily
from .derivations import build_leibniz_system
from .errors import BadPrimeError, InfeasibleError
from .scalars import ALPHA, MultiPoly, RationalFunction, is_prime, reduce_mod_p

ALLOWED_PRIMES = (2, 3, 5, 7, 11, 13)
DEFAULT_MAX_NAIVE = 2 ** 48
PRUNING_THRESHOLD = 2 ** 24


@dataclass(frozen=True)
class CensusResult:
    p: int
    n: int
    aut_count: int
    der_count: int
    elapsed: float
    pruned: int
    warnings: Tuple[str, ...] = ()

    def summary(self) -> str:
        return (f"p={self.p} n={self.n} aut={self.aut_count} der={self.der_count} "
                f"pruned={self.pruned}")


def reduce_table(a: AlgebraTable, p: int) -> np.ndarray:
    if a.is_parametric:
        raise BadPrimeError("table depends on alpha; specialise it before a census")
    n = a.dim
    g = np.zeros((n, n, n), dtype=np.int64)
    for i, j, k, c in a.nonzero:
        g[i, j, k] = reduce_mod_p(c, p).value
    return g


def nullity_mod_p(rows: Sequence[Sequence], ncols: int, p: int) -> int:
    m = np.array([[reduce_mod_p(x, p).value for x in r] for r in rows], dtype=np.int64)
    m = m.reshape(-1, ncols) if m.size else np.zeros((0, ncols), dtype=np.int64)
    return ncols - rank_mod_p(m, p)


def rank_mod_p(m: np.ndarray, p: int) -> int:
    m = m.copy() % p
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        sel = r + nz[0]
        m[[r, sel]] = m[[sel, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        others = np.nonzero(m[:, c])[0]
        for i in others:
            if i != r:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        r += 1
    return r


def vanishing_constants(a: AlgebraTable, p: int, extra: Sequence = ()) -> List[str]:
    """Nonzero constants of the table, its Leibniz system or ``extra`` that vanish mod p."""
    seen = set()
    for *_, c in a.nonzero:
        seen.add(c)
    for row in build_leibniz_system(a).rows:
        seen.update(x for x in row if x != 0)
    for x in extra:
        if isinstance(x, (MultiPoly, RationalFunction)):
            polys = [x] if isinstance(x, MultiPoly) else [x.num, x.den]
            for poly in polys:
                seen.update(poly.coefficients())
        elif x != 0:
            seen.add(x)
    out = []
    for c in sorted({abs(Fraction(c)) for c in seen if isinstance(c, (int, Fraction))}):
        if c.numerator % p == 0:
            out.append(f"constant {c} vanishes mod {p}")
    return out


class _Engine:
    def __init__(self, gamma: np.ndarray, p: int):
        self.g = gamma
        self.p = p
        self.n = n = gamma.shape[0]
        self.cands = np.array(np.unravel_index(np.arange(p ** n), (p,) * n)).T.astype(np.int64)
        self.powers = p ** np.arange(n - 1, -1, -1)
        self.codes = self.cands @ self.powers
        self.order = self._column_order()
        self._sq = None

    def _column_order(self) -> List[int]:
        n, g = self.n, self.g
        needs = {}
        for i in range(n):
            for j in range(n):
                needs[(i, j)] = {i, j} | set(int(k) for k in np.nonzero(g[i, j])[0])
        order: List[int] = []
        left = set(range(n))
        while left:
            def score(c):
                have = set(order) | {c}
                done = sum(1 for s in needs.values() if s <= have)
                return (done, -c)
            best = max(left, key=score)
            order.append(best)
            left.remove(best)
        return order

    def _checks_for(self, depth: int):
        """Pairs (i, j) whose residual becomes decidable once order[:depth+1] are set."""
        have_before = set(self.order[:depth])
        have = have_before | {self.order[depth]}
        out = []
        for i in range(self.n):
            for j in range(self.n):
                need = {i, j} | set(int(k) for k in np.nonzero(self.g[i, j])[0])
                if need <= have and not need <= have_before:
                    out.append((i, j))
        return out

    def feasible(self, assigned: dict, depth: int, checks) -> np.ndarray:
        """Boolean mask over candidate columns for column ``order[depth]``."""
        p, n, g = self.p, self.n, self.g
        col = self.order[depth]
        C = self.cands
        m = C.shape[0]
        mask = np.ones(m, dtype=bool)
        # linear independence from the columns already chosen (depth 0 drops zero)
        span = self._span([assigned[c] for c in self.order[:depth]])
        mask &= ~span[self.codes]
        for i, j in checks:
            if i == col and j == col:
                prod = self._square_cache()
            elif i == col:
                prod = C @ np.tensordot(g, assigned[j], axes=([1], [0]))
            elif j == col:
                prod = C @ np.tensordot(g, assigned[i], axes=([0], [0]))
            else:
                prod = np.einsum("a,b,abt->t", assigned[i], assigned[j], g)[None, :]
            # f(e_i e_j) = sum_k g[i,j,k] f(e_k)
            rhs = np.zeros(n, dtype=np.int64)
            own = 0
            for k in np.nonzero(g[i, j])[0]:
                if k == col:
                    own = g[i, j, k]
                else:
                    rhs = rhs + g[i, j, k] * assigned[int(k)]
            diff = prod - rhs - own * C if own else prod - rhs
            mask &= np.all(diff % p == 0, axis=1)
        return mask

    def _square_cache(self) -> np.ndarray:
        # v * v for every candidate v; independent of the other columns
        if self._sq is None:
            C = self.cands
            self._sq = np.einsum("ma,mb,abt->mt", C, C, self.g)
        return self._sq

    def _span(self, vectors) -> np.ndarray:
        p = self.p
        inside = np.zeros(p ** self.n, dtype=bool)
        pts = np.zeros((1, self.n), dtype=np.int64)
        for v in vectors:
            pts = (pts[None, :, :] + np.arange(p)[:, None, None] * v[None, None, :]) % p
            pts = pts.reshape(-1, self.n)
        inside[pts @ self.powers] = True
        return inside

    def count_from(self, assigned: dict, depth: int, checks_by_depth) -> Tuple[int, int]:
        mask = self.feasible(assigned, depth, checks_by_depth[depth])
        pruned = int(mask.size - mask.sum())
        if depth == self.n - 1:
            return int(mask.sum()), pruned
        total = 0
        col = self.order[depth]
        for idx in np.nonzero(mask)[0]:
            assigned[col] = self.cands[idx]
            c, pr = self.count_from(assigned, depth + 1, checks_by_depth)
            total += c
            pruned += pr
        assigned.pop(col, None)
        return total, pruned


def count_automorphisms(gamma: np.ndarray, p: int, threads: int = 1) -> Tuple[int, int]:
    eng = _Engine(gamma, p)
    checks = [eng._checks_for(d) for d in range(eng.n)]
    first = eng.order[0]
    mask = eng.feasible({}, 0, checks[0])
    pruned0 = int(mask.size - mask.sum())
    roots = [int(i) for i in np.nonzero(mask)[0]]
    if eng.n == 1:
        return len(roots), pruned0
    threads = max(1, int(threads))
    chunks = [roots[k::threads] for k in range(threads)]

    def work(chunk):
        local = _Engine(gamma, p)
        total = pruned = 0
        for idx in chunk:
            c, pr = local.count_from({first: local.cands[idx]}, 1, checks)
            total += c
            pruned += pr
        return total, pruned

    if threads == 1:
        results = [work(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, chunks))
    return sum(r[0] for r in results), pruned0 + sum(r[1] for r in results)


def census(a: AlgebraTable, p: int, threads: int = 1,
           max_naive: int = DEFAULT_MAX_NAIVE) -> CensusResult:
    if not is_prime(p):
        raise BadPrimeError(f"{p} is not prime")
    if p not in ALLOWED_PRIMES:
        raise BadPrimeError(f"prime must be one of {ALLOWED_PRIMES}")
    n = a.dim
    naive = p ** (n * n)
    if naive > max_naive:
        raise InfeasibleError(f"p^(n^2) = {p}^{n * n} exceeds {max_naive}; use a smaller prime")
    if naive > PRUNING_THRESHOLD and not a.nonzero:
        raise InfeasibleError(
            f"{p}^{n * n} matrices and nothing to prune on (zero algebra); use a smaller prime")
    gamma = reduce_table(a, p)
    warns = tuple(vanishing_constants(a, p))
    start = time.perf_counter()
    aut, pruned = count_automorphisms(gamma, p, threads)
    system = build_leibniz_system(a)
    der = p ** nullity_mod_p(system.rows, n * n, p)
    return CensusResult(p, n, aut, der, time.perf_counter() - start, pruned, warns)


def predicted_count(fam: ParametricMatrixFamily, p: int) -> Optional[int]:
    """Number of parameter tuples over F_p, or None if the side conditions are coupled."""
    if fam.unverifiable or fam.equations or ALPHA in fam.ring.names:
        return None
    single = set()
    for poly in fam.nonvanishing:
        terms = poly.terms
        if len(terms) != 1 or sum(terms[0][0]) != 1:
            return None
        single.add(poly.variables()[0])
    for row in fam.entries:
        for x in row:
            if isinstance(x, RationalFunction):
                if not set(x.den.variables()) <= single:
                    return None
    count = 1
    for name in fam.params:
        count *= (p - 1) if name in single else p
    return count

