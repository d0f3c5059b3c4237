"""Exact scalars: rationals, sparse multivariate polynomials, rational
functions and prime-field elements.

Rationals are :class:`fractions.Fraction`.  Polynomials live in a
:class:`Ring` (an ordered tuple of parameter names plus a namespace); terms are
kept in lexicographic order on the declared names, so two polynomials are
equal exactly when their term tuples are equal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, Mapping, Tuple

from .errors import BadPrimeError, ParseError, RingMismatchError

ALPHA = "alpha"

Exponent = Tuple[int, ...]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def _natural_key(name: str):
    return [int(tok) if tok.isdigit() else tok for tok in re.findall(r"\d+|\D+", name)]


def canonical_names(names: Iterable[str]) -> Tuple[str, ...]:
    """Sort parameter names: alpha last, digits compared numerically."""
    return tuple(sorted(set(names), key=lambda s: (s == ALPHA, _natural_key(s))))


@dataclass(frozen=True)
class Ring:
    names: Tuple[str, ...]
    namespace: str = ""

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate parameter names in {self.names}")

    @classmethod
    def of(cls, names: Iterable[str], namespace: str = "") -> "Ring":
        return cls(canonical_names(names), namespace)

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise RingMismatchError(f"{name!r} is not a parameter of {self}") from None

    def gen(self, name: str) -> "MultiPoly":
        exp = [0] * self.nvars
        exp[self.index(name)] = 1
        return MultiPoly(self, {tuple(exp): Fraction(1)})

    def const(self, c) -> "MultiPoly":
        c = as_fraction(c)
        if c == 0:
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * self.nvars: c})

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def __str__(self):
        ns = f"{self.namespace}:" if self.namespace else ""
        return f"{ns}Q[{', '.join(self.names)}]"


class MultiPoly:
    """Sparse polynomial with rational coefficients over a fixed ring."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exponent, Fraction] | None = None):
        self.ring = ring
        clean: Dict[Exponent, Fraction] = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != ring.nvars:
                    raise RingMismatchError(f"exponent {exp} does not fit {ring}")
                if c != 0:
                    clean[tuple(exp)] = as_fraction(c)
        self._terms = clean
        self._hash = None

    # -- structure -----------------------------------------------------------------
    @property
    def terms(self) -> Tuple[Tuple[Exponent, Fraction], ...]:
        """Terms in descending lex order (the canonical representation)."""
        return tuple(sorted(self._terms.items(), reverse=True))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.ring.nvars, Fraction(0))

    @property
    def leading(self) -> Tuple[Exponent, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms)
        return e, self._terms[e]

    def lc(self) -> Fraction:
        return self.leading[1]

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self._terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def variables(self) -> Tuple[str, ...]:
        used = set()
        for e in self._terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(self.ring.names[i] for i in sorted(used))

    def coefficients(self):
        return list(self._terms.values())

    def lift(self, ring: Ring) -> "MultiPoly":
        """Re-express in ``ring``, whose names must include every used name."""
        if ring == self.ring:
            return self
        pos = {}
        for i, name in enumerate(self.ring.names):
            if name in ring.names:
                pos[i] = ring.names.index(name)
        out = {}
        for e, c in self._terms.items():
            ne = [0] * ring.nvars
            for i, k in enumerate(e):
                if k:
                    if i not in pos:
                        raise RingMismatchError(
                            f"{self.ring.names[i]!r} missing from target ring {ring}")
                    ne[pos[i]] = k
            out[tuple(ne)] = c
        return MultiPoly(ring, out)

    # -- arithmetic ----------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise RingMismatchError(f"cannot combine {self.ring} with {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = as_fraction(other)
            if other == 0:
                raise ZeroDivisionError("polynomial division by zero")
            return MultiPoly(self.ring, {e: c / other for e, c in self._terms.items()})
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise RingMismatchError(f"cannot combine {self.ring} with {other.ring}")
            if other.is_constant():
                return self / other.constant_value()
            return RationalFunction(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.ring.const(other), self)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- division and gcd ----------------------------------------------------------
    def divmod(self, other: "MultiPoly"):
        """Lex division by a single divisor; remainder is zero iff ``other`` divides."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead_e, lead_c = other.leading
        work = dict(self._terms)
        quot: Dict[Exponent, Fraction] = {}
        rem: Dict[Exponent, Fraction] = {}
        while work:
            e = max(work)
            c = work[e]
            if all(a >= b for a, b in zip(e, lead_e)):
                m = tuple(a - b for a, b in zip(e, lead_e))
                f = c / lead_c
                quot[m] = quot.get(m, 0) + f
                for oe, oc in other._terms.items():
                    t = tuple(a + b for a, b in zip(m, oe))
                    v = work.get(t, 0) - f * oc
                    if v == 0:
                        work.pop(t, None)
                    else:
                        work[t] = v
            else:
                rem[e] = c
                del work[e]
        return MultiPoly(self.ring, quot), MultiPoly(self.ring, rem)

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "MultiPoly") -> bool:
        return other.divmod(self)[1].is_zero()

    def monic(self) -> "MultiPoly":
        if self.is_zero():
            return self
        return self / self.lc()

    def coeffs_in(self, var: int) -> Dict[int, "MultiPoly"]:
        """Coefficients with respect to one variable (that variable zeroed out)."""
        out: Dict[int, Dict[Exponent, Fraction]] = {}
        for e, c in self._terms.items():
            k = e[var]
            rest = e[:var] + (0,) + e[var + 1:]
            out.setdefault(k, {})[rest] = c
        return {k: MultiPoly(self.ring, t) for k, t in out.items()}

    def _monomial(self, var: int, k: int) -> "MultiPoly":
        e = [0] * self.ring.nvars
        e[var] = k
        return MultiPoly(self.ring, {tuple(e): Fraction(1)})

    # -- evaluation ----------------------------------------------------------------
    def evaluate(self, values: Mapping[str, object]):
        """Substitute ``values`` (any ring-compatible objects) for named parameters.

        Parameters missing from ``values`` stay symbolic.
        """
        gens = []
        for name in self.ring.names:
            gens.append(values[name] if name in values else self.ring.gen(name))
        total = Fraction(0)
        for e, c in self.terms:
            term = c
            for g, k in zip(gens, e):
                if k:
                    term = term * g ** k
            total = total + term
        return total

    def linear_part(self) -> Tuple[Fraction, Dict[str, Fraction]]:
        """Split a degree <= 1 polynomial into constant and per-name coefficients."""
        if self.total_degree() > 1:
            raise ValueError(f"{self} is not affine-linear")
        const = Fraction(0)
        coeffs: Dict[str, Fraction] = {}
        for e, c in self._terms.items():
            if not any(e):
                const = c
            else:
                coeffs[self.ring.names[e.index(1)]] = c
        return const, coeffs

    # -- printing ------------------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(self.ring.names, e) if k)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({self})"


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Monic gcd of two polynomials via recursive primitive remainder sequences."""
    if a.ring != b.ring:
        raise RingMismatchError(f"cannot combine {a.ring} with {b.ring}")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_constant() or b.is_constant():
        return a.ring.one()
    used_a, used_b = set(a.variables()), set(b.variables())
    ring = a.ring
    var_name = next(n for n in ring.names if n in used_a | used_b)
    v = ring.index(var_name)
    if var_name not in used_a:
        return poly_gcd(a, _content(b, v))
    if var_name not in used_b:
        return poly_gcd(_content(a, v), b)
    ca, cb = _content(a, v), _content(b, v)
    c = poly_gcd(ca, cb)
    pa, pb = a.exact_div(ca), b.exact_div(cb)
    if pa.degree_in(v) < pb.degree_in(v):
        pa, pb = pb, pa
    while not pb.is_zero():
        r = _prem(pa, pb, v)
        pa, pb = pb, (r.exact_div(_content(r, v)) if not r.is_zero() else r)
    g = pa.exact_div(_content(pa, v))
    return (c * g).monic()


def _content(a: MultiPoly, v: int) -> MultiPoly:
    coeffs = list(a.coeffs_in(v).values())
    if any(c.is_constant() for c in coeffs):
        return a.ring.one()
    return reduce(poly_gcd, coeffs)


def _prem(a: MultiPoly, b: MultiPoly, v: int) -> MultiPoly:
    db = b.degree_in(v)
    lcb = b.coeffs_in(v)[db]
    r = a
    while not r.is_zero() and r.degree_in(v) >= db:
        dr = r.degree_in(v)
        lcr = r.coeffs_in(v)[dr]
        r = lcb * r - lcr * b * b._monomial(v, dr - db)
    return r


class RationalFunction:
    """Reduced quotient of polynomials; the denominator is monic in lex order."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, RationalFunction):
            if den is not None:
                raise TypeError("use division to combine rational functions")
            self.num, self.den = num.num, num.den
            return
        if not isinstance(num, MultiPoly):
            if not isinstance(den, MultiPoly):
                raise TypeError("a ring is needed: pass at least one MultiPoly")
            num = den.ring.const(num)
        ring = num.ring
        if den is None:
            den = ring.one()
        elif not isinstance(den, MultiPoly):
            den = ring.const(den)
        if den.ring != ring:
            raise RingMismatchError(f"cannot combine {ring} with {den.ring}")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, ring.one()
            return
        if not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc()
        self.num, self.den = num / lc, den / lc

    @property
    def ring(self) -> Ring:
        return self.num.ring

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_constant(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value()

    def variables(self) -> Tuple[str, ...]:
        used = set(self.num.variables()) | set(self.den.variables())
        return tuple(n for n in self.ring.names if n in used)

    def lift(self, ring: Ring) -> "RationalFunction":
        return RationalFunction(self.num.lift(ring), self.den.lift(ring))

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.ring != self.ring:
                raise RingMismatchError(f"cannot combine {self.ring} with {other.ring}")
            return other
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise RingMismatchError(f"cannot combine {self.ring} with {other.ring}")
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.ring.const(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return RationalFunction(self.ring.one()) / (self ** -k)
        return RationalFunction(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, MultiPoly):
            other = RationalFunction(other)
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.is_zero()

    def evaluate(self, values: Mapping[str, object]):
        den = self.den.evaluate(values)
        if den == 0:
            raise ZeroDivisionError(f"denominator {self.den} vanishes at {dict(values)}")
        return self.num.evaluate(values) / den

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        num = str(self.num)
        den = str(self.den)
        if len(self.num.terms) > 1:
            num = f"({num})"
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", den):
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RationalFunction({self})"


def ratfun_normalize(num: MultiPoly, den: MultiPoly) -> RationalFunction:
    return RationalFunction(num, den)


def simplify(x):
    """Downcast a scalar to the simplest exact type that represents it."""
    if isinstance(x, RationalFunction):
        if x.den.is_constant():
            x = x.num / x.den.constant_value()
        else:
            return x
    if isinstance(x, MultiPoly):
        return x.constant_value() if x.is_constant() else x
    return as_fraction(x)


def to_ratfun(x, ring: Ring) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x if x.ring == ring else x.lift(ring)
    if isinstance(x, MultiPoly):
        return RationalFunction(x.lift(ring))
    return RationalFunction(ring.const(x))


def rat_arith(op: str, x, y) -> Fraction:
    x, y = as_fraction(x), as_fraction(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if y == 0:
            raise ZeroDivisionError("rational division by zero")
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def poly_arith(op: str, p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if p.ring != q.ring:
        raise RingMismatchError(f"cannot combine {p.ring} with {q.ring}")
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


# -- prime fields --------------------------------------------------------------------

def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FpScalar:
    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            raise ValueError(f"{self.value} is not reduced modulo {self.p}")

    def _coerce(self, other):
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise BadPrimeError(f"cannot mix F_{self.p} and F_{other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return reduce_mod_p(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpScalar((self.value + other.value) % self.p, self.p)

    __radd__ = __add__

    def __neg__(self):
        return FpScalar(-self.value % self.p, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpScalar((self.value - other.value) % self.p, self.p)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FpScalar(self.value * other.value % self.p, self.p)

    __rmul__ = __mul__

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return FpScalar(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** -k
        return FpScalar(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpScalar):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        if isinstance(other, Fraction):
            return other.denominator % self.p != 0 and self == reduce_mod_p(other, self.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.value)


def reduce_mod_p(x, p: int) -> FpScalar:
    """Image of a rational in F_p; raises BadPrimeError if p divides the denominator."""
    if not is_prime(p):
        raise BadPrimeError(f"{p} is not prime")
    x = as_fraction(x)
    if x.denominator % p == 0:
        raise BadPrimeError(f"denominator of {x} is divisible by {p}")
    return FpScalar(x.numerator * pow(x.denominator, -1, p) % p, p)


# -- textual syntax ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def tokenize(text: str, offset: int = 0):
    """Yield (kind, value, column) with 1-based columns shifted by ``offset``."""
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, name, sym = m.groups()
        col = m.start(m.lastindex) + 1 + offset
        if num is not None:
            out.append(("num", int(num), col))
        elif name is not None:
            out.append(("name", name, col))
        elif sym in "+-*/^()":
            out.append(("op", sym, col))
        else:
            raise ParseError(f"unexpected character {sym!r}", col=col)
        pos = m.end()
    out.append(("end", None, len(text) + 1 + offset))
    return out


def expression_names(text: str) -> set:
    return {v for kind, v, _ in tokenize(text) if kind == "name"}


class _ExprParser:
    def __init__(self, text: str, ring: Ring | None, offset: int):
        self.toks = tokenize(text, offset)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, sym):
        kind, v, col = self.take()
        if kind != "op" or v != sym:
            raise ParseError(f"expected {sym!r}", col=col)

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", col=self.peek()[2])
        val = self.expr()
        kind, v, col = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {v!r}", col=col)
        return val

    def expr(self):
        val = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            _, op, _ = self.take()
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, col = self.take()
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            else:
                if rhs == 0:
                    raise ParseError("division by zero", col=col)
                val = val / rhs
        return val

    def unary(self):
        kind, v, _ = self.peek()
        if kind == "op" and v in "+-":
            self.take()
            inner = self.unary()
            return -inner if v == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, v, col = self.take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer", col=col)
            return base ** v
        return base

    def atom(self):
        kind, v, col = self.take()
        if kind == "num":
            return Fraction(v)
        if kind == "name":
            if self.ring is None or v not in self.ring.names:
                raise ParseError(f"unknown parameter {v!r}", col=col)
            return self.ring.gen(v)
        if kind == "op" and v == "(":
            val = self.expr()
            self.expect_op(")")
            return val
        raise ParseError(f"unexpected token {v!r}" if v else "unexpected end of input", col=col)


def parse_scalar(text: str, ring: Ring | None = None, offset: int = 0):
    """Parse an exact scalar expression; returns Fraction, MultiPoly or RationalFunction."""
    val = _ExprParser(text, ring, offset).parse()
    if isinstance(val, RationalFunction):
        return simplify(val)
    if isinstance(val, MultiPoly):
        return simplify(val)
    return val
