"""Exact rational arithmetic: multivariate polynomials over Q, monomial
ideals, weight vectors and the weighted-graded slices of the polynomial ring.

Everything here is immutable and pure.  No floating point is used anywhere
in this package; all scalars are `fractions.Fraction`.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import DimensionMismatch, ParseError

Mono = tuple  # exponent vector; length equals the ambient dimension


# ---------------------------------------------------------------------------
# rationals


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    m = re.fullmatch(r"(-?\d+)(?:/(\d+))?", text)
    if not m:
        raise ParseError(f"invalid rational {text!r}", 0)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError("zero denominator", 0)
    return Fraction(num, den)


def fmt_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# monomial helpers


def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Mono, b: Mono) -> Mono:
    return tuple(x - y for x, y in zip(a, b))


def mono_degree(a: Mono) -> int:
    return sum(a)


def grlex_key(m: Mono):
    return (sum(m), m)


def mono_str(m: Mono) -> str:
    parts = []
    for i, e in enumerate(m):
        if e == 0:
            continue
        parts.append(f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}")
    return "*".join(parts) if parts else "1"


def monomials_upto_degree(dim: int, bound: int) -> Iterator[Mono]:
    """All exponent vectors of total degree <= bound, in grlex order."""
    def rec(prefix, remaining, slots):
        if slots == 0:
            yield prefix
            return
        for e in range(remaining + 1):
            yield from rec(prefix + (e,), remaining - e, slots - 1)

    out = [m for m in rec((), bound, dim)]
    out.sort(key=grlex_key)
    return iter(out)


# ---------------------------------------------------------------------------
# term-level expression parser, shared with the operator grammar


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[xd]\d+|s)|(?P<op>[-+*/^()]))")


def tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            break
        if m.group("int"):
            tokens.append(("int", int(m.group("int")), m.start("int")))
        elif m.group("name"):
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


def parse_terms(text: str, allow: str = "x"):
    """Parse a sum of products into [(coefficient, [(name, exponent), ...])].

    `allow` is a string of permitted factor kinds: 'x' for variables,
    'd' for partials, 's' for the central parameter.  Grammar:
      expr   := ['-'] term (('+'|'-') term)*
      term   := coeff ('*' factor)* | factor ('*' factor)*
      coeff  := int ('/' posint)?
      factor := name ('^' nat)?
    """
    tokens = tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    def take(kind=None, value=None):
        nonlocal i
        tok = tokens[i]
        if kind and tok[0] != kind or (value is not None and tok[1] != value):
            raise ParseError(f"expected {value or kind}, got {tok[1]!r}", tok[2])
        i += 1
        return tok

    def parse_factor():
        tok = take("name")
        name = tok[1]
        if name[0] not in allow:
            raise ParseError(f"{name!r} not allowed here", tok[2])
        exp = 1
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            exp = take("int")[1]
        return (name, exp)

    def parse_term():
        coeff = Fraction(1)
        factors = []
        tok = peek()
        if tok[0] == "int":
            take()
            coeff = Fraction(tok[1])
            if peek()[0] == "op" and peek()[1] == "/":
                take()
                den = take("int")[1]
                if den == 0:
                    raise ParseError("zero denominator", tok[2])
                coeff /= den
        else:
            factors.append(parse_factor())
        while peek()[0] == "op" and peek()[1] == "*":
            take()
            factors.append(parse_factor())
        return coeff, factors

    terms = []
    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if take()[1] == "-" else 1
    while True:
        coeff, factors = parse_term()
        terms.append((sign * coeff, factors))
        tok = peek()
        if tok[0] == "end":
            break
        if tok[0] == "op" and tok[1] in "+-":
            sign = -1 if take()[1] == "-" else 1
        else:
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
    return terms


# ---------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Sparse multivariate polynomial over Q, canonical and immutable."""

    __slots__ = ("dim", "terms", "_hash")

    def __init__(self, dim: int, terms=None):
        self.dim = dim
        clean = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    if len(m) != dim:
                        raise DimensionMismatch(
                            f"monomial {m} in dimension-{dim} polynomial")
                    clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    # -- constructors

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls(dim, {})

    @classmethod
    def constant(cls, dim: int, c) -> "Polynomial":
        return cls(dim, {(0,) * dim: Fraction(c)})

    @classmethod
    def one(cls, dim: int) -> "Polynomial":
        return cls.constant(dim, 1)

    @classmethod
    def monomial(cls, m: Mono, coeff=1) -> "Polynomial":
        return cls(len(m), {tuple(m): Fraction(coeff)})

    @classmethod
    def variable(cls, i: int, dim: int) -> "Polynomial":
        e = [0] * dim
        e[i] = 1
        return cls(dim, {tuple(e): Fraction(1)})

    @classmethod
    def parse(cls, text: str, dim: int) -> "Polynomial":
        terms = {}
        for coeff, factors in parse_terms(text, allow="x"):
            exps = [0] * dim
            for name, e in factors:
                idx = int(name[1:]) - 1
                if idx < 0 or idx >= dim:
                    raise ParseError(f"variable {name} out of range 1..{dim}", 0)
                exps[idx] += e
            key = tuple(exps)
            terms[key] = terms.get(key, Fraction(0)) + coeff
        return cls(dim, terms)

    # -- arithmetic

    def _check(self, other: "Polynomial"):
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} vs {other.dim}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Polynomial(self.dim, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.dim, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Polynomial(self.dim, out)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.dim)
        return Polynomial(self.dim, {m: v * c for m, v in self.terms.items()})

    def mul_mono(self, m: Mono, coeff=1) -> "Polynomial":
        coeff = Fraction(coeff)
        return Polynomial(
            self.dim, {mono_mul(k, m): v * coeff for k, v in self.terms.items()})

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        out = Polynomial.one(self.dim)
        for _ in range(n):
            out = out * self
        return out

    def partial(self, i: int) -> "Polynomial":
        out = {}
        for m, c in self.terms.items():
            if m[i] == 0:
                continue
            m2 = list(m)
            m2[i] -= 1
            out[tuple(m2)] = out.get(tuple(m2), Fraction(0)) + c * m[i]
        return Polynomial(self.dim, out)

    # -- queries

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.dim, Fraction(0))

    def monomials(self):
        return sorted(self.terms, key=grlex_key, reverse=True)

    def leading_monomial(self) -> Mono:
        if not self.terms:
            raise ValueError("zero polynomial")
        return max(self.terms, key=grlex_key)

    def div_exact(self, g: "Polynomial"):
        """Return q with self == q*g, or None when g does not divide exactly.

        Long division by the single divisor g; for a principal ideal the
        remainder vanishes iff the division is exact.
        """
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead = g.leading_monomial()
        lc = g.terms[lead]
        rem = dict(self.terms)
        quo = {}
        while rem:
            m = max(rem, key=grlex_key)
            if not mono_divides(lead, m):
                return None
            q = mono_div(m, lead)
            c = rem[m] / lc
            quo[q] = quo.get(q, Fraction(0)) + c
            for gm, gc in g.terms.items():
                key = mono_mul(q, gm)
                nv = rem.get(key, Fraction(0)) - c * gc
                if nv:
                    rem[key] = nv
                else:
                    rem.pop(key, None)
        return Polynomial(self.dim, quo)

    # -- identity

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.dim == other.dim
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dim, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in self.monomials():
            c = self.terms[m]
            ms = mono_str(m)
            if ms == "1":
                body = fmt_rational(abs(c))
            elif abs(c) == 1:
                body = ms
            else:
                body = f"{fmt_rational(abs(c))}*{ms}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    __repr__ = __str__


def poly_parse(text: str, dim: int) -> Polynomial:
    return Polynomial.parse(text, dim)


# ---------------------------------------------------------------------------
# weight vectors and weighted degrees


class WeightVector:
    """Strictly positive rational weights; `total` is their sum."""

    __slots__ = ("weights", "total")

    def __init__(self, weights: Iterable):
        ws = tuple(Fraction(w) for w in weights)
        if not ws or any(w <= 0 for w in ws):
            raise ValueError("weights must be strictly positive")
        self.weights = ws
        self.total = sum(ws, Fraction(0))

    @classmethod
    def parse(cls, text: str) -> "WeightVector":
        return cls([parse_rational(p) for p in text.split(",")])

    @property
    def dim(self) -> int:
        return len(self.weights)

    def __eq__(self, other):
        return isinstance(other, WeightVector) and self.weights == other.weights

    def __hash__(self):
        return hash(self.weights)

    def __str__(self):
        return ",".join(fmt_rational(w) for w in self.weights)


def weighted_degree(m: Mono, w: WeightVector) -> Fraction:
    if len(m) != w.dim:
        raise DimensionMismatch(f"monomial length {len(m)} vs weights {w.dim}")
    return sum((e * wi for e, wi in zip(m, w.weights)), Fraction(0))


def monomials_weighted_upto(w: WeightVector, bound: Fraction):
    """All monomials of weighted degree <= bound (bound may be negative)."""
    bound = Fraction(bound)
    out = []

    def rec(prefix, remaining, i):
        if i == w.dim:
            out.append(tuple(prefix))
            return
        e = 0
        while e * w.weights[i] <= remaining:
            rec(prefix + [e], remaining - e * w.weights[i], i + 1)
            e += 1

    if bound >= 0:
        rec([], bound, 0)
    out.sort(key=grlex_key)
    return out


def monomials_of_weighted_degree(w: WeightVector, gamma: Fraction):
    gamma = Fraction(gamma)
    return [m for m in monomials_weighted_upto(w, gamma)
            if weighted_degree(m, w) == gamma]


# ---------------------------------------------------------------------------
# monomial ideals


def minimalize(monos: Iterable[Mono]) -> tuple:
    ms = sorted(set(tuple(m) for m in monos), key=grlex_key)
    out = []
    for m in ms:
        if not any(mono_divides(g, m) for g in out):
            out.append(m)
    return tuple(out)


class MonomialIdeal:
    """Monomial ideal given by its minimal generator set."""

    __slots__ = ("dim", "gens")

    def __init__(self, dim: int, gens: Iterable[Mono] = ()):
        gens = tuple(tuple(g) for g in gens)
        for g in gens:
            if len(g) != dim:
                raise DimensionMismatch(f"generator {g} in dimension {dim}")
        self.dim = dim
        self.gens = minimalize(gens)

    @classmethod
    def unit(cls, dim: int) -> "MonomialIdeal":
        return cls(dim, [(0,) * dim])

    @classmethod
    def zero(cls, dim: int) -> "MonomialIdeal":
        return cls(dim, [])

    def _check(self, other: "MonomialIdeal"):
        if self.dim != other.dim:
            raise DimensionMismatch(f"{self.dim} vs {other.dim}")

    def is_unit(self) -> bool:
        return self.gens == ((0,) * self.dim,)

    def is_zero(self) -> bool:
        return not self.gens

    def contains_monomial(self, m: Mono) -> bool:
        return any(mono_divides(g, m) for g in self.gens)

    def __add__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        self._check(other)
        return MonomialIdeal(self.dim, self.gens + other.gens)

    def __mul__(self, other: "MonomialIdeal") -> "MonomialIdeal":
        self._check(other)
        return MonomialIdeal(
            self.dim,
            [mono_mul(a, b) for a in self.gens for b in other.gens])

    def scale_by_monomial(self, m: Mono) -> "MonomialIdeal":
        return MonomialIdeal(self.dim, [mono_mul(g, m) for g in self.gens])

    def __le__(self, other: "MonomialIdeal") -> bool:
        self._check(other)
        return all(other.contains_monomial(g) for g in self.gens)

    def __eq__(self, other):
        return (isinstance(other, MonomialIdeal) and self.dim == other.dim
                and self.gens == other.gens)

    def __hash__(self):
        return hash((self.dim, self.gens))

    def __str__(self):
        if not self.gens:
            return "(0)"
        return "(" + ", ".join(mono_str(g) for g in self.gens) + ")"

    __repr__ = __str__

    def to_json(self):
        return [mono_str(g) for g in self.gens]


def graded_ideal(w: WeightVector, gamma, strict: bool) -> MonomialIdeal:
    """Minimal generators of the ideal of monomials of weighted degree
    > gamma (strict) or >= gamma.

    Every minimal generator has weighted degree <= gamma + max(w), so a
    finite enumeration is complete; positivity of the weights guarantees
    termination.
    """
    gamma = Fraction(gamma)
    maxw = max(w.weights)
    qualifies = (lambda d: d > gamma) if strict else (lambda d: d >= gamma)
    if qualifies(Fraction(0)):
        return MonomialIdeal.unit(w.dim)
    gens = [m for m in monomials_weighted_upto(w, gamma + maxw)
            if qualifies(weighted_degree(m, w))]
    return MonomialIdeal(w.dim, gens)
