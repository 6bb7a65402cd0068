"""Sparse multivariate polynomials over ZZ, QQ and ZZ/m.

A :class:`PolyRing` fixes the coefficient ring and an ordered tuple of
variable names.  A :class:`Polynomial` is an immutable mapping from exponent
tuples to nonzero coefficients.  Coefficients over ZZ are Python ints, over
QQ they are :class:`fractions.Fraction`, over ZZ/m they are ints in ``[0, m)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponents = tuple  # tuple[int, ...]


class RingMismatchError(ValueError):
    pass


class PolySyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class NotDivisibleError(ArithmeticError):
    def __init__(self, monomial, coefficient, divisor):
        super().__init__(
            f"coefficient {coefficient} of monomial {monomial} is not divisible by {divisor}"
        )
        self.monomial = monomial
        self.coefficient = coefficient
        self.divisor = divisor


# ---------------------------------------------------------------- coefficients


@dataclass(frozen=True)
class CoefficientRing:
    """One of ZZ, QQ, or ZZ/m (m >= 2, composite allowed)."""

    kind: str  # "ZZ" | "QQ" | "ZZ/m"
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in ("ZZ", "QQ", "ZZ/m"):
            raise ValueError(f"unknown coefficient ring kind {self.kind!r}")
        if self.kind == "ZZ/m":
            if self.modulus is None or self.modulus < 2:
                raise ValueError("modulus must be >= 2")
        elif self.modulus is not None:
            raise ValueError("only ZZ/m carries a modulus")

    @property
    def is_field(self) -> bool:
        return self.kind == "QQ" or (self.kind == "ZZ/m" and is_prime(self.modulus))

    @property
    def characteristic(self) -> int:
        return self.modulus if self.kind == "ZZ/m" else 0

    def convert(self, c):
        """Map an int or Fraction into this ring."""
        if self.kind == "ZZ":
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ValueError(f"{c} is not an integer")
                return c.numerator
            return int(c)
        if self.kind == "QQ":
            return Fraction(c)
        if isinstance(c, Fraction):
            return c.numerator * pow(c.denominator, -1, self.modulus) % self.modulus
        return int(c) % self.modulus

    def inverse(self, c):
        if self.kind == "QQ":
            return 1 / Fraction(c)
        if self.kind == "ZZ/m":
            return pow(c, -1, self.modulus)
        if c in (1, -1):
            return c
        raise ZeroDivisionError(f"{c} is not a unit in ZZ")

    def __str__(self):
        return f"ZZ/{self.modulus}" if self.kind == "ZZ/m" else self.kind


ZZ = CoefficientRing("ZZ")
QQ = CoefficientRing("QQ")


def Zmod(m: int) -> CoefficientRing:
    return CoefficientRing("ZZ/m", m)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


# ------------------------------------------------------------ monomial orders


def grevlex_key(e: Exponents) -> tuple:
    """Sort key with *smaller* key meaning *larger* monomial in grevlex."""
    return (-sum(e),) + e[::-1]


def lex_key(e: Exponents) -> tuple:
    return tuple(-a for a in e)


ORDER_KEYS = {"grevlex": grevlex_key, "lex": lex_key}


def order_key(order: str):
    try:
        return ORDER_KEYS[order]
    except KeyError:
        raise ValueError(f"unknown monomial order {order!r}") from None


# ------------------------------------------------------------------ rings


@dataclass(frozen=True)
class PolyRing:
    coeffs: CoefficientRing
    vars: tuple

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("duplicate variable names")
        for v in self.vars:
            if not _NAME_RE.fullmatch(v):
                raise ValueError(f"invalid variable name {v!r}")

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> Polynomial:
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list[Polynomial]:
        return [self.var(v) for v in self.vars]

    def monomial(self, exps: Mapping[str, int] | Sequence[int], coeff=1) -> Polynomial:
        if isinstance(exps, Mapping):
            e = [0] * self.nvars
            for k, a in exps.items():
                e[self.index(k)] = a
            exps = e
        return Polynomial(self, {tuple(exps): coeff})

    def parse(self, text: str) -> Polynomial:
        return parse(text, self)

    def with_coeffs(self, coeffs: CoefficientRing) -> PolyRing:
        return PolyRing(coeffs, self.vars)

    def extend(self, more: Iterable[str]) -> PolyRing:
        new = list(self.vars)
        for v in more:
            if v not in new:
                new.append(v)
        return PolyRing(self.coeffs, tuple(new))

    def __str__(self):
        return f"{self.coeffs}[{', '.join(self.vars)}]"


def polyring(names: str | Iterable[str], coeffs: CoefficientRing = ZZ) -> tuple:
    """``R, x, y = polyring("x y")`` convenience constructor."""
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    R = PolyRing(coeffs, tuple(names))
    return (R, *R.gens())


# ------------------------------------------------------------- polynomials


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping, *, _canonical: bool = False):
        self.ring = ring
        if _canonical:
            self.terms = terms
        else:
            conv = ring.coeffs.convert
            n = ring.nvars
            clean = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != n:
                    raise ValueError(f"exponent vector {e} has wrong length for {ring}")
                c = conv(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
            if ring.coeffs.kind == "ZZ/m":
                m = ring.coeffs.modulus
                clean = {e: c % m for e, c in clean.items() if c % m}
            else:
                clean = {e: c for e, c in clean.items() if c}
            self.terms = clean
        self._hash = None

    # -- basic protocol
    @property
    def coeff_ring(self) -> CoefficientRing:
        return self.ring.coeffs

    @property
    def vars(self) -> tuple:
        return self.ring.vars

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({render(self)!r}, ring={self.ring})"

    def __str__(self):
        return render(self)

    # -- arithmetic
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, _add(self.terms, other.terms, 1, self._mod()), _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        m = self._mod()
        if m:
            return Polynomial(self.ring, {e: (-c) % m for e, c in self.terms.items()}, _canonical=True)
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()}, _canonical=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, _add(self.terms, other.terms, -1, self._mod()), _canonical=True)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial(self.ring, _mul(self.terms, other.terms, self._mod()), _canonical=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def _mod(self):
        return self.ring.coeffs.modulus

    def scale(self, c) -> Polynomial:
        c = self.ring.coeffs.convert(c)
        return Polynomial(self.ring, {e: a * c for e, a in self.terms.items()})

    def mul_monomial(self, e: Exponents, c=1) -> Polynomial:
        return Polynomial(
            self.ring,
            {tuple(a + b for a, b in zip(m, e)): a * c for m, a in self.terms.items()},
        )

    # -- inspection
    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.ring.nvars, 0)

    def sorted_terms(self, order: str = "grevlex") -> list:
        key = order_key(order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]))

    def leading_term(self, order: str = "grevlex"):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = order_key(order)
        e = min(self.terms, key=key)
        return e, self.terms[e]

    def used_vars(self) -> set:
        out = set()
        for e in self.terms:
            for i, a in enumerate(e):
                if a:
                    out.add(self.ring.vars[i])
        return out

    def coefficients(self):
        return list(self.terms.values())

    # -- ring changes
    def change_coeffs(self, coeffs: CoefficientRing) -> Polynomial:
        return Polynomial(self.ring.with_coeffs(coeffs), self.terms)

    def to_ring(self, ring: PolyRing) -> Polynomial:
        """Embed into ``ring`` by variable name (ring extension / restriction)."""
        idx = []
        for i, v in enumerate(self.ring.vars):
            if v in ring.vars:
                idx.append(ring.index(v))
            else:
                idx.append(None)
        n = ring.nvars
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n
            for i, a in enumerate(e):
                if a:
                    if idx[i] is None:
                        raise RingMismatchError(
                            f"variable {self.ring.vars[i]!r} missing from target ring {ring}"
                        )
                    ne[idx[i]] = a
            out[tuple(ne)] = out.get(tuple(ne), 0) + c
        return Polynomial(ring, out)


def _add(a: dict, b: dict, sign: int, mod) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + sign * c
        if mod:
            v %= mod
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _mul(a: dict, b: dict, mod) -> dict:
    if len(a) < len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = get(e, 0) + ca * cb
    if mod:
        return {e: c % mod for e, c in out.items() if c % mod}
    return {e: c for e, c in out.items() if c}


def _check_same(a: Polynomial, b: Polynomial):
    if a.ring != b.ring:
        raise RingMismatchError(f"ring mismatch: {a.ring} vs {b.ring}")


# ------------------------------------------------------------- operations


def add(a: Polynomial, b: Polynomial) -> Polynomial:
    _check_same(a, b)
    return a + b


def mul(a: Polynomial, b: Polynomial) -> Polynomial:
    _check_same(a, b)
    return a * b


def partial_derivative(f: Polynomial, var: str) -> Polynomial:
    i = f.ring.index(var)
    out = {}
    for e, c in f.terms.items():
        a = e[i]
        if a:
            ne = e[:i] + (a - 1,) + e[i + 1 :]
            out[ne] = c * a
    return Polynomial(f.ring, out)


def diffop_apply(orders: Sequence[int] | Mapping[str, int], f: Polynomial) -> Polynomial:
    """Apply the divided-power operator with ``x^b -> prod binom(b_i, a_i) x^(b-a)``.

    Binomials are computed over ZZ and only then mapped into the coefficient
    ring, so the operator makes sense modulo composite m.
    """
    n = f.ring.nvars
    if isinstance(orders, Mapping):
        a = [0] * n
        for k, v in orders.items():
            a[f.ring.index(k)] = v
    else:
        a = list(orders)
        if len(a) != n:
            raise ValueError(f"expected {n} orders, got {len(a)}")
    if any(x < 0 for x in a):
        raise ValueError("orders must be non-negative")
    out = {}
    for e, c in f.terms.items():
        if any(b < ai for b, ai in zip(e, a)):
            continue
        coef = 1
        for b, ai in zip(e, a):
            if ai:
                coef *= math.comb(b, ai)
        out[tuple(b - ai for b, ai in zip(e, a))] = c * coef
    return Polynomial(f.ring, out)


@dataclass(frozen=True)
class WeightGrading:
    """Grading into ZZ^r: ``weights[k][i]`` is the k-th degree of variable i."""

    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(tuple(r) for r in self.weights))

    @classmethod
    def from_columns(cls, ring: PolyRing, columns: Mapping[str, Sequence[int]]) -> WeightGrading:
        r = len(next(iter(columns.values())))
        rows = [[0] * ring.nvars for _ in range(r)]
        for name, col in columns.items():
            i = ring.index(name)
            for k, w in enumerate(col):
                rows[k][i] = w
        return cls(tuple(tuple(row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.weights)

    def degree_of(self, e: Exponents) -> tuple:
        return tuple(sum(w * a for w, a in zip(row, e)) for row in self.weights)


def multidegree(f: Polynomial, g: WeightGrading):
    """Common degree vector of ``f`` under ``g``, or None if f is not homogeneous.

    The zero polynomial and constants have the zero vector.
    """
    if any(len(row) != f.ring.nvars for row in g.weights):
        raise ValueError("grading width does not match the ring")
    degs = {g.degree_of(e) for e in f.terms}
    if not degs:
        return (0,) * g.rank
    if len(degs) > 1:
        return None
    return degs.pop()


def coefficient_of(f: Polynomial, m: Mapping[str, int] | Sequence[int] | Polynomial):
    if isinstance(m, Polynomial):
        if len(m.terms) != 1:
            raise ValueError("expected a monomial")
        (e,) = m.terms
    elif isinstance(m, Mapping):
        e = [0] * f.ring.nvars
        for k, a in m.items():
            e[f.ring.index(k)] = a
        e = tuple(e)
    else:
        e = tuple(m)
    return f.terms.get(e, 0)


def exact_divide_by_integer(f: Polynomial, n: int) -> Polynomial:
    if f.ring.coeffs.kind != "ZZ":
        raise ValueError("exact integer division needs ZZ coefficients")
    if n == 0:
        raise ZeroDivisionError("division by zero")
    out = {}
    for e, c in f.terms.items():
        q, r = divmod(c, n)
        if r:
            raise NotDivisibleError(_render_monomial(e, f.ring.vars), c, n)
        out[e] = q
    return Polynomial(f.ring, out, _canonical=True)


@dataclass(frozen=True)
class SpecializationMap:
    """Ring homomorphism given by images of variables in ``target``."""

    images: Mapping
    target: PolyRing

    def __post_init__(self):
        conv = {}
        for k, v in self.images.items():
            if isinstance(v, Polynomial):
                if v.ring != self.target:
                    v = v.to_ring(self.target)
                conv[k] = v
            else:
                conv[k] = self.target.const(v)
        object.__setattr__(self, "images", conv)

    @classmethod
    def identity(cls, ring: PolyRing) -> SpecializationMap:
        return cls({v: ring.var(v) for v in ring.vars}, ring)

    @classmethod
    def partial(cls, source: PolyRing, target: PolyRing, images: Mapping) -> SpecializationMap:
        """Variables absent from ``images`` map to the same-named target variable."""
        full = {}
        for v in source.vars:
            if v in images:
                full[v] = images[v]
            elif v in target.vars:
                full[v] = target.var(v)
        full.update({k: v for k, v in images.items()})
        return cls(full, target)

    def __call__(self, f: Polynomial) -> Polynomial:
        return specialize(f, self)


def specialize(f: Polynomial, s: SpecializationMap) -> Polynomial:
    imgs = []
    for i, v in enumerate(f.ring.vars):
        imgs.append(s.images.get(v))
    target = s.target
    if target.coeffs != f.ring.coeffs:
        target = target.with_coeffs(f.ring.coeffs)
        imgs = [None if p is None else p.change_coeffs(f.ring.coeffs) for p in imgs]
    powers: dict = {}

    def power(i, a):
        key = (i, a)
        if key not in powers:
            powers[key] = imgs[i] ** a
        return powers[key]

    acc: dict = {}
    mod = target.coeffs.modulus
    for e, c in f.terms.items():
        term = {(0,) * target.nvars: c}
        for i, a in enumerate(e):
            if a:
                if imgs[i] is None:
                    raise KeyError(f"no image given for variable {f.ring.vars[i]!r}")
                term = _mul(term, power(i, a).terms, mod)
                if not term:
                    break
        acc = _add(acc, term, 1, mod)
    return Polynomial(target, acc)


def substitute(f: Polynomial, images: Mapping, target: PolyRing | None = None) -> Polynomial:
    """Shorthand: variables not in ``images`` are kept (target defaults to f's ring)."""
    target = target or f.ring
    return specialize(f, SpecializationMap.partial(f.ring, target, images))


# ---------------------------------------------------------- text interface

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN_RE = re.compile(r"(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S)")


def _tokenize(text: str):
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        start = pos
        if m.group(1):
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*^()/":
                raise PolySyntaxError(f"unexpected character {ch!r}", start)
            toks.append((ch, ch, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


def variables_in(text: str) -> list[str]:
    """Variable names in order of first appearance."""
    seen = []
    for kind, val, _ in _tokenize(text):
        if kind == "name" and val not in seen:
            seen.append(val)
    return seen


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise PolySyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            raise PolySyntaxError("empty expression", 0)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolySyntaxError(f"unexpected token {tok[1]!r}", tok[2])
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            if op == "*":
                p = p * self.unary()
            else:
                tok = self.take("int")
                if tok[1] == 0:
                    raise PolySyntaxError("division by zero", tok[2])
                if self.ring.coeffs.kind != "QQ":
                    raise PolySyntaxError("division only allowed over QQ", tok[2])
                p = p.scale(Fraction(1, tok[1]))
        return p

    def unary(self) -> Polynomial:
        if self.peek()[0] == "-":
            self.take()
            return -self.unary()
        if self.peek()[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("int")
            return base ** tok[1]
        return base

    def atom(self) -> Polynomial:
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return self.ring.const(tok[1])
        if tok[0] == "name":
            self.take()
            if tok[1] not in self.ring.vars:
                raise PolySyntaxError(f"unknown variable {tok[1]!r}", tok[2])
            return self.ring.var(tok[1])
        if tok[0] == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        raise PolySyntaxError(f"unexpected token {tok[1]!r}", tok[2])


def parse(text: str, ring: PolyRing | None = None, coeffs: CoefficientRing = ZZ) -> Polynomial:
    """Parse ``text``; without a ring, one is built from the names in the text."""
    if ring is None:
        ring = PolyRing(coeffs, tuple(variables_in(text)))
    return _Parser(text, ring).parse()


def _render_monomial(e, names) -> str:
    parts = []
    for a, v in zip(e, names):
        if a == 1:
            parts.append(v)
        elif a:
            parts.append(f"{v}^{a}")
    return "*".join(parts)


def _render_coeff(c) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))


def render(f: Polynomial, order: str = "grevlex") -> str:
    if not f.terms:
        return "0"
    out = []
    for e, c in f.sorted_terms(order):
        neg = c < 0
        a = -c if neg else c
        mono = _render_monomial(e, f.ring.vars)
        cs = _render_coeff(a)
        if not mono:
            body = cs
        elif a == 1:
            body = mono
        elif isinstance(a, Fraction) and a.denominator != 1:
            num = "" if a.numerator == 1 else f"{a.numerator}*"
            body = f"{num}{mono}/{a.denominator}"
        else:
            body = f"{cs}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)
