"""Buchberger's algorithm over ZZ/p and QQ, with division certificates.

Internally monomials are packed into Python ints so that the integer order
is the monomial order, multiplication is (affine) addition and divisibility
is one masked subtraction.  Every basis element remembers how it was built
from earlier elements, which lets ideal membership return cofactors with
respect to the *original* generators.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .polyring import (
    QQ,
    CoefficientRing,
    PolyRing,
    Polynomial,
    RingMismatchError,
    is_prime,
)

DEFAULT_MAX_STEPS = 10**6


class ResourceLimitError(RuntimeError):
    """Raised when a computation exceeds its reduction-step budget."""


class CertificateError(AssertionError):
    """A division certificate failed to reconstruct its input."""


# running totals of certificate reconstructions (read by the test suite)
CERTIFICATE_STATS = {"checked": 0, "failed": 0}


# ------------------------------------------------------------------ types


@dataclass(frozen=True)
class Ideal:
    generators: tuple

    def __init__(self, generators: Sequence[Polynomial], ring: PolyRing | None = None):
        gens = [g for g in generators if not g.is_zero()]
        rings = {g.ring for g in generators}
        if ring is None:
            if len(rings) != 1:
                raise RingMismatchError("ideal generators must share one ring")
            ring = rings.pop()
        elif rings - {ring}:
            raise RingMismatchError("generator outside the declared ring")
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "ring", ring)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.generators + tuple(other.generators), self.ring)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal([a * b for a in self.generators for b in other.generators], self.ring)

    def with_generators(self, more: Sequence[Polynomial]) -> "Ideal":
        return Ideal(self.generators + tuple(more), self.ring)

    def change_coeffs(self, coeffs: CoefficientRing) -> "Ideal":
        return Ideal([g.change_coeffs(coeffs) for g in self.generators], self.ring.with_coeffs(coeffs))

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"


@dataclass
class MembershipCertificate:
    """``target == sum(c*g for c, g in zip(cofactors, generators)) + remainder``."""

    generators: tuple
    cofactors: tuple
    remainder: Polynomial
    target: Polynomial

    @property
    def is_member(self) -> bool:
        return self.remainder.is_zero()

    def check(self) -> bool:
        total = self.remainder
        for c, g in zip(self.cofactors, self.generators):
            if c:
                total = total + c * g
        return total == self.target

    def assert_sound(self):
        ok = self.check()
        CERTIFICATE_STATS["checked"] += 1
        if not ok:
            CERTIFICATE_STATS["failed"] += 1
            raise CertificateError("certificate does not reconstruct its target")


# ---------------------------------------------------------------- encoding

_W = 16
_FIELD_MAX = (1 << (_W - 1)) - 1


class _Encoding:
    """Packed-int monomials.

    grevlex: K(e) = deg(e) << W*n  +  MAX - sum e_i << W*i  (x_n in the top field)
    lex:     K(e) = sum e_i << W*(n-1-i)
    Larger K means larger monomial.  K(a*b) = K(a) + K(b) - OFF.
    """

    def __init__(self, nvars: int, order: str):
        if order not in ("grevlex", "lex"):
            raise ValueError(f"unknown monomial order {order!r}")
        self.n = nvars
        self.order = order
        self.low_mask = (1 << (_W * nvars)) - 1
        self.guard = sum(1 << (_W * i + _W - 1) for i in range(nvars))
        self.maxpack = sum(_FIELD_MAX << (_W * i) for i in range(nvars))
        self.off = self.maxpack if order == "grevlex" else 0
        self.one = self.pack((0,) * nvars)

    def pack(self, e) -> int:
        if any(a > _FIELD_MAX for a in e):
            raise OverflowError("exponent too large for packed monomials")
        if self.order == "grevlex":
            s = 0
            for i, a in enumerate(e):
                s += a << (_W * i)
            return (sum(e) << (_W * self.n)) + self.maxpack - s
        s = 0
        n = self.n
        for i, a in enumerate(e):
            s += a << (_W * (n - 1 - i))
        return s

    def exps_packed(self, k: int) -> int:
        """Plain packed exponents (positive fields) used for divisibility."""
        if self.order == "grevlex":
            return self.maxpack - (k & self.low_mask)
        return k

    def unpack(self, k: int) -> tuple:
        p = self.exps_packed(k)
        mask = (1 << _W) - 1
        vals = [(p >> (_W * i)) & mask for i in range(self.n)]
        if self.order == "lex":
            vals.reverse()
        return tuple(vals)

    def degree(self, k: int) -> int:
        if self.order == "grevlex":
            return k >> (_W * self.n)
        return sum(self.unpack(k))

    def lcm(self, a: int, b: int) -> int:
        return self.pack(tuple(max(x, y) for x, y in zip(self.unpack(a), self.unpack(b))))

    def coprime(self, a: int, b: int) -> bool:
        return not any(x and y for x, y in zip(self.unpack(a), self.unpack(b)))

    def divides(self, b: int, a: int) -> bool:
        eb = self.exps_packed(b)
        g = self.guard
        return ((self.exps_packed(a) | g) - eb) & g == g


class _Field:
    def __init__(self, coeffs: CoefficientRing):
        if coeffs.kind == "QQ":
            self.mod = None
        elif coeffs.kind == "ZZ/m" and is_prime(coeffs.modulus):
            self.mod = coeffs.modulus
        else:
            raise ValueError(f"Groebner bases need a field; got {coeffs}")
        self.coeffs = coeffs

    def inv(self, c):
        if self.mod:
            return pow(c, -1, self.mod)
        return 1 / c

    def norm(self, c):
        return c % self.mod if self.mod else c


# ------------------------------------------------------------------ engine


class _Engine:
    """Mutable Buchberger state; wrapped by :class:`GroebnerBasis` when done."""

    def __init__(self, ring: PolyRing, order: str, max_steps: int = DEFAULT_MAX_STEPS, track: bool = True):
        self.ring = ring
        self.enc = _Encoding(ring.nvars, order)
        self.field = _Field(ring.coeffs)
        self.max_steps = max_steps
        self.steps = 0
        self.track = track
        self.polys: list[dict] = []  # monic, keyed by packed monomial
        self.lead: list[int] = []
        self.lead_e: list[int] = []
        self.tails: list[list] = []
        self.prov: list[dict] = []  # src index (or -1-r for input r) -> multiplier dict
        self.ninputs = 0
        self._expanded: dict = {}

    # -- conversion
    def internal(self, f: Polynomial) -> dict:
        pack = self.enc.pack
        return {pack(e): c for e, c in f.terms.items()}

    def external(self, d: dict) -> Polynomial:
        unpack = self.enc.unpack
        return Polynomial(self.ring, {unpack(k): c for k, c in d.items()}, _canonical=True)

    # -- basis bookkeeping
    def add_element(self, d: dict, prov: dict) -> int:
        lk = max(d)
        lc = d[lk]
        if lc != 1:
            inv = self.field.inv(lc)
            mod = self.field.mod
            if mod:
                d = {k: c * inv % mod for k, c in d.items()}
            else:
                d = {k: c * inv for k, c in d.items()}
            if self.track:
                prov = {s: _scale(m, inv, mod) for s, m in prov.items()}
        idx = len(self.polys)
        self.polys.append(d)
        self.lead.append(lk)
        self.lead_e.append(self.enc.exps_packed(lk))
        self.tails.append([(k, c) for k, c in sorted(d.items(), reverse=True) if k != lk])
        self.prov.append(prov if self.track else {})
        return idx

    # -- reduction
    def reduce(self, f: dict, reducers: list[int], full: bool = True):
        """Divide ``f`` by the listed basis elements.  Returns (remainder, quotients)."""
        mod = self.field.mod
        enc = self.enc
        off = enc.off
        lowmask = enc.low_mask
        maxpack = enc.maxpack
        guard = enc.guard
        grevlex = enc.order == "grevlex"
        red = [(self.lead_e[i], self.lead[i], self.tails[i], i) for i in reducers]
        p = dict(f)
        heap = [-k for k in p]
        heapq.heapify(heap)
        rem: dict = {}
        quots: dict = {}
        track = self.track
        steps = self.steps
        limit = self.max_steps
        pop = heapq.heappop
        push = heapq.heappush
        while heap:
            k = -pop(heap)
            c = p.pop(k, None)
            if c is None:
                continue
            ea = (maxpack - (k & lowmask)) if grevlex else k
            ga = ea | guard
            for le, lk, tail, idx in red:
                if (ga - le) & guard == guard:
                    break
            else:
                rem[k] = c
                if not full:
                    for kk, cc in p.items():
                        rem[kk] = cc
                    break
                continue
            steps += 1
            if steps > limit:
                self.steps = steps
                raise ResourceLimitError(f"exceeded {limit} reduction steps")
            base = k - lk  # multiplier monomial q satisfies K(q) = base + off
            if track:
                q = quots.setdefault(idx, {})
                q[base + off] = c
            if mod:
                for kt, ct in tail:
                    ne = base + kt
                    v = p.get(ne)
                    if v is None:
                        p[ne] = (-c * ct) % mod
                        push(heap, -ne)
                    else:
                        v = (v - c * ct) % mod
                        if v:
                            p[ne] = v
                        else:
                            del p[ne]
            else:
                for kt, ct in tail:
                    ne = base + kt
                    v = p.get(ne)
                    if v is None:
                        p[ne] = -c * ct
                        push(heap, -ne)
                    else:
                        v = v - c * ct
                        if v:
                            p[ne] = v
                        else:
                            del p[ne]
        self.steps = steps
        return rem, quots

    def spoly(self, i: int, j: int):
        enc = self.enc
        off = enc.off
        lcm = enc.lcm(self.lead[i], self.lead[j])
        mi = lcm - self.lead[i] + off
        mj = lcm - self.lead[j] + off
        mod = self.field.mod
        d: dict = {}
        for k, c in self.polys[i].items():
            d[k + mi - off] = c
        for k, c in self.polys[j].items():
            kk = k + mj - off
            v = d.get(kk, 0) - c
            if mod:
                v %= mod
            if v:
                d[kk] = v
            else:
                d.pop(kk, None)
        prov = {}
        if self.track:
            one = 1
            prov = {i: {mi: one}, j: {mj: (-1) % mod if mod else -1}}
        return d, prov

    # -- provenance
    def expand(self, idx: int) -> list[dict]:
        """Cofactors of basis element ``idx`` with respect to the inputs."""
        if idx in self._expanded:
            return self._expanded[idx]
        # iterative post-order to avoid deep recursion
        stack = [idx]
        while stack:
            top = stack[-1]
            if top in self._expanded:
                stack.pop()
                continue
            pending = [s for s in self.prov[top] if s >= 0 and s not in self._expanded]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            acc = [dict() for _ in range(self.ninputs)]
            for src, mult in self.prov[top].items():
                if src < 0:
                    r = -1 - src
                    acc[r] = _padd(acc[r], mult, self.field.mod)
                else:
                    for r, cof in enumerate(self._expanded[src]):
                        if cof:
                            acc[r] = _padd(acc[r], _pmul(mult, cof, self.enc.off, self.field.mod), self.field.mod)
            self._expanded[top] = acc
        return self._expanded[idx]


def _scale(d: dict, c, mod):
    if mod:
        return {k: v * c % mod for k, v in d.items() if v * c % mod}
    return {k: v * c for k, v in d.items() if v * c}


def _padd(a: dict, b: dict, mod) -> dict:
    out = dict(a)
    for k, c in b.items():
        v = out.get(k, 0) + c
        if mod:
            v %= mod
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return out


def _pmul(a: dict, b: dict, off: int, mod) -> dict:
    out: dict = {}
    get = out.get
    for ka, ca in a.items():
        base = ka - off
        for kb, cb in b.items():
            k = base + kb
            out[k] = get(k, 0) + ca * cb
    if mod:
        return {k: c % mod for k, c in out.items() if c % mod}
    return {k: c for k, c in out.items() if c}


# ----------------------------------------------------------------- basis


@dataclass
class GroebnerBasis:
    """A reduced Groebner basis (possibly truncated at ``degree_bound``)."""

    ring: PolyRing
    order: str
    basis: tuple
    generators: tuple
    degree_bound: int | None = None
    stats: dict = field(default_factory=dict)
    _engine: _Engine | None = field(default=None, repr=False, compare=False)
    _final: list = field(default_factory=list, repr=False, compare=False)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def leading_monomials(self) -> list[tuple]:
        return [g.leading_term(self.order)[0] for g in self.basis]

    def contains_one(self) -> bool:
        return any(g.is_constant() for g in self.basis)


def _homogeneous_ideal(gens: Sequence[Polynomial]) -> bool:
    return all(g.is_homogeneous() for g in gens)


def buchberger(
    ideal: Ideal | Sequence[Polynomial],
    order: str = "grevlex",
    *,
    degree_bound: int | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    track: bool = True,
) -> GroebnerBasis:
    """Reduced Groebner basis by Buchberger's algorithm.

    Pairs are processed smallest-lcm first with the Gebauer-Moeller
    criteria (coprime leading monomials and the chain criterion).
    ``degree_bound`` truncates the computation for homogeneous input: the
    result is then a Groebner basis for all elements of degree <= bound.
    """
    if not isinstance(ideal, Ideal):
        ideal = Ideal(list(ideal))
    ring = ideal.ring
    if degree_bound is not None and not _homogeneous_ideal(ideal.generators):
        raise ValueError("degree truncation requires homogeneous generators")
    eng = _Engine(ring, order, max_steps=max_steps, track=track)
    enc = eng.enc
    gens = ideal.generators
    eng.ninputs = len(gens)

    alive: list[int] = []
    pairs: dict = {}
    heap: list = []

    def update(h: int):
        lh = eng.lead[h]
        # chain criterion on new pairs (Gebauer-Moeller)
        cands = [(g, enc.lcm(eng.lead[g], lh)) for g in alive]
        keep = []
        for n, (g, l) in enumerate(cands):
            if enc.coprime(eng.lead[g], lh):
                keep.append((g, l, True))
                continue
            dominated = False
            for m, (g2, l2) in enumerate(cands):
                if m == n:
                    continue
                if enc.divides(l2, l) and (l2 != l or m < n):
                    dominated = True
                    break
            if not dominated:
                keep.append((g, l, False))
        # drop old pairs by the B-criterion
        for (a, b), l in list(pairs.items()):
            if enc.divides(lh, l):
                la = enc.lcm(eng.lead[a], lh)
                lb = enc.lcm(eng.lead[b], lh)
                if la != l and lb != l:
                    del pairs[(a, b)]
        for g, l, copr in keep:
            if copr:
                continue
            if degree_bound is not None and enc.degree(l) > degree_bound:
                continue
            pairs[(g, h)] = l
            heapq.heappush(heap, (l, g, h))
        for g in list(alive):
            if enc.divides(lh, eng.lead[g]):
                alive.remove(g)
        alive.append(h)

    unit_found = False
    for r, g in enumerate(gens):
        if degree_bound is not None and g.total_degree() > degree_bound:
            continue
        d = eng.internal(g)
        rem, quots = eng.reduce(d, list(alive))
        if not rem:
            continue
        prov = {-1 - r: {enc.one: 1}}
        if track:
            mod = eng.field.mod
            for src, q in quots.items():
                prov[src] = _padd(prov.get(src, {}), _scale(q, -1, mod), mod)
        idx = eng.add_element(rem, prov)
        update(idx)
        if eng.lead[idx] == enc.one:
            unit_found = True
            break

    spairs = 0
    while heap and not unit_found:
        l, i, j = heapq.heappop(heap)
        if pairs.get((i, j)) != l:
            continue
        del pairs[(i, j)]
        spairs += 1
        s, prov = eng.spoly(i, j)
        if not s:
            continue
        rem, quots = eng.reduce(s, list(alive))
        if not rem:
            continue
        if track:
            mod = eng.field.mod
            for src, q in quots.items():
                prov[src] = _padd(prov.get(src, {}), _scale(q, -1, mod), mod)
        idx = eng.add_element(rem, prov)
        update(idx)
        if eng.lead[idx] == enc.one:
            unit_found = True

    if unit_found:
        final = [len(eng.polys) - 1]
    else:
        final = _interreduce(eng, alive)
    basis = [eng.external(eng.polys[i]) for i in final]
    order_sorted = sorted(range(len(final)), key=lambda t: -eng.lead[final[t]])
    final = [final[t] for t in order_sorted]
    basis = [basis[t] for t in order_sorted]
    stats = {"spairs": spairs, "steps": eng.steps, "elements": len(eng.polys)}
    return GroebnerBasis(
        ring=ring,
        order=order,
        basis=tuple(basis),
        generators=tuple(gens),
        degree_bound=degree_bound,
        stats=stats,
        _engine=eng,
        _final=final,
    )


def _interreduce(eng: _Engine, alive: list[int]) -> list[int]:
    """Tail-reduce the minimal basis; returns indices of the reduced elements."""
    alive = sorted(alive, key=lambda i: eng.lead[i])
    final = []
    mod = eng.field.mod
    for i in alive:
        others = [j for j in alive if j != i]
        d = eng.polys[i]
        lk = eng.lead[i]
        tail = {k: c for k, c in d.items() if k != lk}
        rem, quots = eng.reduce(tail, others)
        if not quots:
            final.append(i)
            continue
        rem[lk] = d[lk]
        prov = {i: {eng.enc.one: 1}}
        for src, q in quots.items():
            prov[src] = _padd(prov.get(src, {}), _scale(q, -1, mod), mod)
        final.append(eng.add_element(rem, prov))
    # leading terms unchanged, so reducing against the old elements is sound
    return final


# --------------------------------------------------------------- division


def _check_ring(f: Polynomial, G: GroebnerBasis):
    if f.ring != G.ring:
        raise RingMismatchError(f"polynomial ring {f.ring} differs from basis ring {G.ring}")


def normal_form(f: Polynomial, G: GroebnerBasis, *, verify: bool = True):
    """Remainder of ``f`` modulo ``G`` and a certificate w.r.t. ``G.basis``."""
    _check_ring(f, G)
    if G.degree_bound is not None and f.total_degree() > G.degree_bound:
        raise ValueError("input degree exceeds the truncation bound of the basis")
    eng = G._engine
    saved = eng.track
    eng.track = True
    try:
        rem, quots = eng.reduce(eng.internal(f), G._final)
    finally:
        eng.track = saved
    pos = {idx: t for t, idx in enumerate(G._final)}
    cof = [G.ring.zero()] * len(G.basis)
    for idx, q in quots.items():
        cof[pos[idx]] = eng.external(q)
    cert = MembershipCertificate(tuple(G.basis), tuple(cof), eng.external(rem), f)
    if verify:
        cert.assert_sound()
    return cert.remainder, cert


def _lift_certificate(f: Polynomial, G: GroebnerBasis, cert: MembershipCertificate) -> MembershipCertificate:
    eng = G._engine
    if not eng.track:
        raise ValueError("basis was computed without provenance tracking")
    mod = eng.field.mod
    off = eng.enc.off
    acc = [dict() for _ in range(eng.ninputs)]
    for idx, c in zip(G._final, cert.cofactors):
        if c.is_zero():
            continue
        q = eng.internal(c)
        for r, part in enumerate(eng.expand(idx)):
            if part:
                acc[r] = _padd(acc[r], _pmul(q, part, off, mod), mod)
    return MembershipCertificate(
        tuple(G.generators), tuple(eng.external(a) for a in acc), cert.remainder, f
    )


@dataclass
class MembershipResult:
    member: bool
    certificate: MembershipCertificate
    basis: GroebnerBasis

    @property
    def verdict(self) -> str:
        return "IN" if self.member else "OUT"


def ideal_membership(
    f: Polynomial,
    ideal: Ideal,
    order: str = "grevlex",
    *,
    certify: bool = True,
    truncate: bool = True,
    max_steps: int = DEFAULT_MAX_STEPS,
    basis: GroebnerBasis | None = None,
) -> MembershipResult:
    """Decide ``f in ideal``.

    With ``certify`` the certificate is expressed in the ideal's own
    generators and checked for exact reconstruction.  For homogeneous data
    the basis is truncated at ``deg f``.
    """
    if f.ring != ideal.ring:
        raise RingMismatchError("polynomial and ideal live in different rings")
    _Field(ideal.ring.coeffs)  # rejects composite moduli
    if basis is None:
        bound = None
        if truncate and f.is_homogeneous() and _homogeneous_ideal(ideal.generators):
            bound = max(f.total_degree(), 0)
        basis = buchberger(ideal, order, degree_bound=bound, max_steps=max_steps, track=certify)
    rem, cert = normal_form(f, basis)
    if certify:
        cert = _lift_certificate(f, basis, cert)
        cert.assert_sound()
    return MembershipResult(rem.is_zero(), cert, basis)


def denominator_profile(cert: MembershipCertificate) -> set:
    """Primes dividing a denominator of any cofactor (or the remainder)."""
    primes: set = set()
    for c in list(cert.cofactors) + [cert.remainder]:
        for v in c.terms.values():
            d = Fraction(v).denominator
            primes |= _prime_factors(d)
    return primes


def _prime_factors(n: int) -> set:
    out = set()
    q = 2
    while q * q <= n:
        while n % q == 0:
            out.add(q)
            n //= q
        q += 1
    if n > 1:
        out.add(n)
    return out


def is_groebner(G: GroebnerBasis) -> bool:
    """Check that every S-polynomial of the basis reduces to zero."""
    eng = _Engine(G.ring, G.order, track=False)
    eng.ninputs = 0
    idx = [eng.add_element(eng.internal(g), {}) for g in G.basis]
    bound = G.degree_bound
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if bound is not None and eng.enc.degree(eng.enc.lcm(eng.lead[a], eng.lead[b])) > bound:
                continue
            s, _ = eng.spoly(a, b)
            rem, _ = eng.reduce(s, idx)
            if rem:
                return False
    return True


def is_reduced(G: GroebnerBasis) -> bool:
    lms = G.leading_monomials()
    for i, g in enumerate(G.basis):
        if g.leading_term(G.order)[1] != 1:
            return False
        for j, lm in enumerate(lms):
            if i == j:
                continue
            for e in g.terms:
                if all(a >= b for a, b in zip(e, lm)):
                    return False
    return True
