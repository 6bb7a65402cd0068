"""Frobenius lifts, p-derivations and related characteristic-p operations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .groebner import Ideal
from .polyring import (
    ZZ,
    PolyRing,
    Polynomial,
    SpecializationMap,
    Zmod,
    diffop_apply,
    exact_divide_by_integer,
    is_prime,
    specialize,
)


def _require_prime(p: int):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def _linear_coeffs(g: Polynomial) -> list:
    """Coefficient row of a homogeneous linear form, or None."""
    row = [0] * g.ring.nvars
    for e, c in g.terms.items():
        if sum(e) != 1:
            return None
        row[e.index(1)] = c
    return row


def _solve_unimodular(rows: list[list[int]]) -> list[list[int]]:
    """Inverse of a square integer matrix, which must itself be integral."""
    n = len(rows)
    A = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ValueError("generator set does not span the variables")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [v * inv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                fac = A[r][col]
                A[r] = [a - fac * b for a, b in zip(A[r], A[col])]
    inv_rows = [r[n:] for r in A]
    if any(v.denominator != 1 for r in inv_rows for v in r):
        raise ValueError("generator set does not span the variables over ZZ")
    return [[int(v) for v in r] for r in inv_rows]


@dataclass(frozen=True)
class FrobeniusLift:
    """Ring endomorphism of ``ring`` (over ZZ) with Lambda(g) = g^p on chosen generators.

    ``generators`` must be integral linear forms forming a ZZ-basis of the
    degree-one part; by default they are the variables themselves.
    """

    ring: PolyRing
    p: int
    generators: tuple = ()

    def __post_init__(self):
        _require_prime(self.p)
        if self.ring.coeffs != ZZ:
            raise ValueError("Frobenius lifts are defined over ZZ")
        gens = tuple(self.generators) or tuple(self.ring.gens())
        object.__setattr__(self, "generators", gens)
        standard = all(len(g.terms) == 1 and sum(next(iter(g.terms))) == 1 and g.terms[next(iter(g.terms))] == 1 for g in gens)
        standard = standard and len({next(iter(g.terms)) for g in gens}) == self.ring.nvars
        object.__setattr__(self, "_standard", standard)
        if standard:
            object.__setattr__(self, "_images", None)
            return
        rows = []
        for g in gens:
            row = _linear_coeffs(g)
            if row is None:
                raise ValueError("custom generators must be linear forms")
            rows.append(row)
        if len(rows) != self.ring.nvars:
            raise ValueError("generator set does not span the variables")
        inv = _solve_unimodular(rows)
        # x_j = sum_i inv[j][i] * g_i  (since rows^{-1} applied to g gives x)
        images = {}
        powers = [g ** self.p for g in gens]
        for j, v in enumerate(self.ring.vars):
            acc = self.ring.zero()
            for i, c in enumerate(inv[j]):
                if c:
                    acc = acc + powers[i].scale(c)
            images[v] = acc
        object.__setattr__(self, "_images", SpecializationMap(images, self.ring))

    @classmethod
    def standard(cls, ring: PolyRing, p: int) -> "FrobeniusLift":
        return cls(ring, p)

    @classmethod
    def diagonal(cls, ring: PolyRing, p: int, xs: Sequence[str], ys: Sequence[str]) -> "FrobeniusLift":
        """The lift with Lambda(x_i) = x_i^p and Lambda(y_i - x_i) = (y_i - x_i)^p."""
        gens = [ring.var(x) for x in xs] + [ring.var(y) - ring.var(x) for x, y in zip(xs, ys)]
        used = set(xs) | set(ys)
        gens += [ring.var(v) for v in ring.vars if v not in used]
        return cls(ring, p, tuple(gens))

    def __call__(self, f: Polynomial) -> Polynomial:
        return lambda_apply(self, f)


@dataclass(frozen=True)
class PDerivation:
    p: int
    lift: FrobeniusLift

    @classmethod
    def standard(cls, ring: PolyRing, p: int) -> "PDerivation":
        return cls(p, FrobeniusLift(ring, p))

    def __post_init__(self):
        if self.lift.p != self.p:
            raise ValueError("lift prime differs from derivation prime")

    def __call__(self, f: Polynomial) -> Polynomial:
        return phi_apply(self, f)


def lambda_apply(L: FrobeniusLift, f: Polynomial) -> Polynomial:
    if f.ring != L.ring:
        raise ValueError("polynomial is not in the lift's ring")
    if L._standard:
        p = L.p
        return Polynomial(f.ring, {tuple(a * p for a in e): c for e, c in f.terms.items()}, _canonical=True)
    return specialize(f, L._images)


def phi_apply(D: PDerivation, f: Polynomial) -> Polynomial:
    """phi_p(f) = (Lambda_p(f) - f^p) / p, exactly over ZZ."""
    diff = lambda_apply(D.lift, f) - f ** D.p
    return exact_divide_by_integer(diff, D.p)


def phi(f: Polynomial, p: int) -> Polynomial:
    """p-derivation attached to the standard lift."""
    return phi_apply(PDerivation.standard(f.ring, p), f)


def cartier_poly(p: int, names: Sequence[str] = ("x", "y")) -> Polynomial:
    """C_p(x, y) = (x^p + y^p - (x + y)^p) / p over ZZ."""
    _require_prime(p)
    R = PolyRing(ZZ, tuple(names))
    x, y = R.gens()
    return exact_divide_by_integer(x ** p + y ** p - (x + y) ** p, p)


def cartier_apply(p: int, a: Polynomial, b: Polynomial) -> Polynomial:
    return exact_divide_by_integer(a ** p + b ** p - (a + b) ** p, p)


def frobenius_power(a: Ideal, p: int) -> Ideal:
    """a^[p] generated by p-th powers of the given generators."""
    return Ideal([g ** p for g in a.generators], a.ring)


def frobenius_trace_apply(f: Polynomial, p: int, e: int, r: Polynomial) -> Polynomial:
    """Representative of Phi^e_R(r): apply d_{q-1,...,q-1} to f^(q-1) r over F_p, q = p^e."""
    _require_prime(p)
    if e < 1:
        raise ValueError("e must be positive")
    F = Zmod(p)
    if f.ring.coeffs.kind == "ZZ/m" and f.ring.coeffs.modulus != p:
        raise ValueError("coefficient ring must be the prime field")
    f = f.change_coeffs(F)
    r = r.change_coeffs(F)
    if r.ring != f.ring:
        r = r.to_ring(f.ring)
    q = p ** e
    return diffop_apply([q - 1] * f.ring.nvars, f ** (q - 1) * r)


# ------------------------------------------------------------ cocycles


def default_y_name(v: str, taken: set) -> str:
    cand = "y" + v[1:] if v.startswith("x") else "y_" + v
    while cand in taken:
        cand = "y_" + cand
    return cand


def diagonal_ring(ring: PolyRing, ynames: Mapping[str, str] | None = None):
    """The ring P_S = A[x, y] together with the list of y names."""
    taken = set(ring.vars)
    ys = []
    for v in ring.vars:
        y = ynames[v] if ynames else default_y_name(v, taken)
        if y in taken:
            raise ValueError(f"y-variable name {y!r} collides")
        taken.add(y)
        ys.append(y)
    return ring.extend(ys), tuple(ys)


def telescoping_cocycle(f: Polynomial, ynames: Mapping[str, str] | None = None, P: PolyRing | None = None) -> tuple:
    """g_0..g_d with f(y) - f(x) = sum (y_i - x_i) g_i.

    g_i = (f(y_0..y_i, x_{i+1}..) - f(y_0..y_{i-1}, x_i..)) / (y_i - x_i),
    obtained from the identity (y^a - x^a)/(y - x) = sum y^(a-1-k) x^k.
    Returns ``(P, ys, [g_i])``.
    """
    if P is None:
        P, ys = diagonal_ring(f.ring, ynames)
    else:
        ys = tuple(ynames[v] for v in f.ring.vars) if ynames else tuple(default_y_name(v, set(f.ring.vars)) for v in f.ring.vars)
    n = f.ring.nvars
    xi = [P.index(v) for v in f.ring.vars]
    yi = [P.index(y) for y in ys]
    N = P.nvars
    gs = []
    for i in range(n):
        out: dict = {}
        mod = P.coeffs.modulus
        for e, c in f.terms.items():
            a = e[i]
            if a == 0:
                continue
            base = [0] * N
            for j in range(n):
                if j < i:
                    base[yi[j]] += e[j]
                elif j > i:
                    base[xi[j]] += e[j]
            for k in range(a):
                m = list(base)
                m[yi[i]] += a - 1 - k
                m[xi[i]] += k
                m = tuple(m)
                out[m] = out.get(m, 0) + c
        gs.append(Polynomial(P, out))
    return P, ys, gs


def euler_apply(gs: Sequence[Polynomial], xs: Sequence[str]) -> list[Polynomial]:
    """Apply E = sum x_i d/dx_i (x-variables only) to each component."""
    out = []
    for g in gs:
        idx = [g.ring.index(x) for x in xs]
        terms = {}
        for e, c in g.terms.items():
            w = sum(e[i] for i in idx)
            if w:
                terms[e] = c * w
        out.append(Polynomial(g.ring, terms))
    return out


def identity_cocycle(gs: Sequence[Polynomial], xs: Sequence[str], ys: Sequence[str]):
    """Cech cocycle (numerator_i, denominator_i) = ((-1)^i g_i, prod_{j != i} (y_j - x_j))."""
    P = gs[0].ring
    diffs = [P.var(y) - P.var(x) for x, y in zip(xs, ys)]
    comps = []
    for i, g in enumerate(gs):
        den = P.one()
        for j, d in enumerate(diffs):
            if j != i:
                den = den * d
        comps.append((g if i % 2 == 0 else -g, den))
    return comps


def euler_cocycle(gs: Sequence[Polynomial], xs: Sequence[str], ys: Sequence[str]):
    """E applied to the fractions of :func:`identity_cocycle`.

    Each component N/D maps to (E(N) D + N sum_{j != i} x_j prod_{l != i,j}(y_l - x_l)) / D^2,
    using E(1/(y_j - x_j)) = x_j / (y_j - x_j)^2.  Returns (numerator, D^2) pairs.
    """
    P = gs[0].ring
    diffs = [P.var(y) - P.var(x) for x, y in zip(xs, ys)]
    out = []
    for i, (num, den) in enumerate(identity_cocycle(gs, xs, ys)):
        (en,) = euler_apply([num], xs)
        extra = P.zero()
        for j in range(len(diffs)):
            if j == i:
                continue
            prod = P.var(xs[j])
            for l in range(len(diffs)):
                if l not in (i, j):
                    prod = prod * diffs[l]
            extra = extra + prod
        out.append((en * den + num * extra, den * den))
    return out
