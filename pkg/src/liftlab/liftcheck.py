"""Decision procedures for Frobenius lifts and lifting obstructions.

Three tools live here:

* ``zdanowicz_check``: does Frobenius on R/pR lift to R/p^2R?  Decided by
  the membership phi_p(f) in (f, (df/dx_i)^p) over F_p.
* ``lc_vanishing_search``: bounded search for the vanishing of a local
  cohomology class [r / (z_0...z_m)^s].  A failed search is evidence only.
* ``trace_lift_obstruction``: does the Frobenius trace on R/pR lift to a
  differential operator on R/p^2R?  Combines the class above (in the
  diagonal coordinates t = y - x), the reduction to a smaller class, and a
  nonvanishing witness for the known families.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .groebner import (
    DEFAULT_MAX_STEPS,
    Ideal,
    MembershipCertificate,
    ResourceLimitError,
    buchberger,
    ideal_membership,
    normal_form,
)
from .matforms import MatrixOfVariables, determinant, pfaffian
from .polyring import (
    ZZ,
    PolyRing,
    Polynomial,
    SpecializationMap,
    Zmod,
    coefficient_of,
    exact_divide_by_integer,
    is_prime,
    partial_derivative,
    render,
    specialize,
)
from .pops import phi

log = logging.getLogger(__name__)

LIFT_EXISTS = "LiftExists"
NO_LIFT = "NoLift"


def _require_prime(p):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


# ------------------------------------------------------------------ types


@dataclass(frozen=True)
class LocalCohomologyClass:
    """The class [numerator / (z_0...z_m)^exponent] modulo ``modulus`` and ``relations``."""

    numerator: Polynomial
    denominators: tuple
    exponent: int
    modulus: int
    relations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "denominators", tuple(self.denominators))
        object.__setattr__(self, "relations", tuple(self.relations))
        if self.exponent < 1:
            raise ValueError("exponent must be positive")
        if self.modulus not in (0,) and self.modulus < 2:
            raise ValueError("modulus must be 0 or at least 2")
        for g in self.denominators + self.relations:
            if g.ring.vars != self.numerator.ring.vars:
                raise ValueError("class data must share one ring")

    @property
    def ring(self) -> PolyRing:
        return self.numerator.ring

    def describe(self) -> str:
        zs = "*".join(render(z) for z in self.denominators)
        return f"[{render(self.numerator)} / ({zs})^{self.exponent}]"


@dataclass
class SearchResult:
    """Outcome of a bounded vanishing search: ``Zero`` or ``NonzeroUpTo``."""

    outcome: str
    k: int
    certificate: MembershipCertificate | None = None
    remainders: list = field(default_factory=list)

    @property
    def is_zero(self) -> bool:
        return self.outcome == "Zero"

    def label(self) -> str:
        return f"{self.outcome}({self.k})"


@dataclass
class LiftVerdict:
    outcome: str  # LiftExists, NoLift or Unknown(k)
    certificate: object = None
    params: dict = field(default_factory=dict)
    evidence: dict = field(default_factory=dict)

    def __str__(self):
        return self.outcome


@dataclass
class CoefficientWitness:
    kind: str
    params: dict
    monomial: str
    integer_value: int
    value: int  # reduced mod p into [0, p)

    @property
    def nonzero(self) -> bool:
        return self.value != 0


# -------------------------------------------------------------- Zdanowicz


def zdanowicz_ideal(f: Polynomial, p: int) -> Ideal:
    F = Zmod(p)
    fp = f.change_coeffs(F)
    gens = [fp] + [partial_derivative(fp, v) ** p for v in fp.ring.vars]
    return Ideal(gens, fp.ring)


def zdanowicz_check(f: Polynomial, p: int, *, order: str = "grevlex", max_steps: int = DEFAULT_MAX_STEPS) -> LiftVerdict:
    """Frobenius on R/pR lifts to R/p^2R iff phi_p(f) in (p, f, (df/dx_i)^p)."""
    _require_prime(p)
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if f.ring.coeffs != ZZ:
        raise ValueError("f must have integer coefficients")
    target = phi(f, p).change_coeffs(Zmod(p))
    res = ideal_membership(target, zdanowicz_ideal(f, p), order, max_steps=max_steps)
    outcome = LIFT_EXISTS if res.member else NO_LIFT
    cert = res.certificate
    return LiftVerdict(
        outcome,
        cert if res.member else cert.remainder,
        {"p": p, "order": order},
        {"basis_size": len(res.basis), "remainder_terms": len(cert.remainder)},
    )


# ---------------------------------------------------------- vanishing search


def lc_vanishing_search(
    c: LocalCohomologyClass,
    k_max: int = 3,
    *,
    order: str = "grevlex",
    max_steps: int = DEFAULT_MAX_STEPS,
    k_min: int = 0,
) -> SearchResult:
    """Search k = k_min..k_max for r (prod z)^k in (z_i^(s+k)) + relations over F_p.

    Returns Zero at the first success.  NonzeroUpTo(k_max) is not a proof of
    nonvanishing.  Exceeding ``max_steps`` raises ResourceLimitError.
    """
    p = c.modulus
    if not is_prime(p):
        raise ValueError("vanishing searches need a prime modulus")
    F = Zmod(p)
    num = c.numerator.change_coeffs(F)
    zs = [z.change_coeffs(F) for z in c.denominators]
    rels = [g.change_coeffs(F) for g in c.relations]
    ring = num.ring
    zprod = ring.one()
    for z in zs:
        zprod = zprod * z
    rems = []
    target = num * zprod ** k_min
    for k in range(k_min, k_max + 1):
        s = c.exponent + k
        ideal = Ideal([z ** s for z in zs] + rels, ring)
        res = ideal_membership(target, ideal, order, max_steps=max_steps)
        log.debug("k=%d member=%s basis=%d", k, res.member, len(res.basis))
        if res.member:
            return SearchResult("Zero", k, res.certificate, rems)
        rems.append(res.certificate.remainder)
        target = target * zprod
    return SearchResult("NonzeroUpTo", k_max, None, rems)


# -------------------------------------------------------------- reductions


def greedy_cover(f: Polynomial) -> list[str]:
    """Variables z with f in (z), chosen greedily by term coverage."""
    left = list(f.terms)
    chosen: list[str] = []
    while left:
        counts = [sum(1 for e in left if e[i]) for i in range(f.ring.nvars)]
        best = max(range(f.ring.nvars), key=lambda i: (counts[i], -i))
        if counts[best] == 0:
            raise ValueError("f has a constant term; no decomposition exists")
        chosen.append(f.ring.vars[best])
        left = [e for e in left if not e[best]]
    return sorted(chosen, key=f.ring.index)


def split_mod_p(f: Polynomial, zs: Sequence[str], p: int):
    """Write f = g + p*h with g in (zs) and h free of the zs, or raise."""
    idx = [f.ring.index(z) for z in zs]
    g_terms, h_terms = {}, {}
    for e, c in f.terms.items():
        if any(e[i] for i in idx):
            g_terms[e] = c
        else:
            if c % p:
                raise ValueError("f is not in (p) + (zs)")
            h_terms[e] = c // p
    return Polynomial(f.ring, g_terms), Polynomial(f.ring, h_terms)


def reduce_obstruction(
    f: Polynomial,
    p: int,
    zs: Sequence[str] | None = None,
) -> LocalCohomologyClass:
    """Small class [phi_p(g) / (z_0...z_m)^p] over R/pR.

    With f in (zs) this is g = f.  If f = g + p*h with h free of the zs,
    the class uses g.  Nonvanishing of the small class implies nonvanishing
    of the diagonal class; the converse is never used.
    """
    _require_prime(p)
    if zs is None:
        zs = greedy_cover(f)
    g, h = split_mod_p(f, zs, p)
    zp = [f.ring.var(z) for z in zs]
    return LocalCohomologyClass(phi(g, p), tuple(zp), p, p, (f,))


def diagonal_class(f: Polynomial, p: int, tprefix: str = "t_") -> LocalCohomologyClass:
    """[phi_p(f(x+t) - f(x)) / (t_0...t_d)^p] in F_p[x, t]/(f(x), f(x+t)).

    In the coordinates t_i = y_i - x_i the lift with Lambda(x_i) = x_i^p and
    Lambda(y_i - x_i) = (y_i - x_i)^p is the standard one.
    """
    R = f.ring
    ts = [tprefix + v for v in R.vars]
    P = R.extend(ts)
    fx = f.to_ring(P)
    fy = specialize(fx, SpecializationMap.partial(P, P, {v: P.var(v) + P.var(t) for v, t in zip(R.vars, ts)}))
    num = phi(fy - fx, p)
    return LocalCohomologyClass(num, tuple(P.var(t) for t in ts), p, p, (fx, fy))


# --------------------------------------------------- nonvanishing witnesses


def _mod(c, p):
    return c % p


def coefficient_obstruction(kind: str, p: int, m: int | None = None) -> CoefficientWitness:
    """Nonzero-coefficient witnesses used in the nonvanishing arguments.

    quadratic(m, p): coefficient of z1^(p-1) z2 in (sum z_i^p + (-1)^p (sum z_i)^p)/p.
    symmetric_char_p(p): coefficient of u^(3p-1) v^(p+1) in
        (u^4p + v^4p + (u+v)^4p - 2u^2p v^2p - 2u^2p (u+v)^2p - 2v^2p (u+v)^2p)/p.
    determinant(p): coefficient of x13^(p-1) x22 in
        ((-x13-x22-x23)^p + x13^p + x22^p + x23^p)/p, the value of the
        dual-basis projection on lambda'.
    """
    _require_prime(p)
    if kind == "quadratic":
        if m is None or m < 3:
            raise ValueError("quadratic obstruction needs m >= 3")
        names = [f"z{i}" for i in range(1, m + 1)]
        R = PolyRing(ZZ, tuple(names))
        zs = R.gens()
        total = R.zero()
        for z in zs:
            total = total + z
        poly = R.zero()
        for z in zs:
            poly = poly + z ** p
        poly = poly + total ** p * ((-1) ** p)
        poly = exact_divide_by_integer(poly, p)
        mono = {"z1": p - 1, "z2": 1}
        val = coefficient_of(poly, mono)
        label = f"z1^{p - 1}*z2"
        params = {"m": m, "p": p}
    elif kind == "symmetric_char_p":
        if p == 2:
            raise ValueError("symmetric_char_p needs an odd prime")
        R = PolyRing(ZZ, ("u", "v"))
        u, v = R.gens()
        s = u + v
        poly = (
            u ** (4 * p)
            + v ** (4 * p)
            + s ** (4 * p)
            - (u ** (2 * p) * v ** (2 * p)).scale(2)
            - (u ** (2 * p) * s ** (2 * p)).scale(2)
            - (v ** (2 * p) * s ** (2 * p)).scale(2)
        )
        poly = exact_divide_by_integer(poly, p)
        mono = {"u": 3 * p - 1, "v": p + 1}
        val = coefficient_of(poly, mono)
        label = f"u^{3 * p - 1}*v^{p + 1}"
        params = {"p": p}
    elif kind == "determinant":
        R = PolyRing(ZZ, ("x_1_3", "x_2_2", "x_2_3"))
        a, b, c = R.gens()
        poly = exact_divide_by_integer((-a - b - c) ** p + a ** p + b ** p + c ** p, p)
        mono = {"x_1_3": p - 1, "x_2_2": 1}
        val = coefficient_of(poly, mono)
        label = f"x_1_3^{p - 1}*x_2_2"
        params = {"p": p}
    else:
        raise ValueError(f"unknown coefficient obstruction {kind!r}")
    return CoefficientWitness(kind, params, label, int(val), _mod(int(val), p))


def char2_quotient_ideal(k: int):
    """(a^2, b^2, d^(k+1)) + (ab(d-a-b) - de^2) over F_2, and the target a*b*d^k."""
    R = PolyRing(Zmod(2), ("a", "b", "d", "e"))
    a, b, d, e = R.gens()
    rel = a * b * (d - a - b) - d * e ** 2
    return R, Ideal([a ** 2, b ** 2, d ** (k + 1), rel], R), a * b * d ** k


def char2_quotient_check(k: int, order: str = "grevlex") -> bool:
    """True when a*b*d^k is NOT in (a^2, b^2, d^(k+1)) in F_2[a,b,d,e]/(ab(d-a-b)-de^2)."""
    R, ideal, target = char2_quotient_ideal(k)
    return not ideal_membership(target, ideal, order).member


def char2_uniform_witness() -> dict:
    """Certificate valid for every k at once.

    Adding ab - e^2 to (a^2, b^2, d^(k+1), ab(d-a-b) - de^2) kills the
    relation (it becomes e^2(d - a - b) - de^2 = -e^2(a + b), which lies in
    the ideal generated with a^2, b^2, ab - e^2).  The quotient is then
    F_2[a,b,e]/(a^2, b^2, ab - e^2) tensored with F_2[d]/(d^(k+1)).  With d
    separated from a, b, e, the normal form of a*b*d^k is NF(ab)*d^k, which
    is nonzero as soon as NF(ab) is.
    """
    R = PolyRing(Zmod(2), ("a", "b", "e"))
    a, b, e = R.gens()
    ideal = Ideal([a ** 2, b ** 2, a * b - e ** 2], R)
    G = buchberger(ideal)
    nf, cert = normal_form(a * b, G)
    reduced_rel = e ** 2 * (a + b)  # image of the hypersurface relation once ab = e^2
    rel_in = ideal_membership(reduced_rel, ideal).member
    return {
        "basis": [render(g) for g in G.basis],
        "nf_ab": render(nf),
        "relation_absorbed": rel_in,
        "nonzero": (not nf.is_zero()) and rel_in,
    }


# ----------------------------------------------------------- families


@dataclass(frozen=True)
class Family:
    name: str
    f: Polynomial
    zs: tuple
    params: dict


def quadratic_family(m: int) -> Family:
    names = [f"x{i}" for i in range(1, 2 * m + 1)]
    R = PolyRing(ZZ, tuple(names))
    X = R.gens()
    f = R.zero()
    for i in range(m):
        f = f + X[i] * X[m + i]
    return Family("quadratic", f, tuple(names[:m]), {"m": m})


def pfaffian_family(n: int) -> Family:
    M = MatrixOfVariables.alternating(n)
    zs = tuple(f"x_1_{j}" for j in range(2, n + 1))
    return Family("pfaffian", pfaffian(M), zs, {"n": n})


def determinant_family(n: int) -> Family:
    M = MatrixOfVariables.generic(n)
    zs = tuple(f"x_{i}_{j}" for i in (1, 2) for j in range(2, n + 1))
    return Family("det", determinant(M), zs, {"n": n})


def symmetric_family(n: int = 3) -> Family:
    M = MatrixOfVariables.symmetric(n)
    zs = tuple(f"x_{i}_{i}" for i in range(1, n + 1))
    return Family("symmetric", determinant(M), zs, {"n": n})


def family_witness(fam: Family, p: int):
    """Nonvanishing witness for the small class of a known family, or None."""
    if fam.name == "quadratic":
        return coefficient_obstruction("quadratic", p, fam.params["m"])
    if fam.name == "pfaffian" and fam.params["n"] == 4:
        # pf X_4 is the quadric x12 x34 + x13 (-x24) + x14 x23 with m = 3
        return coefficient_obstruction("quadratic", p, 3)
    if fam.name == "det" and fam.params["n"] == 3:
        return coefficient_obstruction("determinant", p)
    if fam.name == "symmetric" and fam.params["n"] == 3 and p == 2:
        w = char2_uniform_witness()
        return CoefficientWitness("symmetric_char2", {"p": 2}, "NF(ab)", 1 if w["nonzero"] else 0, 1 if w["nonzero"] else 0)
    return None


# ------------------------------------------------------ trace obstruction


def trace_lift_obstruction(
    f: Polynomial,
    p: int,
    mode: str = "mod_p2",
    k_max: int = 3,
    *,
    zs: Sequence[str] | None = None,
    family: Family | None = None,
    diagonal_k_max: int = 0,
    diagonal_max_steps: int = 200_000,
    order: str = "grevlex",
    max_steps: int = DEFAULT_MAX_STEPS,
) -> LiftVerdict:
    """Does the Frobenius trace on R/pR lift to a differential operator on R/p^2R?

    1. Search the diagonal class up to ``diagonal_k_max``; Zero means it lifts.
       This stage only looks for a quick LiftExists, so it runs on its own
       smaller step budget and is skipped (and recorded) when that runs out.
    2. Otherwise search the reduced class up to ``k_max``.  If that search
       finds no vanishing and the family has a nonvanishing witness, the
       answer is NoLift; otherwise Unknown(k_max).
    """
    _require_prime(p)
    if mode not in ("mod_p2", "char_zero_evidence"):
        raise ValueError(f"unknown mode {mode!r}")
    if f.is_zero():
        raise ValueError("f must be nonzero")
    params = {"p": p, "mode": mode, "k_max": k_max, "diagonal_k_max": diagonal_k_max}
    evidence: dict = {}
    if mode == "char_zero_evidence":
        evidence["note"] = "mod-p search only; evidence about liftability over ZZ"

    big = diagonal_class(f, p)
    try:
        res = lc_vanishing_search(big, diagonal_k_max, order=order, max_steps=diagonal_max_steps)
        evidence["diagonal"] = res.label()
        if res.is_zero:
            return LiftVerdict(LIFT_EXISTS, res.certificate, params, evidence)
    except ResourceLimitError:
        evidence["diagonal"] = "ResourceLimit"

    if zs is None and family is not None:
        zs = family.zs
    small = reduce_obstruction(f, p, zs)
    evidence["reduced_class_denominators"] = [render(z) for z in small.denominators]
    sres = lc_vanishing_search(small, k_max, order=order, max_steps=max_steps)
    evidence["reduced"] = sres.label()
    if sres.is_zero:
        # small-zero says nothing about the diagonal class
        return LiftVerdict(f"Unknown({k_max})", None, params, evidence)
    witness = family_witness(family, p) if family is not None else None
    if witness is not None:
        evidence["witness"] = {"kind": witness.kind, "monomial": witness.monomial, "value": witness.value}
    if witness is not None and witness.nonzero:
        last = sres.remainders[-1] if sres.remainders else None
        return LiftVerdict(NO_LIFT, last, params, evidence)
    return LiftVerdict(f"Unknown({k_max})", None, params, evidence)


# ---------------------------------------------------- closed-form oracles


def quadratic_coefficient_closed_form(p: int) -> int:
    """(-1)^p * binom(p, 1) / p, the integer coefficient of z1^(p-1) z2."""
    return (-1) ** p * comb(p, 1) // p


def symmetric_coefficient_closed_form(p: int) -> int:
    """Integer coefficient of u^(3p-1) v^(p+1) from binomial bookkeeping.

    Only (u+v)^4p and -2u^2p(u+v)^2p contribute; the v^2p(u+v)^2p term has
    v-degree at least 2p > p + 1.
    """
    c = comb(4 * p, p + 1) - 2 * comb(2 * p, p + 1)
    assert c % p == 0
    return c // p
