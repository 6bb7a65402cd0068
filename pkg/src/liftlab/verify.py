"""Check registry, bespoke verifications and report emission."""

from __future__ import annotations

import inspect
import json
import logging
import os
import random
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Callable

from . import liftcheck as lc
from .groebner import (
    Ideal,
    ResourceLimitError,
    buchberger,
    denominator_profile,
    ideal_membership,
    is_groebner,
    is_reduced,
    normal_form,
)
from .matforms import (
    MatrixOfVariables,
    bareiss_determinant,
    determinant,
    minors,
    pfaffian,
)
from .polyring import (
    QQ,
    ZZ,
    PolyRing,
    Polynomial,
    Zmod,
    diffop_apply,
    is_prime,
    render,
)
from .pops import (
    cartier_apply,
    euler_apply,
    euler_cocycle,
    frobenius_trace_apply,
    phi,
    telescoping_cocycle,
)
from .sampling import random_alternating, random_polynomial

log = logging.getLogger(__name__)

MATCH, MISMATCH, INCONCLUSIVE = "match", "mismatch", "inconclusive"


class UsageError(ValueError):
    """Unknown check or invalid parameters (CLI exit code 2)."""


@dataclass
class CheckReport:
    check_id: str
    params: dict
    verdict: str
    expected: str
    status: str
    certificate_path: str | None = None
    elapsed_ms: int = 0

    def to_json(self) -> dict:
        d = asdict(self)
        if d["certificate_path"] is None:
            del d["certificate_path"]
        return d


@dataclass
class Outcome:
    """What a check function returns before timing/status are attached."""

    verdict: str
    expected: str
    evidence: bool = False  # bounded-search checks: agreement is inconclusive
    certificate: str | None = None


@dataclass(frozen=True)
class CheckSpec:
    check_id: str
    fn: Callable
    grid: dict  # parameter name -> default values for `verify all`
    topics: tuple  # tracked result items this check exercises
    description: str = ""
    validate: Callable | None = None

    def cells(self, overrides: dict | None = None) -> list[dict]:
        grid = dict(self.grid)
        for k, v in (overrides or {}).items():
            if v is None:
                continue
            if k in grid:
                grid[k] = [v]
        keys = sorted(grid)
        cells = [dict(zip(keys, vals)) for vals in product(*(grid[k] for k in keys))]
        if self.validate:
            cells = [c for c in cells if self.validate(c)]
        return cells


# ------------------------------------------------------------ checks


def _zdanowicz(f: Polynomial, p: int, expected: str) -> Outcome:
    v = lc.zdanowicz_check(f, p)
    cert = None
    if v.outcome == lc.LIFT_EXISTS:
        cofs = v.certificate.cofactors
        cert = "phi_p(f) = " + " + ".join(f"({render(c)})*g{i}" for i, c in enumerate(cofs) if not c.is_zero())
    else:
        cert = "nonzero remainder: " + render(v.certificate)
    return Outcome(v.outcome, expected, certificate=cert)


def check_zdanowicz_det(n: int, p: int) -> Outcome:
    f = determinant(MatrixOfVariables.generic(n))
    return _zdanowicz(f, p, lc.LIFT_EXISTS if n == 2 else lc.NO_LIFT)


def check_zdanowicz_pfaffian(n: int, p: int) -> Outcome:
    f = pfaffian(MatrixOfVariables.alternating(n))
    return _zdanowicz(f, p, lc.NO_LIFT)


def check_zdanowicz_symmetric(n: int, p: int) -> Outcome:
    f = determinant(MatrixOfVariables.symmetric(n))
    return _zdanowicz(f, p, lc.LIFT_EXISTS if (n == 3 and p != 2) else lc.NO_LIFT)


def frobenius_trace_sanity(f: Polynomial, p: int) -> bool:
    """Phi_R is nonzero, and Phi_S(f^(p-1) f s) lies in (f) for s = 1, x_i.

    For nonvanishing take a term t of f^(p-1) with all exponents < p and
    r = x^((p-1,...,p-1) - t); then Phi_S(f^(p-1) r) has the nonzero
    constant term coeff(t), so it is not in (f).
    """
    F = Zmod(p)
    fp = f.change_coeffs(F)
    ideal = Ideal([fp], fp.ring)
    one = fp.ring.one()
    power = fp ** (p - 1)
    for e, c in power.sorted_terms():
        if max(e) < p:
            r = fp.ring.monomial(tuple(p - 1 - a for a in e))
            if ideal_membership(frobenius_trace_apply(fp, p, 1, r), ideal).member:
                return False
            break
    for s in [one] + fp.ring.gens():
        if not ideal_membership(frobenius_trace_apply(fp, p, 1, fp * s), ideal).member:
            return False
    return True


def _trace(fam: lc.Family, p: int, k_max: int) -> Outcome:
    v = lc.trace_lift_obstruction(fam.f, p, k_max=k_max, family=fam)
    verdict = v.outcome
    if not frobenius_trace_sanity(fam.f, p):
        verdict += "+trace-defect"
    cert = json.dumps(v.evidence, sort_keys=True)
    return Outcome(verdict, lc.NO_LIFT, certificate=cert)


def check_trace_quadratic(m: int, p: int, kmax: int = 3) -> Outcome:
    return _trace(lc.quadratic_family(m), p, kmax)


def check_trace_pfaffian(n: int, p: int, kmax: int = 3) -> Outcome:
    return _trace(lc.pfaffian_family(n), p, kmax)


def check_trace_det(n: int, p: int, kmax: int = 3) -> Outcome:
    return _trace(lc.determinant_family(n), p, kmax)


def check_trace_symmetric2(kmax: int = 3) -> Outcome:
    return _trace(lc.symmetric_family(3), 2, kmax)


def check_coeff_quadratic(m: int, p: int) -> Outcome:
    w = lc.coefficient_obstruction("quadratic", p, m)
    oracle = lc.quadratic_coefficient_closed_form(p) % p
    return Outcome(f"nonzero({w.value})" if w.nonzero else "zero", f"nonzero({oracle})")


def check_coeff_symmetric8(p: int) -> Outcome:
    w = lc.coefficient_obstruction("symmetric_char_p", p)
    return Outcome(f"nonzero({w.value})" if w.nonzero else "zero", f"nonzero({8 % p})")


def check_lc_char2_symmetric(kmax: int = 4) -> Outcome:
    for k in range(kmax + 1):
        if not lc.char2_quotient_check(k):
            return Outcome(f"Zero({k})", f"NonzeroUpTo({kmax})", evidence=True)
    return Outcome(f"NonzeroUpTo({kmax})", f"NonzeroUpTo({kmax})", evidence=True)


# --- p^2 q in Delta

PQ_VARS = ("u", "v", "w", "x", "y", "z", "u1", "v1", "w1", "x1", "y1", "z1")
DELTA_TEXT = (
    "u*x - u1*x1",
    "v*y - v1*y1",
    "w*z - w1*z1",
    "u*y + v*x - u1*y1 - v1*x1",
    "u*z + w*x - u1*z1 - w1*x1",
    "v*z + w*y - v1*z1 - w1*y1",
)
P_ROWS = (("u", "v", "w", "x1", "y1", "z1"), ("u1", "v1", "w1", "x", "y", "z"))
Q_ROWS = (("u", "v", "w", "u1", "v1", "w1"), ("x1", "y1", "z1", "x", "y", "z"))


def pq_setup(drop: int | None = None):
    R = PolyRing(QQ, PQ_VARS)
    delta = [R.parse(s) for i, s in enumerate(DELTA_TEXT) if i != drop]
    pgens = minors(MatrixOfVariables.from_rows(R, P_ROWS), 2)
    qgens = minors(MatrixOfVariables.from_rows(R, Q_ROWS), 2)
    return R, Ideal(delta, R), pgens, qgens


def check_pq_containment(drop: int | None = None, certify: bool = True, limit: int | None = None) -> Outcome:
    """Every product p_i p_j q_k (i <= j) reduces to zero modulo GB(Delta) over QQ."""
    R, delta, pg, qg = pq_setup(drop)
    G = buchberger(delta, degree_bound=6)
    bad = 0
    primes: set = set()
    count = 0
    for i in range(len(pg)):
        for j in range(i, len(pg)):
            for q in qg:
                f = pg[i] * pg[j] * q
                if certify:
                    res = ideal_membership(f, delta, basis=G)
                    member, cert = res.member, res.certificate
                    primes |= denominator_profile(cert)
                else:
                    rem, cert = normal_form(f, G)
                    member = rem.is_zero()
                bad += not member
                count += 1
                if limit and count >= limit:
                    break
            if limit and count >= limit:
                break
        if limit and count >= limit:
            break
    ok = bad == 0 and primes <= {2}
    verdict = "IN" if ok else "OUT"
    cert = json.dumps({"products": count, "nonzero": bad, "denominator_primes": sorted(primes), "basis_size": len(G)})
    return Outcome(verdict, "IN", certificate=cert)


def check_delta_in_pq() -> bool:
    R, delta, pg, qg = pq_setup()
    ok = True
    for gens in (pg, qg):
        ideal = Ideal(gens, R)
        ok &= all(ideal_membership(d, ideal).member for d in delta.generators)
    return ok


# --- Veronese


def veronese_rule(a: int, b: int):
    """Expected image of x1^a x2^b (a+b even) under d_{1,1} mod 2, or None for 0."""
    if a % 2 == 0 and b % 2 == 0:
        return None
    return (a - 1, b - 1)


def check_veronese_derivation(bound: int = 10) -> Outcome:
    if bound < 2:
        raise UsageError("degree bound must be at least 2")
    R = PolyRing(Zmod(2), ("x1", "x2"))
    bad = 0
    for deg in range(0, bound + 1, 2):
        for a in range(deg + 1):
            b = deg - a
            img = diffop_apply((1, 1), R.monomial((a, b)))
            rule = veronese_rule(a, b)
            want = R.zero() if rule is None else R.monomial(rule)
            if img != want:
                bad += 1
            if any((e[0] + e[1]) % 2 for e in img.terms):
                bad += 1
    return Outcome("agree" if not bad else f"disagree({bad})", "agree")


# --- cocycles


def xn_cocycle_matches(n: int) -> bool:
    R = PolyRing(ZZ, ("x",))
    x = R.var("x")
    P, ys, (g,) = telescoping_cocycle(x ** n)
    X, Y = P.var("x"), P.var(ys[0])
    want = P.zero()
    want_e = P.zero()
    for k in range(n):
        want = want + Y ** (n - 1 - k) * X ** k
        want_e = want_e + (Y ** (n - 1 - k) * X ** k).scale(k)
    (eg,) = euler_apply([g], ("x",))
    return g == want and eg == want_e and Y ** n - X ** n == (Y - X) * g


def check_cocycle_example_xn(n: int = 4) -> Outcome:
    return Outcome("agree" if xn_cocycle_matches(n) else "disagree", "agree")


def sum_of_squares_cocycle_matches() -> bool:
    R = PolyRing(ZZ, ("x0", "x1"))
    f = R.parse("x0^2 + x1^2")
    P, ys, gs = telescoping_cocycle(f)
    x0, x1, y0, y1 = (P.var(v) for v in ("x0", "x1", "y0", "y1"))
    if gs != [y0 + x0, y1 + x1]:
        return False
    num = y1 * x0 + y0 * x1
    want = [(num, (y1 - x1) ** 2), (-num, (y0 - x0) ** 2)]
    return euler_cocycle(gs, ("x0", "x1"), ys) == want


def symmetric_uz_matches() -> bool:
    R = PolyRing(ZZ, ("u", "v", "w", "x", "y", "z"))
    rows = [
        ["2*u*x", "u*y + v*x", "u*z + w*x"],
        ["u*y + v*x", "2*v*y", "v*z + w*y"],
        ["u*z + w*x", "v*z + w*y", "2*w*z"],
    ]
    M = MatrixOfVariables.from_rows(R, rows, "symmetric")
    if not determinant(M).is_zero():
        return False
    # M = Z^T J Z with Z = [[u, v, w], [x, y, z]] and J = [[0, 1], [1, 0]]
    Z = [[R.var(c) for c in "uvw"], [R.var(c) for c in "xyz"]]
    for i in range(3):
        for j in range(3):
            if M[i, j] != Z[0][i] * Z[1][j] + Z[1][i] * Z[0][j]:
                return False
    # entries of Z^T Z for a generic 2 x 3 Z satisfy det = 0 as well
    G = MatrixOfVariables.generic(2, 3)
    ZtZ = [[sum((G[k, i] * G[k, j] for k in range(2)), G.ring.zero()) for j in range(3)] for i in range(3)]
    return determinant(MatrixOfVariables(G.ring, ZtZ, "symmetric")).is_zero()


def check_cocycle_examples() -> Outcome:
    ok = all(xn_cocycle_matches(n) for n in range(1, 7))
    ok = ok and sum_of_squares_cocycle_matches() and symmetric_uz_matches()
    return Outcome("agree" if ok else "disagree", "agree")


# --- property suites


def check_axioms_pderivation(p: int, trials: int = 200, seed: int = 0) -> Outcome:
    rng = random.Random(seed * 1009 + p)
    R = PolyRing(ZZ, ("a", "b", "c", "d"))
    F = Zmod(p)
    fails = 0
    if not phi(R.one(), p).is_zero():
        fails += 1
    for _ in range(trials):
        a = random_polynomial(R, rng)
        b = random_polynomial(R, rng)
        pa, pb = phi(a, p), phi(b, p)
        if phi(a * b, p) != a ** p * pb + b ** p * pa + (pa * pb).scale(p):
            fails += 1
        if phi(a + b, p) != pa + pb + cartier_apply(p, a, b):
            fails += 1
        lhs = phi(a + b.scale(p), p).change_coeffs(F)
        if lhs != (pa + b ** p).change_coeffs(F):
            fails += 1
    return Outcome("pass" if not fails else f"fail({fails})", "pass")


def check_axioms_groebner(trials: int = 20, seed: int = 0) -> Outcome:
    rng = random.Random(seed)
    fails = 0
    for t in range(trials):
        p = (2, 3, 5, 7)[t % 4]
        R = PolyRing(Zmod(p), ("x", "y", "z"))
        gens = [random_polynomial(R, rng, max_degree=3, max_terms=4) for _ in range(3)]
        gens = [g for g in gens if not g.is_zero()] or [R.var("x")]
        ideal = Ideal(gens, R)
        verdicts = []
        target = sum((random_polynomial(R, rng, 2, 3) * g for g in gens), R.zero())
        other = random_polynomial(R, rng, 3, 4)
        for order in ("grevlex", "lex"):
            G = buchberger(ideal, order)
            if not (is_groebner(G) and is_reduced(G)):
                fails += 1
            if not ideal_membership(target, ideal, order).member:
                fails += 1
            verdicts.append(ideal_membership(other, ideal, order).member)
        if verdicts[0] != verdicts[1]:
            fails += 1
    return Outcome("pass" if not fails else f"fail({fails})", "pass")


def check_axioms_pfaffian(trials: int = 100, seed: int = 0) -> Outcome:
    rng = random.Random(seed)
    fails = 0
    for n in (2, 4, 6):
        R = PolyRing(ZZ, ("x",))
        for _ in range(trials):
            A = random_alternating(n, rng)
            M = MatrixOfVariables(R, [[R.const(v) for v in row] for row in A], "alternating")
            pf = pfaffian(M).constant_value()
            if pf * pf != bareiss_determinant(A):
                fails += 1
    return Outcome("pass" if not fails else f"fail({fails})", "pass")


# ------------------------------------------------------------ registry

PRIMES = [2, 3, 5]

REGISTRY: dict[str, CheckSpec] = {}


def _register(spec: CheckSpec):
    REGISTRY[spec.check_id] = spec


_register(CheckSpec("zdanowicz.det", check_zdanowicz_det, {"n": [2, 3, 4], "p": PRIMES}, ("zdanowicz", "p-derivation", "standard-lift", "determinant"),
                    "Frobenius lift mod p^2 for generic determinants",
                    lambda c: not (c["n"] == 4 and c["p"] == 5)))
_register(CheckSpec("zdanowicz.pfaffian", check_zdanowicz_pfaffian, {"n": [4, 6], "p": PRIMES}, ("zdanowicz", "pfaffian"),
                    "Frobenius lift mod p^2 for Pfaffians"))
_register(CheckSpec("zdanowicz.symmetric", check_zdanowicz_symmetric, {"n": [3, 4], "p": PRIMES}, ("zdanowicz", "symmetric"),
                    "Frobenius lift mod p^2 for symmetric determinants",
                    lambda c: not (c["n"] == 4 and c["p"] == 5)))
_register(CheckSpec("trace.quadratic", check_trace_quadratic, {"m": [3, 4, 5], "p": PRIMES, "kmax": [3]},
                    ("lifting-criterion", "reduction-lemma", "local-cohomology", "quadratic-obstruction", "frobenius-trace"),
                    "Frobenius trace does not lift for the quadric sum x_i x_(m+i)"))
_register(CheckSpec("trace.pfaffian", check_trace_pfaffian, {"n": [4], "p": [2, 3], "kmax": [3]},
                    ("lifting-criterion", "reduction-lemma", "local-cohomology", "pfaffian", "frobenius-trace"),
                    "Frobenius trace does not lift for pf X, n = 4"))
_register(CheckSpec("trace.det", check_trace_det, {"n": [3], "p": PRIMES, "kmax": [3]},
                    ("lifting-criterion", "reduction-lemma", "local-cohomology", "determinant", "dual-basis-projection", "frobenius-trace"),
                    "Frobenius trace does not lift for det X, n = 3"))
_register(CheckSpec("trace.symmetric2", check_trace_symmetric2, {"kmax": [3]},
                    ("lifting-criterion", "reduction-lemma", "local-cohomology", "symmetric", "frobenius-trace"),
                    "Frobenius trace does not lift for symmetric 3x3 in characteristic 2"))
_register(CheckSpec("coeff.quadratic", check_coeff_quadratic, {"m": [3, 4, 5], "p": [2, 3, 5, 7]},
                    ("quadratic-obstruction",), "coefficient of z1^(p-1) z2"))
_register(CheckSpec("coeff.symmetric8", check_coeff_symmetric8, {"p": [3, 5, 7]},
                    ("symmetric-coefficient",), "coefficient of u^(3p-1) v^(p+1) is 8"))
_register(CheckSpec("lc.char2.symmetric", check_lc_char2_symmetric, {"kmax": [4]},
                    ("local-cohomology", "symmetric-char2"), "a b d^k outside (a^2, b^2, d^(k+1)) in B"))
_register(CheckSpec("pq.containment", check_pq_containment, {}, ("pq-containment",),
                    "p^2 q inside Delta over QQ with denominators in {2}"))
_register(CheckSpec("veronese.derivation", check_veronese_derivation, {"bound": [10]}, ("diffop", "veronese"),
                    "d_{1,1} mod 2 on the second Veronese subring"))
_register(CheckSpec("cocycle.examples", check_cocycle_examples, {}, ("identity-cocycle", "euler-operator", "symmetric"),
                    "identity and Euler cocycles, u..z symmetric matrix"))
_register(CheckSpec("cocycle.example.xn", check_cocycle_example_xn, {"n": [4]}, ("identity-cocycle", "euler-operator"),
                    "identity cocycle for A[x]/(x^n)"))
_register(CheckSpec("axioms.pderivation", check_axioms_pderivation, {"p": PRIMES}, ("p-derivation", "cartier", "standard-lift"),
                    "p-derivation axioms on random pairs"))
_register(CheckSpec("axioms.groebner", check_axioms_groebner, {}, ("groebner",), "Groebner basis fixpoint and certificates"))
_register(CheckSpec("axioms.pfaffian", check_axioms_pfaffian, {}, ("pfaffian",), "pf(M)^2 = det(M) on random matrices"))

# topics for infrastructure checks that exercise no tracked item by themselves
PLUMBING_TOPICS = ("groebner",)

# results that must each be reachable from at least one check
TRACKED_ITEMS = (
    "diffop",
    "local-cohomology",
    "p-derivation",
    "cartier",
    "standard-lift",
    "zdanowicz",
    "identity-cocycle",
    "euler-operator",
    "frobenius-trace",
    "lifting-criterion",
    "reduction-lemma",
    "veronese",
    "quadratic-obstruction",
    "pfaffian",
    "determinant",
    "dual-basis-projection",
    "symmetric",
    "pq-containment",
    "symmetric-char2",
    "symmetric-coefficient",
)


# ------------------------------------------------------------ running

_PARAM_RE = re.compile(r"[^A-Za-z0-9_.=-]")


def run_check(check_id: str, params: dict | None = None, cert_dir: str | None = None) -> CheckReport:
    if check_id not in REGISTRY:
        raise UsageError(f"unknown check {check_id!r}")
    spec = REGISTRY[check_id]
    params = dict(params or {})
    allowed = set(spec.grid)
    extra = set(params) - allowed
    if extra:
        raise UsageError(f"check {check_id} does not take {sorted(extra)}")
    try:
        inspect.signature(spec.fn).bind(**params)
    except TypeError as exc:
        raise UsageError(f"invalid parameters for {check_id}: {exc}") from exc
    for key, val in params.items():
        if not isinstance(val, int) or val < 0:
            raise UsageError(f"parameter {key} must be a non-negative integer")
    if "p" in params and not is_prime(params["p"]):
        raise UsageError(f"p = {params['p']} is not prime")
    t0 = time.perf_counter()
    try:
        out = spec.fn(**params)
    except ResourceLimitError:
        ms = int((time.perf_counter() - t0) * 1000)
        return CheckReport(check_id, params, "ResourceLimit", "", INCONCLUSIVE, None, ms)
    ms = int((time.perf_counter() - t0) * 1000)
    if out.verdict == out.expected:
        status = INCONCLUSIVE if out.evidence else MATCH
    else:
        status = MISMATCH
    path = None
    if cert_dir and out.certificate:
        os.makedirs(cert_dir, exist_ok=True)
        tag = "_".join(f"{k}={params[k]}" for k in sorted(params))
        name = _PARAM_RE.sub("_", f"{check_id}{'_' + tag if tag else ''}") + ".txt"
        path = os.path.join(cert_dir, name)
        with open(path, "w") as fh:
            fh.write(out.certificate + "\n")
    return CheckReport(check_id, params, out.verdict, out.expected, status, path, ms)


def plan(selector: str, overrides: dict | None = None) -> list[tuple[str, dict]]:
    ids = list(REGISTRY) if selector == "all" else [selector]
    jobs = []
    for cid in ids:
        if cid not in REGISTRY:
            raise UsageError(f"unknown check {cid!r}")
        for cell in REGISTRY[cid].cells(overrides):
            jobs.append((cid, cell))
    return jobs


def _run_job(job):
    cid, params, cert_dir = job
    return run_check(cid, params, cert_dir)


def run_many(jobs: list[tuple[str, dict]], workers: int = 1, cert_dir: str | None = None) -> list[CheckReport]:
    """Run jobs (possibly in parallel) and return reports in job order."""
    args = [(cid, params, cert_dir) for cid, params in jobs]
    if workers <= 1:
        return [_run_job(a) for a in args]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_run_job, args))


def exit_code(reports: list[CheckReport]) -> int:
    if any(r.status == MISMATCH for r in reports):
        return 1
    if any(r.verdict == "ResourceLimit" for r in reports):
        return 3
    return 0


def format_reports(reports: list[CheckReport], fmt: str = "json", timing: bool = True) -> str:
    if fmt == "json":
        rows = []
        for r in reports:
            d = r.to_json()
            if not timing:
                d.pop("elapsed_ms")
            rows.append(d)
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        lines = []
        for r in reports:
            ps = ",".join(f"{k}={v}" for k, v in sorted(r.params.items()))
            lines.append(f"{r.status:<12} {r.check_id}({ps}) verdict={r.verdict} expected={r.expected} [{r.elapsed_ms} ms]")
        return "\n".join(lines) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


def emit_report(reports: list[CheckReport], fmt: str = "json", out: str | None = None) -> int:
    text = format_reports(reports, fmt)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code(reports)
