import random

import pytest

from liftlab import liftcheck as lc
from liftlab.liftcheck import (
    LIFT_EXISTS,
    NO_LIFT,
    LocalCohomologyClass,
    char2_quotient_check,
    char2_uniform_witness,
    coefficient_obstruction,
    determinant_family,
    lc_vanishing_search,
    pfaffian_family,
    quadratic_coefficient_closed_form,
    quadratic_family,
    reduce_obstruction,
    split_mod_p,
    symmetric_coefficient_closed_form,
    symmetric_family,
    trace_lift_obstruction,
    zdanowicz_check,
)
from liftlab.matforms import MatrixOfVariables, determinant, pfaffian
from liftlab.polyring import ZZ, PolyRing, SpecializationMap, polyring, specialize
from liftlab.pops import phi

# ------------------------------------------------------------- Zdanowicz


def det(n):
    return determinant(MatrixOfVariables.generic(n))


def sym(n):
    return determinant(MatrixOfVariables.symmetric(n))


def test_zdanowicz_det2_lifts():
    v = zdanowicz_check(det(2), 2)
    assert v.outcome == LIFT_EXISTS
    assert v.certificate.check()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_zdanowicz_det3_no_lift(p):
    v = zdanowicz_check(det(3), p)
    assert v.outcome == NO_LIFT
    assert not v.certificate.is_zero()


@pytest.mark.parametrize("p,expected", [(2, NO_LIFT), (3, LIFT_EXISTS), (5, LIFT_EXISTS)])
def test_zdanowicz_symmetric3_consistency_pair(p, expected):
    assert zdanowicz_check(sym(3), p).outcome == expected


def test_zdanowicz_rejects_composite_and_zero():
    with pytest.raises(ValueError):
        zdanowicz_check(det(2), 4)
    with pytest.raises(ValueError):
        zdanowicz_check(PolyRing(ZZ, ("x",)).zero(), 2)


def _permuted(f, perm_seed):
    R = f.ring
    names = list(R.vars)
    random.Random(perm_seed).shuffle(names)
    S = PolyRing(ZZ, tuple(names))
    s = SpecializationMap({v: S.var(w) for v, w in zip(R.vars, names)}, S)
    return specialize(f, s)


@pytest.mark.parametrize("f_name,p", [("det2", 2), ("det3", 2), ("sym3", 3), ("sym3", 2), ("pf4", 3)])
def test_zdanowicz_invariant_under_permutation_and_sign(f_name, p):
    f = {"det2": det(2), "det3": det(3), "sym3": sym(3), "pf4": pfaffian(MatrixOfVariables.alternating(4))}[f_name]
    base = zdanowicz_check(f, p).outcome
    for seed in range(3):
        g = _permuted(f, seed)
        assert zdanowicz_check(g, p).outcome == base
        assert zdanowicz_check(-g, p).outcome == base


# ------------------------------------------------------ vanishing search


def test_search_trivial_zero():
    R, z0, z1 = polyring("z0 z1")
    c = LocalCohomologyClass(z0 ** 2, (z0, z1), 2, 3)
    r = lc_vanishing_search(c, 3)
    assert r.label() == "Zero(0)"
    assert r.certificate.check()


def test_search_needs_prime_modulus():
    R, z0 = polyring("z0")
    with pytest.raises(ValueError):
        lc_vanishing_search(LocalCohomologyClass(z0, (z0,), 1, 4), 1)


def test_search_monotone_after_first_zero():
    R, x, y = polyring("x y")
    c = LocalCohomologyClass(R.one(), (x, y), 1, 2, (x * y,))
    r = lc_vanishing_search(c, 3)
    assert r.label() == "Zero(1)"
    for k in (2, 3):
        assert lc_vanishing_search(c, k, k_min=k).label() == f"Zero({k})"


def test_search_monotone_random_monomial_classes():
    rng = random.Random(4)
    R, a, b, c = polyring("a b c")
    for _ in range(15):
        num = R.monomial([rng.randint(0, 3) for _ in range(3)])
        cls = LocalCohomologyClass(num, (a, b), 2, 3, (a * b * c - c ** 3,))
        r = lc_vanishing_search(cls, 2)
        if r.is_zero:
            assert lc_vanishing_search(cls, r.k + 1, k_min=r.k + 1).is_zero


def test_det3_small_class_nonzero_up_to_3():
    fam = determinant_family(3)
    c = reduce_obstruction(fam.f, 2, fam.zs)
    assert lc_vanishing_search(c, 3).label() == "NonzeroUpTo(3)"


def test_pf4_small_class_nonzero_up_to_3():
    fam = pfaffian_family(4)
    c = reduce_obstruction(fam.f, 2, fam.zs)
    assert lc_vanishing_search(c, 3).label() == "NonzeroUpTo(3)"


@pytest.mark.parametrize("k", range(5))
def test_char2_quotient_nonzero(k):
    assert char2_quotient_check(k)


def test_char2_uniform_witness():
    w = char2_uniform_witness()
    assert w["nonzero"] and w["relation_absorbed"]
    assert w["nf_ab"] == "e^2"
    assert sorted(w["basis"]) == sorted(["e^4", "a*e^2", "b*e^2", "a^2", "a*b + e^2", "b^2"])


# ---------------------------------------------------------- reductions


def test_reduce_det3_denominators():
    fam = determinant_family(3)
    c = reduce_obstruction(fam.f, 3, fam.zs)
    R = fam.f.ring
    assert c.denominators == tuple(R.var(z) for z in ("x_1_2", "x_1_3", "x_2_2", "x_2_3"))
    assert c.exponent == 3 and c.numerator == phi(fam.f, 3)


def test_reduce_symmetric_char2_split():
    fam = symmetric_family(3)
    R = fam.f.ring
    g, h = split_mod_p(fam.f, fam.zs, 2)
    assert g == R.parse("x_1_1*x_2_2*x_3_3 - x_1_1*x_2_3^2 - x_2_2*x_1_3^2 - x_3_3*x_1_2^2")
    assert h == R.parse("x_1_2*x_1_3*x_2_3")
    c = reduce_obstruction(fam.f, 2, fam.zs)
    assert c.numerator == phi(g, 2)
    assert c.denominators == tuple(R.var(z) for z in ("x_1_1", "x_2_2", "x_3_3"))


def test_reduce_pf4_denominators():
    fam = pfaffian_family(4)
    c = reduce_obstruction(fam.f, 2, fam.zs)
    R = fam.f.ring
    assert c.denominators == (R.var("x_1_2"), R.var("x_1_3"), R.var("x_1_4"))


def test_reduce_without_decomposition():
    R, x, y = polyring("x y")
    with pytest.raises(ValueError):
        reduce_obstruction(x + R.one(), 2)
    with pytest.raises(ValueError):
        reduce_obstruction(x + y, 2, ["x"])


def test_greedy_cover():
    fam = quadratic_family(3)
    assert len(lc.greedy_cover(fam.f)) == 3


# --------------------------------------------------------- trace lifting


def test_trace_quadric_m3_p2():
    fam = quadratic_family(3)
    v = trace_lift_obstruction(fam.f, 2, family=fam)
    assert v.outcome == NO_LIFT
    assert v.evidence["reduced"] == "NonzeroUpTo(3)"


@pytest.mark.parametrize("p", [2, 3])
def test_trace_pf4(p):
    fam = pfaffian_family(4)
    assert trace_lift_obstruction(fam.f, p, family=fam).outcome == NO_LIFT


def test_trace_linear_lifts():
    R, x0, x1 = polyring("x0 x1")
    v = trace_lift_obstruction(x0, 3)
    assert v.outcome == LIFT_EXISTS
    assert v.evidence["diagonal"] == "Zero(0)"


def test_trace_without_witness_is_unknown():
    R, x0, x1, x2 = polyring("x0 x1 x2")
    v = trace_lift_obstruction(x0 * x1 + x2 ** 2, 3, k_max=1, zs=["x0", "x2"])
    # the small class vanishes, which says nothing about the diagonal class
    assert v.evidence["reduced"] == "Zero(0)"
    assert v.outcome == "Unknown(1)"


def test_trace_mode_validation():
    R, x = polyring("x")
    with pytest.raises(ValueError):
        trace_lift_obstruction(x, 2, mode="other")
    v = trace_lift_obstruction(x, 2, mode="char_zero_evidence")
    assert "note" in v.evidence


# ------------------------------------------------------------- witnesses


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("m", [3, 4, 5])
def test_quadratic_coefficient(p, m):
    w = coefficient_obstruction("quadratic", p, m)
    assert w.nonzero
    assert w.value == ((-1) ** p) % p
    assert w.integer_value == quadratic_coefficient_closed_form(p)


def test_quadratic_coefficient_p3_m3():
    assert coefficient_obstruction("quadratic", 3, 3).value == 2


@pytest.mark.parametrize("p,value", [(3, 2), (5, 3), (7, 1)])
def test_symmetric_coefficient(p, value):
    w = coefficient_obstruction("symmetric_char_p", p)
    assert w.value == value == 8 % p
    assert w.integer_value == symmetric_coefficient_closed_form(p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_determinant_projection_coefficient(p):
    w = coefficient_obstruction("determinant", p)
    assert w.nonzero
    # multinomial count: a^(p-1) b appears p times in (-(a+b+c))^p, then divide by p
    assert w.integer_value == (-1) ** p


def test_coefficient_obstruction_errors():
    with pytest.raises(ValueError):
        coefficient_obstruction("quadratic", 3, 2)
    with pytest.raises(ValueError):
        coefficient_obstruction("symmetric_char_p", 2)
    with pytest.raises(ValueError):
        coefficient_obstruction("nope", 3)

