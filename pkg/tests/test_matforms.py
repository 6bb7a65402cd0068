import random

import pytest

from liftlab.groebner import Ideal, ideal_membership
from liftlab.matforms import (
    MatrixOfVariables,
    bareiss_determinant,
    determinant,
    minors,
    minors_ideal,
    pfaffian,
    pfaffians,
    pfaffians_ideal,
)
from liftlab.polyring import QQ, ZZ, PolyRing, SpecializationMap, Zmod, partial_derivative
from liftlab.sampling import random_alternating, random_int_matrix


def test_generic_2x2_det():
    M = MatrixOfVariables.generic(2)
    R = M.ring
    assert determinant(M) == R.parse("x_1_1*x_2_2 - x_1_2*x_2_1")


def test_alternating_3x3_det_is_zero():
    assert determinant(MatrixOfVariables.alternating(3)).is_zero()


def test_uz_symmetric_matrix_has_det_zero():
    R = PolyRing(ZZ, ("u", "v", "w", "x", "y", "z"))
    rows = [
        ["2*u*x", "u*y + v*x", "u*z + w*x"],
        ["u*y + v*x", "2*v*y", "v*z + w*y"],
        ["u*z + w*x", "v*z + w*y", "2*w*z"],
    ]
    assert determinant(MatrixOfVariables.from_rows(R, rows, "symmetric")).is_zero()


def test_non_square_det_rejected():
    with pytest.raises(ValueError):
        determinant(MatrixOfVariables.generic(2, 3))


def test_shapes_validate():
    R = PolyRing(ZZ, ("a", "b"))
    a, b = R.gens()
    with pytest.raises(ValueError):
        MatrixOfVariables(R, [[a, b], [a, a]], "symmetric")
    with pytest.raises(ValueError):
        MatrixOfVariables(R, [[a, b], [b, R.zero()]], "alternating")


def test_variable_counts():
    assert MatrixOfVariables.generic(3).ring.nvars == 9
    assert MatrixOfVariables.symmetric(4).ring.nvars == 10
    assert MatrixOfVariables.alternating(6).ring.nvars == 15
    S = MatrixOfVariables.symmetric(3)
    assert S[0, 2] == S[2, 0] == S.ring.var("x_1_3")


def test_pfaffian_small():
    M2 = MatrixOfVariables.alternating(2)
    assert pfaffian(M2) == M2.ring.var("x_1_2")
    M4 = MatrixOfVariables.alternating(4)
    assert pfaffian(M4) == M4.ring.parse("x_1_2*x_3_4 - x_1_3*x_2_4 + x_1_4*x_2_3")


def test_pfaffian_needs_alternating():
    with pytest.raises(ValueError):
        pfaffian(MatrixOfVariables.generic(2))


def test_pfaffian_squared_symbolic_n4():
    M = MatrixOfVariables.alternating(4)
    assert pfaffian(M) ** 2 == determinant(M)


def test_pfaffian_squared_random_6x6():
    rng = random.Random(7)
    R = PolyRing(ZZ, ("x",))
    for _ in range(10):
        A = random_alternating(6, rng)
        M = MatrixOfVariables(R, [[R.const(v) for v in row] for row in A], "alternating")
        assert pfaffian(M).constant_value() ** 2 == bareiss_determinant(A)


def test_bareiss_agrees_with_cofactor():
    rng = random.Random(3)
    R = PolyRing(ZZ, ("x",))
    for _ in range(30):
        A = random_int_matrix(4, rng)
        M = MatrixOfVariables(R, [[R.const(v) for v in row] for row in A])
        assert determinant(M).constant_value() == bareiss_determinant(A)


def test_minors_ideal_small():
    M = MatrixOfVariables.generic(2)
    assert set(minors_ideal(M, 1).generators) == set(M.ring.gens())
    # generators are sign-normalized, so compare up to a unit
    (g,) = minors_ideal(M, 2).generators
    assert g in (determinant(M), -determinant(M))


def test_minor_signs_normalized():
    M = MatrixOfVariables.generic(3)
    for g in minors(M, 2):
        assert g.leading_term()[1] > 0


def test_pfaffians_ideal_small():
    M = MatrixOfVariables.alternating(4)
    assert set(pfaffians_ideal(M, 2).generators) == set(M.ring.gens())
    (g,) = pfaffians_ideal(M, 4).generators
    assert g in (pfaffian(M), -pfaffian(M))
    with pytest.raises(ValueError):
        pfaffians(M, 3)


def test_partials_are_complementary_minors():
    M = MatrixOfVariables.generic(3)
    f = determinant(M)
    comp = {g for g in minors(M, 2)} | {-g for g in minors(M, 2)}
    for v in M.ring.vars:
        assert partial_derivative(f, v) in comp


def test_pfaffian_ideal_chain_6x6():
    M = MatrixOfVariables.alternating(6)
    big = pfaffians_ideal(M.change_coeffs(Zmod(101)), 6)
    small = pfaffians_ideal(M.change_coeffs(Zmod(101)), 4)
    for g in big.generators:
        assert ideal_membership(g, small).member


def test_specialized_minor_ideal_X2():
    """I_2 of the specialized 3x3 matrix equals the specialization of I_2(X)."""
    M = MatrixOfVariables.generic(3)
    R = M.ring
    s = SpecializationMap.partial(R, R, {"x_3_1": R.zero()})
    Ms = M.specialize(s)
    lhs = set(minors(Ms, 2))
    rhs = set()
    for g in minors(M, 2):
        h = s(g)
        if not h.is_zero():
            rhs.add(h if h.leading_term()[1] > 0 else -h)
    assert lhs == rhs


def test_block_specialized_pfaffians_n6():
    """Pf_4(X'') equals Pf_2(X') after the block specialization x_5_6 -> 1,
    x_i_5, x_i_6 -> 0 for i < 5; X' is the leading 4x4 block."""
    M = MatrixOfVariables.alternating(6)
    R = M.ring
    images = {}
    for i in range(1, 5):
        for j in (5, 6):
            images[f"x_{i}_{j}"] = R.zero()
    images["x_5_6"] = R.one()
    s = SpecializationMap.partial(R, R, images)
    Xpp = MatrixOfVariables(R, M.specialize(s).entries, "alternating")
    lhs = Ideal(pfaffians(Xpp, 4), R)
    Xp = M.submatrix(range(4), range(4))
    rhs = Ideal(pfaffians(MatrixOfVariables(R, Xp.entries, "alternating"), 2), R)
    for a, b in ((lhs, rhs), (rhs, lhs)):
        bq = b.change_coeffs(QQ)
        for g in a.generators:
            assert ideal_membership(g.change_coeffs(QQ), bq).member
