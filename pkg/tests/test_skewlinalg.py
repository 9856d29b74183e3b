from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpf

from freudskew.errors import PrecisionExhausted, SingularPivot
from freudskew.moments import MomentTable, moment_table
from freudskew.numerics import working_precision
from freudskew.skewlinalg import (
    FiniteMatrixBlock, d_block, hankel_pivots, hankel_tau, n_block, normalizations,
    pfaffian, pfaffian_by_expansion, pfaffian_checked, r_block, skew_defect,
    transition_block, transition_identity_residual,
)

from conftest import spec_for, tables_for

# <Q_{2k}, Q_{2k+1}> from a direct Gram-Schmidt construction on skew moments
R_T0 = ["0.54872975513283", "0.0196569487283324", "0.00221554320893345", "0.000428697303550806"]
R_T2 = ["7.53623399333", "0.80961260557", "0.197845030159", "0.0726761428799"]


def fraction_det(a):
    """Determinant by fraction-exact Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in a]
    n, det = len(a), Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return det


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def transpose(a):
    return [list(r) for r in zip(*a)]


small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def skew_matrices(draw, n=6):
    a = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = draw(small)
            a[i][j], a[j][i] = v, -v
    return a


def test_pfaffian_2x2():
    assert pfaffian([[Fraction(0), Fraction(3)], [Fraction(-3), Fraction(0)]]) == 3
    with working_precision(128):
        assert pfaffian([[mpf(0), mpf("2.5")], [mpf("-2.5"), mpf(0)]]) == mpf("2.5")


def test_pfaffian_4x4_cofactor_formula():
    a12, a13, a14, a23, a24, a34 = map(Fraction, (2, -1, 3, 5, 7, -4))
    a = [[0, a12, a13, a14], [-a12, 0, a23, a24], [-a13, -a23, 0, a34], [-a14, -a24, -a34, 0]]
    a = [[Fraction(x) for x in row] for row in a]
    assert pfaffian(a) == a12 * a34 - a13 * a24 + a14 * a23


@settings(max_examples=60, deadline=None)
@given(skew_matrices())
def test_pfaffian_squared_is_determinant(a):
    pf = pfaffian(a)
    assert pf * pf == fraction_det(a)
    assert pf == pfaffian_by_expansion(a)


@settings(max_examples=40, deadline=None)
@given(skew_matrices(), st.lists(st.integers(-3, 3), min_size=36, max_size=36))
def test_pfaffian_congruence_sign(a, flat):
    # pf(B A B^T) = det(B) pf(A) fixes the sign, not only the magnitude
    b = [[Fraction(flat[6 * i + j]) for j in range(6)] for i in range(6)]
    bab = matmul(matmul(b, a), transpose(b))
    assert pfaffian(bab) == fraction_det(b) * pfaffian(a)


def test_pfaffian_block_diagonal_product():
    a = [[Fraction(0)] * 6 for _ in range(6)]
    for k, v in enumerate((2, -3, 5)):
        a[2 * k][2 * k + 1], a[2 * k + 1][2 * k] = Fraction(v), Fraction(-v)
    assert pfaffian(a) == -30


def test_pfaffian_zero_row_and_errors():
    a = [[Fraction(0)] * 4 for _ in range(4)]
    a[2][3], a[3][2] = Fraction(1), Fraction(-1)
    assert pfaffian(a) == 0
    with pytest.raises(ValueError):
        pfaffian([[Fraction(0)] * 3] * 3)
    with pytest.raises(ValueError):
        pfaffian([[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]])


def test_pfaffian_underflowing_pivot():
    with working_precision(64):
        tiny = mpf(2) ** -200
        a = [[mpf(0), mpf(1), mpf(0), mpf(0)],
             [mpf(-1), mpf(0), mpf(0), mpf(0)],
             [mpf(0), mpf(0), mpf(0), tiny],
             [mpf(0), mpf(0), -tiny, mpf(0)]]
        with pytest.raises(SingularPivot):
            pfaffian(a)


def test_pfaffian_checked_agrees_with_expansion():
    with working_precision(128):
        mt = moment_table(spec_for("0"), 4, 5)
        block = mt.skew_block(6)
        assert abs(pfaffian_checked(block) - pfaffian_by_expansion(block)) < mpf("1e-30")


def test_matrix_block_kinds():
    with pytest.raises(ValueError):
        FiniteMatrixBlock(((mpf(0), mpf(1)), (mpf(1), mpf(0))), "skew_moment")
    with pytest.raises(ValueError):
        FiniteMatrixBlock(((mpf(1), mpf(1)), (mpf(0), mpf(1))), "D_matrix")
    with pytest.raises(ValueError):
        FiniteMatrixBlock(((mpf(1),),), "no_such_kind")
    b = FiniteMatrixBlock(((mpf(0), mpf(2)), (mpf(-2), mpf(0))), "skew_moment")
    assert b.dim == 2 and b.as_lists() == [[0, 2], [-2, 0]]


def test_hankel_tau_small_cases():
    spec = spec_for("0")
    mt = moment_table(spec, 8, 0)
    with working_precision(spec.bits):
        assert hankel_tau(mt, 0) == 1
        assert hankel_tau(mt, 1) == mt.m(0)
        assert abs(hankel_tau(mt, 2) - mt.m(0) * mt.m(2)) < mpf("1e-70")
        piv, _ = hankel_pivots(mt, 4)
        prod = piv[0] * piv[1] * piv[2] * piv[3]
        assert abs(prod - hankel_tau(mt, 4)) < mpf("1e-60") * prod


@pytest.mark.parametrize("t,expected,rel", [("0", R_T0, "1e-13"), ("2", R_T2, "1e-10")])
def test_normalizations_against_direct_construction(t, expected, rel):
    T = tables_for(t)
    spec = spec_for(t)
    with working_precision(spec.bits):
        mt = moment_table(spec, 4, 1)
        assert T.h[0] == mt.m(0)
        assert abs(T.r[0] - mt.mu(0, 1)) < mpf("1e-60") * T.r[0]
        assert abs(T.h[1] / T.h[0] - T.beta[1]) < mpf("1e-60")
        for k, v in enumerate(expected):
            assert abs(T.r[k] - mpf(v)) < mpf(rel) * mpf(v)


def test_h_positive_and_r_positive():
    T = tables_for("6.5")
    assert all(x > 0 for x in T.h)
    assert all(x > 0 for x in T.r)


def test_hankel_of_degenerate_measure_is_rejected():
    # moments of (delta_{-1} + delta_1)/2: rank-2 Hankel matrix
    sym = {k: mpf(1) for k in range(0, 12, 2)}
    mt = MomentTable(sym=sym, skew={}, sym_max=10, skew_max=-1)
    with pytest.raises(PrecisionExhausted):
        normalizations(mt, 4, -1)


def test_r_cancellation_is_detected():
    sym = {0: mpf(1), 2: mpf(1), 4: mpf(2), 6: mpf(5), 8: mpf(14)}
    eps = mpf(2) ** (-mpmath.mp.prec + 2)
    skew = {(0, 1): mpf(1), (0, 3): mpf(1), (1, 2): mpf(-1), (2, 3): mpf(1) + eps}
    mt = MomentTable(sym=sym, skew=skew, sym_max=8, skew_max=3)
    with pytest.raises(PrecisionExhausted):
        normalizations(mt, 1, 1)


@pytest.mark.parametrize("t,n", [("0", 10), ("2", 12)])
def test_transition_identity(t, n):
    T = tables_for(t)
    with working_precision(spec_for(t).bits):
        blocks = (transition_block(T.xi, T.psi, T.zeta, n), r_block(T.r, n),
                  d_block(T.h, n), n_block(T.h, n))
        assert transition_identity_residual(*blocks, n) < mpf("1e-20")


def test_transition_identity_detects_wrong_xi():
    T = tables_for("0")
    with working_precision(spec_for("0").bits):
        xi = list(T.xi)
        xi[2] *= 1 + mpf("1e-8")
        blocks = (transition_block(xi, T.psi, T.zeta, 10), r_block(T.r, 10),
                  d_block(T.h, 10), n_block(T.h, 10))
        assert transition_identity_residual(*blocks, 10) > mpf("1e-15")


def test_scaled_n_is_skew():
    T = tables_for("2")
    with working_precision(spec_for("2").bits):
        N = n_block(T.h, 12).entries
        scaled = [[N[i][j] / (T.h[i] * T.h[j]) for j in range(12)] for i in range(12)]
        assert skew_defect(scaled) < mpf("1e-70")
        assert N[1][0] == -mpf(1) / 2 * T.h[0]


def test_transition_block_shape():
    T = tables_for("0")
    q = transition_block(T.xi, T.psi, T.zeta, 8).entries
    assert all(q[i][i] == 1 for i in range(8))
    assert q[2][0] == T.xi[0] and q[3][1] == T.psi[0] and q[5][1] == T.zeta[0]
    assert all(q[i][j] == 0 for i in range(8) for j in range(i + 1, 8))
    with pytest.raises(ValueError):
        transition_identity_residual(*(transition_block(T.xi, T.psi, T.zeta, 6),) * 4, 6)
