import json
from fractions import Fraction

import pytest
import sympy

from conftest import leibniz_det, random_invertible, random_low_rank, random_skew, to_sympy
from crk.constructions import J, build_Jbar, witness_subspace
from crk.exact_arith import MultiPoly, RationalSampler, UniPoly
from crk.matrix_core import (
    MatrixQ,
    det,
    direct_sum,
    evaluate_poly_matrix,
    inverse,
    nullspace,
    pfaffian,
    poly_det,
    rank,
    skew_normal_form,
    submatrix,
    symmetric_signature,
)


def Jtilde(n, r):
    return direct_sum(build_Jbar(2 * r), MatrixQ.zeros(n - 2 * r))


def test_rank_examples():
    assert rank(MatrixQ.identity(5)) == 5
    assert rank(MatrixQ.zeros(3, 4)) == 0
    assert rank(Jtilde(6, 2)) == 4


def test_rank_matches_minor_enumeration_oracle():
    # Jtilde(6,2): a nonzero 4x4 minor exists and every 5x5 minor vanishes
    from itertools import combinations

    A = Jtilde(6, 2)
    rows = A.tolist()
    minors5 = [
        leibniz_det([[rows[i][j] for j in cs] for i in rs])
        for rs in combinations(range(6), 5)
        for cs in combinations(range(6), 5)
    ]
    assert all(m == 0 for m in minors5)
    assert leibniz_det([row[:4] for row in rows[:4]]) != 0


def test_det_examples():
    assert det(J) == 1
    assert det(build_Jbar(4)) == 1
    M = MatrixQ([[0, 1, 0], [-1, 0, 1], [1, 0, 0]])
    assert leibniz_det(M.tolist()) == 1
    assert det(M) == 1
    with pytest.raises(ValueError):
        det(MatrixQ.zeros(2, 3))


def test_det_against_leibniz():
    smp = RationalSampler("det")
    for _ in range(60):
        n = smp.integer(1, 6)
        A = MatrixQ([smp.vector(n) for _ in range(n)])
        assert det(A) == leibniz_det(A.tolist())


def test_rank_against_echelon_oracle():
    smp = RationalSampler("rank")
    for _ in range(100):
        m, n = smp.integer(1, 8), smp.integer(1, 8)
        A = random_low_rank(smp, m, n, smp.integer(0, min(m, n)))
        assert rank(A) == to_sympy(A).rank()


def test_submatrix():
    I3 = MatrixQ.identity(3)
    assert submatrix(I3, [1, 2], [1, 2]) == MatrixQ.identity(2)
    assert submatrix(I3, [1, 2, 3], [1, 2, 3]) == I3
    with pytest.raises(IndexError):
        submatrix(I3, [0], [1])
    with pytest.raises(IndexError):
        submatrix(I3, [1], [4])


def test_submatrix_leading_block_of_witness_is_invertible():
    S = witness_subspace(6, 2)
    smp = RationalSampler("lead")
    A = S.sample(smp.vector(S.dim))
    lead = submatrix(A, [1, 2, 3, 4], [1, 2, 3, 4])
    assert det(lead) != 0
    assert lead.is_skew()


def test_pfaffian_examples():
    assert pfaffian(build_Jbar(4)) == 1
    assert pfaffian(MatrixQ.zeros(4)) == 0
    D = direct_sum(J * 2, J * 3)
    assert det(D) == 36
    assert pfaffian(D) == 6
    assert pfaffian(MatrixQ.zeros(3)) == 0
    with pytest.raises(ValueError):
        pfaffian(MatrixQ.identity(2))


def test_pfaffian_squared_is_det():
    smp = RationalSampler("pf")
    for t in range(100):
        n = 2 * (1 + t % 5)
        A = random_skew(smp, n)
        assert pfaffian(A) ** 2 == det(A)


def test_skew_normal_form_examples():
    Q, k = skew_normal_form(build_Jbar(4))
    assert (Q, k) == (MatrixQ.identity(4), 2)
    Q, k = skew_normal_form(MatrixQ.zeros(3))
    assert (Q, k) == (MatrixQ.identity(3), 0)
    M = MatrixQ([[0, 2, 0, 0], [-2, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    Q, k = skew_normal_form(M)
    assert k == 1
    assert Q.T @ M @ Q == direct_sum(J, MatrixQ.zeros(2))


def test_skew_normal_form_random():
    smp = RationalSampler("nf")
    for t in range(100):
        n = 1 + t % 10
        k = smp.integer(0, n // 2)
        # skew matrices of prescribed rank 2k via congruence of Jtilde
        P = MatrixQ([smp.vector(n) for _ in range(n)])
        M = P.T @ Jtilde(n, k) @ P if t % 2 else random_skew(smp, n)
        Q, kk = skew_normal_form(M)
        assert Q.T @ M @ Q == Jtilde(n, kk)
        assert 2 * kk == rank(M)
        assert det(Q) != 0


def test_symmetric_signature_examples():
    assert symmetric_signature(MatrixQ.identity(3)) == (3, 0)
    assert symmetric_signature(MatrixQ.diag([1, -1, 0])) == (1, 1)
    assert symmetric_signature(MatrixQ([[0, 1], [1, 0]])) == (1, 1)
    with pytest.raises(ValueError):
        symmetric_signature(J)


def _descartes_signature(A: MatrixQ) -> tuple[int, int]:
    """Inertia from the characteristic polynomial: all roots are real, so
    Descartes' rule of signs counts them exactly."""
    lam = sympy.Symbol("lam")
    cp = sympy.Poly(to_sympy(A).charpoly(lam).as_expr(), lam)

    def sign_changes(coeffs):
        signs = [c for c in coeffs if c != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))

    pos = sign_changes(cp.all_coeffs())
    neg = sign_changes(cp.compose(sympy.Poly(-lam, lam)).all_coeffs())
    return pos, neg


def test_symmetric_signature_against_charpoly_oracle():
    smp = RationalSampler("sig")
    for t in range(40):
        n = smp.integer(1, 6)
        k = smp.integer(0, n)
        B = MatrixQ([smp.vector(n) for _ in range(k)], n) if k else MatrixQ.zeros(1, n)
        D = MatrixQ.diag([smp.nonzero() for _ in range(B.rows)])
        A = B.T @ D @ B
        assert symmetric_signature(A) == _descartes_signature(A)


def test_sylvester_law_of_inertia():
    smp = RationalSampler("sylvester")
    for _ in range(50):
        n = smp.integer(1, 6)
        B = MatrixQ([smp.vector(n) for _ in range(n)])
        A = B + B.T
        Q = random_invertible(smp, n)
        assert symmetric_signature(Q.T @ A @ Q) == symmetric_signature(A)
        p, nu = symmetric_signature(A)
        assert p + nu == rank(A)


def test_poly_det_examples():
    s = UniPoly([0, 1])
    # Jbar_2 + s J = (1 + s) J
    P = [[UniPoly([0, 0]), UniPoly([1, 1])], [UniPoly([-1, -1]), UniPoly([0, 0])]]
    assert poly_det(P) == UniPoly([1, 2, 1])
    assert poly_det([[s, UniPoly()], [UniPoly(), s]]) == UniPoly([0, 0, 1])
    # bordered pencil with r=1, A=I, b=(1,0), c=(0,1)
    bordered = [
        [s, UniPoly([1]), UniPoly()],
        [UniPoly([-1]), s, s],
        [s, UniPoly(), UniPoly()],
    ]
    assert poly_det(bordered) == UniPoly([0, 0, 1])
    sym = sympy.Symbol("s")
    oracle = sympy.Matrix([[sym, 1, 0], [-1, sym, sym], [sym, 0, 0]]).det()
    assert sympy.expand(oracle - sym**2) == 0


def test_poly_det_commutes_with_evaluation():
    smp = RationalSampler("polydet")
    for t in range(100):
        n = 1 + t % 4
        d = 1 + t % 3
        grid = [[MultiPoly.linear(smp.rational(), smp.vector(d)) for _ in range(n)] for _ in range(n)]
        point = smp.vector(d)
        assert poly_det(grid)(point) == det(evaluate_poly_matrix(grid, point))
        ugrid = [[UniPoly(smp.vector(2)) for _ in range(n)] for _ in range(n)]
        s = smp.rational()
        assert poly_det(ugrid)(s) == det(MatrixQ([[e(s) for e in row] for row in ugrid]))


def test_inverse_and_nullspace():
    smp = RationalSampler("inv")
    for _ in range(20):
        n = smp.integer(1, 5)
        Q = random_invertible(smp, n)
        assert Q @ inverse(Q) == MatrixQ.identity(n)
        A = random_low_rank(smp, 4, 6, smp.integer(0, 4))
        N = nullspace(A)
        assert len(N) == 6 - rank(A)
        for v in N:
            assert all(x == 0 for x in (A @ MatrixQ([[x] for x in v], 1)).vec())


def test_matrix_json_roundtrip(tmp_path):
    A = MatrixQ([[Fraction(1, 2), -3], [0, Fraction(-7, 9)]])
    data = A.to_json()
    assert data == {"rows": 2, "cols": 2, "entries": [["1/2", "-3"], ["0", "-7/9"]]}
    assert MatrixQ.from_json(json.loads(json.dumps(data))) == A
