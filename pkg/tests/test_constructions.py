import pytest

from conftest import to_sympy
from crk.constructions import (
    J,
    WitnessParams,
    a_rect,
    antipinco,
    bound_ledger,
    build_E,
    build_J,
    build_Jbar,
    build_R,
    build_T,
    build_U,
    build_X,
    build_Z,
    defpos_gram,
    embed_K,
    identity_ss_check,
    is_antipinco,
    is_pinco,
    max_dim_antisym,
    pinco,
    pinco_tilde,
    quadratic_form_defpos,
    ref_formulas,
    witness_subspace,
)
from crk.exact_arith import RationalSampler
from crk.matrix_core import MatrixQ, det, direct_sum, symmetric_signature
from crk.subspace import line_rank_drop


def random_blocks(smp, m, kind=antipinco):
    return {(i, j): kind(smp.rational(), smp.rational()) for i in range(1, m + 1) for j in range(i + 1, m + 1)}


def test_basic_builders():
    assert build_J() == J == MatrixQ([[0, 1], [-1, 0]])
    Jb = build_Jbar(4)
    assert Jb == direct_sum(J, J) and det(Jb) == 1
    for r in range(1, 5):
        assert build_T([1] * r) == build_Jbar(2 * r)
    E = build_E(3, 1, 2)
    assert [(i, j) for i in range(3) for j in range(3) if E[i, j]] == [(0, 1)]
    with pytest.raises(IndexError):
        build_E(3, 4, 1)
    with pytest.raises(ValueError):
        build_Jbar(3)


def test_block_builders():
    zero = {(1, 2): MatrixQ.zeros(2)}
    assert build_R(zero, 2) == MatrixQ.zeros(4) == build_X(zero, 2)
    one = {(1, 2): MatrixQ.identity(2)}
    assert build_R(one, 2).is_skew()
    assert build_X(one, 2).is_symmetric()
    assert build_R({}, 1) == MatrixQ.zeros(2)
    smp = RationalSampler("blocks")
    for _ in range(20):
        blocks = {k: MatrixQ([smp.vector(2), smp.vector(2)]) for k in random_blocks(smp, 3)}
        R = build_R(blocks, 3)
        assert R + R.T == MatrixQ.zeros(6)
        X = build_X(blocks, 3)
        assert X == X.T
    with pytest.raises(ValueError):
        build_R({(1, 2): MatrixQ.zeros(2)}, 3)


def test_pinco_family():
    P = MatrixQ([[1, 2], [2, -1]])
    assert is_pinco(P) and not is_antipinco(P)
    assert is_antipinco(MatrixQ([[1, 2], [-2, 1]]))
    assert pinco(1, 2) == P
    assert pinco_tilde(P) == MatrixQ([[2, -1], [-1, -2]])
    with pytest.raises(ValueError):
        pinco_tilde(MatrixQ([[1, 2], [-2, 1]]))
    with pytest.raises(ValueError):
        is_pinco(MatrixQ.identity(3))


def test_witness_examples():
    for (n, r), d in {(6, 2): 6, (5, 2): 6, (4, 2): 2}.items():
        W = witness_subspace(n, r)
        assert W.dim == d
        smp = RationalSampler(f"w{n}{r}")
        for _ in range(10):
            assert to_sympy(W.sample(smp.vector(d))).rank() == 2 * r
    with pytest.raises(ValueError):
        witness_subspace(3, 2)
    with pytest.raises(ValueError):
        WitnessParams(4, 0)
    assert [WitnessParams(n, 2).regime for n in (4, 5, 6)] == ["tight", "odd", "wide"]


@pytest.mark.parametrize("n", range(2, 11))
def test_witness_dimension_matches_formula(n):
    for r in range(1, n // 2 + 1):
        # independent count: 2r x (n - 2r) corner with its even rows (wide),
        # all rows (odd), plus two free entries per upper block pair
        corner = r * (n - 2 * r) if n >= 2 * r + 2 else 2 * r * (n - 2 * r)
        assert witness_subspace(n, r).dim == corner + r * (r - 1) == max_dim_antisym(n, 2 * r)


def test_max_dim_examples():
    assert max_dim_antisym(6, 4) == 6
    assert max_dim_antisym(4, 4) == 2
    assert max_dim_antisym(5, 4) == 6
    with pytest.raises(ValueError):
        max_dim_antisym(6, 3)
    with pytest.raises(ValueError):
        max_dim_antisym(4, 6)


def test_ref_formulas():
    assert ref_formulas("a_sym_upper", n=5, r=3) == 4
    for r in range(0, 6):
        assert ref_formulas("a_rect", m=r, n=r, r=r) == r * (r - 1) // 2
        assert a_rect(r, r + 2, 0) == 0
    with pytest.raises(ValueError):
        ref_formulas("a_rect", m=2, n=3, r=4)
    with pytest.raises(ValueError):
        ref_formulas("nope")


def test_build_U():
    assert build_U(2).dim == 4
    assert build_U(1).dim == 1
    assert build_U(3, 8).dim == 9 and build_U(3, 8).shape == (8, 8)


def test_build_Z_and_form():
    Z = build_Z(1, 2, 1)
    assert len(Z) == 2
    assert [quadratic_form_defpos(C, 1, 2) for C in Z] == [1, 1]
    assert quadratic_form_defpos(MatrixQ.zeros(2, 2), 1, 2) == 0
    C = MatrixQ([[0, 1], [1, 0]])
    assert quadratic_form_defpos(C, 1, 2) == 1
    with pytest.raises(ValueError):
        build_Z(1, 1, 2)
    smp = RationalSampler("Z")
    for r, (j1, j2) in [(1, (1, 2)), (2, (2, 1)), (3, (1, 3))]:
        Z = build_Z(j1, j2, r)
        for _ in range(200 // 3):
            coeffs = [smp.nonzero() for _ in Z]
            C = Z[0] * coeffs[0]
            for c, Zi in zip(coeffs[1:], Z[1:]):
                C = C + Zi * c
            assert quadratic_form_defpos(C, j1, j2) > 0


def test_defpos_gram_matches_form_and_signature():
    smp = RationalSampler("gram")
    for r in (1, 2, 3):
        G = defpos_gram(r)
        assert symmetric_signature(G) == (2 * r, 2 * r)
        for _ in range(20):
            C = MatrixQ([smp.vector(2) for _ in range(2 * r)])
            x = [C[i, 0] for i in range(2 * r)] + [C[i, 1] for i in range(2 * r)]
            quad = sum(G[a, b] * x[a] * x[b] for a in range(4 * r) for b in range(4 * r))
            assert quad == quadratic_form_defpos(C, 1, 2)


def test_embed_K():
    C = build_Z(1, 2, 1, 4)[0]
    K = embed_K(C)
    assert K.is_skew() and K.shape == (4, 4)
    assert K.block(0, 2, 2, 4) == C


def test_identity_ss_examples():
    chk = identity_ss_check([0], {}, 0)
    assert chk.lhs == chk.rhs == MatrixQ.identity(2)
    chk = identity_ss_check([1], {}, 1)
    assert chk.lhs == chk.rhs == MatrixQ.identity(2) * 2
    with pytest.raises(ValueError):
        identity_ss_check([1, 1], {(1, 2): pinco(1, 2)}, 1)


def test_identity_ss_random():
    smp = RationalSampler("ss")
    for t in range(100):
        r = 1 + t % 4
        ls = smp.vector(r)
        blocks = random_blocks(smp, r)
        s = smp.nonzero()
        chk = identity_ss_check(ls, blocks, s)
        assert chk.holds
        # oracle: direct multiplication, then (lhs - I)/s must be symmetric
        Jb = build_Jbar(2 * r)
        lhs = (Jb * -1) @ (Jb + (build_T(ls) + build_R(blocks, r)) * s)
        assert lhs == chk.lhs
        A = (lhs - MatrixQ.identity(2 * r)) * (1 / s)
        assert A == A.T


def test_nonzero_U_directions_drop_rank():
    smp = RationalSampler("Udrop")
    for t in range(50):
        r = 1 + t % 3
        U = build_U(r)
        u = U.sample(smp.vector(U.dim))
        if u.is_zero():
            continue
        drops, interval = line_rank_drop(build_Jbar(2 * r), u)
        assert drops, (r, u)


def test_bound_ledger():
    led = bound_ledger(6, 2)
    assert (led["dim_P"], led["dim_U"], led["dim_Z"], led["bound"]) == (14, 4, 4, 6)
    assert bound_ledger(8, 2)["bound"] == 10
    for r in range(1, 6):
        assert bound_ledger(2 * r + 2, r)["bound"] == r * (r + 1)
    with pytest.raises(ValueError):
        bound_ledger(5, 2)


def test_witness_linear_part_is_in_lower_block_complement():
    # after the base is Jbar + 0, every direction has zero lower-right block
    for n, r in [(6, 2), (7, 2), (8, 3)]:
        W = witness_subspace(n, r)
        assert W.base == direct_sum(build_Jbar(2 * r), MatrixQ.zeros(n - 2 * r))
        for B in W.basis:
            assert B.block(2 * r, n, 2 * r, n).is_zero()
