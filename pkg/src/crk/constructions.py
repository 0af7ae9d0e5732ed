"""Named matrix families and the maximal constant-rank witnesses.

All indices in this module are 1-based.  Block grids for ``R``/``X`` are
dicts mapping ``(i, j)`` with ``i < j`` to 2x2 matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from .exact_arith import rat
from .matrix_core import MatrixQ, direct_sum
from .subspace import AffineMatrixSubspace

J = MatrixQ([[0, 1], [-1, 0]])


def build_J() -> MatrixQ:
    return J


def build_Jbar(size: int) -> MatrixQ:
    """Block diagonal ``J (+) ... (+) J`` of the given even size."""
    if size < 0 or size % 2:
        raise ValueError(f"Jbar needs a nonnegative even size, got {size}")
    return direct_sum(*([J] * (size // 2))) if size else MatrixQ.zeros(0)


def build_E(n: int, i: int, j: int) -> MatrixQ:
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"E({i},{j}) out of range for n={n}")
    return MatrixQ.from_function(n, n, lambda x, y: int((x, y) == (i - 1, j - 1)))


def build_T(ls: Sequence) -> MatrixQ:
    """Block diagonal ``l_1 J (+) ... (+) l_r J``."""
    if not ls:
        raise ValueError("T needs at least one parameter")
    return direct_sum(*(J * rat(l) for l in ls))


def _skew_unit(n: int, i: int, j: int) -> MatrixQ:
    """``E_{i,j} - E_{j,i}``."""
    return MatrixQ.from_function(n, n, lambda x, y: int((x, y) == (i - 1, j - 1)) - int((x, y) == (j - 1, i - 1)))


def _check_grid(blocks: Mapping, m: int):
    expected = {(i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1)}
    if set(blocks) != expected:
        missing = sorted(expected - set(blocks))
        extra = sorted(set(blocks) - expected)
        raise ValueError(f"incomplete block grid for m={m}: missing {missing}, unexpected {extra}")
    for key, A in blocks.items():
        if A.shape != (2, 2):
            raise ValueError(f"block {key} is not 2x2")


def _assemble(blocks: Mapping, m: int, lower_sign: int) -> MatrixQ:
    _check_grid(blocks, m)
    out = [[Fraction(0)] * (2 * m) for _ in range(2 * m)]
    for (i, j), A in blocks.items():
        for a in range(2):
            for b in range(2):
                out[2 * i - 2 + a][2 * j - 2 + b] = A[a, b]
                out[2 * j - 2 + b][2 * i - 2 + a] = lower_sign * A[a, b]
    return MatrixQ(out, 2 * m)


def build_R(blocks: Mapping, m: int) -> MatrixQ:
    """Antisymmetric: ``A_{i,j}`` above the diagonal, ``-A_{i,j}^T`` below."""
    return _assemble(blocks, m, -1)


def build_X(blocks: Mapping, m: int) -> MatrixQ:
    """Symmetric: ``A_{i,j}`` above the diagonal, ``A_{i,j}^T`` below."""
    return _assemble(blocks, m, 1)


def _require_2x2(A: MatrixQ):
    if A.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {A.shape}")


def is_pinco(A: MatrixQ) -> bool:
    """``[[a, b], [b, -a]]``."""
    _require_2x2(A)
    return A[1, 0] == A[0, 1] and A[1, 1] == -A[0, 0]


def is_antipinco(A: MatrixQ) -> bool:
    """``[[a, b], [-b, a]]``."""
    _require_2x2(A)
    return A[1, 0] == -A[0, 1] and A[1, 1] == A[0, 0]


def pinco(a, b) -> MatrixQ:
    return MatrixQ([[a, b], [b, -rat(a)]])


def antipinco(a, b) -> MatrixQ:
    return MatrixQ([[a, b], [-rat(b), a]])


def pinco_tilde(P: MatrixQ) -> MatrixQ:
    if not is_pinco(P):
        raise ValueError("pinco_tilde needs a pinco matrix")
    return J @ P


# ---------------------------------------------------------------------------
# witnesses and formulas


@dataclass(frozen=True)
class WitnessParams:
    n: int
    r: int

    def __post_init__(self):
        if self.r < 1 or self.n < 2 * self.r:
            raise ValueError(f"need n >= 2r >= 2, got n={self.n}, r={self.r}")

    @property
    def regime(self) -> str:
        if self.n == 2 * self.r:
            return "tight"
        if self.n == 2 * self.r + 1:
            return "odd"
        return "wide"


def witness_subspace(n: int, r: int) -> AffineMatrixSubspace:
    """Maximal constant-rank-2r affine subspace of n x n antisymmetric matrices.

    Base point ``Jbar_{2r} (+) 0``.  Free parameters, in basis order:

    * entries of the 2r x (n-2r) corner block ``C`` in column-major order,
      restricted to odd rows when n >= 2r+2 and all rows when n = 2r+1
      (no corner block when n = 2r);
    * the first row of each upper block ``A_{i,j}`` of the leading 2r x 2r
      part, blocks in lexicographic order.
    """
    p = WitnessParams(n, r)
    base = direct_sum(build_Jbar(2 * r), MatrixQ.zeros(n - 2 * r))
    basis = []
    if p.regime == "wide":
        rows = range(1, 2 * r + 1, 2)
    elif p.regime == "odd":
        rows = range(1, 2 * r + 1)
    else:
        rows = range(0)
    for j in range(1, n - 2 * r + 1):
        for i in rows:
            basis.append(_skew_unit(n, i, 2 * r + j))
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            for k in (1, 2):
                basis.append(_skew_unit(n, 2 * i - 1, 2 * j - 2 + k))
    return AffineMatrixSubspace(base, tuple(basis), "antisymmetric")


def max_dim_antisym(n: int, rank2r: int) -> int:
    """Largest dimension of an affine space of n x n antisymmetric matrices of constant rank ``rank2r``."""
    if rank2r % 2:
        raise ValueError(f"antisymmetric matrices have even rank; got {rank2r}")
    if not 2 <= rank2r <= n:
        raise ValueError(f"need 2 <= rank <= n, got rank={rank2r}, n={n}")
    r = rank2r // 2
    if n == 2 * r:
        return r * (r - 1)
    if n == 2 * r + 1:
        return r * (r + 1)
    return (n - r - 1) * r


def a_sym_upper(n: int, r: int) -> int:
    """Upper bound for constant-rank affine spaces of real symmetric matrices."""
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n, got r={r}, n={n}")
    h = r // 2
    return h * (n - h)


def a_rect(m: int, n: int, r: int) -> int:
    """Maximal dimension for constant-rank affine spaces of real m x n matrices."""
    if not 0 <= r <= m <= n:
        raise ValueError(f"need 0 <= r <= m <= n, got m={m}, n={n}, r={r}")
    return r * n - r * (r + 1) // 2


def ref_formulas(kind: str, **args) -> int:
    table = {"a_sym_upper": a_sym_upper, "a_rect": a_rect}
    if kind not in table:
        raise ValueError(f"unknown formula {kind!r}; choose from {sorted(table)}")
    return table[kind](**args)


def bound_ledger(n: int, r: int) -> dict:
    """Dimension count of the upper-bound argument for n >= 2r + 2."""
    if r < 1 or n < 2 * r + 2:
        raise ValueError(f"bound ledger needs n >= 2r + 2, got n={n}, r={r}")
    dim_P = r * (2 * r - 1) + 2 * r * (n - 2 * r)
    dim_U = r * r
    dim_Z = r * (n - 2 * r)
    bound = dim_P - dim_U - dim_Z
    assert bound == r * (n - r - 1)
    return {"n": n, "r": r, "dim_P": dim_P, "dim_U": dim_U, "dim_Z": dim_Z, "bound": bound}


# ---------------------------------------------------------------------------
# upper-bound machinery


def build_U(r: int, n: int | None = None) -> AffineMatrixSubspace:
    """Linear space ``T(l) + R(antipinco blocks)`` in the leading 2r x 2r corner; dim r^2."""
    if r < 1:
        raise ValueError("r must be positive")
    n = 2 * r if n is None else n
    if n < 2 * r:
        raise ValueError("n must be at least 2r")
    pad = MatrixQ.zeros(n - 2 * r)
    zero_blocks = {(i, j): MatrixQ.zeros(2) for i in range(1, r + 1) for j in range(i + 1, r + 1)}
    basis = []
    for i in range(r):
        ls = [int(k == i) for k in range(r)]
        basis.append(direct_sum(build_T(ls), pad))
    for key in sorted(zero_blocks):
        for a, b in ((1, 0), (0, 1)):
            blocks = dict(zero_blocks)
            blocks[key] = antipinco(a, b)
            basis.append(direct_sum(build_R(blocks, r), pad))
    return AffineMatrixSubspace(MatrixQ.zeros(n), tuple(basis), "antisymmetric")


def quadratic_form_defpos(C: MatrixQ, j1: int, j2: int) -> Fraction:
    """``sum_i c[2i-1, j2] c[2i, j1] - c[2i-1, j1] c[2i, j2]`` (1-based columns)."""
    if not (1 <= j1 <= C.cols and 1 <= j2 <= C.cols):
        raise IndexError("column index out of range")
    if C.rows % 2:
        raise ValueError("C must have an even number of rows")
    a, b = j1 - 1, j2 - 1
    total = Fraction(0)
    for i in range(0, C.rows, 2):
        total += C[i, b] * C[i + 1, a] - C[i, a] * C[i + 1, b]
    return total


def defpos_gram(r: int) -> MatrixQ:
    """Gram matrix of the form on coordinates ``(c[1..2r, j1], c[1..2r, j2])``."""
    G = [[Fraction(0)] * (4 * r) for _ in range(4 * r)]
    half = Fraction(1, 2)

    def add(x, y, c):
        G[x][y] += c * half
        G[y][x] += c * half

    for i in range(r):
        odd, even = 2 * i, 2 * i + 1
        add(2 * r + odd, even, 1)  # c[2i-1, j2] c[2i, j1]
        add(odd, 2 * r + even, -1)  # c[2i-1, j1] c[2i, j2]
    return MatrixQ(G, 4 * r)


def build_Z(j1: int, j2: int, r: int, n: int | None = None) -> list[MatrixQ]:
    """2r corner blocks ``C`` spanning a subspace of ``K_{j1,j2}`` where the form is positive definite.

    Per pair of rows (2i-1, 2i) the form reads ``z*y - x*w`` in
    ``(x, y, z, w) = (c[2i-1,j1], c[2i,j1], c[2i-1,j2], c[2i,j2])``; the vectors
    ``(0, 1, 1, 0)`` and ``(1, 0, 0, -1)`` make it ``a^2 + b^2``.
    """
    if j1 == j2:
        raise ValueError("Z needs two distinct columns")
    if r < 1 or j1 < 1 or j2 < 1:
        raise ValueError("indices must be positive")
    width = max(j1, j2) if n is None else n - 2 * r
    if width < max(j1, j2):
        raise IndexError("column index exceeds n - 2r")
    out = []
    for i in range(r):
        for x, y, z, w in ((0, 1, 1, 0), (1, 0, 0, -1)):
            C = [[0] * width for _ in range(2 * r)]
            C[2 * i][j1 - 1], C[2 * i + 1][j1 - 1] = x, y
            C[2 * i][j2 - 1], C[2 * i + 1][j2 - 1] = z, w
            out.append(MatrixQ(C, width))
    return out


def embed_K(C: MatrixQ) -> MatrixQ:
    """``[[0, C], [-C^T, 0]]``."""
    k, w = C.shape
    n = k + w
    top = [[Fraction(0)] * k + list(row) for row in C.entries]
    bottom = [[-C[i, j] for i in range(k)] + [Fraction(0)] * w for j in range(w)]
    return MatrixQ(top + bottom, n)


class SSCheck(NamedTuple):
    lhs: MatrixQ
    rhs: MatrixQ
    A: MatrixQ
    symmetric: bool

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs and self.symmetric


def identity_ss_check(ls: Sequence, blocks: Mapping, s) -> SSCheck:
    """Both sides of ``-Jbar (Jbar + s [T(l) + R(A)]) = I + s A_sym`` with antipinco blocks.

    The right-hand side is assembled independently as
    ``diag(l_1, l_1, ..., l_r, l_r) + X(-J A_{i,j})``.
    """
    r = len(ls)
    s = rat(s)
    for key, B in blocks.items():
        if not is_antipinco(B):
            raise ValueError(f"block {key} is not antipinco")
    Jb = build_Jbar(2 * r)
    lhs = -Jb @ (Jb + (build_T(ls) + build_R(blocks, r)) * s)
    diag = MatrixQ.diag([rat(l) for l in ls for _ in range(2)])
    A = diag + build_X({k: -(J @ B) for k, B in blocks.items()}, r)
    rhs = MatrixQ.identity(2 * r) + A * s
    return SSCheck(lhs, rhs, A, A.is_symmetric())
