"""Dense exact matrices over the rationals.

Indices passed to :func:`submatrix` are 1-based to match the usual
mathematical notation; everything else indexes from 0 internally.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .exact_arith import MultiPoly, UniPoly, format_rational, parse_rational, rat


class MatrixQ:
    """Immutable rows x cols matrix of Fractions."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        grid = tuple(tuple(rat(x) for x in row) for row in entries)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        if any(len(row) != cols for row in grid):
            raise ValueError("ragged matrix rows")
        self.rows = len(grid)
        self.cols = cols
        self.entries = grid

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "MatrixQ":
        cols = rows if cols is None else cols
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "MatrixQ":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def diag(cls, values: Sequence) -> "MatrixQ":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_function(cls, rows: int, cols: int, f) -> "MatrixQ":
        return cls([[f(i, j) for j in range(cols)] for i in range(rows)], cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def tolist(self) -> list[list[Fraction]]:
        return [list(row) for row in self.entries]

    def __eq__(self, other):
        if not isinstance(other, MatrixQ):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"MatrixQ({[[format_rational(x) for x in row] for row in self.entries]})"

    def __str__(self):
        return pretty(self)

    def _check_shape(self, other: "MatrixQ"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "MatrixQ") -> "MatrixQ":
        self._check_shape(other)
        return MatrixQ(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], self.cols
        )

    def __sub__(self, other: "MatrixQ") -> "MatrixQ":
        self._check_shape(other)
        return MatrixQ(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)], self.cols
        )

    def __neg__(self) -> "MatrixQ":
        return MatrixQ([[-a for a in row] for row in self.entries], self.cols)

    def __mul__(self, c) -> "MatrixQ":
        c = rat(c)
        return MatrixQ([[a * c for a in row] for row in self.entries], self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other: "MatrixQ") -> "MatrixQ":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries))
        return MatrixQ(
            [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in self.entries],
            other.cols,
        )

    @property
    def T(self) -> "MatrixQ":
        return MatrixQ(list(zip(*self.entries)) if self.rows else [], self.rows)

    def is_skew(self) -> bool:
        n = self.rows
        return self.is_square and all(
            self.entries[i][j] == -self.entries[j][i] for i in range(n) for j in range(i, n)
        )

    def is_symmetric(self) -> bool:
        n = self.rows
        return self.is_square and all(
            self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i + 1, n)
        )

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def vec(self) -> list[Fraction]:
        """Row-major flattening."""
        return [x for row in self.entries for x in row]

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "MatrixQ":
        """0-based half-open slice ``[r0:r1, c0:c1]``."""
        return MatrixQ([row[c0:c1] for row in self.entries[r0:r1]], c1 - c0)

    def congruence(self, Q: "MatrixQ") -> "MatrixQ":
        """``Q^T A Q``."""
        return Q.T @ self @ Q

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[format_rational(x) for x in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MatrixQ":
        entries = [[parse_rational(str(x)) for x in row] for row in data["entries"]]
        m = cls(entries, data["cols"]) if entries else cls.zeros(data["rows"], data["cols"])
        if m.shape != (data["rows"], data["cols"]):
            raise ValueError("declared shape does not match entries")
        return m


def pretty(A: MatrixQ) -> str:
    cells = [[format_rational(x) for x in row] for row in A.entries]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def direct_sum(*blocks: MatrixQ) -> MatrixQ:
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    out = [[Fraction(0)] * m for _ in range(n)]
    r = c = 0
    for b in blocks:
        for i, row in enumerate(b.entries):
            out[r + i][c : c + b.cols] = row
        r += b.rows
        c += b.cols
    return MatrixQ(out, m)


def load_matrix(path: str, require: str | None = None) -> MatrixQ:
    with open(path) as fh:
        A = MatrixQ.from_json(json.load(fh))
    if require == "skew" and not A.is_skew():
        raise ValueError(f"{path}: matrix is not antisymmetric")
    if require == "symmetric" and not A.is_symmetric():
        raise ValueError(f"{path}: matrix is not symmetric")
    return A


# ---------------------------------------------------------------------------
# elimination kernels


def _integer_rows(grid: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    """Scale each row to integers; returns the rows and the product of the scale factors."""
    out = []
    scale = 1
    for row in grid:
        den = 1
        for x in row:
            q = x.denominator
            if q != 1:
                den = den * q // gcd(den, q)
        out.append([x.numerator * (den // x.denominator) for x in row])
        scale *= den
    return out, scale


def _bareiss(grid: list[list[int]]) -> tuple[int, int, int]:
    """In-place fraction-free elimination on an integer grid.

    Pivot: first nonzero entry scanning down the current column, columns left
    to right.  Returns ``(rank, last pivot, row swap count)``; for a square
    full-rank input the last pivot, signed by the swap parity, is the
    determinant.
    """
    nrows = len(grid)
    ncols = len(grid[0]) if nrows else 0
    prev = 1
    rank = 0
    swaps = 0
    for c in range(ncols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if grid[i][c]), None)
        if piv is None:
            continue
        if piv != rank:
            grid[rank], grid[piv] = grid[piv], grid[rank]
            swaps += 1
        prow = grid[rank]
        p = prow[c]
        for i in range(rank + 1, nrows):
            gi = grid[i]
            f = gi[c]
            if f:
                for j in range(c + 1, ncols):
                    gi[j] = (p * gi[j] - f * prow[j]) // prev
            elif p != prev:
                for j in range(c + 1, ncols):
                    gi[j] = (p * gi[j]) // prev
            gi[c] = 0
        prev = p
        rank += 1
    return rank, prev, swaps


def rank(A: MatrixQ) -> int:
    """Exact rank over Q by fraction-free (Bareiss) elimination."""
    if A.rows == 0 or A.cols == 0:
        return 0
    return _bareiss(_integer_rows(A.entries)[0])[0]


def det(A: MatrixQ) -> Fraction:
    if not A.is_square:
        raise ValueError(f"determinant of non-square {A.shape} matrix")
    n = A.rows
    if n == 0:
        return Fraction(1)
    grid, scale = _integer_rows(A.entries)
    r, last, swaps = _bareiss(grid)
    if r < n:
        return Fraction(0)
    return Fraction(-last if swaps % 2 else last, scale)


def vectors_rank(vectors: Sequence[Sequence]) -> int:
    vectors = [[rat(x) for x in v] for v in vectors]
    if not vectors or not vectors[0]:
        return 0
    return _bareiss(_integer_rows(vectors)[0])[0]


def inverse(A: MatrixQ) -> MatrixQ:
    if not A.is_square:
        raise ValueError("inverse of non-square matrix")
    n = A.rows
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A.entries)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv_p = 1 / aug[c][c]
        aug[c] = [x * inv_p for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return MatrixQ([row[n:] for row in aug], n)


def submatrix(A: MatrixQ, row_list: Sequence[int], col_list: Sequence[int]) -> MatrixQ:
    """Rows ``row_list`` and columns ``col_list`` of ``A``, both 1-based."""
    for i in row_list:
        if not 1 <= i <= A.rows:
            raise IndexError(f"row index {i} out of range 1..{A.rows}")
    for j in col_list:
        if not 1 <= j <= A.cols:
            raise IndexError(f"column index {j} out of range 1..{A.cols}")
    return MatrixQ([[A.entries[i - 1][j - 1] for j in col_list] for i in row_list], len(col_list))


# ---------------------------------------------------------------------------
# skew matrices


def pfaffian(A: MatrixQ) -> Fraction:
    """Pfaffian by expansion along the first row; ``Pf(Jbar) = 1``."""
    if not A.is_skew():
        raise ValueError("pfaffian requires an antisymmetric matrix")
    if A.rows % 2:
        return Fraction(0)
    memo: dict[tuple[int, ...], Fraction] = {}

    def pf(idx: tuple[int, ...]) -> Fraction:
        if not idx:
            return Fraction(1)
        if idx in memo:
            return memo[idx]
        first, rest = idx[0], idx[1:]
        total = Fraction(0)
        for k, j in enumerate(rest):
            a = A.entries[first][j]
            if a:
                sub = rest[:k] + rest[k + 1 :]
                term = a * pf(sub)
                total += -term if k % 2 else term
        memo[idx] = total
        return total

    return pf(tuple(range(A.rows)))


def skew_normal_form(M: MatrixQ) -> tuple[MatrixQ, int]:
    """Invertible ``Q`` and ``k`` with ``Q^T M Q = Jbar_{2k} (+) 0``.

    Symplectic Gram-Schmidt: repeatedly take the first pair of remaining
    basis vectors with nonzero pairing, normalise it to a hyperbolic pair and
    project it out of the others.
    """
    if not M.is_skew():
        raise ValueError("skew_normal_form requires an antisymmetric matrix")
    n = M.rows
    G = M.entries

    def omega(x, y):
        return sum((x[i] * G[i][j] * y[j] for i in range(n) if x[i] for j in range(n) if y[j]), Fraction(0))

    remaining = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    pairs: list[list[Fraction]] = []
    while True:
        found = None
        for a in range(len(remaining)):
            for b in range(a + 1, len(remaining)):
                w = omega(remaining[a], remaining[b])
                if w:
                    found = (a, b, w)
                    break
            if found:
                break
        if not found:
            break
        a, b, w = found
        u = remaining[a]
        v = [x / w for x in remaining[b]]
        rest = []
        for idx, x in enumerate(remaining):
            if idx in (a, b):
                continue
            xv, xu = omega(x, v), omega(x, u)
            rest.append([xi - xv * ui + xu * vi for xi, ui, vi in zip(x, u, v)])
        pairs += [u, v]
        remaining = rest
    cols = pairs + remaining
    Q = MatrixQ([[cols[j][i] for j in range(n)] for i in range(n)], n)
    return Q, len(pairs) // 2


def symmetric_signature(A: MatrixQ) -> tuple[int, int]:
    """Inertia ``(positive, negative)`` by congruence diagonalisation."""
    if not A.is_symmetric():
        raise ValueError("symmetric_signature requires a symmetric matrix")
    n = A.rows
    a = A.tolist()
    pos = neg = 0
    for p in range(n):
        if a[p][p] == 0:
            q = next((q for q in range(p + 1, n) if a[q][q] != 0), None)
            if q is not None:
                a[p], a[q] = a[q], a[p]
                for row in a:
                    row[p], row[q] = row[q], row[p]
            else:
                q = next((q for q in range(p + 1, n) if a[p][q] != 0), None)
                if q is None:
                    continue
                # e_p <- e_p + e_q puts 2*a[p][q] on the diagonal
                a[p] = [x + y for x, y in zip(a[p], a[q])]
                for row in a:
                    row[p] += row[q]
        d = a[p][p]
        # Schur complement of the pivot keeps the trailing block symmetric
        for i in range(p + 1, n):
            f = a[i][p] / d
            if f:
                for j in range(p + 1, n):
                    a[i][j] -= f * a[p][j]
        for i in range(p + 1, n):
            a[p][i] = a[i][p] = Fraction(0)
        if d > 0:
            pos += 1
        else:
            neg += 1
    return pos, neg


# ---------------------------------------------------------------------------
# polynomial matrices


def poly_det(P: Sequence[Sequence]):
    """Exact determinant of a square grid of UniPoly or MultiPoly entries."""
    n = len(P)
    if any(len(row) != n for row in P):
        raise ValueError("poly_det requires a square matrix")
    if n == 0:
        return UniPoly([1])
    sample = P[0][0]
    if isinstance(sample, MultiPoly):
        return _multi_det(P, list(range(n)), list(range(n)), {})
    return _uni_det([[e if isinstance(e, UniPoly) else UniPoly([e]) for e in row] for row in P])


def _uni_det(grid: list[list[UniPoly]]) -> UniPoly:
    n = len(grid)
    grid = [list(row) for row in grid]
    prev = UniPoly([1])
    sign = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if not grid[i][k].is_zero()), None)
        if piv is None:
            return UniPoly()
        if piv != k:
            grid[k], grid[piv] = grid[piv], grid[k]
            sign = -sign
        p = grid[k][k]
        for i in range(k + 1, n):
            f = grid[i][k]
            for j in range(k + 1, n):
                grid[i][j] = (p * grid[i][j] - f * grid[k][j]).exact_div(prev)
            grid[i][k] = UniPoly()
        prev = p
    return grid[n - 1][n - 1] * sign


def _multi_det(P, rows: list[int], cols: list[int], memo: dict) -> MultiPoly:
    """Laplace expansion along ``rows[0]``; memo keyed by (remaining rows, column set)."""
    key = (tuple(rows), tuple(cols))
    hit = memo.get(key)
    if hit is not None:
        return hit
    nvars = P[0][0].nvars
    if len(rows) == 1:
        out = P[rows[0]][cols[0]]
    else:
        out = MultiPoly(nvars)
        r, rest = rows[0], rows[1:]
        for k, c in enumerate(cols):
            e = P[r][c]
            if e.is_zero():
                continue
            minor = _multi_det(P, rest, cols[:k] + cols[k + 1 :], memo)
            if minor.is_zero():
                continue
            term = e * minor
            out = out - term if k % 2 else out + term
    memo[key] = out
    return out


def poly_minors(P: Sequence[Sequence[MultiPoly]], k: int, principal: bool = False):
    """Yield ``(row_idx, col_idx, det)`` for every k x k minor (0-based index tuples).

    Column subsets for one row subset share a memo table, so the Laplace
    subproblems are computed once per row set.
    """
    nrows, ncols = len(P), len(P[0])
    for rows in combinations(range(nrows), k):
        memo: dict = {}
        col_sets = [rows] if principal else combinations(range(ncols), k)
        for cols in col_sets:
            yield rows, cols, _multi_det(P, list(rows), list(cols), memo)


def evaluate_poly_matrix(P: Sequence[Sequence], point) -> MatrixQ:
    return MatrixQ([[e(point) for e in row] for row in P])


def nullspace(A: MatrixQ) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}`` from the reduced row echelon form."""
    m, n = A.shape
    a = A.tolist()
    pivots = []
    row = 0
    for c in range(n):
        piv = next((i for i in range(row, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv_p = 1 / a[row][c]
        a[row] = [x * inv_p for x in a[row]]
        for i in range(m):
            if i != row and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        pivots.append(c)
        row += 1
        if row == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * n
        x[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -a[i][fcol]
        basis.append(x)
    return basis
