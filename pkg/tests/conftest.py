from fractions import Fraction
from itertools import permutations

import pytest
import sympy

from crk.exact_arith import RationalSampler
from crk.matrix_core import MatrixQ

ACCEPTANCE_LINES: list[str] = []


def leibniz_det(rows):
    """Determinant by the permutation expansion; independent of elimination."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i, p in enumerate(perm):
            term *= rows[i][p]
            if not term:
                break
        total += term
    return total


def to_sympy(A: MatrixQ) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in A.entries])


def random_skew(smp: RationalSampler, n: int) -> MatrixQ:
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = smp.rational()
            g[i][j], g[j][i] = x, -x
    return MatrixQ(g, n)


def random_low_rank(smp: RationalSampler, rows: int, cols: int, k: int) -> MatrixQ:
    if k == 0:
        return MatrixQ.zeros(rows, cols)
    A = MatrixQ([smp.vector(k) for _ in range(rows)], k)
    B = MatrixQ([smp.vector(cols) for _ in range(k)], cols)
    return A @ B


def random_invertible(smp: RationalSampler, n: int, lo: int = -2, hi: int = 2) -> MatrixQ:
    from crk.matrix_core import rank

    while True:
        Q = MatrixQ([[smp.integer(lo, hi) for _ in range(n)] for _ in range(n)], n)
        if rank(Q) == n:
            return Q


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion."""

    def record(number: int, description: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {description}" + (f" ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
