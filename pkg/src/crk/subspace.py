"""Affine subspaces of matrix space and constant-rank certification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .exact_arith import (
    MultiPoly,
    RationalSampler,
    UniPoly,
    format_rational,
    rat,
    rational_root_in,
    sturm_real_roots,
)
from .matrix_core import MatrixQ, poly_det, poly_minors, rank, vectors_rank

AMBIENTS = ("general", "symmetric", "antisymmetric")

SYMBOLIC_MAX_N = 8
SYMBOLIC_MAX_DIM = 12
SAMPLED_POINTS = 200
GRID_POINTS = 625


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class AffineMatrixSubspace:
    """``base + span(basis)`` inside the matrices of one ambient type."""

    base: MatrixQ
    basis: tuple[MatrixQ, ...] = ()
    ambient: str = "antisymmetric"

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if self.ambient not in AMBIENTS:
            raise ValueError(f"unknown ambient {self.ambient!r}")
        check = {"antisymmetric": MatrixQ.is_skew, "symmetric": MatrixQ.is_symmetric}.get(self.ambient)
        for B in (self.base,) + self.basis:
            if B.shape != self.base.shape:
                raise ValueError("basis matrices must share the base shape")
            if check is not None and not check(B):
                raise ValueError(f"matrix is not {self.ambient}")
        if self.basis and vectors_rank([B.vec() for B in self.basis]) != len(self.basis):
            raise ValueError("basis matrices are linearly dependent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def shape(self) -> tuple[int, int]:
        return self.base.shape

    def sample(self, coords: Sequence) -> MatrixQ:
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(coords)}")
        grid = self.base.tolist()
        for t, B in zip(coords, self.basis):
            t = rat(t)
            if not t:
                continue
            for i, row in enumerate(B.entries):
                for j, x in enumerate(row):
                    if x:
                        grid[i][j] += t * x
        return MatrixQ(grid, self.base.cols)

    def extend(self, D: MatrixQ) -> "AffineMatrixSubspace":
        return AffineMatrixSubspace(self.base, self.basis + (D,), self.ambient)

    def poly_matrix(self) -> list[list[MultiPoly]]:
        """``base + sum t_i B_i`` as a grid of linear MultiPolys."""
        return [
            [
                MultiPoly.linear(self.base.entries[i][j], [B.entries[i][j] for B in self.basis])
                for j in range(self.base.cols)
            ]
            for i in range(self.base.rows)
        ]

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "base": self.base.to_json(),
            "basis": [B.to_json() for B in self.basis],
        }

    @classmethod
    def from_json(cls, data: dict) -> "AffineMatrixSubspace":
        return cls(
            MatrixQ.from_json(data["base"]),
            tuple(MatrixQ.from_json(b) for b in data["basis"]),
            data.get("ambient", "antisymmetric"),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


def dim(S: AffineMatrixSubspace) -> int:
    return S.dim


def sample(S: AffineMatrixSubspace, coords: Sequence) -> MatrixQ:
    return S.sample(coords)


def congruence_transform(S: AffineMatrixSubspace, Q: MatrixQ) -> AffineMatrixSubspace:
    if not Q.is_square or Q.rows != S.base.rows or S.base.rows != S.base.cols:
        raise ValueError("congruence needs a square Q matching the subspace size")
    if rank(Q) != Q.rows:
        raise ValueError("congruence matrix is singular")
    Qt = Q.T
    return AffineMatrixSubspace(Qt @ S.base @ Q, tuple(Qt @ B @ Q for B in S.basis), S.ambient)


def coordinate_projection(vectors: Sequence[Sequence], index_set: Sequence[int]) -> int:
    """Dimension of the span of ``vectors`` after keeping coordinates ``index_set`` (0-based)."""
    if not vectors:
        return 0
    n = len(vectors[0])
    for k in index_set:
        if not 0 <= k < n:
            raise IndexError(f"coordinate {k} out of range")
    if not index_set:
        return 0
    return vectors_rank([[v[k] for k in index_set] for v in vectors])


# ---------------------------------------------------------------------------
# rank along lines


@dataclass
class LineDrop:
    """Certificate that the rank falls below a target somewhere on a line.

    ``polynomial`` vanishes exactly where every relevant minor vanishes; it has a
    real root in ``interval``.  ``root`` is set when that root is rational.
    """

    point: list[Fraction]
    direction: list[Fraction]
    polynomial: UniPoly
    interval: tuple[Fraction, Fraction]
    root: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "point": [format_rational(x) for x in self.point],
            "direction": [format_rational(x) for x in self.direction],
            "polynomial": self.polynomial.to_json(),
            "interval": [format_rational(x) for x in self.interval],
            "root": None if self.root is None else format_rational(self.root),
        }


def line_rank_drop(M0: MatrixQ, D: MatrixQ) -> tuple[bool, tuple[Fraction, Fraction] | None]:
    """Does ``M0 + s D`` become singular for some real ``s``?  ``M0`` must be invertible."""
    if not M0.is_square or M0.shape != D.shape:
        raise ValueError("line_rank_drop needs square matrices of equal size")
    p = poly_det([[UniPoly([a, b]) for a, b in zip(r0, r1)] for r0, r1 in zip(M0.entries, D.entries)])
    if p.coeff(0) == 0:
        raise ValueError("M0 must be invertible")
    count, intervals = sturm_real_roots(p)
    return (count > 0), (intervals[0] if count else None)


def _line_minor_gcd(M0: MatrixQ, D: MatrixQ, k: int, principal: bool) -> UniPoly:
    """gcd over all k x k minors of ``M0 + s D``; zero polynomial if all vanish identically."""
    grid = [[UniPoly([a, b]) for a, b in zip(r0, r1)] for r0, r1 in zip(M0.entries, D.entries)]
    g = UniPoly()
    for rows in combinations(range(M0.rows), k):
        col_sets = [rows] if principal else combinations(range(M0.cols), k)
        for cols in col_sets:
            m = poly_det([[grid[i][j] for j in cols] for i in rows])
            g = g.gcd(m) if not g.is_zero() else m.monic()
            if g.degree == 0:
                return g
    return g


def line_rank_below(S: AffineMatrixSubspace, point, direction, target: int) -> LineDrop | None:
    """Exact search for a real ``s`` with ``rank(S(point + s*direction)) < target``."""
    if target <= 0:
        return None
    M0 = S.sample(point)
    D = S.sample(direction) - S.base
    # for symmetric and antisymmetric matrices the rank is the size of the
    # largest nonsingular principal submatrix
    principal = S.ambient != "general"
    g = _line_minor_gcd(M0, D, target, principal)
    if g.is_zero():
        # every minor vanishes identically: the whole line is rank deficient
        return LineDrop(list(map(rat, point)), list(map(rat, direction)), g, (Fraction(0), Fraction(0)), Fraction(0))
    if g.degree == 0:
        return None
    count, intervals = sturm_real_roots(g)
    if not count:
        return None
    lo, hi = intervals[0]
    return LineDrop(list(map(rat, point)), list(map(rat, direction)), g, (lo, hi), rational_root_in(g, lo, hi))


# ---------------------------------------------------------------------------
# certification


@dataclass
class CertificationReport:
    mode: str
    verdict: str
    rank: int
    evidence: dict = field(default_factory=dict)

    @property
    def constant(self) -> bool:
        return self.verdict == "constant-rank"

    @property
    def refuted(self) -> bool:
        return self.verdict == "not-constant-rank"

    def to_json(self) -> dict:
        return {"mode": self.mode, "verdict": self.verdict, "rank": self.rank, "evidence": self.evidence}


def _point_json(point) -> list[str]:
    return [format_rational(x) for x in point]


def _counterexample(S, point, observed: int, target: int, mode: str, how: str) -> CertificationReport:
    return CertificationReport(
        mode,
        "not-constant-rank",
        target,
        {"kind": "point", "how": how, "point": _point_json(point), "observed_rank": observed},
    )


def _nonvanishing_point(poly: MultiPoly, sampler: RationalSampler) -> list[Fraction]:
    d = poly.nvars
    # try small integer points first so certificates stay readable
    for candidate in ([Fraction(0)] * d, [Fraction(1)] * d):
        if poly(candidate):
            return candidate
    while True:
        point = [Fraction(sampler.integer(-3, 3)) for _ in range(d)]
        if poly(point):
            return point


def _constant_in_span(polys: Sequence[MultiPoly]) -> tuple[bool, int | None]:
    """Is a nonzero constant a Q-linear combination of ``polys``?

    Returns ``(answer, index of a constant member)``; the index is set when a
    single polynomial already is a nonzero constant.
    """
    for idx, p in enumerate(polys):
        if p.is_constant() and not p.is_zero():
            return True, idx
    if not polys:
        return False, None
    one = (0,) * polys[0].nvars
    # sparse row echelon over monomials; pivot on the lexicographically largest monomial
    pivots: dict[tuple, dict] = {}

    def reduce(vec: dict) -> dict:
        vec = dict(vec)
        while vec:
            lead = max(vec)
            row = pivots.get(lead)
            if row is None:
                return vec
            f = vec[lead] / row[lead]
            for e, c in row.items():
                v = vec.get(e, 0) - f * c
                if v:
                    vec[e] = v
                else:
                    vec.pop(e, None)
        return vec

    for p in polys:
        v = reduce(p.terms)
        if v:
            pivots[max(v)] = v
    return not reduce({one: Fraction(1)}), None


def certify_constant_rank(
    S: AffineMatrixSubspace,
    r: int,
    mode: str = "symbolic",
    samples: int = SAMPLED_POINTS,
    seed=0,
    line_budget: int | None = None,
) -> CertificationReport:
    """Decide whether every matrix of ``S`` has rank exactly ``r``.

    ``sampled`` mode evaluates the rank at seeded random points and can only
    refute.  ``symbolic`` mode proves rank <= r everywhere by showing every
    (r+1)-minor of ``base + sum t_i B_i`` is the zero polynomial, and proves
    rank >= r everywhere by exhibiting a nonzero constant in the linear span of
    the r-minors.  When neither proof nor refutation is found the verdict is
    ``inconclusive``.
    """
    rows, cols = S.shape
    if not 0 <= r <= min(rows, cols):
        raise ValueError(f"rank {r} impossible for {rows}x{cols} matrices")
    if mode == "auto":
        mode = "symbolic" if rows <= SYMBOLIC_MAX_N and cols <= SYMBOLIC_MAX_N and S.dim <= SYMBOLIC_MAX_DIM else "sampled"
    sampler = RationalSampler(f"certify:{seed}")
    d = S.dim
    base_rank = rank(S.base)

    if mode == "sampled":
        if base_rank != r:
            return _counterexample(S, [Fraction(0)] * d, base_rank, r, mode, "base point")
        for _ in range(samples):
            point = sampler.vector(d)
            k = rank(S.sample(point))
            if k != r:
                return _counterexample(S, point, k, r, mode, "random sample")
        return CertificationReport(mode, "inconclusive", r, {"kind": "samples", "samples": samples + 1})

    if mode != "symbolic":
        raise ValueError(f"unknown certification mode {mode!r}")
    if max(rows, cols) > SYMBOLIC_MAX_N or d > SYMBOLIC_MAX_DIM:
        raise CapExceeded(
            f"symbolic certification is capped at n <= {SYMBOLIC_MAX_N}, dim <= {SYMBOLIC_MAX_DIM}; "
            f"got {rows}x{cols}, dim {d}. Use sampled mode."
        )
    zero = [Fraction(0)] * d
    if d == 0:
        if base_rank != r:
            return _counterexample(S, zero, base_rank, r, mode, "single point")
        return CertificationReport(mode, "constant-rank", r, {"kind": "single-point", "point": []})

    P = S.poly_matrix()
    if r + 1 <= min(rows, cols):
        for ri, ci, m in poly_minors(P, r + 1):
            if not m.is_zero():
                point = _nonvanishing_point(m, sampler)
                return _counterexample(S, point, rank(S.sample(point)), r, mode, "nonzero (r+1)-minor")
    if base_rank != r:
        return _counterexample(S, zero, base_rank, r, mode, "base point")
    if r == 0:
        return CertificationReport(mode, "constant-rank", r, {"kind": "proof", "lower": "trivial"})

    minors = [(ri, ci, m) for ri, ci, m in poly_minors(P, r)]
    ok, idx = _constant_in_span([m for _, _, m in minors])
    upper = f"all {r + 1}x{r + 1} minors vanish identically"
    if ok:
        evidence = {"kind": "proof", "upper": upper, "witness_point": _point_json(zero)}
        if idx is not None:
            ri, ci, m = minors[idx]
            evidence["lower"] = "constant nonzero minor"
            evidence["minor_rows"] = [i + 1 for i in ri]
            evidence["minor_cols"] = [j + 1 for j in ci]
            evidence["minor_value"] = format_rational(m.constant_term())
        else:
            evidence["lower"] = "nonzero constant in the span of the r x r minors"
        return CertificationReport(mode, "constant-rank", r, evidence)

    # no lower-bound proof: first scan small integer points (catches drops on
    # loci of codimension >= 2, which generic lines miss), then hunt for an
    # exact rank drop along lines
    if 5**d <= GRID_POINTS:
        grid = (list(map(Fraction, p)) for p in product(range(-2, 3), repeat=d))
    else:
        grid = ([Fraction(sampler.integer(-2, 2)) for _ in range(d)] for _ in range(GRID_POINTS))
    for point in grid:
        k = rank(S.sample(point))
        if k != r:
            return _counterexample(S, point, k, r, mode, "integer grid scan")
    unit = lambda i: [Fraction(int(k == i)) for k in range(d)]
    lines = [(zero, unit(i)) for i in range(d)]
    budget = 2 * d + 10 if line_budget is None else line_budget
    while len(lines) < budget:
        lines.append((sampler.vector(d), sampler.vector(d)))
    for point, direction in lines:
        if not any(direction):
            continue
        drop = line_rank_below(S, point, direction, r)
        if drop is not None:
            return CertificationReport(
                mode, "not-constant-rank", r, {"kind": "line", "how": "exact rank drop on a line", **drop.to_json()}
            )
    if d == 1:
        # the single line through the base covers all of S
        return CertificationReport(
            mode, "constant-rank", r, {"kind": "proof", "upper": upper, "lower": "no real common root of the r x r minors"}
        )
    return CertificationReport(mode, "inconclusive", r, {"kind": "no-proof", "upper": upper, "lines_tried": len(lines)})
