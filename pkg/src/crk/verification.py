"""Executable checks for the supporting lemmas and the extension falsifier.

Every randomized routine takes a ``seed`` and derives one RNG stream per
trial from ``(label, seed, trial index)``, so results do not depend on the
order trials run in.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .constructions import (
    WitnessParams,
    build_Jbar,
    build_U,
    witness_subspace,
)
from .exact_arith import RationalSampler, UniPoly, format_rational, rat
from .matrix_core import (
    MatrixQ,
    det,
    inverse,
    nullspace,
    poly_det,
    rank,
    skew_normal_form,
    vectors_rank,
)
from .subspace import (
    SYMBOLIC_MAX_DIM,
    SYMBOLIC_MAX_N,
    AffineMatrixSubspace,
    certify_constant_rank,
    congruence_transform,
    coordinate_projection,
    line_rank_below,
)


def trial_sampler(label: str, seed: int, index: int) -> RationalSampler:
    return RationalSampler(f"{label}:{seed}:{index}")


def _fmt(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, MatrixQ):
        return x.to_json()
    if isinstance(x, UniPoly):
        return x.to_json()
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    return x


@dataclass
class LemmaResult:
    lemma: str
    attempted: int = 0
    passed: int = 0
    failure: dict | None = None

    @property
    def ok(self) -> bool:
        return self.passed == self.attempted

    def record(self, ok: bool, payload: dict | None = None):
        self.attempted += 1
        if ok:
            self.passed += 1
        elif self.failure is None:
            self.failure = _fmt(payload or {})

    def merge(self, other: "LemmaResult") -> "LemmaResult":
        self.attempted += other.attempted
        self.passed += other.passed
        if self.failure is None:
            self.failure = other.failure
        return self

    def to_json(self) -> dict:
        return {"lemma": self.lemma, "attempted": self.attempted, "passed": self.passed, "failure": self.failure}


# ---------------------------------------------------------------------------
# bordered determinants


def _check_even(v: Sequence):
    if len(v) % 2 or not v:
        raise ValueError(f"expected a vector of positive even length, got {len(v)}")


def alternating_form(b: Sequence, c: Sequence) -> Fraction:
    """``c_2 b_1 - c_1 b_2 + c_4 b_3 - c_3 b_4 + ...``."""
    return sum((rat(c[i + 1]) * rat(b[i]) - rat(c[i]) * rat(b[i + 1]) for i in range(0, len(b), 2)), Fraction(0))


def bordered(M: MatrixQ, b: Sequence, c: Sequence, corner=0) -> MatrixQ:
    """``[[M, c], [b^T, corner]]``."""
    rows = [list(row) + [rat(ci)] for row, ci in zip(M.entries, c)]
    rows.append([rat(x) for x in b] + [rat(corner)])
    return MatrixQ(rows, M.cols + 1)


def check_lemma4(b: Sequence, c: Sequence) -> LemmaResult:
    _check_even(b)
    if len(c) != len(b):
        raise ValueError("b and c must have equal length")
    res = LemmaResult("lemma4")
    lhs = det(bordered(build_Jbar(len(b)), b, c))
    rhs = alternating_form(b, c)
    res.record(lhs == rhs, {"b": list(b), "c": list(c), "det": lhs, "form": rhs})
    return res


def corollary5_polynomial(A: MatrixQ, b: Sequence, c: Sequence) -> UniPoly:
    """``det [[Jbar + s A, s c], [s b^T, 0]]`` as a polynomial in ``s``."""
    n = len(b)
    Jb = build_Jbar(n)
    s = UniPoly([0, 1])
    grid = [[UniPoly([Jb[i, j], A[i, j]]) for j in range(n)] + [s * rat(c[i])] for i in range(n)]
    grid.append([s * rat(x) for x in b] + [UniPoly()])
    return poly_det(grid)


def check_corollary5(A: MatrixQ, b: Sequence, c: Sequence) -> LemmaResult:
    _check_even(b)
    if not any(b) or not any(c):
        raise ValueError("b and c must be nonzero")
    if A.shape != (len(b), len(b)):
        raise ValueError("A must be 2r x 2r")
    res = LemmaResult("corollary5")
    p = corollary5_polynomial(A, b, c)
    form = alternating_form(b, c)
    ok = p.coeff(0) == 0 and p.coeff(1) == 0 and p.coeff(2) == form
    res.record(ok, {"A": A, "b": list(b), "c": list(c), "polynomial": p, "form": form})
    return res


def check_schur_bordered(M: MatrixQ, b: Sequence, c: Sequence) -> LemmaResult:
    if not M.is_square or det(M) == 0:
        raise ValueError("Schur check needs an invertible square M")
    res = LemmaResult("schur")
    lhs = det(bordered(M, b, c))
    bcol = MatrixQ([[rat(x)] for x in c], 1)
    brow = MatrixQ([[rat(x) for x in b]], len(b))
    rhs = det(M) * -(brow @ inverse(M) @ bcol)[0, 0]
    res.record(lhs == rhs, {"M": M, "b": list(b), "c": list(c), "det": lhs, "schur": rhs})
    return res


# ---------------------------------------------------------------------------
# projection lemmas


def _pi_indices(m: int) -> list[list[int]]:
    """0-based coordinates kept by the three projections R^{3m} -> R^{2m}."""
    return [
        list(range(0, 2 * m)),
        list(range(m, 3 * m)),
        list(range(0, m)) + list(range(2 * m, 3 * m)),
    ]


def _random_subspace_basis(smp: RationalSampler, ambient: int, k: int) -> list[list[Fraction]]:
    while True:
        vs = [smp.vector(ambient) for _ in range(k)]
        if k == 0 or vectors_rank(vs) == k:
            return vs


def _combine(smp: RationalSampler, generators: list[list[Fraction]], k: int, length: int) -> list[list[Fraction]]:
    """``k`` random combinations of ``generators``."""
    out = []
    for _ in range(k):
        coeffs = smp.vector(len(generators))
        v = [Fraction(0)] * length
        for a, g in zip(coeffs, generators):
            if a:
                v = [x + a * y for x, y in zip(v, g)]
        out.append(v)
    return out


def _block_dims(smp: RationalSampler, m: int, r: int) -> tuple[int, int, int]:
    """Dimensions with every pairwise sum at most 2r, biased towards the extremes."""
    cap = min(m, 2 * r)
    while True:
        a = [smp.integer(0, cap) for _ in range(3)]
        if smp.integer(0, 1):
            a = [min(r, m)] * 3
        if a[0] + a[1] <= 2 * r and a[1] + a[2] <= 2 * r and a[0] + a[2] <= 2 * r:
            return tuple(a)


def lemma2_hypothesis_space(smp: RationalSampler, m: int, r: int) -> list[list[Fraction]]:
    """Spanning vectors of a random V in Q^{3m} with each projection of dim <= 2r.

    Built inside A_1 (+) A_2 (+) A_3 with A_i a random subspace of block i.
    """
    dims = _block_dims(smp, m, r)
    gens = []
    for blk, k in enumerate(dims):
        for v in _random_subspace_basis(smp, m, k):
            full = [Fraction(0)] * (3 * m)
            full[blk * m : (blk + 1) * m] = v
            gens.append(full)
    if not gens:
        return []
    k = smp.integer(1, len(gens))
    return _combine(smp, gens, k, 3 * m)


def check_lemma2(m: int, r: int, trials: int = 100, seed: int = 0) -> LemmaResult:
    if m < 1 or r < 1:
        raise ValueError("m and r must be positive")
    res = LemmaResult(f"lemma2[m={m},r={r}]")
    pis = _pi_indices(m)
    for t in range(trials):
        smp = trial_sampler("lemma2", seed, t * 1000 + m * 10 + r)
        V = lemma2_hypothesis_space(smp, m, r)
        proj = [coordinate_projection(V, idx) for idx in pis]
        if any(p > 2 * r for p in proj):
            raise AssertionError("generator produced a space outside the hypothesis")
        d = vectors_rank(V) if V else 0
        res.record(d <= 3 * r, {"V": V, "projections": proj, "dim": d})
        # contrapositive on an unconstrained space of dimension 3r + 1
        if 3 * r + 1 <= 3 * m:
            W = _random_subspace_basis(smp, 3 * m, 3 * r + 1)
            proj = [coordinate_projection(W, idx) for idx in pis]
            res.record(max(proj) >= 2 * r + 1, {"V": W, "projections": proj})
    return res


def check_lemma3(
    m: int, r: int, n_list: Sequence[int], q_list: Sequence[int], trials: int = 100, seed: int = 0
) -> LemmaResult:
    if len(n_list) != len(q_list) or any(q > n or q < 0 for q, n in zip(q_list, n_list)):
        raise ValueError("need q_j <= n_j for every j")
    res = LemmaResult(f"lemma3[m={m},r={r},n={list(n_list)},q={list(q_list)}]")
    h = 3 * m + sum(n_list)
    offsets = [3 * m + sum(n_list[:j]) for j in range(len(n_list))]
    pis = [idx for idx in _pi_indices(m)]
    ps = [list(range(o, o + nj)) for o, nj in zip(offsets, n_list)]
    bound = sum(q_list) + 3 * r
    for t in range(trials):
        smp = trial_sampler("lemma3", seed, t)
        head = lemma2_hypothesis_space(smp, m, r)
        gens = [v + [Fraction(0)] * (h - 3 * m) for v in head]
        for o, nj, qj in zip(offsets, n_list, q_list):
            for w in _random_subspace_basis(smp, nj, smp.integer(0, qj)):
                full = [Fraction(0)] * h
                full[o : o + nj] = w
                gens.append(full)
        V = _combine(smp, gens, smp.integer(1, len(gens)), h) if gens else []
        if not V:
            res.record(True)
            continue
        hyp = all(coordinate_projection(V, idx) <= 2 * r for idx in pis) and all(
            coordinate_projection(V, idx) <= q for idx, q in zip(ps, q_list)
        )
        if not hyp:
            raise AssertionError("generator produced a space outside the hypothesis")
        d = vectors_rank(V)
        res.record(d <= bound, {"V": V, "dim": d, "bound": bound})
    return res


# ---------------------------------------------------------------------------
# subspace-level checks


def normalize_base(S: AffineMatrixSubspace, r: int) -> AffineMatrixSubspace:
    """Congruence taking the base of ``S`` to ``Jbar_{2r} (+) 0``."""
    Q, k = skew_normal_form(S.base)
    if k != r:
        raise ValueError(f"base has rank {2 * k}, expected {2 * r}")
    if Q == MatrixQ.identity(Q.rows):
        return S
    return congruence_transform(S, Q)


def check_V_in_P(S: AffineMatrixSubspace, r: int) -> LemmaResult:
    """After normalizing the base, every linear direction has a zero lower-right block."""
    T = normalize_base(S, r)
    n = T.base.rows
    res = LemmaResult("V_in_P")
    for k, B in enumerate(T.basis):
        corner = B.block(2 * r, n, 2 * r, n)
        res.record(corner.is_zero(), {"basis_index": k, "corner": corner})
    if not T.basis:
        res.record(True)
    return res


def u_intersection_directions(S: AffineMatrixSubspace, r: int) -> list[list[Fraction]]:
    """Coordinates (in the basis of ``S``) of a basis of ``L' cap U`` after normalizing the base.

    ``L'`` is the transformed linear part and ``U`` the r^2-dimensional space
    of ``T(l) + R(antipinco)`` directions.  A nonzero direction here is a line
    through the base along which the rank must drop.
    """
    T = normalize_base(S, r)
    U = build_U(r, T.base.rows)
    cols = [B.vec() for B in T.basis] + [[-x for x in B.vec()] for B in U.basis]
    if not cols:
        return []
    A = MatrixQ([list(row) for row in zip(*cols)], len(cols))
    return [v[: T.dim] for v in nullspace(A) if any(v[: T.dim])]


@dataclass
class FalsifierReport:
    n: int
    r: int
    tried: int = 0
    refuted_sampling: int = 0
    refuted_symbolic: int = 0
    rejected_dependent: int = 0
    survivors: list = field(default_factory=list)
    methods: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.survivors and self.tried == self.refuted_sampling + self.refuted_symbolic

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "tried": self.tried,
            "refuted_sampling": self.refuted_sampling,
            "refuted_symbolic": self.refuted_symbolic,
            "rejected_dependent": self.rejected_dependent,
            "survivors": self.survivors,
            "methods": dict(sorted(self.methods.items())),
        }


def random_skew(smp: RationalSampler, n: int) -> MatrixQ:
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = smp.rational()
            g[i][j], g[j][i] = x, -x
    return MatrixQ(g, n)


def refute_extension(
    S: AffineMatrixSubspace, r: int, smp: RationalSampler, sample_budget: int = 50, random_lines: int = 5
) -> tuple[str, str, dict]:
    """Try to show ``S`` is not of constant rank 2r.

    Returns ``(outcome, method, evidence)`` with outcome ``sampling``,
    ``symbolic`` or ``survivor``.
    """
    target = 2 * r
    d = S.dim
    for _ in range(sample_budget):
        point = smp.vector(d)
        k = rank(S.sample(point))
        if k != target:
            return "sampling", "sample", {"point": point, "rank": k}

    zero = [Fraction(0)] * d
    lines = [(zero, u) for u in u_intersection_directions(S, r)]
    lines.append((zero, [Fraction(int(i == d - 1)) for i in range(d)]))
    lines += [(smp.vector(d), smp.vector(d)) for _ in range(random_lines)]
    for point, direction in lines:
        if not any(direction):
            continue
        drop = line_rank_below(S, point, direction, target)
        if drop is not None:
            return "symbolic", "line", drop.to_json()

    n = S.base.rows
    if n <= SYMBOLIC_MAX_N and d <= SYMBOLIC_MAX_DIM:
        rep = certify_constant_rank(S, target, "symbolic", seed=0)
        if rep.refuted:
            return "symbolic", "certify", rep.evidence
        return "survivor", rep.verdict, rep.evidence
    return "survivor", "unresolved", {"reason": "over the symbolic cap and no refutation found"}


def falsify_extensions(
    p: WitnessParams,
    trials: int = 200,
    seed: int = 0,
    directions: Sequence[MatrixQ] | None = None,
    sample_budget: int = 50,
) -> FalsifierReport:
    """Extend the witness by one extra direction per trial and try to refute constant rank.

    Random directions are redrawn when dependent on the witness; explicit
    ``directions`` that are dependent are counted in ``rejected_dependent``.
    """
    W = witness_subspace(p.n, p.r)
    report = FalsifierReport(p.n, p.r)
    count = len(directions) if directions is not None else trials
    for t in range(count):
        smp = trial_sampler(f"falsify:{p.n}:{p.r}", seed, t)
        if directions is not None:
            try:
                S = W.extend(directions[t])
            except ValueError:
                report.rejected_dependent += 1
                continue
        else:
            while True:
                try:
                    S = W.extend(random_skew(smp, p.n))
                    break
                except ValueError:
                    report.rejected_dependent += 1
        report.tried += 1
        outcome, method, evidence = refute_extension(S, p.r, smp, sample_budget)
        report.methods[method] = report.methods.get(method, 0) + 1
        if outcome == "sampling":
            report.refuted_sampling += 1
        elif outcome == "symbolic":
            report.refuted_symbolic += 1
        else:
            report.survivors.append({"trial": t, "verdict": method, "direction": S.basis[-1].to_json()})
    return report


# ---------------------------------------------------------------------------
# suites


def _random_vec(smp: RationalSampler, n: int, nonzero: bool = False) -> list[Fraction]:
    while True:
        v = smp.vector(n)
        if not nonzero or any(v):
            return v


def _random_matrix(smp: RationalSampler, n: int, m: int | None = None) -> MatrixQ:
    m = n if m is None else m
    return MatrixQ([smp.vector(m) for _ in range(n)], m)


def lemma4_suite(trials: int = 100, seed: int = 0, r_values=range(1, 6)) -> LemmaResult:
    res = LemmaResult("lemma4")
    for r in r_values:
        for t in range(trials):
            smp = trial_sampler(f"lemma4:{r}", seed, t)
            res.merge(check_lemma4(_random_vec(smp, 2 * r), _random_vec(smp, 2 * r)))
    return res


def corollary5_suite(trials: int = 100, seed: int = 0, r_max: int = 3) -> LemmaResult:
    res = LemmaResult("corollary5")
    for t in range(trials):
        smp = trial_sampler("corollary5", seed, t)
        r = 1 + t % r_max
        A = _random_matrix(smp, 2 * r)
        res.merge(check_corollary5(A, _random_vec(smp, 2 * r, True), _random_vec(smp, 2 * r, True)))
    return res


def schur_suite(trials: int = 100, seed: int = 0, max_size: int = 8) -> LemmaResult:
    res = LemmaResult("schur")
    for t in range(trials):
        smp = trial_sampler("schur", seed, t)
        k = 1 + t % max_size
        while True:
            M = _random_matrix(smp, k)
            if det(M) != 0:
                break
        res.merge(check_schur_bordered(M, smp.vector(k), smp.vector(k)))
    return res


LEMMA2_SETTINGS = [(m, r) for m in range(1, 5) for r in range(1, m + 1)]
LEMMA3_SETTINGS = [
    (1, 1, (2,), (1,)),
    (2, 1, (3, 2), (2, 1)),
    (3, 2, (2, 2, 2), (1, 2, 0)),
    (4, 2, (4,), (3,)),
]


def lemma2_suite(trials: int = 100, seed: int = 0) -> LemmaResult:
    res = LemmaResult("lemma2")
    for m, r in LEMMA2_SETTINGS:
        res.merge(check_lemma2(m, r, trials, seed))
    return res


def lemma3_suite(trials: int = 100, seed: int = 0) -> LemmaResult:
    res = LemmaResult("lemma3")
    for m, r, ns, qs in LEMMA3_SETTINGS:
        res.merge(check_lemma3(m, r, ns, qs, trials, seed))
    return res


def v_in_p_suite(trials: int = 100, seed: int = 0) -> LemmaResult:
    """Witnesses scrambled by random congruences still land in P after normalization."""
    res = LemmaResult("V_in_P")
    families = [(n, r) for n in range(2, 9) for r in range(1, n // 2 + 1)]
    for t in range(trials):
        n, r = families[t % len(families)]
        smp = trial_sampler("v_in_p", seed, t)
        W = witness_subspace(n, r)
        while True:
            Q = MatrixQ([[smp.integer(-2, 2) for _ in range(n)] for _ in range(n)], n)
            if rank(Q) == n:
                break
        res.merge(check_V_in_P(congruence_transform(W, Q), r))
    return res


SUITES: dict[str, Callable[..., LemmaResult]] = {
    "lemma4": lemma4_suite,
    "corollary5": corollary5_suite,
    "schur": schur_suite,
    "lemma2": lemma2_suite,
    "lemma3": lemma3_suite,
    "V_in_P": v_in_p_suite,
}


def run_lemma_suites(trials: int = 100, seed: int = 0) -> list[LemmaResult]:
    out = []
    for name, suite in SUITES.items():
        res = suite(trials=trials, seed=seed)
        res.lemma = name
        out.append(res)
    return out


def results_csv(results: Sequence[LemmaResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lemma", "trials", "passed", "status"])
    for res in results:
        w.writerow([res.lemma, res.attempted, res.passed, "pass" if res.ok else "fail"])
    return buf.getvalue()


def results_json(results: Sequence) -> str:
    return json.dumps([res.to_json() for res in results], indent=1, sort_keys=True)
