"""Command-line interface.

Matrix indices in all human-readable output are 1-based.  Exit status: 0 when
everything passes, 1 on any refutation or failed check, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .constructions import WitnessParams, bound_ledger, max_dim_antisym, witness_subspace
from .matrix_core import load_matrix, pfaffian, pretty, skew_normal_form
from .subspace import AffineMatrixSubspace, CapExceeded, certify_constant_rank
from .verification import falsify_extensions, results_csv, results_json, run_lemma_suites

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


def default_seed() -> int:
    env = os.environ.get("CRK_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"CRK_SEED must be an integer, got {env!r}")


def _emit(args, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _records_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _load_subspace(path: str) -> AffineMatrixSubspace:
    with open(path) as fh:
        return AffineMatrixSubspace.from_json(json.load(fh))


def cmd_bound(args) -> int:
    try:
        value = max_dim_antisym(args.n, args.rank)
    except ValueError as exc:
        raise UsageError(str(exc))
    r = args.rank // 2
    record = {"n": args.n, "rank": args.rank, "max_dim": value}
    if args.n >= 2 * r + 2:
        record["ledger"] = bound_ledger(args.n, r)
    if args.format == "json":
        _emit(args, json.dumps(record, indent=1))
    elif args.format == "csv":
        flat = {k: v for k, v in record.items() if k != "ledger"}
        flat.update({k: v for k, v in record.get("ledger", {}).items() if k.startswith("dim")})
        _emit(args, _records_csv([flat]))
    else:
        lines = [str(value)]
        if "ledger" in record:
            led = record["ledger"]
            lines.append(
                f"dim P = {led['dim_P']}, dim U = {led['dim_U']}, dim Z = {led['dim_Z']}, "
                f"bound = {led['dim_P']} - {led['dim_U']} - {led['dim_Z']} = {led['bound']}"
            )
        _emit(args, "\n".join(lines))
    return 0


def cmd_construct(args) -> int:
    try:
        S = witness_subspace(args.n, args.r)
    except ValueError as exc:
        raise UsageError(str(exc))
    if args.format == "pretty":
        text = f"witness n={args.n} r={args.r} dim={S.dim}\nbase:\n{pretty(S.base)}"
        for k, B in enumerate(S.basis, 1):
            text += f"\nB{k}:\n{pretty(B)}"
        _emit(args, text)
    else:
        _emit(args, json.dumps(S.to_json(), indent=1))
    return 0


def cmd_certify(args) -> int:
    S = _load_subspace(args.input)
    try:
        report = certify_constant_rank(S, args.rank, args.mode, seed=args.seed)
    except CapExceeded as exc:
        raise UsageError(str(exc))
    out = report.to_json()
    out["dim"] = S.dim
    if args.format == "pretty":
        _emit(args, f"verdict: {report.verdict}\nmode: {report.mode}\nrank: {report.rank}\ndim: {S.dim}\n"
              + "\n".join(f"{k}: {v}" for k, v in report.evidence.items()))
    elif args.format == "csv":
        _emit(args, _records_csv([{"mode": report.mode, "verdict": report.verdict, "rank": report.rank, "dim": S.dim}]))
    else:
        _emit(args, json.dumps(out, indent=1))
    passed = report.constant or (report.mode == "sampled" and report.verdict == "inconclusive")
    return 0 if passed else 1


def cmd_lemmas(args) -> int:
    results = run_lemma_suites(args.trials, args.seed)
    if args.format == "json":
        _emit(args, results_json(results))
    elif args.format == "pretty":
        _emit(args, "\n".join(
            f"{res.lemma:<12} {res.passed:>6}/{res.attempted:<6} {'pass' if res.ok else 'FAIL'}" for res in results
        ))
    else:
        _emit(args, results_csv(results))
    return 0 if all(res.ok for res in results) else 1


def cmd_falsify(args) -> int:
    try:
        params = WitnessParams(args.n, args.r)
    except ValueError as exc:
        raise UsageError(str(exc))
    report = falsify_extensions(params, args.trials, args.seed)
    data = report.to_json()
    if args.format == "csv":
        flat = {k: v for k, v in data.items() if k not in ("survivors", "methods")}
        flat["survivors"] = len(report.survivors)
        _emit(args, _records_csv([flat]))
    elif args.format == "pretty":
        _emit(args, "\n".join(f"{k}: {v}" for k, v in data.items()))
    else:
        _emit(args, json.dumps(data, indent=1))
    return 0 if report.ok else 1


def cmd_normal_form(args) -> int:
    M = load_matrix(args.input, require="skew")
    Q, k = skew_normal_form(M)
    if args.format == "pretty":
        _emit(args, f"rank: {2 * k}\nQ:\n{pretty(Q)}\nQ^T M Q:\n{pretty(M.congruence(Q))}")
    else:
        _emit(args, json.dumps({"k": k, "rank": 2 * k, "Q": Q.to_json(), "normal_form": M.congruence(Q).to_json()}, indent=1))
    return 0


def cmd_pfaffian(args) -> int:
    M = load_matrix(args.input, require="skew")
    value = pfaffian(M)
    if args.format == "json":
        _emit(args, json.dumps({"pfaffian": str(value)}))
    else:
        _emit(args, str(value))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crk",
        description="Constant-rank affine spaces of antisymmetric matrices: construct, certify, verify. "
        "Matrix indices in output are 1-based. Rationals are written p/q.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="json"):
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=["json", "csv", "pretty"], default=fmt_default)
        return p

    p = common(sub.add_parser("bound", help="maximal dimension for size n and even rank"), "pretty")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rank", type=int, required=True, help="the even rank 2r")
    p.set_defaults(func=cmd_bound)

    p = common(sub.add_parser("construct", help="write the witness subspace as JSON"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True, help="half the target rank")
    p.set_defaults(func=cmd_construct)

    p = common(sub.add_parser("certify", help="certify a subspace JSON has constant rank"))
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--mode", choices=["symbolic", "sampled", "auto"], default="auto")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_certify)

    p = common(sub.add_parser("lemmas", help="run the randomized lemma suites"), "csv")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_lemmas)

    p = common(sub.add_parser("falsify", help="try to extend a witness beyond the maximal dimension"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_falsify)

    p = common(sub.add_parser("normal-form", help="congruence normal form of a skew matrix JSON"))
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_normal_form)

    p = common(sub.add_parser("pfaffian", help="Pfaffian of a skew matrix JSON"), "pretty")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_pfaffian)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", DEFAULT_SEED) is None:
            args.seed = default_seed()
        return args.func(args)
    except (UsageError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
