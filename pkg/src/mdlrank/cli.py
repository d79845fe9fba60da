"""Command-line front end: rank selection, scree export, baseline
comparison over dataset prefixes, and synthetic generation.

Exit statuses: 0 success, 2 usage errors, 3 data errors, 4 numerical-domain
errors. All error text goes to stderr; reports go to --out or stdout.
"""

import argparse
import csv
import datetime
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .baselines import kaiser, kneedle, scree
from .complexity import bound_gap_ratio, select_rank
from .datasets import (
    SyntheticSpec,
    generate_lin,
    generator_metadata,
    load_csv,
    load_matrix_csv,
    returns_transform,
    standardize_columns,
)
from .errors import ConvergenceError, DegenerateInputError, DomainError, ParseError
from .linalg import svd

SCHEMA_VERSION = 1


class UsageError(Exception):
    """Bad arguments detected after parsing; maps to exit status 2."""


def _resolve_epsilon(text: str, m: int) -> float:
    """Exact-rational validation of --epsilon; "auto" means 1/(2m)."""
    if text == "auto":
        return float(Fraction(1, 2 * m))
    try:
        frac = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--epsilon {text!r} is not a rational number") from None
    if frac <= 0 or frac.numerator != 1:
        raise UsageError(f"--epsilon must be a positive unit fraction 1/q, got {text}")
    if frac >= Fraction(1, m):
        raise UsageError(f"--epsilon {text} must be < 1/m = 1/{m}")
    return float(frac)


def _spec_from_flags(args) -> SyntheticSpec:
    """Synthetic-spec flags are arguments; a bad combination is a usage
    error, not a numerical one."""
    if args.n is None or args.m is None or args.true_k is None:
        raise UsageError("--synthetic needs --n, --m and --true-k")
    try:
        return SyntheticSpec(
            n=args.n,
            m=args.m,
            true_k=args.true_k,
            noise_sigma=args.noise,
            mix_low=args.mix_low,
            mix_high=args.mix_high,
            seed=args.seed,
        )
    except DomainError as exc:
        raise UsageError(f"invalid synthetic spec: {exc}") from exc


def _load_input(args):
    """Resolve --input/--synthetic into (descriptor, matrix, generator)."""
    if args.synthetic is not None:
        spec = _spec_from_flags(args)
        meta = generator_metadata(spec)
        return {"kind": "synthetic", "synthetic": meta}, generate_lin(spec), meta
    if args.input is None:
        raise UsageError("provide --input PATH or --synthetic lin")
    descriptor = {"kind": "csv", "path": args.input, "raw": bool(args.raw)}
    if args.raw:
        _, matrix = load_matrix_csv(args.input, has_header=args.header)
    else:
        matrix = returns_transform(load_csv(args.input, has_header=args.header))
    return descriptor, matrix, None


def _baselines(matrix, sensitivity):
    """Kaiser count on correlation eigenvalues plus knee of the scree."""
    z = standardize_columns(matrix)
    corr = z.T @ z / (z.shape[0] - 1)
    eig = np.sort(np.linalg.eigvalsh(corr))[::-1]
    s = svd(matrix)
    return {
        "kaiser": kaiser(eig),
        "kneedle": kneedle(scree(s, normalized=True), sensitivity),
    }


def _selection_block(matrix, epsilon, gram_mode):
    report = select_rank(matrix, epsilon=epsilon, gram_mode=gram_mode)
    ratios = dict(bound_gap_ratio(report))
    per_k = [
        {
            "k": t.k,
            "tail_term": t.tail_term,
            "gram_term": t.gram_term,
            "ratio_term": t.ratio_term,
            "count_term": t.count_term,
            "delta_lower": t.delta_lower,
            "delta_upper": t.delta_upper,
            "lower_total": t.lower_total,
            "upper_total": t.upper_total,
            "gap_ratio": ratios[t.k],
            "floored": t.floored,
        }
        for t in report.per_k
    ]
    return report, {
        "gram_mode": gram_mode,
        "per_k": per_k,
        "k_lower_opt": report.k_lower_opt,
        "k_upper_opt": report.k_upper_opt,
        "k_bracket": list(report.k_bracket),
    }


def _run_report(args, descriptor, matrix, generator):
    n, m = matrix.shape
    epsilon = _resolve_epsilon(args.epsilon, m)
    primary_mode = "full_gram" if args.both_gram_modes else args.gram_mode
    report, block = _selection_block(matrix, epsilon, primary_mode)
    out = {
        "schema_version": SCHEMA_VERSION,
        "tool": "mdlrank",
        "version": __version__,
        "input": descriptor,
        "n": n,
        "m": m,
        "epsilon": epsilon,
        "generator": generator,
        "baselines": _baselines(matrix, args.kneedle_sensitivity),
    }
    out.update(block)
    if args.both_gram_modes:
        _, alt = _selection_block(matrix, epsilon, "per_row_sum")
        out["alt"] = alt
    if not args.reproducible:
        out["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat(
            timespec="seconds"
        )
    return report, out


def _emit_text(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _emit_json(payload, path):
    _emit_text(json.dumps(payload, indent=2, allow_nan=False) + "\n", path)


PER_K_COLUMNS = [
    "k",
    "tail_term",
    "gram_term",
    "ratio_term",
    "count_term",
    "delta_lower",
    "delta_upper",
    "lower_total",
    "upper_total",
    "gap_ratio",
    "floored",
]


def _per_k_csv(per_k):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PER_K_COLUMNS)
    for row in per_k:
        writer.writerow(
            ["" if row[c] is None else row[c] for c in PER_K_COLUMNS]
        )
    return buf.getvalue()


def cmd_select(args) -> int:
    descriptor, matrix, generator = _load_input(args)
    _, out = _run_report(args, descriptor, matrix, generator)
    _emit_json(out, args.out)
    if args.table is not None:
        _emit_text(_per_k_csv(out["per_k"]), args.table)
    return 0


def cmd_scree(args) -> int:
    _, matrix, _ = _load_input(args)
    curve = scree(svd(matrix), normalized=args.normalized)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["component", "variance"])
    for i, v in enumerate(curve.variances, start=1):
        writer.writerow([i, float(v)])
    _emit_text(buf.getvalue(), args.out)
    return 0


def cmd_compare(args) -> int:
    descriptor, matrix, generator = _load_input(args)
    try:
        lengths = [int(tok) for tok in args.lengths.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"--lengths must be comma-separated integers, got {args.lengths!r}") from None
    if not lengths:
        raise UsageError("--lengths is empty")
    total = matrix.shape[0]
    for length in lengths:
        if length > total:
            raise UsageError(f"prefix length {length} exceeds the {total} available rows")
        if length < 2:
            raise UsageError(f"prefix length {length} is too short to analyze")
    reports = []
    for length in lengths:
        prefix = matrix[:length]
        _, out = _run_report(args, descriptor, prefix, generator)
        out["length"] = length
        reports.append(out)
    _emit_json(reports, args.out)
    return 0


def cmd_generate(args) -> int:
    spec = _spec_from_flags(args)
    matrix = generate_lin(spec)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"col_{j + 1}" for j in range(spec.m)])
    for row in matrix:
        writer.writerow([repr(float(v)) for v in row])
    _emit_text(buf.getvalue(), args.out)
    meta = {
        "schema_version": SCHEMA_VERSION,
        "tool": "mdlrank",
        "version": __version__,
        "generator": generator_metadata(spec),
    }
    if args.out is not None and args.out != "-":
        _emit_json(meta, args.out + ".meta.json")
    return 0


def _add_input_flags(sub):
    sub.add_argument("--input", help="CSV input path")
    sub.add_argument(
        "--raw",
        action="store_true",
        help="treat the CSV as a plain numeric matrix; default interprets "
        "columns as prices and analyzes their percent returns",
    )
    sub.add_argument(
        "--header",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="whether the CSV has a header row",
    )
    sub.add_argument("--synthetic", choices=["lin"], help="generate input instead of reading a file")
    _add_spec_flags(sub, required=False)


def _add_spec_flags(sub, required):
    sub.add_argument("--n", type=int, required=required, help="synthetic row count")
    sub.add_argument("--m", type=int, required=required, help="synthetic column count")
    sub.add_argument("--true-k", type=int, dest="true_k", required=required, help="planted source-column count")
    sub.add_argument("--noise", type=float, default=0.1, help="noise standard deviation (default 0.1)")
    sub.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
    sub.add_argument("--mix-low", type=float, dest="mix_low", default=-1.0, help="mixing coefficient lower bound")
    sub.add_argument("--mix-high", type=float, dest="mix_high", default=1.0, help="mixing coefficient upper bound")


def _add_select_flags(sub):
    sub.add_argument("--epsilon", default="auto", help="quantization step, a unit fraction like 1/60 or 'auto' for 1/(2m)")
    sub.add_argument("--gram-mode", dest="gram_mode", choices=["full_gram", "per_row_sum"], default="full_gram")
    sub.add_argument("--both-gram-modes", dest="both_gram_modes", action="store_true", help="report both gram aggregations")
    sub.add_argument("--kneedle-sensitivity", dest="kneedle_sensitivity", type=float, default=1.0)
    sub.add_argument("--reproducible", action="store_true", help="suppress the timestamp for byte-identical output")
    sub.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mdlrank",
        description="Select the number of principal components by code-length minimization.",
    )
    parser.add_argument("--version", action="version", version=f"mdlrank {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p_select = subs.add_parser("select", help="score every candidate rank and report the argmin bracket")
    _add_input_flags(p_select)
    _add_select_flags(p_select)
    p_select.add_argument("--table", help="also write the per-k table as CSV to this path")
    p_select.set_defaults(func=cmd_select)

    p_scree = subs.add_parser("scree", help="export the explained-variance curve as CSV")
    _add_input_flags(p_scree)
    p_scree.add_argument("--normalized", action="store_true", help="scale variances to sum to 1")
    p_scree.add_argument("--out", help="output path (default stdout)")
    p_scree.set_defaults(func=cmd_scree)

    p_compare = subs.add_parser("compare", help="run selection and baselines over row prefixes")
    _add_input_flags(p_compare)
    _add_select_flags(p_compare)
    p_compare.add_argument("--lengths", required=True, help="comma-separated prefix row counts")
    p_compare.set_defaults(func=cmd_compare)

    p_generate = subs.add_parser("generate", help="write a synthetic planted-rank matrix as CSV")
    p_generate.add_argument("--kind", choices=["lin"], default="lin")
    _add_spec_flags(p_generate, required=True)
    p_generate.add_argument("--out", help="output CSV path (default stdout; file output adds a .meta.json sidecar)")
    p_generate.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mdlrank: {exc}", file=sys.stderr)
        return 2
    except (ParseError, DegenerateInputError) as exc:
        print(f"mdlrank: data error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, ConvergenceError) as exc:
        print(f"mdlrank: numerical error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
