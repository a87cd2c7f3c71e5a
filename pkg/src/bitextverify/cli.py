"""Command-line surface: train models, score pairs, evaluate, sweep, filter, stats.

Exit codes: 0 success, 2 configuration error, 3 input-format error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .coder import CodecError
from .corpus import (
    CorpusFormatError,
    FilterReport,
    UNCATEGORIZED,
    evaluate,
    filter_corpus,
    greater_stats,
    load_corpus,
    score_pairs,
    threshold_matrix,
)
from .metrics import METRIC_MODES, PairScore, ThresholdConfig
from .ppm import DEFAULT_ALPHABET_SIZE, DEFAULT_MAX_ORDER, PpmModel
from .preprocess import ARABIC_NUMERIC, IDENTITY, TRANSFORM_IDS, TransformError, apply_transform

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FORMAT = 3
EXIT_IO = 4

DEFAULT_GRID = "1.25:3.50:0.25"


def fmt_pct(value, places: int = 2) -> str:
    """Decimal half-up rounding, so 60.145 prints as 60.15.

    Exact rationals (as reported by evaluate) are converted without passing
    through binary floating point.
    """
    quantum = Decimal(1).scaleb(-places)
    if isinstance(value, Fraction):
        with localcontext() as ctx:
            ctx.prec = 50
            decimal_value = Decimal(value.numerator) / Decimal(value.denominator)
    else:
        decimal_value = Decimal(repr(float(value)))
    return str(decimal_value.quantize(quantum, rounding=ROUND_HALF_UP))


def parse_grid(spec: str) -> list[float]:
    """Grid spec: either comma-separated values or start:stop:step (inclusive)."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid range must be start:stop:step, got {spec!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"bad grid range {spec!r}")
        count = int((stop - start) / step + 1e-9) + 1
        grid = [round(start + i * step, 10) for i in range(count)]
    else:
        grid = [float(p) for p in spec.split(",") if p]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError(f"grid must be non-empty and strictly increasing, got {spec!r}")
    return grid


def _train_on_lines(model: PpmModel, text: str, transform: str) -> tuple[int, int]:
    """Train each line as one text (history resets per line). Returns (texts, symbols)."""
    n_texts = n_symbols = 0
    for line in text.splitlines():
        data = apply_transform(line, transform)
        model.train(data)
        n_texts += 1
        n_symbols += len(data)
    return n_texts, n_symbols


def _bundled_model(language: str, transform: str, order: int, alphabet: int) -> PpmModel:
    text = resources.files("bitextverify").joinpath(f"data/{language}.txt").read_text("utf-8")
    model = PpmModel(order, alphabet)
    _train_on_lines(model, text, transform)
    return model


def _load_models(args) -> tuple[tuple[PpmModel, str], tuple[PpmModel, str]]:
    if args.model_a:
        model_a, id_a = PpmModel.load(args.model_a), str(args.model_a)
    else:
        model_a = _bundled_model("arabic", args.transform, args.order, args.alphabet)
        id_a = "bundled:arabic"
    if args.model_e:
        model_e, id_e = PpmModel.load(args.model_e), str(args.model_e)
    else:
        model_e = _bundled_model("english", IDENTITY, args.order, args.alphabet)
        id_e = "bundled:english"
    return (model_a.snapshot(), id_a), (model_e.snapshot(), id_e)


def _load_pairs(args):
    if args.format == "aligned":
        if not (args.arabic and args.english):
            raise ValueError("aligned format needs --arabic and --english")
        return load_corpus(args.arabic, "aligned", english_path=args.english)
    if not args.pairs:
        raise ValueError("tsv format needs --pairs")
    return load_corpus(args.pairs, "tsv")


def _write_lines(path, lines) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def _pair_row(pair) -> str:
    cols = [pair.id, pair.text_a, pair.text_e]
    if pair.label or pair.category:
        cols.append(pair.label or "")
    if pair.category:
        cols.append(pair.category)
    return "\t".join(cols)


# -- commands -------------------------------------------------------------------


def cmd_train(args) -> int:
    text = Path(args.input).read_text(encoding="utf-8")
    model = PpmModel(args.order, args.alphabet)
    n_texts, n_symbols = _train_on_lines(model, text, args.transform)
    model.save(args.out)
    order0 = model.stats(())
    print(
        f"trained {n_texts} texts, {n_symbols} symbols; "
        f"order-0 total {order0.total if order0 else 0}; wrote {args.out}"
    )
    return EXIT_OK


def cmd_score(args) -> int:
    pairs = _load_pairs(args)
    (model_a, _), (model_e, _) = _load_models(args)
    thresholds = ThresholdConfig(args.theta_slr, args.theta_cr)
    scored = score_pairs(pairs, model_a, model_e, thresholds, args.jobs, args.transform)
    rows = [PairScore.TSV_HEADER] + [s.score.tsv_row() for s in scored if s.score]
    if args.out:
        _write_lines(args.out, rows)
    else:
        for row in rows:
            print(row)
    invalid = [f"{s.pair.id}\t{s.error}" for s in scored if s.score is None]
    if args.invalid_out:
        _write_lines(args.invalid_out, invalid)
    elif invalid:
        print(f"{len(invalid)} invalid pairs (use --invalid-out to capture):", file=sys.stderr)
        for line in invalid:
            print("  " + line, file=sys.stderr)
    if args.scatter:
        _write_lines(
            args.scatter,
            ["len_a\tlen_e\tbits_a\tbits_e\tverdict"]
            + [
                f"{s.score.len_a}\t{s.score.len_e}"
                f"\t{s.score.bits_a:.4f}\t{s.score.bits_e:.4f}\t{s.score.verdict}"
                for s in scored
                if s.score
            ],
        )
    return EXIT_OK


def cmd_evaluate(args) -> int:
    pairs = _load_pairs(args)
    (model_a, _), (model_e, _) = _load_models(args)
    thresholds = ThresholdConfig(args.theta_slr, args.theta_cr)
    scored = score_pairs(pairs, model_a, model_e, thresholds, args.jobs, args.transform)
    invalid = [s for s in scored if s.score is None]
    if invalid:
        raise CorpusFormatError(f"labeled corpus has {len(invalid)} unscorable pairs")
    report = evaluate(pairs, [s.score for s in scored], thresholds, args.metric)
    print(f"satisfactory accuracy: {fmt_pct(report.sat_accuracy)}")
    print(f"unsatisfactory accuracy: {fmt_pct(report.unsat_accuracy)}")
    print(f"average accuracy: {fmt_pct(report.average)}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    pairs = _load_pairs(args)
    (model_a, _), (model_e, _) = _load_models(args)
    grid = parse_grid(args.grid)
    scored = score_pairs(pairs, model_a, model_e, ThresholdConfig(), args.jobs, args.transform)
    invalid = [s for s in scored if s.score is None]
    if invalid:
        raise CorpusFormatError(f"labeled corpus has {len(invalid)} unscorable pairs")
    matrix = threshold_matrix(pairs, [s.score for s in scored], grid, grid)
    # Layout: SLR thresholds across the top, CR thresholds down the side.
    print("CR\\SLR\t" + "\t".join(f"{v:g}" for v in grid))
    for theta_cr, row in zip(grid, matrix):
        print(f"{theta_cr:g}\t" + "\t".join(fmt_pct(cell) for cell in row))
    return EXIT_OK


def cmd_filter(args) -> int:
    pairs = _load_pairs(args)
    (model_a, id_a), (model_e, id_e) = _load_models(args)
    thresholds = ThresholdConfig(args.theta_slr, args.theta_cr)
    accepted, rejected, report = filter_corpus(
        pairs, model_a, model_e, thresholds, args.jobs, args.transform
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_lines(out_dir / "accepted.tsv", [_pair_row(s.pair) for s in accepted])
    _write_lines(out_dir / "rejected.tsv", [_pair_row(s.pair) for s in rejected])
    invalid_ids = {pair_id for pair_id, _ in report.invalid}
    reasons = dict(report.invalid)
    _write_lines(
        out_dir / "invalid.tsv",
        [_pair_row(p) + "\t" + reasons[p.id] for p in pairs if p.id in invalid_ids],
    )
    (out_dir / "report.json").write_text(
        json.dumps(_report_dict(report, thresholds, model_a, id_a, model_e, id_e, args.transform),
                   indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    print(
        f"accepted {report.accepted_count} ({fmt_pct(report.accepted_pct)}%), "
        f"rejected {report.rejected_count} ({fmt_pct(report.rejected_pct)}%), "
        f"invalid {report.invalid_count}; outputs in {out_dir}"
    )
    return EXIT_OK


def _report_dict(report: FilterReport, thresholds, model_a, id_a, model_e, id_e, transform):
    return {
        "thresholds": {"slr": thresholds.theta_slr, "cr": thresholds.theta_cr},
        "counts": {
            "accepted": report.accepted_count,
            "rejected": report.rejected_count,
            "invalid": report.invalid_count,
            "total": report.accepted_count + report.rejected_count + report.invalid_count,
        },
        "percentages": {"accepted": report.accepted_pct, "rejected": report.rejected_pct},
        "per_category": report.per_category,
        "invalid": [list(item) for item in report.invalid],
        "models": {
            "arabic": {"id": id_a, "hash": model_a.config_hash().hex()},
            "english": {"id": id_e, "hash": model_e.config_hash().hex()},
        },
        "transform": {"arabic": transform, "english": IDENTITY},
    }


def cmd_stats(args) -> int:
    pairs = _load_pairs(args)
    (model_a, _), (model_e, _) = _load_models(args)
    scored = score_pairs(pairs, model_a, model_e, ThresholdConfig(), args.jobs, args.transform)
    valid = [s for s in scored if s.score]
    if not valid:
        raise CorpusFormatError("no scorable pairs")
    by_category: dict[str, list] = {}
    for s in valid:
        by_category.setdefault(s.pair.category or UNCATEGORIZED, []).append(s)
    print("category\tpairs\tlen_a_greater_pct\tbits_a_greater_pct")
    for category in sorted(by_category):
        items = by_category[category]
        len_pct, bits_pct = greater_stats(
            [s.pair for s in items], [s.score for s in items]
        )
        print(f"{category}\t{len(items)}\t{fmt_pct(len_pct)}\t{fmt_pct(bits_pct)}")
    len_pct, bits_pct = greater_stats([s.pair for s in valid], [s.score for s in valid])
    print(f"overall\t{len(valid)}\t{fmt_pct(len_pct)}\t{fmt_pct(bits_pct)}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model-a", help="Arabic-side model file (default: bundled desk corpus)")
    p.add_argument("--model-e", help="English-side model file (default: bundled desk corpus)")
    p.add_argument("--order", type=int, default=DEFAULT_MAX_ORDER,
                   help="context order for bundled default models (default 5)")
    p.add_argument("--alphabet", type=int, default=DEFAULT_ALPHABET_SIZE,
                   help="alphabet size for bundled default models (default 256)")
    p.add_argument("--transform", choices=TRANSFORM_IDS, default=ARABIC_NUMERIC,
                   help="Arabic-side transform (default arabic-numeric)")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel scoring processes (results are order-stable)")


def _add_corpus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pairs", help="TSV corpus: id, arabic, english[, label[, category]]")
    p.add_argument("--format", choices=("tsv", "aligned"), default="tsv")
    p.add_argument("--arabic", help="Arabic side of a line-aligned pair of files")
    p.add_argument("--english", help="English side of a line-aligned pair of files")


def _add_threshold_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta-slr", type=float, default=2.5)
    p.add_argument("--theta-cr", type=float, default=2.25)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bitextverify",
        description="Score, evaluate and filter parallel Arabic-English corpora "
        "with sentence-length and compression code-length ratio metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="prime a model on a text file (one text per line)")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--order", type=int, default=DEFAULT_MAX_ORDER)
    p.add_argument("--alphabet", type=int, default=DEFAULT_ALPHABET_SIZE)
    p.add_argument("--transform", choices=TRANSFORM_IDS, default=IDENTITY)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("score", help="score pairs to a per-pair TSV")
    _add_corpus_args(p)
    _add_model_args(p)
    _add_threshold_args(p)
    p.add_argument("--out", help="output TSV (default: stdout)")
    p.add_argument("--invalid-out", help="TSV listing unscorable pairs")
    p.add_argument("--scatter", help="also write (len_a, len_e, bits_a, bits_e, verdict) TSV")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("evaluate", help="accuracy against a labeled corpus")
    _add_corpus_args(p)
    _add_model_args(p)
    _add_threshold_args(p)
    p.add_argument("--metric", choices=METRIC_MODES, default="both")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="threshold grid of average accuracies")
    _add_corpus_args(p)
    _add_model_args(p)
    p.add_argument("--grid", default=DEFAULT_GRID,
                   help="start:stop:step or comma list (default 1.25:3.50:0.25)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("filter", help="partition a corpus into accepted/rejected/invalid")
    _add_corpus_args(p)
    _add_model_args(p)
    _add_threshold_args(p)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("stats", help="percentage of pairs with longer/costlier Arabic side")
    _add_corpus_args(p)
    _add_model_args(p)
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CorpusFormatError, TransformError, CodecError, UnicodeDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
