"""Command-line surface: filter, fetch, score, outliers, eval, hist.

All outputs are plot-ready CSV/JSON. Every command is deterministic for
identical inputs and configuration; rankings break score ties by term text
ascending. Exit codes: 0 success, 1 partial success (missing embeddings),
2 invalid input, 3 transport failure.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from . import embed_client, ingest, stats
from .errors import IdiolensError, TransportError
from .scorer import ScoredTerm, score_batch

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_INVALID = 2
EXIT_TRANSPORT = 3

ENV_ENDPOINT = "IDIOLENS_ENDPOINT"
ENV_BATCH = "IDIOLENS_BATCH"
ENV_RETRIES = "IDIOLENS_RETRIES"
ENV_TIMEOUT = "IDIOLENS_TIMEOUT"
ENV_IN_FLIGHT = "IDIOLENS_MAX_IN_FLIGHT"
ENV_TOKEN = "IDIOLENS_TOKEN"


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except IdiolensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_INVALID


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idiolens",
        description="Score how far multiword terms drift from their constituent words.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("filter", help="keep two-word terms passing the word-frequency filter")
    p.add_argument("names_file", help="UTF-8 term list, one name per line")
    p.add_argument("out_file", help="filtered term list")
    p.add_argument("--vocab-file", help="name inventory to count word frequencies over "
                   "(default: names_file itself)")
    p.add_argument("--max-freq", type=int, default=ingest.DEFAULT_MAX_FREQ)
    p.add_argument("--min-freq", type=int, default=ingest.DEFAULT_MIN_FREQ)
    p.add_argument("--dedup", action="store_true", help="drop duplicate names, keeping first")
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("fetch", help="fetch embeddings for terms and their words over HTTP")
    p.add_argument("terms_file")
    p.add_argument("--endpoint", default=os.environ.get(ENV_ENDPOINT),
                   help=f"embedding service base URL (env {ENV_ENDPOINT})")
    p.add_argument("--store", required=True, help="embedding store JSONL (created if absent)")
    p.add_argument("--model-id", default="")
    p.add_argument("--batch", type=int, default=int(os.environ.get(ENV_BATCH, 64)))
    p.add_argument("--retries", type=int, default=int(os.environ.get(ENV_RETRIES, 3)))
    p.add_argument("--timeout", type=float, default=float(os.environ.get(ENV_TIMEOUT, 30)))
    p.add_argument("--max-in-flight", type=int, default=int(os.environ.get(ENV_IN_FLIGHT, 4)))
    p.add_argument("--token", default=os.environ.get(ENV_TOKEN), help="bearer token pass-through")
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("score", help="score terms against a local embedding store")
    p.add_argument("terms_file")
    p.add_argument("store_file")
    p.add_argument("out_csv")
    p.add_argument("--missing-out", help="sidecar report path "
                   "(default: <out_csv>.missing.txt, written only when needed)")
    p.add_argument("--dedup", action="store_true", help="drop duplicate terms, keeping first")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("outliers", help="lowest-score subset below the tail threshold")
    p.add_argument("scores_csv")
    p.add_argument("out_csv")
    p.add_argument("--tail", type=float, default=0.05)
    p.add_argument("--top-k", type=int, default=None, help="cap the emitted rows")
    p.set_defaults(func=cmd_outliers)

    p = sub.add_parser("eval", help="ROC/AUC, threshold metrics and kappa from annotations")
    p.add_argument("scores_csv")
    p.add_argument("annotations_csv")
    p.add_argument("--tail", type=float, default=0.05)
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--out-dir", default=".", help="directory for summary.json and roc.csv")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("hist", help="score histogram as plot-ready CSV")
    p.add_argument("scores_csv")
    p.add_argument("out_csv")
    p.add_argument("--bins", type=int, default=10)
    p.set_defaults(func=cmd_hist)

    return parser


# ---------------------------------------------------------------------------
# commands


def cmd_filter(args) -> int:
    names = ingest.read_terms(_require_file(args.names_file))
    if args.vocab_file:
        vocab_names = ingest.read_terms(_require_file(args.vocab_file))
    else:
        vocab_names = names
    vocab = ingest.build_vocab(vocab_names)
    kept = ingest.filter_two_word_terms(
        names, vocab, max_freq=args.max_freq, min_freq=args.min_freq
    )
    if args.dedup:
        kept = list({r.term: r for r in kept}.values())
    with open(args.out_file, "w", encoding="utf-8") as handle:
        for record in kept:
            handle.write(record.term + "\n")
    print(f"kept {len(kept)} of {len(names)} names")
    return EXIT_OK


def cmd_fetch(args) -> int:
    if not args.endpoint:
        print(f"error: no endpoint given (flag --endpoint or env {ENV_ENDPOINT})",
              file=sys.stderr)
        return EXIT_INVALID
    records = ingest.read_terms(_require_file(args.terms_file))
    texts: list[str] = []
    for record in records:
        texts.append(record.term)
        texts.extend(record.constituents)
    store_path = Path(args.store)
    store = ingest.load_store(store_path) if store_path.exists() else ingest.EmbeddingStore(
        model_id=args.model_id
    )
    report = embed_client.fetch_embeddings(
        texts,
        args.endpoint,
        store,
        model_id=args.model_id,
        batch_size=args.batch,
        max_in_flight=args.max_in_flight,
        max_retries=args.retries,
        timeout=args.timeout,
        bearer_token=args.token,
    )
    if report.fetched or store_path.exists():
        ingest.save_store(store, store_path)
    print(
        f"fetched {report.fetched}, cached {report.cached}, failed {report.failed} "
        f"({report.batches} requests)"
    )
    for message in report.errors:
        print(f"  failed batch: {message}", file=sys.stderr)
    return EXIT_TRANSPORT if report.failed else EXIT_OK


def cmd_score(args) -> int:
    records = ingest.read_terms(_require_file(args.terms_file))
    if args.dedup:
        records = list({r.term: r for r in records}.values())
    eligible = [r for r in records if len(r.constituents) >= 2]
    skipped = len(records) - len(eligible)
    if skipped:
        print(f"skipped {skipped} single-word names", file=sys.stderr)
    store = ingest.load_store(_require_file(args.store_file))
    result = score_batch(eligible, store)
    ranked = sorted(result.scored, key=lambda s: (s.score, s.term))
    _write_scores_csv(ranked, args.out_csv)
    if result.missing:
        sidecar = args.missing_out or (args.out_csv + ".missing.txt")
        with open(sidecar, "w", encoding="utf-8") as handle:
            for entry in result.missing:
                handle.write(f"{entry.term}\t{','.join(entry.missing_keys)}\n")
        print(f"{len(result.missing)} terms lacked embeddings; see {sidecar}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_outliers(args) -> int:
    header, rows = _read_scores_csv(_require_file(args.scores_csv))
    scores = [row.score for row in rows]
    threshold = stats.low_tail_threshold(scores, tail_fraction=args.tail)
    selected = sorted(
        (row for row in rows if row.score <= threshold), key=lambda r: (r.score, r.term)
    )
    if args.top_k is not None:
        selected = selected[: args.top_k]
    with open(args.out_csv, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(row.fields for row in selected)
    print(f"threshold {threshold:.6f} selects {len(selected)} of {len(rows)} terms")
    return EXIT_OK


def cmd_eval(args) -> int:
    _, rows = _read_scores_csv(_require_file(args.scores_csv))
    annotations = ingest.read_annotations(_require_file(args.annotations_csv))
    labels = stats.consolidate_labels(annotations)

    curve = stats.roc(rows, labels)
    all_scores = [row.score for row in rows]
    threshold = stats.low_tail_threshold(all_scores, tail_fraction=args.tail)
    rp = stats.recall_precision_at(threshold, rows, labels)
    prevalence = sum(1 for a in labels if a.label is ingest.Label.IDIOMATIC) / len(labels)
    expected = stats.expected_precision(prevalence, rp.recall, args.tail)

    agreement, kappa = _two_annotator_kappa(annotations)

    h = stats.histogram(all_scores, bins=args.bins)
    ratios = stats.bin_ratio_estimate({r.term: r.score for r in rows}, labels, bins=args.bins)
    estimate = stats.estimate_idiomatic_distribution(h, ratios)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stats.write_roc_csv(curve, out_dir / "roc.csv")
    stats.write_summary_json(
        {
            "auc": curve.auc,
            "threshold": threshold,
            "tail_fraction": args.tail,
            "recall": rp.recall,
            "precision": rp.precision,
            "selected_count": rp.selected_count,
            "expected_precision": expected,
            "prevalence": prevalence,
            "agreement": agreement,
            "kappa": kappa,
            "mean_score": float(np.mean(all_scores)),
            "estimated_idiomatic_mean": estimate.estimated_mean,
        },
        out_dir / "summary.json",
    )
    print(f"auc {curve.auc:.6f}, threshold {threshold:.6f} -> {out_dir}")
    return EXIT_OK


def cmd_hist(args) -> int:
    _, rows = _read_scores_csv(_require_file(args.scores_csv))
    h = stats.histogram([row.score for row in rows], bins=args.bins)
    stats.write_histogram_csv(h, args.out_csv)
    return EXIT_OK


# ---------------------------------------------------------------------------
# shared plumbing


class ScoreRow(NamedTuple):
    """One parsed row of a score CSV, keeping raw fields for re-emission."""

    term: str
    score: float
    fields: list[str]


def _write_scores_csv(ranked: Sequence[ScoredTerm], path: str | Path) -> None:
    width = max((len(s.alphas) for s in ranked), default=2)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ["term", "score"] + [f"alpha{i + 1}" for i in range(width)] + ["degenerate"]
        )
        for s in ranked:
            alphas = [f"{a:.6f}" for a in s.alphas] + [""] * (width - len(s.alphas))
            writer.writerow(
                [s.term, f"{s.score:.6f}", *alphas, "true" if s.degenerate else "false"]
            )


def _read_scores_csv(path: str | Path) -> tuple[list[str], list[ScoreRow]]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or "term" not in header or "score" not in header:
            raise IdiolensError(f"{path}: not a score CSV (need term and score columns)")
        term_idx = header.index("term")
        score_idx = header.index("score")
        rows = []
        for fields in reader:
            if not fields:
                continue
            rows.append(
                ScoreRow(term=fields[term_idx], score=float(fields[score_idx]), fields=fields)
            )
    if not rows:
        raise IdiolensError(f"{path}: no score rows")
    return header, rows


def _two_annotator_kappa(
    annotations: Sequence[ingest.AnnotatedTerm],
) -> tuple[float | None, float | None]:
    """Kappa over the terms labeled by both annotators; None unless exactly two."""
    by_annotator: dict[str, list[ingest.AnnotatedTerm]] = {}
    for ann in annotations:
        by_annotator.setdefault(ann.annotator, []).append(ann)
    if len(by_annotator) != 2:
        return None, None
    first, second = by_annotator.values()
    common = {a.term for a in first} & {a.term for a in second}
    if not common:
        return None, None
    result = stats.cohen_kappa(
        [a for a in first if a.term in common],
        [a for a in second if a.term in common],
    )
    return result.agreement, result.kappa


def _require_file(path: str) -> str:
    if not Path(path).is_file():
        raise IdiolensError(f"{path}: no such file")
    return path


if __name__ == "__main__":
    sys.exit(main())
