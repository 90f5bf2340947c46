"""Command-line interface.

Subcommands: ingest, features, train, tune, detect, ensemble-train,
characterize, filetypes, report. All randomness flows from --seed (or the
BOTMINER_SEED environment variable). Exit codes: 0 success, 1 input
errors, 2 usage errors. A machine-readable "SUMMARY:" line is written to
standard error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import ExitStack
from typing import IO, Iterable

import numpy as np

from . import characterize, detector, forest, namecheck, templates
from .errors import BotminerError
from .features import FEATURE_NAMES, extract_features
from .forest import BOT, HUMAN
from .records import ParseError, ParseStats, group_by_author, read_records, serialize


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _summary(**kv) -> None:
    pairs = " ".join(f"{k}={v}" for k, v in kv.items())
    print(f"SUMMARY: {pairs}", file=sys.stderr)


def _open_input(stack: ExitStack, path: str) -> IO[str]:
    if path == "-":
        return sys.stdin
    return stack.enter_context(open(path, "r", encoding="utf-8"))


def _open_output(stack: ExitStack, path: str | None) -> IO[str]:
    if path is None or path == "-":
        return sys.stdout
    return stack.enter_context(open(path, "w", encoding="utf-8", newline="\n"))


def _load_authors(stack: ExitStack, args) -> tuple[list, ParseStats]:
    stream = _open_input(stack, args.input)
    stats = ParseStats()
    records = list(read_records(stream, on_error=args.on_error, stats=stats))
    return group_by_author(records), stats


def _read_labels(path: str) -> dict[str, int]:
    labels: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0] == "author_id":
                continue
            text = row[1].strip().lower()
            if text not in ("bot", "human", "0", "1"):
                raise ValueError(f"bad label {row[1]!r} for {row[0]!r}")
            labels[row[0]] = BOT if text in ("bot", "1") else HUMAN
    return labels


def _read_features(path: str) -> tuple[list[str], np.ndarray]:
    ids: list[str] = []
    rows: list[list[float]] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[1:] != list(FEATURE_NAMES):
            raise ValueError(f"unexpected feature columns in {path}: {header[1:]}")
        for row in reader:
            ids.append(row[0])
            rows.append([float(v) for v in row[1:]])
    return ids, np.array(rows, dtype=float)


def _join_labels(ids: list[str], labels: dict[str, int]) -> np.ndarray:
    missing = [i for i in ids if i not in labels]
    if missing:
        raise ValueError(f"no label for {len(missing)} authors, e.g. {missing[0]!r}")
    return np.array([labels[i] for i in ids], dtype=int)


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("BOTMINER_SEED", "0"))


def cmd_ingest(args) -> int:
    with ExitStack() as stack:
        stream = _open_input(stack, args.input)
        out = _open_output(stack, args.out)
        stats = ParseStats()
        for rec in read_records(stream, on_error=args.on_error, stats=stats):
            out.write(serialize(rec) + "\n")
    _summary(lines=stats.total, parsed=stats.parsed, skipped=stats.skipped)
    return 0


def cmd_features(args) -> int:
    with ExitStack() as stack:
        authors, stats = _load_authors(stack, args)
        out = _open_output(stack, args.out)
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(("author_id",) + FEATURE_NAMES)
        for author in authors:
            fv = extract_features(author)
            writer.writerow(
                [
                    author.author_id,
                    fv.tot_files_changed,
                    fv.uniq_file_exten,
                    _fmt(fv.std_file_per_commit),
                    _fmt(fv.avg_file_per_commit),
                    fv.tot_uniq_projects,
                    _fmt(fv.median_project_per_commit),
                ]
            )
    _summary(authors=len(authors), skipped=stats.skipped)
    return 0


def cmd_train(args) -> int:
    ids, X = _read_features(args.features)
    y = _join_labels(ids, _read_labels(args.labels))
    config = forest.ForestConfig(
        ntree=args.ntree,
        mtry=args.mtry,
        min_node_size=args.min_node_size,
        seed=_seed(args),
    )
    model = forest.fit(X, y, config, feature_names=FEATURE_NAMES)
    forest.save_model(model, args.out)
    if args.importance_out:
        with open(args.importance_out, "w", encoding="utf-8", newline="\n") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("feature", "importance"))
            for name, imp in zip(model.feature_names, model.importances):
                writer.writerow((name, _fmt(imp)))
    _summary(rows=len(y), ntree=config.ntree, mtry=config.mtry, model=args.out)
    return 0


def cmd_tune(args) -> int:
    ids, X = _read_features(args.features)
    y = _join_labels(ids, _read_labels(args.labels))
    best = forest.grid_tune(
        X,
        y,
        ntree_grid=[int(v) for v in args.ntree_grid.split(",")],
        mtry_grid=[int(v) for v in args.mtry_grid.split(",")],
        folds=args.folds,
        seed=_seed(args),
    )
    print(json.dumps({"ntree": best.ntree, "mtry": best.mtry}))
    _summary(rows=len(y), best_ntree=best.ntree, best_mtry=best.mtry)
    return 0


def cmd_detect(args) -> int:
    with ExitStack() as stack:
        authors, stats = _load_authors(stack, args)
        out = _open_output(stack, args.out)
        combined = args.alignment == "combined"

        if args.method == "bin":
            for author in authors:
                flag = 1 if namecheck.is_bot_name(author.author_id).is_bot else 0
                out.write(f"{author.author_id}\t{flag}\n")
        elif args.method == "bim":
            def score_bim(author):
                ordered = sorted(author.commits, key=lambda c: c.timestamp)
                messages = [c.message for c in ordered]
                picked = [
                    messages[i]
                    for i in templates.subsample_stride(len(messages), args.cap)
                ]
                return templates.template_score(picked, k_b=args.kb, combined=combined)

            for author, grouping in zip(authors, _pmap(score_bim, authors, args.jobs)):
                out.write(
                    f"{author.author_id}\t{_fmt(grouping.score)}\t"
                    f"{len(grouping.templates)}\t{len(author.commits)}\n"
                )
        elif args.method == "bica":
            model = forest.load_model(args.bica_model)
            for author in authors:
                prob = forest.predict_proba(model, extract_features(author).as_array())
                out.write(f"{author.author_id}\t{_fmt(prob)}\n")
        else:  # biman
            bica_model = forest.load_model(args.bica_model)
            ensemble_model = forest.load_model(args.ensemble_model)

            def score(author):
                return detector.score_author(
                    author, bica_model, k_b=args.kb, cap=args.cap, combined=combined
                )

            scores = list(_pmap(score, authors, args.jobs))
            detector.apply_ensemble(scores, ensemble_model, threshold=args.threshold)
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(("author_id", "bin", "bim", "bica", "ensemble", "verdict"))
            for s in scores:
                row = [
                    s.author_id,
                    s.bin_flag,
                    _fmt(s.bim_score),
                    _fmt(s.bica_prob),
                    _fmt(s.ensemble_prob),
                    s.verdict,
                ]
                if args.report_posterior:
                    # Rescale the ensemble probability (trained near a 50/50
                    # base rate) to the supplied prevalence; algebraically the
                    # same as bayes_posterior with sens = spec = prob.
                    p = min(max(s.ensemble_prob, 1e-9), 1 - 1e-9)
                    row.append(
                        _fmt(detector.bayes_posterior(p, p, args.prevalence))
                    )
                writer.writerow(row)
    _summary(authors=len(authors), skipped=stats.skipped, method=args.method)
    return 0


def _pmap(func, items, jobs: int) -> Iterable:
    """Map preserving input order; jobs caps worker parallelism."""
    if jobs <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


def cmd_ensemble_train(args) -> int:
    seed = _seed(args)
    config = forest.ForestConfig(ntree=args.ntree, mtry=args.mtry, seed=seed)
    if args.synthetic:
        rows = detector.synthetic_ensemble_rows(seed=seed)
    else:
        labels = _read_labels(args.labels)
        rows = []
        with open(args.scores, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                s = detector.DetectionScores(
                    author_id=row["author_id"],
                    bin_flag=int(row["bin"]),
                    bim_score=float(row["bim"]),
                    bica_prob=float(row["bica"]),
                )
                rows.append((s, labels[s.author_id]))
    model = detector.ensemble_fit(rows, config)
    forest.save_model(model, args.out)
    _summary(rows=len(rows), model=args.out)
    return 0


def cmd_characterize(args) -> int:
    thresholds = characterize.ClassifierThresholds(
        spike_top3=args.spike_top3,
        continuous_entropy=args.continuous_entropy,
        synchronous_window8=args.synchronous_window8,
        min_commits=args.min_commits,
    )
    with ExitStack() as stack:
        authors, stats = _load_authors(stack, args)
        out = _open_output(stack, args.out)
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            ("author_id", "class", "total", "entropy_norm", "top3_share", "window8_share")
        )
        skipped_small = 0
        for author in authors:
            profile = characterize.ActivityProfile.from_author(author)
            if profile.total < args.min_commits:
                skipped_small += 1
                continue
            cls = characterize.classify_profile(profile, thresholds)
            writer.writerow(
                (
                    author.author_id,
                    cls,
                    profile.total,
                    _fmt(profile.entropy_norm),
                    _fmt(profile.top3_share),
                    _fmt(profile.best_window8_share),
                )
            )
            if args.svg_dir:
                os.makedirs(args.svg_dir, exist_ok=True)
                digest = hashlib.sha1(author.author_id.encode("utf-8")).hexdigest()
                name = f"{digest[:16]}.svg"
                svg_path = os.path.join(args.svg_dir, name)
                with open(svg_path, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(characterize.render_radial_svg(profile))
    _summary(
        authors=len(authors),
        classified=len(authors) - skipped_small,
        below_min_commits=skipped_small,
        skipped=stats.skipped,
    )
    return 0


def cmd_filetypes(args) -> int:
    table = (
        characterize.LanguageTable.from_file(args.table)
        if args.table
        else characterize.LanguageTable.default()
    )
    with ExitStack() as stack:
        authors, stats = _load_authors(stack, args)
        out = _open_output(stack, args.out)
        counts = characterize.file_type_histogram(authors, table)
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(("category", "authors"))
        for cat in sorted(counts, key=lambda c: (-counts[c], c)):
            writer.writerow((cat, counts[cat]))
    _summary(authors=len(authors), categories=len(counts), skipped=stats.skipped)
    return 0


def cmd_report(args) -> int:
    with open(args.scores, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"no score rows in {args.scores}")
    n = len(rows)
    with ExitStack() as stack:
        out = _open_output(stack, args.out)
        out.write(f"authors: {n}\n")
        out.write(f"bin flagged: {sum(int(r['bin']) for r in rows)}\n")
        if "verdict" in rows[0]:
            bots = sum(r["verdict"] == "bot" for r in rows)
            out.write(f"ensemble verdict bot: {bots} ({_fmt(bots / n)})\n")
        if args.labels:
            labels = _read_labels(args.labels)
            y = [labels[r["author_id"]] for r in rows]
            for col in ("bim", "bica", "ensemble"):
                if col in rows[0]:
                    scores = [float(r[col]) for r in rows]
                    out.write(f"AUC({col}): {_fmt(forest.auc(scores, y))}\n")
            if "ensemble" in rows[0]:
                scores = [float(r["ensemble"]) for r in rows]
                point = forest.select_threshold(forest.roc_points(scores, y))
                out.write(
                    f"closest-topleft threshold: {_fmt(point.threshold)} "
                    f"sensitivity: {_fmt(point.sensitivity)} "
                    f"specificity: {_fmt(point.specificity)}\n"
                )
                posterior = detector.bayes_posterior(
                    min(max(point.sensitivity, 1e-9), 1 - 1e-9),
                    min(max(point.specificity, 1e-9), 1 - 1e-9),
                    args.prevalence,
                )
                out.write(
                    f"posterior P(bot|flagged) at prevalence "
                    f"{_fmt(args.prevalence)}: {_fmt(posterior)}\n"
                )
    _summary(authors=n)
    return 0


def _add_io_args(p, output=True):
    p.add_argument("--input", required=True, help="record file, or - for stdin")
    if output:
        p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument(
        "--on-error",
        choices=("skip", "abort"),
        default="abort",
        help="policy for malformed input lines",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="botminer",
        description="Detect and characterize bot authors in commit data.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("ingest", help="validate and canonicalize a record file")
    _add_io_args(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("features", help="per-author predictor CSV")
    _add_io_args(p)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="train the feature-based forest")
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--importance-out", default=None)
    p.add_argument("--ntree", type=int, default=100)
    p.add_argument("--mtry", type=int, default=2)
    p.add_argument("--min-node-size", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("tune", help="grid-search ntree/mtry by cross-validation")
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--ntree-grid", default="50,100,200")
    p.add_argument("--mtry-grid", default="1,2,3")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("detect", help="score authors with one or all detectors")
    p.add_argument(
        "--method", choices=("bin", "bim", "bica", "biman"), default="biman"
    )
    _add_io_args(p)
    p.add_argument("--bica-model", default=None)
    p.add_argument("--ensemble-model", default=None)
    p.add_argument("--kb", type=float, default=templates.DEFAULT_KB)
    p.add_argument("--cap", type=int, default=templates.DEFAULT_CAP)
    p.add_argument("--alignment", choices=("combined", "global"), default="combined")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--report-posterior", action="store_true")
    p.add_argument("--prevalence", type=float, default=0.01)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("ensemble-train", help="train the ensemble forest")
    p.add_argument("--scores", default=None, help="biman scores CSV")
    p.add_argument("--labels", default=None)
    p.add_argument(
        "--synthetic",
        action="store_true",
        help="use the built-in 134-row synthetic fixture",
    )
    p.add_argument("--out", required=True)
    p.add_argument("--ntree", type=int, default=100)
    p.add_argument("--mtry", type=int, default=2)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_ensemble_train)

    p = sub.add_parser("characterize", help="activity-pattern classes for active bots")
    _add_io_args(p)
    p.add_argument("--min-commits", type=int, default=1000)
    p.add_argument("--svg-dir", default=None)
    p.add_argument("--spike-top3", type=float, default=0.75)
    p.add_argument("--continuous-entropy", type=float, default=0.90)
    p.add_argument("--synchronous-window8", type=float, default=0.70)
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("filetypes", help="authors per file-type category")
    _add_io_args(p)
    p.add_argument("--table", default=None, help="extension,category CSV override")
    p.set_defaults(func=cmd_filetypes)

    p = sub.add_parser("report", help="summarize a biman scores CSV")
    p.add_argument("--scores", required=True)
    p.add_argument("--labels", default=None)
    p.add_argument("--prevalence", type=float, default=0.01)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "detect":
        if args.method in ("bica", "biman") and not args.bica_model:
            parser.error("--bica-model is required for methods bica and biman")
        if args.method == "biman" and not args.ensemble_model:
            parser.error("--ensemble-model is required for method biman")
    if args.subcommand == "ensemble-train" and not args.synthetic:
        if not (args.scores and args.labels):
            parser.error("ensemble-train needs --scores and --labels, or --synthetic")
    try:
        return args.func(args)
    except (ParseError, BotminerError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        _summary(error=type(exc).__name__)
        return 1


if __name__ == "__main__":
    sys.exit(main())
