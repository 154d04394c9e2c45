"""Command-line interface.

Exit status: 0 on success, 2 on bad input (unreadable files, malformed
corpora or models, invalid arguments), 1 on internal errors. Failures print a
single JSON line prefixed with ``error:`` to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .datagen import generate, load_banks
from .dataset import BloomLevel, class_distribution, infer_format, load_corpus, save_corpus
from .errors import EmptyText, InputError
from .evaluation import corpus_stats, emit_report, parse_report, stats_summary_csv, stats_summary_text
from .experiments import PRESETS, RunConfig, resolve, run, stage, write_artifacts
from .models import load_model
from .textmetrics import compute_metrics, tokenize

log = logging.getLogger("bloomclf")


class CommandError(Exception):
    def __init__(self, message, code=2):
        super().__init__(message)
        self.code = code


def _write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# -- analyze ---------------------------------------------------------------

def cmd_analyze(args) -> int:
    corpus = load_corpus(args.corpus)
    metrics = []
    for i, rec in enumerate(corpus, start=1):
        try:
            metrics.append(compute_metrics(tokenize(rec.text)))
        except EmptyText:
            raise EmptyText(f"record {i} has no word tokens") from None
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "label", "L", "FKGL", "TTR", "LD"])
    for i, (rec, m) in enumerate(zip(corpus, metrics), start=1):
        w.writerow([i, rec.level.label, m.length_l, repr(m.fkgl), repr(m.ttr), repr(m.ld)])
    _write_text(args.output, buf.getvalue())

    levels = [r.level for r in corpus]
    stats = corpus_stats(levels, metrics)
    summary = args.summary or Path(args.output).with_name(Path(args.output).stem + "_summary.csv")
    _write_text(summary, stats_summary_csv(stats))
    if args.figures:
        from .plotting import analysis_figures

        analysis_figures(levels, metrics, stats.correlations["L~FKGL"], args.figures)
    sys.stdout.write(stats_summary_text(stats))
    return 0


# -- experiments -----------------------------------------------------------

def _resolve_from_args(args, experiment) -> RunConfig:
    return resolve(
        experiment, args.corpus, args.seed, args.split_fraction,
        scheme=args.scheme, model=args.model, features=args.features, balance=args.balance,
        sublinear_tf=args.sublinear_tf, min_df=args.min_df, metric_scaling=args.metric_scaling,
        l2_lambda=args.l2_lambda, learning_rate=args.learning_rate, max_iters=args.max_iters,
        tol=args.tol, epochs=args.epochs, alpha=args.alpha,
    )


def _run_and_write(cfg: RunConfig, out_dir, fmt, figures):
    result = run(cfg)
    with stage("write"):
        write_artifacts(result, out_dir, fmt, figures)
    rep = result.report
    print(f"{cfg.experiment}: {cfg.model}/{cfg.features['mode']}/{cfg.scheme} "
          f"accuracy={rep.accuracy:.4f} macro_f1={rep.macro_f1:.4f} -> {out_dir}")
    return result


def cmd_experiment(args) -> int:
    cfg = _resolve_from_args(args, args.name)
    out_dir = args.out_dir or Path("runs") / args.name
    _run_and_write(cfg, out_dir, args.format, args.figures)
    return 0


def cmd_ladder(args) -> int:
    root = Path(args.out_dir or "runs")
    reports = []
    for name in PRESETS:
        cfg = _resolve_from_args(args, name)
        reports.append(_run_and_write(cfg, root / name, args.format, args.figures).report)
    _write_text(root / "comparison.md", emit_report(reports, "markdown"))
    print(f"comparison -> {root / 'comparison.md'}")
    return 0


def cmd_replay(args) -> int:
    with open(args.manifest, encoding="utf-8") as fh:
        try:
            cfg = RunConfig.from_json(fh.read())
        except (json.JSONDecodeError, TypeError) as exc:
            raise CommandError(f"invalid manifest {args.manifest}: {exc}") from None
    if not args.allow_changed_corpus:
        from .experiments import file_sha256

        if file_sha256(cfg.corpus) != cfg.corpus_sha256:
            raise CommandError(f"corpus {cfg.corpus} changed since the manifest was written")
    _run_and_write(cfg, args.out_dir, args.format, args.figures)
    return 0


def cmd_compare(args) -> int:
    reports = []
    for path in args.reports:
        with open(path, encoding="utf-8") as fh:
            loaded = parse_report(fh.read())
        reports.extend(loaded if isinstance(loaded, list) else [loaded])
    sys.stdout.write(emit_report(reports, "markdown"))
    return 0


# -- predict ---------------------------------------------------------------

def _read_texts(path) -> list[str]:
    fmt = infer_format(path)
    with open(path, encoding="utf-8", newline="") as fh:
        if fmt == "jsonl":
            return [json.loads(line)["text"] for line in fh if line.strip()]
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "text" not in reader.fieldnames:
            raise CommandError(f"{path}: CSV input needs a 'text' column")
        return [row["text"] for row in reader]


def cmd_predict(args) -> int:
    model = load_model(args.model)
    names = model.scheme.class_names
    texts = [args.text] if args.text is not None else _read_texts(args.corpus)
    rows, failed = [], 0
    for i, text in enumerate(texts):
        try:
            x = model.featurize([text])
        except EmptyText:
            failed += 1
            log.warning("input %d has no word tokens; skipped", i + 1)
            continue
        label = names[int(model.predict(x)[0])]
        proba = model.predict_proba(x)
        rows.append((i + 1, label, None if proba is None else proba[0]))
    if texts and failed == len(texts):
        raise CommandError("no input could be classified")
    out = sys.stdout
    if args.text is not None:
        for _, label, proba in rows:
            line = label
            if args.proba and proba is not None:
                line += "\t" + "\t".join(f"{n}={p:.6f}" for n, p in zip(names, proba))
            out.write(line + "\n")
    else:
        w = csv.writer(out, lineterminator="\n")
        with_proba = model.kind != "linear_svc"
        w.writerow(["id", "predicted"] + ([f"p_{n}" for n in names] if with_proba else []))
        for idx, label, proba in rows:
            w.writerow([idx, label] + ([repr(float(p)) for p in proba] if with_proba else []))
    return 0


# -- datagen ---------------------------------------------------------------

def cmd_datagen(args) -> int:
    banks = load_banks(args.banks)
    corpus = generate(args.n_per_level, args.seed, banks)
    try:
        save_corpus(corpus, args.output)
    except OSError as exc:
        raise CommandError(f"cannot write {args.output}: {exc.strerror}") from None
    dist = class_distribution(corpus)
    for level in BloomLevel:
        print(f"{level.label}\t{dist[level]}")
    print(f"Total\t{len(corpus)}")
    return 0


# -- parser ----------------------------------------------------------------

def _add_run_options(p):
    p.add_argument("--corpus", required=True, help="labeled corpus (CSV text,label or JSONL)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--split-fraction", type=float, default=0.2, help="validation share per class")
    p.add_argument("--scheme", choices=["Full6", "Merged4", "Merged3"])
    p.add_argument("--features", choices=["metrics", "tfidf", "both", "counts"])
    p.add_argument("--model", choices=["logreg", "naive_bayes", "linear_svc"])
    p.add_argument("--out-dir")
    p.add_argument("--format", choices=["json", "markdown", "both"], default="both")
    p.add_argument("--balance", action=argparse.BooleanOptionalAction, default=None,
                   help="downsample to equal class sizes (preset default: on for exp1-3)")
    p.add_argument("--figures", action="store_true", help="also render a confusion-matrix PNG")
    g = p.add_argument_group("feature options")
    g.add_argument("--sublinear-tf", action="store_true")
    g.add_argument("--min-df", type=int, default=1)
    g.add_argument("--metric-scaling", choices=["zscore", "none"], default="zscore")
    g = p.add_argument_group("hyperparameters (defaults depend on the model)")
    g.add_argument("--l2-lambda", type=float)
    g.add_argument("--learning-rate", type=float)
    g.add_argument("--max-iters", type=int)
    g.add_argument("--tol", type=float)
    g.add_argument("--epochs", type=int)
    g.add_argument("--alpha", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bloomclf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="per-question metrics and per-level summary")
    p.add_argument("--corpus", required=True)
    p.add_argument("--output", required=True, help="metrics CSV to write")
    p.add_argument("--summary", help="per-level summary CSV (default: <output>_summary.csv)")
    p.add_argument("--figures", metavar="DIR", help="render per-level box plots and L/FKGL scatter here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("experiment", help="run one experiment preset")
    p.add_argument("name", choices=sorted(PRESETS))
    _add_run_options(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("ladder", help="run exp1-exp5 and write a comparison table")
    _add_run_options(p)
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("replay", help="re-run an experiment from its manifest")
    p.add_argument("manifest")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--format", choices=["json", "markdown", "both"], default="both")
    p.add_argument("--figures", action="store_true")
    p.add_argument("--allow-changed-corpus", action="store_true")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("compare", help="comparative table from JSON reports")
    p.add_argument("reports", nargs="+")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("predict", help="classify questions with a saved model")
    p.add_argument("--model", required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--text")
    src.add_argument("--corpus", help="CSV with a text column, or JSONL")
    p.add_argument("--proba", action="store_true", help="print class probabilities with --text")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("datagen", help="generate a synthetic labeled corpus")
    p.add_argument("--n-per-level", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--banks", help="verb/template/topic bank file (default: bundled)")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_datagen)
    return parser


def _error_line(exc, code) -> str:
    payload = {"error": type(exc).__name__, "exit_code": code, "message": str(exc)}
    if getattr(exc, "stage", None):
        payload["stage"] = exc.stage
    if isinstance(exc, OSError) and exc.filename:
        payload["message"] = f"{exc.strerror}: {exc.filename}"
        payload["path"] = str(exc.filename)
    return "error: " + json.dumps(payload)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, CommandError, OSError, ValueError, KeyError) as exc:
        code = getattr(exc, "code", 2) if isinstance(exc, CommandError) else 2
        print(_error_line(exc, code), file=sys.stderr)
        return code
    except Exception as exc:  # noqa: BLE001
        print(_error_line(exc, 1), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
