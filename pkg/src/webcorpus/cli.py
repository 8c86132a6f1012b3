"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 corrupt input,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dedup as dedup_mod
from . import energy, filters, fixtures, langid, noisiness, pipeline, stats
from .errors import ArchiveCorruptError, ConfigError, WebcorpusError
from .wet import RecordType, line_from_text, read_records, split_lines

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_CORRUPT = 2
EXIT_VERIFY = 3


def _read_lines(path: Path):
    for text in path.read_text(encoding="utf-8").splitlines():
        yield line_from_text(text)


def _parse_policy(kind: str, threshold: int) -> filters.FilterPolicy:
    if kind == "chars":
        return filters.FilterPolicy.char_at_least(threshold)
    if kind == "bytes":
        return filters.FilterPolicy.byte_exceeding(threshold)
    raise ConfigError(f"unknown filter kind {kind!r}")


def _cmd_pipeline(args) -> int:
    cfg: dict = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc

    # CLI flags override their config-file counterparts.
    inputs = [Path(p) for p in (args.input or cfg.get("input_paths", []))]
    output = Path(args.output or cfg.get("output_dir", ""))
    if not inputs or not str(output):
        raise ConfigError("pipeline needs input archives and an output directory")
    filter_cfg = cfg.get("filter_policy", {})
    kind = args.filter_kind
    if kind is None:
        raw = filter_cfg.get("kind", "chars")
        aliases = {
            "chars": "chars",
            "char_at_least": "chars",
            "bytes": "bytes",
            "byte_exceeding": "bytes",
        }
        kind = aliases.get(raw)
        if kind is None:
            raise ConfigError(f"unknown filter kind {raw!r} in config")
    threshold = args.filter_threshold or filter_cfg.get("threshold", 100)
    train_corpora = {
        lang: Path(p)
        for lang, p in (cfg.get("train_corpora") or {}).items()
    }
    for item in args.train_corpus or []:
        lang, _, path = item.partition("=")
        if not path:
            raise ConfigError(f"--train-corpus wants LANG=PATH, got {item!r}")
        train_corpora[lang] = Path(path)
    model_path = args.model or cfg.get("model_path")
    if args.train_corpus:
        model_path = None  # explicit training request wins

    config = pipeline.PipelineConfig(
        input_paths=inputs,
        output_dir=output,
        model_path=Path(model_path) if model_path else None,
        train_corpora=train_corpora,
        filter_policy=_parse_policy(kind, int(threshold)),
        route_threshold=(
            args.route_threshold
            if args.route_threshold is not None
            else cfg.get("route_threshold", langid.DEFAULT_ROUTE_THRESHOLD)
        ),
        partitions=args.partitions or cfg.get("partitions", 1),
        seed=args.seed if args.seed is not None else cfg.get("seed", 0),
        workers=args.workers or cfg.get("workers", 0),
    )
    manifest = pipeline.run_pipeline(config)
    totals = manifest["totals"]
    print(f"wrote {output}: {totals['kept_lines']} lines kept across "
          f"{len(manifest['languages'])} languages "
          f"(filter -{totals['dropped_by_filter']}, dedup -{totals['dropped_as_duplicate']}, "
          f"discarded -{totals['discarded_unclassified']}, empty -{totals['empty_lines']})")
    return EXIT_OK


def _cmd_ingest(args) -> int:
    summary = {"records": 0, "conversion": 0, "skipped": 0, "replacements": 0, "lines": 0}
    with open(args.archive, "rb") as stream:
        for record in read_records(stream):
            summary["records"] += 1
            summary["replacements"] += record.replacements
            if record.record_type is RecordType.CONVERSION:
                summary["conversion"] += 1
                for line in split_lines(record):
                    summary["lines"] += 1
                    if args.emit_lines:
                        print(line.text)
            else:
                summary["skipped"] += 1
    if not args.emit_lines:
        print(json.dumps(summary, indent=2))
    return EXIT_OK


def _cmd_train_langid(args) -> int:
    corpora = {}
    for item in args.corpus:
        lang, _, path = item.partition("=")
        if not path:
            raise ConfigError(f"--corpus wants LANG=PATH, got {item!r}")
        corpora[lang] = Path(path).read_text(encoding="utf-8").splitlines()
    model = langid.train(
        corpora,
        ngram_range=(args.ngram_min, args.ngram_max),
        bucket_count=args.buckets,
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        seed=args.seed,
    )
    langid.save_model(model, args.output)
    print(f"trained {len(model.labels)} languages -> {args.output}")
    return EXIT_OK


def _cmd_classify(args) -> int:
    model = langid.load_model(args.model)
    if args.text is not None:
        lines = [args.text]
    else:
        lines = Path(args.input).read_text(encoding="utf-8").splitlines()
    for text in lines:
        prediction = langid.classify(model, text)
        routed = langid.route(prediction, args.threshold)
        print(json.dumps({
            "text": text if len(text) <= 60 else text[:57] + "...",
            "top": prediction.top,
            "top_prob": round(prediction.top_prob, 6),
            "routed": routed,
        }))
    return EXIT_OK


def _cmd_filter_compare(args) -> int:
    report = filters.compare_policies(
        _read_lines(Path(args.input)),
        filters.FilterPolicy.char_at_least(args.char_threshold),
        filters.FilterPolicy.byte_exceeding(args.byte_threshold),
    )
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK


def _cmd_dedup(args) -> int:
    dd = dedup_mod.LineDeduplicator(args.partitions)
    with open(args.output, "w", encoding="utf-8", newline="\n") as out:
        for line in _read_lines(Path(args.input)):
            if dd.admit(line):
                out.write(line.text)
                out.write("\n")
    print(f"kept {dd.kept_count}, dropped {dd.dropped_count} duplicates "
          f"({args.partitions} partitions, {dedup_mod.DIGEST_ALGORITHM})")
    return EXIT_OK


def _cmd_stats(args) -> int:
    rows = []
    for path in args.input:
        path = Path(path)
        rows.append((args.label or path.name, stats.count(_read_lines(path))))
    if args.json:
        print(json.dumps({name: s.to_dict() for name, s in rows}, indent=2))
    else:
        print(stats.render_stats_table(rows))
    return EXIT_OK


def _cmd_noise(args) -> int:
    dictionary = noisiness.load_dictionary(args.dict, language=args.language)
    corpus = list(_read_lines(Path(args.corpus)))
    sample = noisiness.sample_lines(corpus, args.budget, seed=args.seed)
    report = noisiness.audit_tokens(
        sample,
        dictionary,
        corpus_name=Path(args.corpus).name,
        word_budget=args.budget,
        seed=args.seed,
    )
    print(json.dumps(report.to_dict(), indent=2))
    print()
    print(noisiness.render_report(report))
    return EXIT_OK


def _cmd_energy(args) -> int:
    runs = energy.load_run_specs(args.spec)
    reports = [
        energy.estimate(profile, hours, pue=args.pue, grid_intensity=args.grid, label=label)
        for profile, hours, label in runs
    ]
    print(energy.render_energy_table(reports))
    return EXIT_OK


def _cmd_verify(args) -> int:
    output_dir = Path(args.output_dir)
    manifest_path = Path(args.manifest) if args.manifest else output_dir / "manifest.json"
    manifest = pipeline.load_manifest(manifest_path)
    violations = pipeline.verify_manifest(manifest, output_dir)
    if violations:
        for v in violations:
            print(f"VIOLATION: {v}")
        return EXIT_VERIFY
    print("ok")
    return EXIT_OK


def _cmd_fixtures(args) -> int:
    spec = fixtures.FixtureSpec(
        languages=tuple(args.languages.split(",")),
        docs_per_language=args.docs,
        lines_per_doc=args.lines,
        char_range=(args.min_chars, args.max_chars),
        duplicate_rate=args.duplicate_rate,
        seed=args.seed,
    )
    archive_path, ledger_path = fixtures.write_fixture(spec, args.output, name=args.name)
    print(f"wrote {archive_path} and {ledger_path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="webcorpus",
        description="Build and audit per-language text corpora from WET-style crawl archives.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pipeline", help="run the full ingest->classify->filter->dedup pipeline")
    p.add_argument("--config", help="JSON config file; flags below override it")
    p.add_argument("--input", action="append", help="input archive (repeatable)")
    p.add_argument("--output", help="output directory")
    p.add_argument("--model", help="trained language model file")
    p.add_argument("--train-corpus", action="append", metavar="LANG=PATH",
                   help="train the classifier from these corpora instead of --model")
    p.add_argument("--filter-kind", choices=["chars", "bytes"],
                   help="length filter: chars (keep >= N chars) or bytes (keep > N bytes)")
    p.add_argument("--filter-threshold", type=int, help="length filter threshold (default 100)")
    p.add_argument("--route-threshold", type=float,
                   help="minimum classifier confidence to keep a line (default 0.8)")
    p.add_argument("--partitions", type=int, help="dedup digest partitions (default 1)")
    p.add_argument("--seed", type=int, help="seed for inline training")
    p.add_argument("--workers", type=int,
                   help=f"parallel archive workers (default ${pipeline.WORKERS_ENV_VAR} or 1)")
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("ingest", help="parse one archive and summarize its records")
    p.add_argument("archive")
    p.add_argument("--emit-lines", action="store_true", help="print the split lines instead")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("train-langid", help="train the language classifier")
    p.add_argument("--corpus", action="append", required=True, metavar="LANG=PATH")
    p.add_argument("--output", required=True)
    p.add_argument("--ngram-min", type=int, default=langid.DEFAULT_NGRAM_RANGE[0])
    p.add_argument("--ngram-max", type=int, default=langid.DEFAULT_NGRAM_RANGE[1])
    p.add_argument("--buckets", type=int, default=langid.DEFAULT_BUCKET_COUNT)
    p.add_argument("--epochs", type=int, default=langid.DEFAULT_EPOCHS)
    p.add_argument("--learning-rate", type=float, default=langid.DEFAULT_LEARNING_RATE)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_train_langid)

    p = sub.add_parser("classify", help="classify lines with a trained model")
    p.add_argument("--model", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text")
    group.add_argument("--input")
    p.add_argument("--threshold", type=float, default=langid.DEFAULT_ROUTE_THRESHOLD)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("filter-compare", help="compare the char vs byte length filters")
    p.add_argument("--input", required=True)
    p.add_argument("--char-threshold", type=int, default=100)
    p.add_argument("--byte-threshold", type=int, default=100)
    p.set_defaults(func=_cmd_filter_compare)

    p = sub.add_parser("dedup", help="deduplicate a line file, first occurrence wins")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--partitions", type=int, default=1)
    p.set_defaults(func=_cmd_dedup)

    p = sub.add_parser("stats", help="corpus size table (bytes/tokens/words/sentences)")
    p.add_argument("--input", action="append", required=True)
    p.add_argument("--label", help="row label (defaults to the file name)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("noise", help="out-of-vocabulary audit of a corpus sample")
    p.add_argument("--corpus", required=True)
    p.add_argument("--dict", required=True)
    p.add_argument("--language", default="und")
    p.add_argument("--budget", type=int, default=noisiness.DEFAULT_WORD_BUDGET)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_noise)

    p = sub.add_parser("energy", help="training energy and CO2e table")
    p.add_argument("--spec", required=True, help='JSON list of {"label","hours","profile"}')
    p.add_argument("--pue", type=float, default=energy.DEFAULT_PUE)
    p.add_argument("--grid", type=float, default=energy.DEFAULT_GRID_INTENSITY)
    p.set_defaults(func=_cmd_energy)

    p = sub.add_parser("verify", help="recheck pipeline outputs against their manifest")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--manifest", help="defaults to <output-dir>/manifest.json")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("fixtures", help="generate a synthetic WET archive plus ledger")
    p.add_argument("--output", required=True)
    p.add_argument("--name", default="fixture")
    p.add_argument("--languages", default="aa,bb", help="comma-separated labels")
    p.add_argument("--docs", type=int, default=10, help="documents per language")
    p.add_argument("--lines", type=int, default=10, help="lines per document")
    p.add_argument("--min-chars", type=int, default=60)
    p.add_argument("--max-chars", type=int, default=160)
    p.add_argument("--duplicate-rate", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_fixtures)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArchiveCorruptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except WebcorpusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
