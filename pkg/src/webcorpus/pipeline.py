"""End-to-end corpus construction: ingest -> split -> classify -> filter
-> dedup -> write.

Each archive streams through record ingestion, per-line language
classification, the configured length filter, and per-language exact
deduplication; kept lines land in one plain UTF-8 text file per
language (no metadata interleaved). A JSON manifest records the config
snapshot, per-archive and per-language counters, corpus stats, and
output digests, and reconciles exactly: every line read is kept,
dropped by the filter, dropped as a duplicate, discarded as
unclassifiable/low-confidence, or empty.

Outputs are built in a temp directory next to the target and promoted
by rename, so a killed run leaves the target untouched. Given the same
inputs, model, and config, reruns are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import shutil
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import dedup as dedup_mod
from . import filters, langid, stats
from .errors import ConfigError
from .wet import Line, RecordType, read_records, split_lines

TOOL_NAME = "webcorpus"
TOOL_VERSION = "0.1.0"
STAGE_ORDER = ("ingest", "split", "classify", "filter", "dedup", "write")
WORKERS_ENV_VAR = "WEBCORPUS_WORKERS"

_LABEL_RE = re.compile(r"^[A-Za-z0-9_-]+$")


@dataclass
class PipelineConfig:
    input_paths: list[Path]
    output_dir: Path
    model_path: Path | None = None
    train_corpora: dict[str, Path] = field(default_factory=dict)
    filter_policy: filters.FilterPolicy = field(
        default_factory=filters.FilterPolicy.char_at_least
    )
    route_threshold: float = langid.DEFAULT_ROUTE_THRESHOLD
    partitions: int = 1
    seed: int = 0
    workers: int = 0  # 0 = take WEBCORPUS_WORKERS, default 1

    def __post_init__(self):
        self.input_paths = [Path(p) for p in self.input_paths]
        self.output_dir = Path(self.output_dir)
        if self.partitions < 1:
            raise ConfigError(f"partitions must be >= 1, got {self.partitions}")
        if not 0.0 <= self.route_threshold <= 1.0:
            raise ConfigError(f"route threshold must be in [0, 1], got {self.route_threshold}")
        out = self.output_dir.resolve()
        for p in self.input_paths:
            if p.resolve() == out:
                raise ConfigError(f"output_dir {out} collides with input path {p}")
        if (self.model_path is None) == (not self.train_corpora):
            raise ConfigError("provide exactly one of model_path or train_corpora")

    def effective_workers(self) -> int:
        if self.workers > 0:
            return self.workers
        env = os.environ.get(WORKERS_ENV_VAR, "")
        try:
            return max(1, int(env)) if env else 1
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV_VAR} must be an integer, got {env!r}") from None

    def snapshot(self) -> dict:
        return {
            "input_paths": [str(p) for p in self.input_paths],
            "output_dir": str(self.output_dir),
            "model_path": str(self.model_path) if self.model_path else None,
            "train_corpora": {k: str(v) for k, v in sorted(self.train_corpora.items())},
            "filter_policy": {
                "kind": self.filter_policy.kind.value,
                "threshold": self.filter_policy.threshold,
            },
            "route_threshold": self.route_threshold,
            "partitions": self.partitions,
            "seed": self.seed,
        }


@dataclass
class _ArchiveResult:
    path: str
    records_read: int = 0
    conversion_records: int = 0
    skipped_records: int = 0
    malformed_records: int = 0  # reader aborts on malformed input; kept for shape
    replacements: int = 0
    lines_read: int = 0
    empty_lines: int = 0
    discarded: dict[str, int] = field(default_factory=dict)
    dropped_by_filter: dict[str, int] = field(default_factory=dict)
    dropped_by_reason: dict[str, int] = field(default_factory=dict)
    # char-vs-byte policy comparison over all non-empty lines
    disparity: filters.DisparityReport | None = None
    # (language, line) pairs that survived classify+filter, archive order
    routed: list[tuple[str, Line]] = field(default_factory=list)
    timing: dict[str, float] = field(default_factory=dict)


def _process_archive(
    path: Path,
    model: langid.LangModel,
    policy: filters.FilterPolicy,
    threshold: float,
) -> _ArchiveResult:
    result = _ArchiveResult(path=str(path))
    # Run both length semantics side by side at the configured threshold
    # so the manifest quantifies their disagreement on this crawl.
    policy_chars = filters.FilterPolicy.char_at_least(policy.threshold)
    policy_bytes = filters.FilterPolicy.byte_exceeding(policy.threshold)
    result.disparity = filters.DisparityReport(
        policy_chars.describe(), policy_bytes.describe()
    )
    timing = {stage: 0.0 for stage in ("ingest", "split", "classify", "filter")}
    with open(path, "rb") as stream:
        t_rec = time.perf_counter()
        for record in read_records(stream):
            timing["ingest"] += time.perf_counter() - t_rec
            result.records_read += 1
            result.replacements += record.replacements
            if record.record_type is not RecordType.CONVERSION:
                result.skipped_records += 1
                t_rec = time.perf_counter()
                continue
            result.conversion_records += 1
            t0 = time.perf_counter()
            lines = list(split_lines(record))
            timing["split"] += time.perf_counter() - t0
            for line in lines:
                result.lines_read += 1
                if not line.text.strip():
                    result.empty_lines += 1
                    continue
                result.disparity.observe(
                    filters.apply(policy_chars, line) is None,
                    filters.apply(policy_bytes, line) is None,
                )
                t0 = time.perf_counter()
                prediction = langid.classify(model, line)
                lang = langid.route(prediction, threshold)
                timing["classify"] += time.perf_counter() - t0
                if lang is None:
                    top = prediction.top
                    result.discarded[top] = result.discarded.get(top, 0) + 1
                    continue
                t0 = time.perf_counter()
                reason = filters.apply(policy, line)
                timing["filter"] += time.perf_counter() - t0
                if reason is not None:
                    result.dropped_by_filter[lang] = result.dropped_by_filter.get(lang, 0) + 1
                    result.dropped_by_reason[reason.value] = (
                        result.dropped_by_reason.get(reason.value, 0) + 1
                    )
                    continue
                result.routed.append((lang, line))
            t_rec = time.perf_counter()
    result.timing = timing
    return result


def _load_or_train_model(config: PipelineConfig) -> tuple[langid.LangModel, bool]:
    if config.model_path is not None:
        if not config.model_path.is_file():
            raise ConfigError(f"model file not found: {config.model_path}")
        return langid.load_model(config.model_path), False
    corpora = {}
    for lang, path in config.train_corpora.items():
        if not _LABEL_RE.match(lang):
            raise ConfigError(f"language label {lang!r} is not filename-safe")
        if not Path(path).is_file():
            raise ConfigError(f"training corpus not found: {path}")
        corpora[lang] = Path(path).read_text(encoding="utf-8").splitlines()
    return langid.train(corpora, seed=config.seed), True


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def run_pipeline(config: PipelineConfig) -> dict:
    """Run the full pipeline; returns the manifest (also written to
    output_dir/manifest.json)."""
    for path in config.input_paths:
        if not path.is_file():
            raise ConfigError(f"input archive not readable: {path}")

    out_dir = config.output_dir
    if out_dir.exists():
        if any(out_dir.iterdir()) and not (out_dir / "manifest.json").is_file():
            raise ConfigError(
                f"output_dir {out_dir} exists, is not empty, and does not look "
                "like a previous run; refusing to overwrite"
            )

    model, trained_here = _load_or_train_model(config)
    for label in model.labels:
        if not _LABEL_RE.match(label):
            raise ConfigError(f"model label {label!r} is not filename-safe")

    started = time.time()
    workers = config.effective_workers()
    # Stage 1 (parallel over archives): ingest/split/classify/filter.
    if workers > 1 and len(config.input_paths) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    lambda p: _process_archive(
                        p, model, config.filter_policy, config.route_threshold
                    ),
                    config.input_paths,
                )
            )
    else:
        results = [
            _process_archive(p, model, config.filter_policy, config.route_threshold)
            for p in config.input_paths
        ]

    # Stage 2 (sequential, archive order): per-language dedup and write.
    tmp_dir = Path(tempfile.mkdtemp(prefix=out_dir.name + ".partial.", dir=out_dir.parent))
    try:
        dedups: dict[str, dedup_mod.LineDeduplicator] = {}
        lang_stats: dict[str, stats.StatsAccumulator] = {}
        handles: dict[str, object] = {}
        t0 = time.perf_counter()
        dedup_time = 0.0
        try:
            for result in results:
                for lang, line in result.routed:
                    t1 = time.perf_counter()
                    dd = dedups.get(lang)
                    if dd is None:
                        dd = dedups[lang] = dedup_mod.LineDeduplicator(config.partitions)
                    first = dd.admit(line)
                    dedup_time += time.perf_counter() - t1
                    if not first:
                        continue
                    handle = handles.get(lang)
                    if handle is None:
                        handle = handles[lang] = open(
                            tmp_dir / f"{lang}.txt", "w", encoding="utf-8", newline="\n"
                        )
                    handle.write(line.text)
                    handle.write("\n")
                    acc = lang_stats.get(lang)
                    if acc is None:
                        acc = lang_stats[lang] = stats.StatsAccumulator()
                    acc.add(line)
        finally:
            for handle in handles.values():
                handle.close()
        write_time = time.perf_counter() - t0 - dedup_time

        if trained_here:
            langid.save_model(model, tmp_dir / "langid.model")

        # Assemble the manifest.
        languages = sorted(
            set(dedups)
            | {l for r in results for l in r.discarded}
            | {l for r in results for l in r.dropped_by_filter}
        )
        per_language = {}
        for lang in languages:
            dd = dedups.get(lang)
            kept = dd.kept_count if dd else 0
            dropped_dup = dd.dropped_count if dd else 0
            dropped_filter = sum(r.dropped_by_filter.get(lang, 0) for r in results)
            discarded = sum(r.discarded.get(lang, 0) for r in results)
            out_name = f"{lang}.txt" if kept else None
            per_language[lang] = {
                "kept_lines": kept,
                "dropped_by_filter": dropped_filter,
                "dropped_as_duplicate": dropped_dup,
                "discarded_unclassified": discarded,
                "lines_routed": kept + dropped_dup + dropped_filter + discarded,
                # 16-byte digests held in memory per distinct kept line
                "dedup_seen_bytes": 16 * kept,
                "stats": (
                    lang_stats[lang].snapshot() if lang in lang_stats else stats.CorpusStats.zero()
                ).to_dict(),
                "output_file": out_name,
                "output_sha256": _sha256_file(tmp_dir / out_name) if out_name else None,
            }

        timing = {stage: 0.0 for stage in STAGE_ORDER}
        for r in results:
            for stage, secs in r.timing.items():
                timing[stage] += secs
        timing["dedup"] = dedup_time
        timing["write"] = write_time

        totals = {
            "lines_read": sum(r.lines_read for r in results),
            "empty_lines": sum(r.empty_lines for r in results),
            "kept_lines": sum(d.kept_count for d in dedups.values()),
            "dropped_by_filter": sum(sum(r.dropped_by_filter.values()) for r in results),
            "dropped_as_duplicate": sum(d.dropped_count for d in dedups.values()),
            "discarded_unclassified": sum(sum(r.discarded.values()) for r in results),
        }
        dropped_by_reason: dict[str, int] = {}
        for r in results:
            for reason, n in r.dropped_by_reason.items():
                dropped_by_reason[reason] = dropped_by_reason.get(reason, 0) + n
        disparity = filters.DisparityReport(
            results[0].disparity.policy_a, results[0].disparity.policy_b
        ) if results else None
        if disparity is not None:
            for r in results:
                disparity.merge_from(r.disparity)
        # Conservation: every line read lands in exactly one bucket.
        reconciled = (
            totals["kept_lines"]
            + totals["dropped_by_filter"]
            + totals["dropped_as_duplicate"]
            + totals["discarded_unclassified"]
            + totals["empty_lines"]
        )
        if reconciled != totals["lines_read"]:  # pragma: no cover - internal invariant
            raise AssertionError(
                f"line accounting broken: {reconciled} != {totals['lines_read']}"
            )

        manifest = {
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
            "config": config.snapshot(),
            "model": {
                "labels": model.labels,
                "ngram_range": list(model.ngram_range),
                "bucket_count": model.bucket_count,
                "seed": model.seed,
                "trained_by_pipeline": trained_here,
                "file": "langid.model" if trained_here else str(config.model_path),
            },
            "stage_order": list(STAGE_ORDER),
            "digest_algorithm": dedup_mod.DIGEST_ALGORITHM,
            "workers": workers,
            "archives": [
                {
                    "path": r.path,
                    "records_read": r.records_read,
                    "conversion_records": r.conversion_records,
                    "skipped_records": r.skipped_records,
                    "malformed_records": r.malformed_records,
                    "replacements": r.replacements,
                    "lines_read": r.lines_read,
                    "discarded_unclassified": sum(r.discarded.values()),
                }
                for r in results
            ],
            "languages": per_language,
            "totals": totals,
            "dropped_by_filter_reason": dropped_by_reason,
            "filter_disparity": disparity.to_dict() if disparity else None,
            "timing_seconds": {k: round(v, 6) for k, v in timing.items()},
        }
        (tmp_dir / "manifest.json").write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

        # Promote atomically: the long-running work is done; the swap is
        # two renames.
        if out_dir.exists():
            shutil.rmtree(out_dir)
        os.rename(tmp_dir, out_dir)
    except BaseException:
        shutil.rmtree(tmp_dir, ignore_errors=True)
        raise
    return manifest


def load_manifest(path: str | Path) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read manifest {path}: {exc}") from exc


def verify_manifest(manifest: dict, output_dir: str | Path) -> list[str]:
    """Recheck output files against the manifest.

    Returns a list of violations (empty means OK); missing files are
    reported, not raised.
    """
    output_dir = Path(output_dir)
    violations = []
    for lang, entry in sorted(manifest.get("languages", {}).items()):
        name = entry.get("output_file")
        if not name:
            if entry.get("kept_lines"):
                violations.append(f"{lang}: kept {entry['kept_lines']} lines but no output file recorded")
            continue
        path = output_dir / name
        if not path.is_file():
            violations.append(f"{lang}: output file missing: {name}")
            continue
        digest = _sha256_file(path)
        if digest != entry.get("output_sha256"):
            violations.append(
                f"{lang}: digest mismatch for {name}: manifest "
                f"{entry.get('output_sha256')}, recomputed {digest}"
            )
        with open(path, "rb") as f:
            line_count = sum(1 for _ in f)
        if line_count != entry.get("kept_lines"):
            violations.append(
                f"{lang}: line count mismatch for {name}: manifest "
                f"{entry.get('kept_lines')}, recounted {line_count}"
            )
    return violations
