"""webcorpus: build and audit per-language corpora from WET-style crawl
archives.

The pipeline streams archive records, classifies each line's language
with a linear character-n-gram model, applies a length filter (inclusive
character or strict byte semantics), deduplicates exact lines per
language, and writes one plain-text corpus per language plus a
verifiable JSON manifest. Companion modules measure corpus size
(bytes/tokens/words/sentences), audit noisiness via out-of-vocabulary
sampling, and account for training energy and CO2e.
"""

from .dedup import LineDeduplicator, dedup_stream, digest
from .energy import EnergyReport, HardwareProfile, aggregate, estimate, power_draw
from .errors import (
    ArchiveCorruptError,
    ConfigError,
    DigestCollisionError,
    InsufficientCorpusError,
    RecordMalformedError,
    UnclassifiableLineError,
    WebcorpusError,
)
from .filters import DropReason, FilterKind, FilterPolicy, compare_policies
from .langid import LangModel, LangPrediction, classify, load_model, route, save_model, train
from .noisiness import Dictionary, NoisinessReport, audit_tokens, compare_corpora, sample_lines
from .pipeline import PipelineConfig, run_pipeline, verify_manifest
from .stats import CorpusStats, count, merge, tokenize
from .wet import Line, RecordType, WetRecord, line_from_text, read_records, split_lines

__version__ = "0.1.0"

__all__ = [
    "ArchiveCorruptError",
    "ConfigError",
    "CorpusStats",
    "Dictionary",
    "DigestCollisionError",
    "DropReason",
    "EnergyReport",
    "FilterKind",
    "FilterPolicy",
    "HardwareProfile",
    "InsufficientCorpusError",
    "LangModel",
    "LangPrediction",
    "Line",
    "LineDeduplicator",
    "NoisinessReport",
    "PipelineConfig",
    "RecordMalformedError",
    "RecordType",
    "UnclassifiableLineError",
    "WebcorpusError",
    "WetRecord",
    "aggregate",
    "audit_tokens",
    "classify",
    "compare_corpora",
    "compare_policies",
    "count",
    "dedup_stream",
    "digest",
    "estimate",
    "line_from_text",
    "load_model",
    "merge",
    "power_draw",
    "read_records",
    "route",
    "run_pipeline",
    "sample_lines",
    "save_model",
    "split_lines",
    "tokenize",
    "train",
    "verify_manifest",
]
