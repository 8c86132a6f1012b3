"""Per-line language identification.

A linear bag-of-character-n-grams classifier: every n-gram of the line
is hashed (FNV-1a 64-bit) into one of a fixed number of buckets, the
bucket counts are averaged into a feature vector, and a single linear
layer plus softmax produces per-language probabilities. Training is
plain multinomial logistic regression via SGD with a linearly decaying
learning rate; given the same corpora, config, and seed it is
bit-for-bit reproducible.

Models serialize to a small binary format (see save_model) so an
externally trained classifier can be dropped in behind load_model.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import ConfigError, UnclassifiableLineError
from .wet import Line

MODEL_MAGIC = b"WCLANGID"
MODEL_FORMAT_VERSION = 1

DEFAULT_NGRAM_RANGE = (1, 5)
DEFAULT_BUCKET_COUNT = 1 << 18
DEFAULT_EPOCHS = 5
# Features are averaged to unit L1 norm, so per-step logit movement is
# bounded by the learning rate; with few epochs the rate must be large
# for the softmax to reach decisive probabilities.
DEFAULT_LEARNING_RATE = 10.0
DEFAULT_ROUTE_THRESHOLD = 0.8


@dataclass(frozen=True)
class LangPrediction:
    scores: dict[str, float]  # language code -> probability, sums to 1
    top: str
    top_prob: float


@dataclass
class LangModel:
    labels: list[str]
    ngram_range: tuple[int, int]
    bucket_count: int
    weights: np.ndarray  # (labels, buckets) float32
    bias: np.ndarray  # (labels,) float32
    seed: int

    def __post_init__(self):
        nmin, nmax = self.ngram_range
        if not (1 <= nmin <= nmax <= 6):
            raise ConfigError(f"ngram_range must satisfy 1 <= min <= max <= 6, got {self.ngram_range}")
        if self.bucket_count < 1:
            raise ConfigError(f"bucket_count must be >= 1, got {self.bucket_count}")
        if self.weights.shape != (len(self.labels), self.bucket_count):
            raise ConfigError(
                f"weight matrix shape {self.weights.shape} does not match "
                f"{len(self.labels)} labels x {self.bucket_count} buckets"
            )


_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


@lru_cache(maxsize=1 << 20)
def _fnv1a_64(ngram: str) -> int:
    h = _FNV_OFFSET
    for byte in ngram.encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def _feature_counts(text: str, ngram_range: tuple[int, int], bucket_count: int) -> dict[int, int]:
    nmin, nmax = ngram_range
    counts: dict[int, int] = {}
    length = len(text)
    for n in range(nmin, min(nmax, length) + 1):
        for i in range(length - n + 1):
            bucket = _fnv1a_64(text[i : i + n]) % bucket_count
            counts[bucket] = counts.get(bucket, 0) + 1
    return counts


def _feature_arrays(text: str, ngram_range, bucket_count) -> tuple[np.ndarray, np.ndarray]:
    counts = _feature_counts(text, ngram_range, bucket_count)
    idx = np.fromiter(counts.keys(), dtype=np.int64, count=len(counts))
    vals = np.fromiter(counts.values(), dtype=np.float64, count=len(counts))
    return idx, vals / vals.sum()  # averaged bag of n-grams


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits.astype(np.float64) - logits.max()
    e = np.exp(shifted)
    return e / e.sum()


def train(
    corpora: Mapping[str, Iterable[str]],
    *,
    ngram_range: tuple[int, int] = DEFAULT_NGRAM_RANGE,
    bucket_count: int = DEFAULT_BUCKET_COUNT,
    epochs: int = DEFAULT_EPOCHS,
    learning_rate: float = DEFAULT_LEARNING_RATE,
    seed: int = 0,
) -> LangModel:
    """Train a classifier from per-language line streams.

    Labels are sorted lexicographically so the result is independent of
    mapping order. Empty or whitespace-only lines are skipped; a label
    whose corpus contains nothing else is a configuration error, as is
    providing fewer than two labels.
    """
    labels = sorted(corpora)
    if len(labels) < 2:
        raise ConfigError(f"need at least 2 languages to train, got {len(labels)}")
    if epochs < 1:
        raise ConfigError(f"epochs must be >= 1, got {epochs}")

    examples: list[tuple[int, np.ndarray, np.ndarray]] = []
    for label_idx, label in enumerate(labels):
        n_lines = 0
        for text in corpora[label]:
            if not text.strip():
                continue
            idx, x = _feature_arrays(text, ngram_range, bucket_count)
            examples.append((label_idx, idx, x))
            n_lines += 1
        if n_lines == 0:
            raise ConfigError(f"corpus for language {label!r} has no non-empty lines")

    model = LangModel(
        labels=labels,
        ngram_range=ngram_range,
        bucket_count=bucket_count,
        weights=np.zeros((len(labels), bucket_count), dtype=np.float32),
        bias=np.zeros(len(labels), dtype=np.float32),
        seed=seed,
    )

    rng = np.random.default_rng(seed)
    total_updates = epochs * len(examples)
    step = 0
    for _ in range(epochs):
        for ex in rng.permutation(len(examples)):
            label_idx, idx, x = examples[ex]
            lr = learning_rate * (1.0 - step / total_updates)
            step += 1
            logits = model.weights[:, idx].astype(np.float64) @ x + model.bias
            grad = _softmax(logits)
            grad[label_idx] -= 1.0
            model.weights[:, idx] -= (lr * np.outer(grad, x)).astype(np.float32)
            model.bias -= (lr * grad).astype(np.float32)
    return model


def classify(model: LangModel, line: Line | str) -> LangPrediction:
    """Score one line against every language the model knows.

    Uses only the line's own text; raises UnclassifiableLineError for
    lines that are empty after whitespace trimming (callers drop those
    and count them).
    """
    text = line.text if isinstance(line, Line) else line
    if not text.strip():
        raise UnclassifiableLineError("cannot classify an empty or whitespace-only line")
    idx, x = _feature_arrays(text, model.ngram_range, model.bucket_count)
    logits = model.weights[:, idx].astype(np.float64) @ x + model.bias
    probs = _softmax(logits)
    scores = {label: float(p) for label, p in zip(model.labels, probs)}
    # Argmax with lexicographic tie-break on the language code.
    top = min(scores, key=lambda code: (-scores[code], code))
    return LangPrediction(scores=scores, top=top, top_prob=scores[top])


def route(prediction: LangPrediction, threshold: float = DEFAULT_ROUTE_THRESHOLD) -> str | None:
    """Return the top language if its probability clears the threshold,
    else None (discard)."""
    if not 0.0 <= threshold <= 1.0:
        raise ConfigError(f"route threshold must be in [0, 1], got {threshold}")
    if prediction.top_prob >= threshold:
        return prediction.top
    return None


# --- model file format -------------------------------------------------------
#
#   magic "WCLANGID" | u32 version | u32 label_count
#   per label: u16 byte_length + UTF-8 bytes
#   u8 ngram_min | u8 ngram_max | u32 bucket_count | i64 seed
#   f32[labels * buckets] weights, row-major | f32[labels] bias
#
# All integers and floats little-endian.


def save_model(model: LangModel, path: str | Path) -> None:
    path = Path(path)
    parts = [MODEL_MAGIC, struct.pack("<II", MODEL_FORMAT_VERSION, len(model.labels))]
    for label in model.labels:
        encoded = label.encode("utf-8")
        parts.append(struct.pack("<H", len(encoded)))
        parts.append(encoded)
    parts.append(
        struct.pack(
            "<BBIq",
            model.ngram_range[0],
            model.ngram_range[1],
            model.bucket_count,
            model.seed,
        )
    )
    parts.append(np.ascontiguousarray(model.weights, dtype="<f4").tobytes())
    parts.append(np.ascontiguousarray(model.bias, dtype="<f4").tobytes())
    path.write_bytes(b"".join(parts))


def load_model(path: str | Path) -> LangModel:
    data = Path(path).read_bytes()
    if data[: len(MODEL_MAGIC)] != MODEL_MAGIC:
        raise ConfigError(f"{path}: not a language model file")
    pos = len(MODEL_MAGIC)
    version, label_count = struct.unpack_from("<II", data, pos)
    pos += 8
    if version != MODEL_FORMAT_VERSION:
        raise ConfigError(f"{path}: unsupported model format version {version}")
    labels = []
    for _ in range(label_count):
        (n,) = struct.unpack_from("<H", data, pos)
        pos += 2
        labels.append(data[pos : pos + n].decode("utf-8"))
        pos += n
    nmin, nmax, bucket_count, seed = struct.unpack_from("<BBIq", data, pos)
    pos += 14
    n_weights = label_count * bucket_count
    expected = pos + 4 * (n_weights + label_count)
    if len(data) != expected:
        raise ConfigError(
            f"{path}: truncated model file ({len(data)} bytes, expected {expected})"
        )
    weights = np.frombuffer(data, dtype="<f4", count=n_weights, offset=pos)
    pos += 4 * n_weights
    bias = np.frombuffer(data, dtype="<f4", count=label_count, offset=pos)
    return LangModel(
        labels=labels,
        ngram_range=(nmin, nmax),
        bucket_count=bucket_count,
        weights=weights.reshape(label_count, bucket_count).copy(),
        bias=bias.copy(),
        seed=seed,
    )
