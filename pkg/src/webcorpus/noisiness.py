"""Out-of-vocabulary audit over uniform line samples.

The audit draws whole lines uniformly (without replacement) until the
sample holds at least a target number of words, tokenizes them, drops
capitalized tokens (first scalar in category Lu/Lt) and tokens shorter
than 4 scalars, then counts how many survivors are missing from a
reference word list. A token is in-vocabulary if it matches an entry
exactly or after full lowercasing. Occurrences are counted, not
distinct types.
"""

from __future__ import annotations

import math
import random
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigError, InsufficientCorpusError
from .stats import tokenize, word_count
from .wet import Line

DEFAULT_WORD_BUDGET = 1_000_000


@dataclass(frozen=True)
class Dictionary:
    language: str
    entries: frozenset[str]
    source_name: str = ""

    def __post_init__(self):
        if not self.entries:
            raise ConfigError("dictionary has no entries")
        for entry in self.entries:
            if not entry or entry.split() != [entry]:
                raise ConfigError(f"dictionary entry contains whitespace: {entry!r}")


def load_dictionary(path: str | Path, language: str) -> Dictionary:
    """Read a UTF-8 word list: one word per line, '#' starts a comment."""
    path = Path(path)
    entries = set()
    for raw in path.read_text(encoding="utf-8").splitlines():
        word = raw.split("#", 1)[0].strip()
        if word:
            entries.add(word)
    if not entries:
        raise ConfigError(f"{path}: no dictionary entries found")
    return Dictionary(language=language, entries=frozenset(entries), source_name=path.name)


@dataclass(frozen=True)
class NoisinessReport:
    language: str
    corpus_name: str
    sampled_words: int
    oov_count: int
    in_vocab_count: int
    filtered_out: int  # tokens removed by the capitalization/length rule
    word_budget: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "language": self.language,
            "corpus_name": self.corpus_name,
            "sampled_words": self.sampled_words,
            "oov_count": self.oov_count,
            "in_vocab_count": self.in_vocab_count,
            "filtered_out": self.filtered_out,
            "word_budget": self.word_budget,
            "seed": self.seed,
        }


def _reservoir(corpus: Iterable[Line], k: int, rng: random.Random) -> list[Line]:
    sample: list[Line] = []
    for i, line in enumerate(corpus):
        if i < k:
            sample.append(line)
        else:
            j = rng.randrange(i + 1)
            if j < k:
                sample[j] = line
    return sample


def sample_lines(corpus: Sequence[Line] | Iterable[Line], word_budget: int, seed: int = 0) -> list[Line]:
    """Uniform without-replacement line sample holding >= word_budget words.

    Two passes over the corpus (it must be re-iterable): the first
    counts lines and words, the second reservoir-samples
    ceil(budget / mean_words) lines. The reservoir is then walked in a
    seeded random order and cut at the line where the cumulative word
    count first reaches the budget; random order keeps the cut unbiased
    with respect to stream position. If a reservoir undershoots the
    budget (short lines were over-drawn) it is re-drawn at double size,
    still deterministically, so the returned sample always reaches the
    budget whenever the corpus can cover it.
    """
    if word_budget < 1:
        raise ConfigError(f"word_budget must be >= 1, got {word_budget}")
    n_lines = 0
    total_words = 0
    for line in corpus:
        n_lines += 1
        total_words += word_count(line.text)
    if n_lines == 0:
        raise ConfigError("cannot sample from an empty corpus")
    if total_words < word_budget:
        raise InsufficientCorpusError(word_budget, total_words)

    rng = random.Random(seed)
    k = max(1, math.ceil(word_budget / (total_words / n_lines)))
    while True:
        k = min(k, n_lines)
        reservoir = _reservoir(corpus, k, rng)
        rng.shuffle(reservoir)
        kept: list[Line] = []
        words = 0
        for line in reservoir:
            kept.append(line)
            words += word_count(line.text)
            if words >= word_budget:
                return kept
        # Undershoot: grow the reservoir and redraw. Terminates because
        # k == n_lines samples the whole corpus, which covers the budget.
        k *= 2


def _is_capitalized(token: str) -> bool:
    return unicodedata.category(token[0]) in ("Lu", "Lt")


def audit_tokens(
    sample: Iterable[Line | str],
    dictionary: Dictionary,
    *,
    corpus_name: str = "",
    word_budget: int = 0,
    seed: int = 0,
) -> NoisinessReport:
    """Count out-of-vocabulary occurrences in a sample.

    The caller is responsible for matching the dictionary's language to
    the corpus; the report just records the dictionary's code.
    """
    entries = dictionary.entries
    filtered_out = 0
    oov = 0
    in_vocab = 0
    words = 0
    for line in sample:
        text = line.text if isinstance(line, Line) else line
        words += word_count(text)
        for token in tokenize(text):
            if len(token) < 4 or _is_capitalized(token):
                filtered_out += 1
            elif token in entries or token.lower() in entries:
                in_vocab += 1
            else:
                oov += 1
    return NoisinessReport(
        language=dictionary.language,
        corpus_name=corpus_name,
        sampled_words=words,
        oov_count=oov,
        in_vocab_count=in_vocab,
        filtered_out=filtered_out,
        word_budget=word_budget,
        seed=seed,
    )


def render_report(report: NoisinessReport) -> str:
    """Human-readable single-corpus audit summary."""
    name = report.corpus_name or "corpus"
    rows = [
        ("sampled words", report.sampled_words),
        ("filtered out (caps/<4 scalars)", report.filtered_out),
        ("in vocabulary", report.in_vocab_count),
        ("out of vocabulary", report.oov_count),
    ]
    width = max(len(label) for label, _ in rows)
    lines = [f"Noisiness audit: {name} ({report.language}, seed {report.seed})"]
    lines += [f"  {label.ljust(width)}  {value:>12,}" for label, value in rows]
    return "\n".join(lines)


def compare_corpora(a: NoisinessReport, b: NoisinessReport) -> str:
    """Side-by-side rendering of two audits of the same language."""
    if a.language != b.language:
        raise ConfigError(f"language mismatch: {a.language!r} vs {b.language!r}")
    if a.word_budget != b.word_budget:
        raise ConfigError(
            f"word budget mismatch: {a.word_budget:,} vs {b.word_budget:,}"
        )
    name_a = a.corpus_name or "corpus A"
    name_b = b.corpus_name or "corpus B"
    diff = b.oov_count - a.oov_count
    if diff > 0:
        verdict = f"{name_b} higher by {diff:,}"
    elif diff < 0:
        verdict = f"{name_b} lower by {-diff:,}"
    else:
        verdict = "equal"
    width = max(len(name_a), len(name_b), len("difference"))
    budget = a.word_budget or max(a.sampled_words, b.sampled_words)
    return "\n".join(
        [
            f"Out-of-vocabulary tokens per {budget:,}-word sample ({a.language})",
            f"  {name_a.ljust(width)}  {a.oov_count:>12,}",
            f"  {name_b.ljust(width)}  {b.oov_count:>12,}",
            f"  {'difference'.ljust(width)}  {diff:>+12,}  ({verdict})",
        ]
    )
