"""Corpus size metrics: bytes, tokens, words, sentences, lines.

The tokenizer is deliberately rule-based and deterministic: split on
Unicode whitespace, then peel leading/trailing punctuation or symbol
scalars (categories P* and S*) off each chunk as single-character tokens.
Interior punctuation stays attached, so hyphenated and apostrophized
words survive as one token. A "word" is a token containing at least one
alphabetic scalar, which keeps words <= tokens on any input.

CorpusStats merges like a monoid (field-wise sum, zero identity), so
counts computed over shards can be recombined freely.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from typing import Iterable

from .wet import Line

SENTENCE_TERMINATORS = frozenset(".!?…")  # . ! ? and the ellipsis


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("P", "S")


def tokenize(text: str) -> list[str]:
    """Split one line into tokens; deterministic across runs and platforms."""
    tokens: list[str] = []
    for chunk in text.split():
        i, j = 0, len(chunk)
        lead: list[str] = []
        while i < j and _is_punct(chunk[i]):
            lead.append(chunk[i])
            i += 1
        trail: list[str] = []
        while j > i and _is_punct(chunk[j - 1]):
            trail.append(chunk[j - 1])
            j -= 1
        tokens.extend(lead)
        if i < j:
            tokens.append(chunk[i:j])
        tokens.extend(reversed(trail))
    return tokens


def is_word(token: str) -> bool:
    return any(ch.isalpha() for ch in token)


def word_count(text: str) -> int:
    """Number of word tokens in one line.

    Equivalent to counting tokenize() outputs that satisfy is_word(),
    but skips the punctuation peeling: peeled scalars are categories
    P*/S* (never alphabetic), so a whitespace chunk contributes exactly
    one word iff it contains an alphabetic scalar.
    """
    return sum(1 for chunk in text.split() if any(ch.isalpha() for ch in chunk))


def sentence_count(text: str) -> int:
    """Sentences in one line: terminator runs followed by whitespace or
    end of line, with a minimum of one for any non-empty line."""
    if not text:
        return 0
    runs = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in SENTENCE_TERMINATORS:
            j = i
            while j < n and text[j] in SENTENCE_TERMINATORS:
                j += 1
            if j >= n or text[j].isspace():
                runs += 1
            i = j
        else:
            i += 1
    return max(runs, 1)


@dataclass(frozen=True)
class CorpusStats:
    bytes: int = 0
    tokens: int = 0
    words: int = 0
    sentences: int = 0
    lines: int = 0

    @classmethod
    def zero(cls) -> "CorpusStats":
        return cls()

    def __add__(self, other: "CorpusStats") -> "CorpusStats":
        return merge(self, other)

    def to_dict(self) -> dict:
        return {
            "bytes": self.bytes,
            "tokens": self.tokens,
            "words": self.words,
            "sentences": self.sentences,
            "lines": self.lines,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusStats":
        return cls(
            bytes=data["bytes"],
            tokens=data["tokens"],
            words=data["words"],
            sentences=data["sentences"],
            lines=data["lines"],
        )


def merge(a: CorpusStats, b: CorpusStats) -> CorpusStats:
    """Field-wise sum; commutative and associative with zero() identity."""
    return CorpusStats(
        bytes=a.bytes + b.bytes,
        tokens=a.tokens + b.tokens,
        words=a.words + b.words,
        sentences=a.sentences + b.sentences,
        lines=a.lines + b.lines,
    )


class StatsAccumulator:
    """Mutable counterpart of CorpusStats for incremental counting.

    Bytes include one terminator byte per line, matching the on-disk
    size of an LF-delimited corpus file.
    """

    def __init__(self):
        self.bytes = 0
        self.tokens = 0
        self.words = 0
        self.sentences = 0
        self.lines = 0

    def add(self, line: Line | str) -> None:
        if isinstance(line, Line):
            text = line.text
            byte_count = line.byte_count
        else:
            text = line
            byte_count = len(text.encode("utf-8"))
        self.bytes += byte_count + 1
        toks = tokenize(text)
        self.tokens += len(toks)
        self.words += sum(1 for t in toks if is_word(t))
        self.sentences += sentence_count(text)
        self.lines += 1

    def snapshot(self) -> CorpusStats:
        return CorpusStats(
            bytes=self.bytes,
            tokens=self.tokens,
            words=self.words,
            sentences=self.sentences,
            lines=self.lines,
        )


def count(lines: Iterable[Line | str]) -> CorpusStats:
    """Accumulate stats over a line stream."""
    acc = StatsAccumulator()
    for line in lines:
        acc.add(line)
    return acc.snapshot()


# --- rendering ---------------------------------------------------------------


def humanize_bytes(n: int) -> str:
    """Compact size: 812B, 45K, 609M, 1.1G, 14G."""
    if n < 1000:
        return f"{n}B"
    value = n / 1000
    for unit in ("K", "M", "G"):
        if value < 1000 or unit == "G":
            break
        value /= 1000
    if value >= 10:
        return f"{round(value)}{unit}"
    return f"{value:.1f}{unit}"


def in_thousands(n: int) -> str:
    """Render a raw count in comma-grouped thousands, e.g. 1466051."""
    return f"{round(n / 1000):,}"


def render_stats_table(rows: list[tuple[str, CorpusStats]]) -> str:
    """Text table shaped like the usual corpus-size reports:
    size in bytes plus counts in thousands."""
    header = ("Corpus", "Size", "#Ktokens", "#Kwords", "#Ksentences")
    body = [
        (
            name,
            humanize_bytes(s.bytes),
            in_thousands(s.tokens),
            in_thousands(s.words),
            in_thousands(s.sentences),
        )
        for name, s in rows
    ]
    widths = [
        max(len(header[i]), *(len(r[i]) for r in body)) if body else len(header[i])
        for i in range(5)
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip(),
    ]
    for r in body:
        cells = [r[0].ljust(widths[0])]
        cells += [r[i].rjust(widths[i]) for i in range(1, 5)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)
