"""Length-filter policies for corpus lines.

Two semantics exist in the wild and they are not equivalent:

* keep lines with *at least* N UTF-8 characters (inclusive, counts
  Unicode scalar values), and
* keep lines *strictly exceeding* N bytes of UTF-8.

At the same nominal threshold the byte rule favors ASCII-heavy text: a
non-ASCII line can clear 100 bytes with far fewer than 100 characters.
Both policies are implemented verbatim so the disparity is measurable.
Counts are raw (no whitespace trimming before counting).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import ConfigError
from .wet import Line


class FilterKind(Enum):
    CHAR_AT_LEAST = "char_at_least"  # keep iff char_count >= threshold
    BYTE_EXCEEDING = "byte_exceeding"  # keep iff byte_count > threshold (strict)


class DropReason(Enum):
    TOO_SHORT_CHARS = "too_short_chars"
    TOO_SHORT_BYTES = "too_short_bytes"


@dataclass(frozen=True)
class FilterPolicy:
    kind: FilterKind
    threshold: int

    def __post_init__(self):
        if self.threshold < 1:
            raise ConfigError(f"filter threshold must be >= 1, got {self.threshold}")

    @classmethod
    def char_at_least(cls, threshold: int = 100) -> "FilterPolicy":
        return cls(FilterKind.CHAR_AT_LEAST, threshold)

    @classmethod
    def byte_exceeding(cls, threshold: int = 100) -> "FilterPolicy":
        return cls(FilterKind.BYTE_EXCEEDING, threshold)

    def describe(self) -> str:
        if self.kind is FilterKind.CHAR_AT_LEAST:
            return f"chars>={self.threshold}"
        return f"bytes>{self.threshold}"


def apply(policy: FilterPolicy, line: Line) -> DropReason | None:
    """Decide one line; returns None to keep, or the drop reason."""
    if policy.kind is FilterKind.CHAR_AT_LEAST:
        if line.char_count >= policy.threshold:
            return None
        return DropReason.TOO_SHORT_CHARS
    # Strictly greater than: a line of exactly `threshold` bytes is dropped.
    if line.byte_count > policy.threshold:
        return None
    return DropReason.TOO_SHORT_BYTES


@dataclass
class DisparityReport:
    """Per-policy keep/drop tallies plus the number of disagreements."""

    policy_a: str
    policy_b: str
    kept_a: int = 0
    dropped_a: int = 0
    kept_b: int = 0
    dropped_b: int = 0
    disagreements: int = 0
    lines: int = 0

    def observe(self, keep_a: bool, keep_b: bool) -> None:
        self.lines += 1
        if keep_a:
            self.kept_a += 1
        else:
            self.dropped_a += 1
        if keep_b:
            self.kept_b += 1
        else:
            self.dropped_b += 1
        if keep_a != keep_b:
            self.disagreements += 1

    def merge_from(self, other: "DisparityReport") -> None:
        self.kept_a += other.kept_a
        self.dropped_a += other.dropped_a
        self.kept_b += other.kept_b
        self.dropped_b += other.dropped_b
        self.disagreements += other.disagreements
        self.lines += other.lines

    def to_dict(self) -> dict:
        return {
            "policy_a": self.policy_a,
            "policy_b": self.policy_b,
            "kept_a": self.kept_a,
            "dropped_a": self.dropped_a,
            "kept_b": self.kept_b,
            "dropped_b": self.dropped_b,
            "disagreements": self.disagreements,
            "lines": self.lines,
        }


def compare_policies(
    lines: Iterable[Line],
    policy_a: FilterPolicy | None = None,
    policy_b: FilterPolicy | None = None,
) -> DisparityReport:
    """Run two policies side by side and count where they disagree.

    Defaults compare the inclusive 100-character rule against the strict
    100-byte rule. A disagreement is a line kept by exactly one policy.
    """
    if policy_a is None:
        policy_a = FilterPolicy.char_at_least(100)
    if policy_b is None:
        policy_b = FilterPolicy.byte_exceeding(100)
    report = DisparityReport(policy_a.describe(), policy_b.describe())
    for line in lines:
        report.observe(apply(policy_a, line) is None, apply(policy_b, line) is None)
    return report
