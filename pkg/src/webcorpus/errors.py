"""Exception hierarchy shared by all pipeline stages.

The CLI maps these onto exit codes: configuration problems exit 1,
corrupt input exits 2, verification failures exit 3.
"""

from __future__ import annotations


class WebcorpusError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(WebcorpusError):
    """Invalid configuration or arguments (exit code 1)."""


class ArchiveCorruptError(WebcorpusError):
    """Archive framing is broken (exit code 2); carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class RecordMalformedError(ArchiveCorruptError):
    """A record violates the header contract, e.g. missing Content-Length."""


class UnclassifiableLineError(WebcorpusError):
    """A line is empty after whitespace trimming and cannot be classified."""


class InsufficientCorpusError(WebcorpusError):
    """The corpus holds fewer words than the requested sample budget."""

    def __init__(self, budget: int, available: int):
        super().__init__(
            f"corpus holds {available} words, {budget} requested "
            f"(short by {budget - available})"
        )
        self.budget = budget
        self.available = available


class DigestCollisionError(WebcorpusError):
    """Two distinct lines produced the same digest in exact-verify mode."""
