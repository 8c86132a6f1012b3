"""Exact line deduplication, first occurrence wins.

Lines are compared by a 128-bit MD5 digest of their exact UTF-8 bytes:
no case folding, no whitespace collapse. Storing 16-byte digests instead
of text bounds memory; at 1e9 distinct lines the birthday-bound chance
of a collision (which would silently drop one distinct line) is about
1e-20. The optional exact-verify mode keeps the full text alongside each
digest and raises on any collision, for desk-scale validation runs.

Digests are spread over P partitions by their top 64 bits so shards can
be owned by independent workers; the kept/dropped outcome is identical
for every P.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Iterator

from .errors import ConfigError, DigestCollisionError
from .wet import Line

DIGEST_ALGORITHM = "md5-128"


def digest(line: Line | str) -> int:
    """128-bit digest of the line's exact UTF-8 bytes."""
    text = line.text if isinstance(line, Line) else line
    return int.from_bytes(hashlib.md5(text.encode("utf-8")).digest(), "big")


class LineDeduplicator:
    """Tracks seen digests across P partitions; feed lines via admit()."""

    def __init__(self, partitions: int = 1, exact_verify: bool = False):
        if partitions < 1:
            raise ConfigError(f"partitions must be >= 1, got {partitions}")
        self.partitions = partitions
        self.exact_verify = exact_verify
        self._seen: list[set[int]] = [set() for _ in range(partitions)]
        self._texts: dict[int, str] | None = {} if exact_verify else None
        self.kept_count = 0
        self.dropped_count = 0

    def admit(self, line: Line | str) -> bool:
        """True if this is the first occurrence of the line."""
        d = digest(line)
        shard = self._seen[(d >> 64) % self.partitions]
        if d in shard:
            if self._texts is not None:
                text = line.text if isinstance(line, Line) else line
                if self._texts[d] != text:
                    raise DigestCollisionError(
                        f"digest collision between {self._texts[d]!r} and {text!r}"
                    )
            self.dropped_count += 1
            return False
        shard.add(d)
        if self._texts is not None:
            self._texts[d] = line.text if isinstance(line, Line) else line
        self.kept_count += 1
        return True

    @property
    def distinct_count(self) -> int:
        return sum(len(s) for s in self._seen)


def dedup_stream(
    lines: Iterable[Line], partitions: int = 1, exact_verify: bool = False
) -> Iterator[Line]:
    """Yield each distinct line once, in first-occurrence order."""
    dedup = LineDeduplicator(partitions, exact_verify=exact_verify)
    for line in lines:
        if dedup.admit(line):
            yield line
