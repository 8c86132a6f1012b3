"""Length-filter policy tests: the inclusive-chars vs strict-bytes trap."""

from __future__ import annotations

import random

import pytest

from webcorpus.errors import ConfigError
from webcorpus.filters import DropReason, FilterPolicy, apply, compare_policies
from webcorpus.wet import line_from_text

CHAR100 = FilterPolicy.char_at_least(100)
BYTE100 = FilterPolicy.byte_exceeding(100)


class TestBoundarySemantics:
    def test_ascii_line_of_exactly_100(self):
        line = line_from_text("a" * 100)  # 100 chars, 100 bytes
        assert apply(CHAR100, line) is None  # >= 100 chars: keep
        assert apply(BYTE100, line) is DropReason.TOO_SHORT_BYTES  # not > 100 bytes

    def test_two_byte_script_short_in_chars_long_in_bytes(self):
        line = line_from_text("ж" * 60)  # 60 chars, 120 bytes
        assert apply(CHAR100, line) is DropReason.TOO_SHORT_CHARS
        assert apply(BYTE100, line) is None

    def test_two_byte_script_long_both_ways(self):
        line = line_from_text("ж" * 100)  # 100 chars, 200 bytes
        assert apply(CHAR100, line) is None
        assert apply(BYTE100, line) is None

    def test_101_ascii_passes_both(self):
        line = line_from_text("a" * 101)
        assert apply(CHAR100, line) is None
        assert apply(BYTE100, line) is None

    def test_empty_line_dropped_by_any_policy(self):
        line = line_from_text("")
        assert apply(FilterPolicy.char_at_least(1), line) is DropReason.TOO_SHORT_CHARS
        assert apply(FilterPolicy.byte_exceeding(1), line) is DropReason.TOO_SHORT_BYTES

    def test_whitespace_counts_raw(self):
        # counts are raw and untrimmed: 100 spaces pass the char filter
        line = line_from_text(" " * 100)
        assert apply(CHAR100, line) is None

    def test_threshold_must_be_positive(self):
        with pytest.raises(ConfigError):
            FilterPolicy.char_at_least(0)
        with pytest.raises(ConfigError):
            FilterPolicy.byte_exceeding(-5)


class TestComparePolicies:
    def test_three_canonical_lines(self):
        lines = [
            line_from_text("a" * 100),
            line_from_text("ж" * 60),
            line_from_text("ж" * 100),
        ]
        report = compare_policies(lines)
        assert report.disagreements == 2
        assert report.kept_a == 2  # char policy keeps the 100-char lines
        assert report.kept_b == 2  # byte policy keeps the >100-byte lines
        assert report.lines == 3
        assert report.kept_a + report.dropped_a == 3

    def test_pure_ascii_disagreements_are_the_exact_100_byte_lines(self):
        rng = random.Random(1)
        lines = [line_from_text("x" * rng.randint(80, 120)) for _ in range(500)]
        exactly_100 = sum(1 for l in lines if l.byte_count == 100)
        assert exactly_100 > 0  # fixture sanity
        report = compare_policies(lines)
        assert report.disagreements == exactly_100

    def test_cyrillic_corpus_matches_brute_force_recount(self):
        # Independent oracle: recount disagreements straight from the
        # length definitions, bypassing the policy objects.
        rng = random.Random(42)
        lines = []
        for _ in range(10_000):
            n_chars = rng.randint(50, 150)
            text = "".join(rng.choice("абвгдежзик ") for _ in range(n_chars))
            lines.append(line_from_text(text))
        expected = 0
        for line in lines:
            keep_chars = len(line.text) >= 100
            keep_bytes = len(line.text.encode("utf-8")) > 100
            expected += keep_chars != keep_bytes
        report = compare_policies(lines)
        assert report.disagreements == expected
        assert report.kept_a == sum(1 for l in lines if len(l.text) >= 100)
        assert report.kept_b == sum(
            1 for l in lines if len(l.text.encode("utf-8")) > 100
        )

    def test_empty_stream(self):
        report = compare_policies([])
        assert report.lines == 0
        assert report.disagreements == 0

    def test_to_dict_round_trips_counts(self):
        report = compare_policies([line_from_text("a" * 100)])
        d = report.to_dict()
        assert d["disagreements"] == 1
        assert d["policy_a"] == "chars>=100"
        assert d["policy_b"] == "bytes>100"


class TestProperties:
    def _random_line(self, rng: random.Random):
        alphabet = "abcXYZ 123.,ัэжщé世—"
        return line_from_text(
            "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 160)))
        )

    def test_char_threshold_monotonicity(self):
        rng = random.Random(7)
        for _ in range(300):
            line = self._random_line(rng)
            threshold = rng.randint(2, 150)
            if apply(FilterPolicy.char_at_least(threshold), line) is None:
                for lower in (1, threshold // 2, threshold - 1):
                    if lower >= 1:
                        assert apply(FilterPolicy.char_at_least(lower), line) is None

    def test_ascii_equivalence_char_t_vs_byte_t_minus_1(self):
        # For ASCII lines CharAtLeast(T) keeps exactly when
        # ByteExceeding(T-1) keeps.
        rng = random.Random(8)
        for _ in range(300):
            line = line_from_text(
                "".join(rng.choice("abc 123.") for _ in range(rng.randrange(0, 130)))
            )
            threshold = rng.randint(2, 120)
            keep_chars = apply(FilterPolicy.char_at_least(threshold), line) is None
            keep_bytes = apply(FilterPolicy.byte_exceeding(threshold - 1), line) is None
            assert keep_chars == keep_bytes

    def test_disparity_lines_constructible(self):
        # Lines kept by ByteExceeding(100) but dropped by CharAtLeast(100)
        # exist exactly when char_count < 100 < byte_count.
        found = False
        rng = random.Random(9)
        for _ in range(500):
            n = rng.randint(40, 120)
            line = line_from_text("ж" * n)
            keep_b = apply(BYTE100, line) is None
            keep_c = apply(CHAR100, line) is None
            if keep_b and not keep_c:
                found = True
                assert line.char_count < 100 < line.byte_count
        assert found
