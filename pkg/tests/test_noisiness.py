"""Out-of-vocabulary audit tests: hand-traced counts and sampling laws."""

from __future__ import annotations

import random
import unicodedata

import pytest

from webcorpus.errors import ConfigError, InsufficientCorpusError
from webcorpus.noisiness import (
    Dictionary,
    NoisinessReport,
    audit_tokens,
    compare_corpora,
    load_dictionary,
    sample_lines,
)
from webcorpus.stats import tokenize
from webcorpus.wet import line_from_text


def lines_of(*texts: str):
    return [line_from_text(t) for t in texts]


def brute_force_audit(texts: list[str], entries: set[str]) -> tuple[int, int, int]:
    """Independent recount: (filtered_out, oov, in_vocab)."""
    filtered = oov = in_vocab = 0
    for text in texts:
        for token in tokenize(text):
            if unicodedata.category(token[0]) in ("Lu", "Lt") or len(token) < 4:
                filtered += 1
            elif token in entries or token.lower() in entries:
                in_vocab += 1
            else:
                oov += 1
    return filtered, oov, in_vocab


class TestDictionary:
    def test_empty_rejected(self):
        with pytest.raises(ConfigError):
            Dictionary(language="da", entries=frozenset())

    def test_whitespace_entry_rejected(self):
        with pytest.raises(ConfigError):
            Dictionary(language="da", entries=frozenset({"two words"}))

    def test_load_word_list(self, tmp_path):
        path = tmp_path / "words.txt"
        path.write_text(
            "# comment line\nhund\nkat  # trailing comment\n\n  mus\n",
            encoding="utf-8",
        )
        d = load_dictionary(path, language="da")
        assert d.entries == {"hund", "kat", "mus"}
        assert d.language == "da"
        assert d.source_name == "words.txt"

    def test_load_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("# nothing but comments\n", encoding="utf-8")
        with pytest.raises(ConfigError):
            load_dictionary(path, language="da")


class TestAuditTokens:
    DICT = Dictionary(language="da", entries=frozenset({"hund", "kat"}))

    def test_hand_traced_example(self):
        # "Danmark" capitalized, "og" has 2 scalars -> both filtered;
        # "hund" in vocabulary; "zzqq" survives and is OOV.
        report = audit_tokens(lines_of("Danmark og hund zzqq"), self.DICT)
        assert report.filtered_out == 2
        assert report.oov_count == 1
        assert report.in_vocab_count == 1
        assert report.sampled_words == 4

    def test_all_in_vocabulary(self):
        d = Dictionary(language="da", entries=frozenset({"hund", "katte"}))
        report = audit_tokens(lines_of("hund katte hund"), d)
        assert report.oov_count == 0
        assert report.in_vocab_count == 3
        assert report.filtered_out == 0

    def test_lowercase_fallback(self):
        d = Dictionary(language="de", entries=frozenset({"köln"}))
        # "kÖln" starts lowercase so it survives filtering, then matches
        # via full lowercasing.
        report = audit_tokens(lines_of("kÖln"), d)
        assert report.in_vocab_count == 1
        assert report.oov_count == 0

    def test_titlecase_scalar_filtered(self):
        # U+01C8 is category Lt.
        report = audit_tokens(lines_of("ǈjStart hund"), self.DICT)
        assert report.filtered_out == 1
        assert report.in_vocab_count == 1

    def test_accounting_identity_on_random_corpora(self):
        rng = random.Random(50)
        vocab = [f"word{i:03d}" for i in range(50)]
        entries = frozenset(vocab[:25])
        d = Dictionary(language="xx", entries=entries)
        for _ in range(20):
            texts = [
                " ".join(rng.choice(vocab + ["OK", "Np", "zz"]) for _ in range(rng.randrange(1, 30)))
                for _ in range(rng.randrange(1, 20))
            ]
            report = audit_tokens(lines_of(*texts), d)
            filtered, oov, in_vocab = brute_force_audit(texts, entries)
            assert (report.filtered_out, report.oov_count, report.in_vocab_count) == (
                filtered,
                oov,
                in_vocab,
            )
            total_tokens = sum(len(tokenize(t)) for t in texts)
            assert report.filtered_out + report.oov_count + report.in_vocab_count == total_tokens

    def test_dictionary_growth_never_increases_oov(self):
        rng = random.Random(51)
        vocab = [f"term{i:03d}" for i in range(60)]
        texts = [" ".join(rng.choice(vocab) for _ in range(20)) for _ in range(10)]
        sample = lines_of(*texts)
        previous = None
        for size in (10, 20, 40, 60):
            d = Dictionary(language="xx", entries=frozenset(vocab[:size]))
            oov = audit_tokens(sample, d).oov_count
            if previous is not None:
                assert oov <= previous
            previous = oov


class TestSampleLines:
    def uniform_corpus(self, n_lines: int = 10, words: int = 10):
        return [
            line_from_text(" ".join(f"w{i:04d}x{j}" for j in range(words)))
            for i in range(n_lines)
        ]

    def test_uniform_lines_exact_budget(self):
        corpus = self.uniform_corpus(10, 10)
        for seed in (0, 1, 99):
            sample = sample_lines(corpus, 50, seed=seed)
            assert len(sample) == 5
            assert sum(len(l.text.split()) for l in sample) == 50

    def test_budget_exceeding_corpus(self):
        corpus = self.uniform_corpus(10, 10)
        with pytest.raises(InsufficientCorpusError) as exc:
            sample_lines(corpus, 101, seed=0)
        assert exc.value.available == 100

    def test_exact_budget_equals_whole_corpus(self):
        corpus = self.uniform_corpus(10, 10)
        sample = sample_lines(corpus, 100, seed=3)
        assert len(sample) == 10

    def test_determinism(self):
        corpus = self.uniform_corpus(200, 8)
        s1 = sample_lines(corpus, 64, seed=7)
        s2 = sample_lines(corpus, 64, seed=7)
        assert [l.text for l in s1] == [l.text for l in s2]
        s3 = sample_lines(corpus, 64, seed=8)
        assert [l.text for l in s1] != [l.text for l in s3]

    def test_sample_is_without_replacement(self):
        corpus = self.uniform_corpus(50, 4)
        sample = sample_lines(corpus, 120, seed=5)
        texts = [l.text for l in sample]
        assert len(texts) == len(set(texts))

    def test_word_count_window(self):
        # Sampled words land in [budget, budget + max line words).
        rng = random.Random(60)
        corpus = [
            line_from_text(" ".join(f"t{i}w{j}" for j in range(rng.randint(1, 30))))
            for i in range(400)
        ]
        max_words = max(len(l.text.split()) for l in corpus)
        for seed in range(20):
            sample = sample_lines(corpus, 500, seed=seed)
            got = sum(len(l.text.split()) for l in sample)
            assert 500 <= got < 500 + max_words

    def test_skewed_lengths_still_reach_budget(self):
        # Mostly 1-word lines with a few 50-word lines: the initial
        # reservoir regularly undershoots and must be regrown.
        corpus = [line_from_text(f"single{i}") for i in range(900)]
        corpus += [
            line_from_text(" ".join(f"big{i}w{j}" for j in range(50)))
            for i in range(100)
        ]
        for seed in range(10):
            sample = sample_lines(corpus, 800, seed=seed)
            assert sum(len(l.text.split()) for l in sample) >= 800

    def test_empty_corpus(self):
        with pytest.raises(ConfigError):
            sample_lines([], 10, seed=0)

    def test_bad_budget(self):
        with pytest.raises(ConfigError):
            sample_lines(self.uniform_corpus(), 0, seed=0)


class TestCompareCorpora:
    def report(self, name: str, oov: int, language: str = "da", budget: int = 1_000_000):
        return NoisinessReport(
            language=language,
            corpus_name=name,
            sampled_words=budget,
            oov_count=oov,
            in_vocab_count=budget - oov,
            filtered_out=0,
            word_budget=budget,
            seed=0,
        )

    def test_second_corpus_lower(self):
        text = compare_corpora(
            self.report("encyclopedia", 134_677), self.report("webcrawl", 123_299)
        )
        assert "134,677" in text
        assert "123,299" in text
        assert "webcrawl lower by 11,378" in text

    def test_second_corpus_higher(self):
        text = compare_corpora(
            self.report("encyclopedia", 60_879), self.report("webcrawl", 66_558)
        )
        assert "webcrawl higher by 5,679" in text

    def test_identical_reports(self):
        text = compare_corpora(self.report("a", 5), self.report("b", 5))
        assert "equal" in text
        assert "+0" in text

    def test_budget_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            compare_corpora(
                self.report("a", 5, budget=1000), self.report("b", 5, budget=2000)
            )

    def test_language_mismatch_rejected(self):
        with pytest.raises(ConfigError):
            compare_corpora(
                self.report("a", 5, language="da"), self.report("b", 5, language="fi")
            )
