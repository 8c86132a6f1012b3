"""Deterministic synthetic inputs for tests and demos.

Toy "languages" are weighted character distributions over distinct
alphabets (two Latin profiles with very different letter statistics,
plus Cyrillic, Greek, and Arabic), so classifier accuracy targets mean
something without shipping real corpora. The WET generator emits a
well-formed archive together with a ground-truth ledger: true language
per line, which lines are planted duplicates, and per-line char/byte
counts, so every downstream assertion can be checked by brute force.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import ConfigError


@dataclass(frozen=True)
class LanguageProfile:
    name: str
    letters: str  # weighted alphabet: repetition = frequency
    word_len: tuple[int, int]
    double_prob: float  # chance of doubling one letter inside a word


PROFILES: tuple[LanguageProfile, ...] = (
    # Consonant-heavy Latin, English-like letter weights.
    LanguageProfile("latin_west", "eeeeettttaaaooiinnssrrhhlldcumfgpwyb", (2, 9), 0.02),
    # Vowel-heavy Latin with umlauts and frequent doubling.
    LanguageProfile("latin_north", "aaaaiiiieeeuuooäääööyyttkknnllssmmrv", (3, 11), 0.30),
    LanguageProfile("cyrillic", "ооооееааииннттссррввллккммддппуяыз", (3, 10), 0.03),
    LanguageProfile("greek", "αααοοοεειιηηττσσννρρκκππμλυωγδ", (3, 10), 0.02),
    LanguageProfile("arabic", "ااااللللييممووننتتببررسسعدهكقف", (2, 8), 0.0),
)


def profile_for(index: int) -> LanguageProfile:
    return PROFILES[index % len(PROFILES)]


def _word(rng: random.Random, profile: LanguageProfile) -> str:
    length = rng.randint(*profile.word_len)
    chars = rng.choices(profile.letters, k=length)
    if length > 1 and rng.random() < profile.double_prob:
        pos = rng.randrange(length)
        chars[pos] = chars[pos] * 2
    return "".join(chars)


def toy_line(
    rng: random.Random,
    profile: LanguageProfile,
    char_range: tuple[int, int] = (60, 160),
) -> str:
    """One synthetic sentence-ish line of roughly the target length."""
    target = rng.randint(*char_range)
    words = []
    length = 0
    while length < target:
        word = _word(rng, profile)
        if not words and rng.random() < 0.5:
            word = word[0].upper() + word[1:]
        words.append(word)
        length += len(word) + 1
    text = " ".join(words)
    if rng.random() < 0.7:
        text += "."
    return text


def toy_corpora(
    languages: Sequence[str],
    lines_per_language: int,
    seed: int = 0,
    char_range: tuple[int, int] = (40, 120),
) -> dict[str, list[str]]:
    """Labelled line corpora; language i gets alphabet profile i mod 5."""
    corpora: dict[str, list[str]] = {}
    for i, lang in enumerate(languages):
        # str seeds hash via SHA-512 inside random.Random, so this stays
        # stable across processes (unlike built-in hash()).
        rng = random.Random(f"{seed}|{i}|{lang}")
        profile = profile_for(i)
        corpora[lang] = [toy_line(rng, profile, char_range) for _ in range(lines_per_language)]
    return corpora


def toy_vocabulary(profile_index: int, size: int, seed: int = 0) -> list[str]:
    """Distinct lowercase words drawn from one language profile."""
    rng = random.Random(seed)
    profile = profile_for(profile_index)
    seen: set[str] = set()
    words = []
    while len(words) < size:
        word = _word(rng, profile)
        if word not in seen:
            seen.add(word)
            words.append(word)
    return words


def planted_duplicate_stream(
    n_lines: int, duplicate_rate: float, seed: int = 0, prefix: str = "line"
) -> tuple[list[str], int]:
    """Fast synthetic line stream with exactly floor(rate*n) duplicates.

    Unique lines are counter-tagged so they can never collide; each
    planted duplicate copies a random earlier line.
    """
    if not 0.0 <= duplicate_rate < 1.0:
        raise ConfigError(f"duplicate_rate must be in [0, 1), got {duplicate_rate}")
    rng = random.Random(seed)
    n_dupes = int(duplicate_rate * n_lines)
    dup_positions = set(rng.sample(range(1, n_lines), n_dupes)) if n_dupes else set()
    lines: list[str] = []
    for i in range(n_lines):
        if i in dup_positions:
            lines.append(lines[rng.randrange(i)])
        else:
            lines.append(f"{prefix}-{i:08d}-{rng.getrandbits(48):012x}")
    return lines, n_dupes


# --- WET archive generation --------------------------------------------------


@dataclass(frozen=True)
class FixtureSpec:
    languages: tuple[str, ...]
    docs_per_language: int
    lines_per_doc: int = 10
    char_range: tuple[int, int] = (60, 160)
    duplicate_rate: float = 0.0
    seed: int = 0
    include_warcinfo: bool = True

    def __post_init__(self):
        if not self.languages:
            raise ConfigError("need at least one language")
        if self.docs_per_language < 1 or self.lines_per_doc < 1:
            raise ConfigError("docs_per_language and lines_per_doc must be >= 1")
        if not 0.0 <= self.duplicate_rate < 1.0:
            raise ConfigError(f"duplicate_rate must be in [0, 1), got {self.duplicate_rate}")
        if self.char_range[0] < 1 or self.char_range[0] > self.char_range[1]:
            raise ConfigError(f"bad char_range {self.char_range}")

    @property
    def total_lines(self) -> int:
        return len(self.languages) * self.docs_per_language * self.lines_per_doc

    def to_dict(self) -> dict:
        return {
            "languages": list(self.languages),
            "docs_per_language": self.docs_per_language,
            "lines_per_doc": self.lines_per_doc,
            "char_range": list(self.char_range),
            "duplicate_rate": self.duplicate_rate,
            "seed": self.seed,
            "include_warcinfo": self.include_warcinfo,
        }


def _record_bytes(headers: list[tuple[str, str]], body: bytes) -> bytes:
    head = b"WARC/1.0\r\n"
    for key, value in headers:
        head += f"{key}: {value}\r\n".encode("utf-8")
    head += f"Content-Length: {len(body)}\r\n".encode("ascii")
    return head + b"\r\n" + body + b"\r\n\r\n"


def generate_wet(spec: FixtureSpec) -> tuple[bytes, dict]:
    """Build archive bytes plus the ground-truth ledger.

    The ledger lists every text line in archive order with its true
    language, char/byte counts, and whether it repeats an earlier line
    of the same language; exactly floor(duplicate_rate * total_lines)
    such repeats are planted.
    """
    rng = random.Random(spec.seed)
    n_dupes = int(spec.duplicate_rate * spec.total_lines)
    if n_dupes > spec.total_lines - len(spec.languages):
        raise ConfigError("duplicate_rate too high for this many languages")

    # Lay out documents, then shuffle so languages interleave in the
    # archive the way crawl data does.
    docs = [
        (lang_i, lang, doc_i)
        for lang_i, lang in enumerate(spec.languages)
        for doc_i in range(spec.docs_per_language)
    ]
    rng.shuffle(docs)

    # Choose duplicate slots among positions that have an earlier line
    # of the same language in archive order.
    eligible: list[int] = []
    lang_seen_before: dict[str, int] = {lang: 0 for lang in spec.languages}
    slot_lang: list[str] = []
    for _, lang, _ in docs:
        for _ in range(spec.lines_per_doc):
            slot = len(slot_lang)
            slot_lang.append(lang)
            if lang_seen_before[lang] > 0:
                eligible.append(slot)
            lang_seen_before[lang] += 1
    dup_slots = set(rng.sample(eligible, n_dupes)) if n_dupes else set()

    emitted: dict[str, list[str]] = {lang: [] for lang in spec.languages}
    unique_seen: dict[str, set[str]] = {lang: set() for lang in spec.languages}
    ledger_lines: list[dict] = []
    chunks: list[bytes] = []
    ordinal = 0

    if spec.include_warcinfo:
        info = b"software: webcorpus fixture generator\r\n"
        chunks.append(
            _record_bytes(
                [("WARC-Type", "warcinfo"), ("WARC-Record-ID", "<urn:uuid:0>")], info
            )
        )
        ordinal += 1

    slot = 0
    for lang_i, lang, doc_i in docs:
        profile = profile_for(lang_i)
        doc_lines: list[str] = []
        for _ in range(spec.lines_per_doc):
            if slot in dup_slots:
                text = emitted[lang][rng.randrange(len(emitted[lang]))]
                is_dup = True
            else:
                while True:
                    text = toy_line(rng, profile, spec.char_range)
                    if text not in unique_seen[lang]:
                        break
                unique_seen[lang].add(text)
                is_dup = False
            emitted[lang].append(text)
            doc_lines.append(text)
            ledger_lines.append(
                {
                    "language": lang,
                    "doc": ordinal,
                    "char_count": len(text),
                    "byte_count": len(text.encode("utf-8")),
                    "duplicate": is_dup,
                }
            )
            slot += 1
        body = ("\n".join(doc_lines) + "\n").encode("utf-8")
        chunks.append(
            _record_bytes(
                [
                    ("WARC-Type", "conversion"),
                    ("WARC-Target-URI", f"https://example.org/{lang}/{doc_i}"),
                ],
                body,
            )
        )
        ordinal += 1

    ledger = {
        "spec": spec.to_dict(),
        "total_lines": spec.total_lines,
        "planted_duplicates": n_dupes,
        "records": ordinal,
        "per_language": {
            lang: {
                "lines": len(emitted[lang]),
                "distinct_lines": len(unique_seen[lang]),
            }
            for lang in spec.languages
        },
        "lines": ledger_lines,
    }
    return b"".join(chunks), ledger


def write_fixture(spec: FixtureSpec, out_dir: str | Path, name: str = "fixture") -> tuple[Path, Path]:
    """Write <name>.wet and <name>.ledger.json under out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    archive, ledger = generate_wet(spec)
    archive_path = out_dir / f"{name}.wet"
    ledger_path = out_dir / f"{name}.ledger.json"
    archive_path.write_bytes(archive)
    ledger_path.write_text(json.dumps(ledger, indent=2, sort_keys=True), encoding="utf-8")
    return archive_path, ledger_path
