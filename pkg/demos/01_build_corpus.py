"""End-to-end walkthrough: synthesize a crawl archive, train a language
classifier, run the full pipeline, and inspect the manifest.

Run from the repository root:  python3 demos/01_build_corpus.py
"""

import json
import tempfile
from pathlib import Path

from webcorpus.filters import FilterPolicy
from webcorpus.fixtures import FixtureSpec, toy_corpora, write_fixture
from webcorpus.pipeline import PipelineConfig, run_pipeline, verify_manifest

work = Path(tempfile.mkdtemp(prefix="webcorpus-demo-"))
print(f"working under {work}\n")

# --- 1. a synthetic multilingual WET archive -------------------------------
# Three toy languages with distinct alphabets, 30 documents each, and a
# fifth of all lines planted as exact duplicates.
spec = FixtureSpec(
    languages=("aaa", "bbb", "ccc"),
    docs_per_language=30,
    lines_per_doc=10,
    char_range=(60, 160),
    duplicate_rate=0.2,
    seed=1,
)
archive_path, ledger_path = write_fixture(spec, work, name="crawl")
print(f"archive: {archive_path} ({archive_path.stat().st_size:,} bytes)")
print(f"ledger:  {ledger_path}\n")

# --- 2. training corpora for the classifier --------------------------------
train_dir = work / "train"
train_dir.mkdir()
train_paths = {}
for lang, lines in toy_corpora(spec.languages, 150, seed=2).items():
    path = train_dir / f"{lang}.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    train_paths[lang] = path

# --- 3. the pipeline run ----------------------------------------------------
config = PipelineConfig(
    input_paths=[archive_path],
    output_dir=work / "corpus",
    train_corpora=train_paths,
    filter_policy=FilterPolicy.char_at_least(100),
    route_threshold=0.8,
    partitions=4,
    seed=3,
)
manifest = run_pipeline(config)

totals = manifest["totals"]
print("pipeline totals:")
for key, value in totals.items():
    print(f"  {key:<24} {value:>7,}")
print()
print("per language:")
for lang, entry in manifest["languages"].items():
    print(
        f"  {lang}: kept {entry['kept_lines']:>4}  "
        f"filtered {entry['dropped_by_filter']:>4}  "
        f"dupes {entry['dropped_as_duplicate']:>4}  "
        f"discarded {entry['discarded_unclassified']:>4}"
    )
print()

# conservation holds exactly: every line read lands in one bucket
assert totals["lines_read"] == sum(
    totals[k]
    for k in ("kept_lines", "dropped_by_filter", "dropped_as_duplicate",
              "discarded_unclassified", "empty_lines")
)

# --- 4. independent verification --------------------------------------------
violations = verify_manifest(manifest, config.output_dir)
print(f"verify_manifest: {'OK' if not violations else violations}")

sample_file = config.output_dir / f"{spec.languages[0]}.txt"
first = sample_file.read_text(encoding="utf-8").splitlines()[0]
print(f"\nfirst kept {spec.languages[0]} line ({len(first)} chars):\n  {first[:90]}...")

print(f"\nfull manifest: {config.output_dir / 'manifest.json'}")
print(json.dumps(manifest["filter_disparity"], indent=2))
