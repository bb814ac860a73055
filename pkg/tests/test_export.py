"""Export splits, manifests, archives, and round-trip re-ingest."""

import json
import random
import zipfile
from io import BytesIO

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bitexthub.corpus import LangTag, PairOrigin
from bitexthub.engine import Platform
from bitexthub.errors import DataError
from bitexthub.exporter import (
    DEFAULT_RATIOS,
    allocate_counts,
    check_ratios,
    export_bitext,
    export_tsv,
    export_zip_bytes,
    read_bitext,
    read_bitext_files,
    read_tsv,
    split_rows,
    verify_manifest,
)

EN = LangTag.EN
OM = LangTag.OM


def make_rows(count, tag="r"):
    return [{"id": f"p{tag}{i}",
             "en": f"English sentence {tag} {i} with words .",
             "om": f"Hima Afaan Oromoo {tag} {i} jechoota qabu ."}
            for i in range(count)]


# -- allocation -------------------------------------------------------------------

def test_ten_pairs_split_eight_one_one():
    assert allocate_counts(10, DEFAULT_RATIOS) == [8, 1, 1]


def test_allocation_anchors():
    assert allocate_counts(0, DEFAULT_RATIOS) == [0, 0, 0]
    assert allocate_counts(1, DEFAULT_RATIOS) == [1, 0, 0]
    # n=2: remainders are (.6, .2, .2), so train takes the leftover
    assert allocate_counts(2, DEFAULT_RATIOS) == [2, 0, 0]
    assert allocate_counts(5, DEFAULT_RATIOS) == [4, 1, 0]
    assert allocate_counts(100, DEFAULT_RATIOS) == [80, 10, 10]
    assert allocate_counts(9, (1 / 3, 1 / 3, 1 / 3)) == [3, 3, 3]


@settings(derandomize=True, max_examples=200)
@given(n=st.integers(min_value=0, max_value=5000),
       raw=st.tuples(st.integers(1, 50), st.integers(1, 50),
                     st.integers(1, 50)))
def test_allocation_conserves_and_bounds(n, raw):
    total = sum(raw)
    ratios = tuple(x / total for x in raw)
    counts = allocate_counts(n, ratios)
    assert sum(counts) == n
    assert all(c >= 0 for c in counts)
    for c, r in zip(counts, ratios):
        assert abs(c - n * r) < 1


def test_ratio_validation():
    check_ratios(DEFAULT_RATIOS)
    with pytest.raises(DataError):
        check_ratios((0.5, 0.5))
    with pytest.raises(DataError):
        check_ratios((0.9, 0.1, 0.1))
    with pytest.raises(DataError):
        check_ratios((1.0, 0.0, 0.0))
    with pytest.raises(DataError):
        check_ratios((1.2, -0.1, -0.1))


# -- splitting ----------------------------------------------------------------------

def test_split_matches_shuffle_oracle():
    rows = make_rows(37)
    splits = split_rows(rows, seed=99, ratios=DEFAULT_RATIOS)
    expected = list(rows)
    random.Random(99).shuffle(expected)
    rebuilt = splits["train"] + splits["dev"] + splits["test"]
    assert rebuilt == expected


def test_split_is_disjoint_cover():
    rows = make_rows(53)
    splits = split_rows(rows, seed=5, ratios=DEFAULT_RATIOS)
    ids = [r["id"] for part in splits.values() for r in part]
    assert sorted(ids) == sorted(r["id"] for r in rows)
    assert len(ids) == len(set(ids))


def test_split_seed_determinism():
    rows = make_rows(40)
    a = split_rows(rows, seed=7, ratios=DEFAULT_RATIOS)
    b = split_rows(rows, seed=7, ratios=DEFAULT_RATIOS)
    c = split_rows(rows, seed=8, ratios=DEFAULT_RATIOS)
    assert a == b
    assert a != c


# -- directory export ----------------------------------------------------------------

def test_export_writes_expected_files(tmp_path):
    manifest = export_bitext(make_rows(10), tmp_path, seed=3,
                             ratios=DEFAULT_RATIOS)
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["corpus.dev.en", "corpus.dev.om", "corpus.manifest.json",
                     "corpus.test.en", "corpus.test.om", "corpus.train.en",
                     "corpus.train.om"]
    assert manifest["pairs"] == 10
    assert manifest["seed"] == 3
    assert manifest["filter"] == "verified"
    lines = {n: len((tmp_path / n).read_text().splitlines()) for n in names
             if not n.endswith(".json")}
    assert lines["corpus.train.en"] == lines["corpus.train.om"] == 8
    assert lines["corpus.dev.en"] == lines["corpus.dev.om"] == 1
    assert lines["corpus.test.en"] == lines["corpus.test.om"] == 1


def test_export_same_seed_byte_identical(tmp_path):
    rows = make_rows(23)
    export_bitext(rows, tmp_path / "a", seed=11, ratios=DEFAULT_RATIOS)
    export_bitext(rows, tmp_path / "b", seed=11, ratios=DEFAULT_RATIOS)
    for p in sorted((tmp_path / "a").iterdir()):
        assert p.read_bytes() == (tmp_path / "b" / p.name).read_bytes()


def test_export_unsplit(tmp_path):
    manifest = export_bitext(make_rows(4), tmp_path)
    assert sorted(manifest["files"]) == ["corpus.en", "corpus.om"]
    assert manifest["ratios"] is None
    rows = read_bitext(tmp_path, "corpus")
    assert len(rows) == 4


def test_export_round_trip_preserves_pair_set(tmp_path):
    rows = make_rows(29)
    export_bitext(rows, tmp_path, seed=2, ratios=DEFAULT_RATIOS)
    recovered = []
    for part in ("train", "dev", "test"):
        recovered.extend(read_bitext(tmp_path, f"corpus.{part}"))
    assert sorted(recovered) == sorted((r["en"], r["om"]) for r in rows)


def test_manifest_verifies_and_detects_tamper(tmp_path):
    export_bitext(make_rows(12), tmp_path, seed=1, ratios=DEFAULT_RATIOS)
    manifest = verify_manifest(tmp_path, "corpus")
    assert manifest["pairs"] == 12
    victim = tmp_path / "corpus.train.en"
    victim.write_text(victim.read_text() + "extra line\n")
    with pytest.raises(DataError, match="digest mismatch"):
        verify_manifest(tmp_path, "corpus")


def test_manifest_detects_missing_file(tmp_path):
    export_bitext(make_rows(6), tmp_path, seed=1, ratios=DEFAULT_RATIOS)
    (tmp_path / "corpus.dev.om").unlink()
    with pytest.raises(DataError, match="missing file"):
        verify_manifest(tmp_path, "corpus")
    with pytest.raises(DataError, match="missing manifest"):
        verify_manifest(tmp_path, "nothere")


def test_manifest_digest_changes_with_content(tmp_path):
    m1 = export_bitext(make_rows(5, "a"), tmp_path / "x", seed=1,
                       ratios=DEFAULT_RATIOS)
    m2 = export_bitext(make_rows(5, "b"), tmp_path / "y", seed=1,
                       ratios=DEFAULT_RATIOS)
    assert m1["digest"] != m2["digest"]


def test_export_rejects_bad_ratios(tmp_path):
    with pytest.raises(DataError):
        export_bitext(make_rows(4), tmp_path, seed=0, ratios=(0.7, 0.2, 0.2))


# -- zip ------------------------------------------------------------------------------

def test_zip_two_files_sorted_and_stable():
    rows = make_rows(7)
    blob_a = export_zip_bytes(rows)
    blob_b = export_zip_bytes(list(rows))
    assert blob_a == blob_b
    archive = zipfile.ZipFile(BytesIO(blob_a))
    assert archive.namelist() == ["corpus.en", "corpus.om"]
    for info in archive.infolist():
        assert info.date_time == (1980, 1, 1, 0, 0, 0)
    en_lines = archive.read("corpus.en").decode().splitlines()
    assert en_lines == [r["en"] for r in rows]


def test_zip_empty_corpus():
    archive = zipfile.ZipFile(BytesIO(export_zip_bytes([])))
    assert archive.read("corpus.en") == b""
    assert archive.read("corpus.om") == b""


# -- tsv ------------------------------------------------------------------------------

def test_tsv_round_trip(tmp_path):
    rows = make_rows(9)
    count = export_tsv(rows, tmp_path / "pairs.tsv")
    assert count == 9
    back = read_tsv(tmp_path / "pairs.tsv")
    assert back == [(r["en"], r["om"]) for r in rows]


def test_tsv_rejects_ragged_line(tmp_path):
    (tmp_path / "bad.tsv").write_text("one\ttwo\nlonely\n")
    with pytest.raises(DataError, match="two tab-separated"):
        read_tsv(tmp_path / "bad.tsv")


# -- bitext reading -------------------------------------------------------------------

def test_read_bitext_mismatched_lines(tmp_path):
    (tmp_path / "a.en").write_text("one\ntwo\n")
    (tmp_path / "a.om").write_text("tokko\n")
    with pytest.raises(DataError, match="differ"):
        read_bitext_files(tmp_path / "a.en", tmp_path / "a.om")


def test_read_bitext_missing_file(tmp_path):
    (tmp_path / "a.en").write_text("one\n")
    with pytest.raises(DataError, match="missing"):
        read_bitext_files(tmp_path / "a.en", tmp_path / "a.om")


# -- platform integration ----------------------------------------------------------------

def test_engine_export_ingest_round_trip(tmp_path):
    source = Platform()
    raw = [(f"The number {i} appears here.", f"Lakkoofsi {i} as jira.")
           for i in range(15)]
    source.ingest_pairs(raw, EN, OM, PairOrigin.IMPORTED, "orig")
    rows = source.pairs_by_status({"pending"})
    export_bitext(rows, tmp_path, seed=4, ratios=DEFAULT_RATIOS)

    target = Platform()
    for part in ("train", "dev", "test"):
        pairs = read_bitext(tmp_path, f"corpus.{part}")
        report = target.ingest_pairs(pairs, EN, OM, PairOrigin.IMPORTED, part)
        # canonical lines re-ingest without drops or duplicates
        assert report["added"] == len(pairs)
    first = {(r["en"], r["om"]) for r in rows}
    second = {(r["en"], r["om"]) for r in target.pairs_by_status({"pending"})}
    assert first == second


def test_manifest_json_is_sorted_and_stable(tmp_path):
    export_bitext(make_rows(3), tmp_path, seed=0, ratios=DEFAULT_RATIOS)
    text = (tmp_path / "corpus.manifest.json").read_text()
    parsed = json.loads(text)
    assert text == json.dumps(parsed, indent=2, sort_keys=True) + "\n"
