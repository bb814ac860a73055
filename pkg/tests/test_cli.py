"""Command line: exit codes, reports, figures, pipeline round-trip."""

import json
import random

import pytest
from click.testing import CliRunner

from bitexthub.cli import cli
from bitexthub.config import AppConfig, load_config, save_config

EN_DOC = ("The council met on Monday. It approved the new water project. "
          "Work begins next month. Farmers welcomed the decision. "
          "The project will serve three districts.")
OM_DOC = ("Manni marii Wiixata walga'e. Pirojektii bishaanii haaraa "
          "mirkaneesse. Hojiin ji'a dhufu jalqaba. Qonnaan bultoonni murtee "
          "kana simatan. Pirojektiin kun aanaalee sadii tajaajila.")


@pytest.fixture()
def runner():
    return CliRunner()


def write_bitext(tmp_path, stem, rows):
    en = tmp_path / f"{stem}.en"
    om = tmp_path / f"{stem}.om"
    en.write_text("".join(r[0] + "\n" for r in rows), encoding="utf-8")
    om.write_text("".join(r[1] + "\n" for r in rows), encoding="utf-8")
    return str(en), str(om)


def unique_rows(count, tag="u"):
    return [(f"English sentence {tag} {i} here.",
             f"Hima Afaan Oromoo {tag} {i} kana.")
            for i in range(count)]


def invoke(runner, store, args, **kwargs):
    return runner.invoke(cli, ["--store", str(store)] + args, **kwargs)


# -- ingest -------------------------------------------------------------------

def test_ingest_hundred_lines_three_duplicates(runner, tmp_path):
    rows = unique_rows(97)
    rows += [rows[0], rows[1], rows[2]]
    assert len(rows) == 100
    src, tgt = write_bitext(tmp_path, "data", rows)
    result = invoke(runner, tmp_path / "store", ["ingest", src, tgt])
    assert result.exit_code == 0
    assert "added 97, duplicates 3" in result.output


def test_ingest_mismatched_line_counts_exit_3(runner, tmp_path):
    src, _ = write_bitext(tmp_path, "a", unique_rows(100))
    _, tgt = write_bitext(tmp_path, "b", unique_rows(99))
    result = invoke(runner, tmp_path / "store", ["ingest", src, tgt])
    assert result.exit_code == 3
    assert result.stderr.startswith("error: ")
    assert "100" in result.stderr and "99" in result.stderr


def test_ingest_missing_file_exit_3(runner, tmp_path):
    src, tgt = write_bitext(tmp_path, "a", unique_rows(2))
    result = invoke(runner, tmp_path / "store",
                    ["ingest", src, str(tmp_path / "nope.om")])
    assert result.exit_code == 3


def test_ingest_conservation_on_random_files(runner, tmp_path):
    rng = random.Random(321)
    for trial in range(10):
        rows = []
        for i in range(rng.randrange(1, 30)):
            kind = rng.random()
            if kind < 0.15:
                rows.append(("", f"om {trial} {i}"))
            elif kind < 0.25:
                rows.append(("word " * 150, f"om {trial} {i}"))
            elif rows and kind < 0.4:
                rows.append(rng.choice(rows))
            else:
                rows.append((f"en {trial} {i} text.", f"om {trial} {i} wx."))
        src, tgt = write_bitext(tmp_path, f"t{trial}", rows)
        result = invoke(runner, tmp_path / f"store{trial}",
                        ["ingest", src, tgt, "--json"])
        assert result.exit_code == 0
        report = json.loads(result.output)
        total = report["added"] + report["duplicates"] + \
            sum(report["dropped"].values())
        assert total == len(rows)


# -- align / export / re-ingest pipeline --------------------------------------------

def test_docpair_align_export_reingest_round_trip(runner, tmp_path):
    (tmp_path / "doc.en").write_text(EN_DOC, encoding="utf-8")
    (tmp_path / "doc.om").write_text(OM_DOC, encoding="utf-8")
    store1 = tmp_path / "store1"

    staged = invoke(runner, store1,
                    ["ingest", str(tmp_path / "doc.en"),
                     str(tmp_path / "doc.om"), "--format", "docpair",
                     "--json"])
    assert staged.exit_code == 0
    doc_id = json.loads(staged.output)["doc_id"]

    aligned = invoke(runner, store1, ["align", doc_id])
    assert aligned.exit_code == 0
    assert "links" in aligned.output

    out1 = tmp_path / "export1"
    exported = invoke(runner, store1,
                      ["export", str(out1), "--status", "pending",
                       "--seed", "7"])
    assert exported.exit_code == 0

    store2 = tmp_path / "store2"
    for part in ("train", "dev", "test"):
        result = invoke(runner, store2,
                        ["ingest", str(out1 / f"corpus.{part}.en"),
                         str(out1 / f"corpus.{part}.om"), "--json"])
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["duplicates"] == 0
        assert sum(report["dropped"].values()) == 0

    out2 = tmp_path / "export2"
    invoke(runner, store2,
           ["export", str(out2), "--status", "pending", "--seed", "7"])

    def pair_set(out_dir):
        pairs = set()
        for part in ("train", "dev", "test"):
            en = (out_dir / f"corpus.{part}.en").read_text().splitlines()
            om = (out_dir / f"corpus.{part}.om").read_text().splitlines()
            pairs.update(zip(en, om))
        return pairs

    assert pair_set(out1) == pair_set(out2)
    assert pair_set(out1)


def test_align_requires_target(runner, tmp_path):
    result = invoke(runner, tmp_path / "store", ["align"])
    assert result.exit_code == 2


def test_align_unknown_doc_exit_3(runner, tmp_path):
    result = invoke(runner, tmp_path / "store", ["align", "missing-doc"])
    assert result.exit_code == 3


def test_align_all_with_nothing_staged(runner, tmp_path):
    result = invoke(runner, tmp_path / "store", ["align", "--all"])
    assert result.exit_code == 0
    assert "nothing to align" in result.output


def test_export_same_seed_byte_identical(runner, tmp_path):
    src, tgt = write_bitext(tmp_path, "data", unique_rows(10))
    store = tmp_path / "store"
    invoke(runner, store, ["ingest", src, tgt])
    invoke(runner, store, ["export", str(tmp_path / "x"),
                           "--status", "pending", "--seed", "4"])
    invoke(runner, store, ["export", str(tmp_path / "y"),
                           "--status", "pending", "--seed", "4"])
    for p in sorted((tmp_path / "x").iterdir()):
        assert p.read_bytes() == (tmp_path / "y" / p.name).read_bytes()


def test_export_bad_ratios_exit_3(runner, tmp_path):
    src, tgt = write_bitext(tmp_path, "data", unique_rows(4))
    store = tmp_path / "store"
    invoke(runner, store, ["ingest", src, tgt])
    result = invoke(runner, store,
                    ["export", str(tmp_path / "out"), "--status", "pending",
                     "--ratios", "0.5,0.5"])
    assert result.exit_code == 3
    result = invoke(runner, store,
                    ["export", str(tmp_path / "out"), "--status", "pending",
                     "--ratios", "a,b,c"])
    assert result.exit_code == 3


def test_export_no_split(runner, tmp_path):
    src, tgt = write_bitext(tmp_path, "data", unique_rows(6))
    store = tmp_path / "store"
    invoke(runner, store, ["ingest", src, tgt])
    result = invoke(runner, store,
                    ["export", str(tmp_path / "out"), "--status", "pending",
                     "--no-split", "--json"])
    assert result.exit_code == 0
    manifest = json.loads(result.output)
    assert sorted(manifest["files"]) == ["corpus.en", "corpus.om"]
    assert manifest["pairs"] == 6


# -- bleu ----------------------------------------------------------------------------------

def test_bleu_identical_files_scores_one(runner, tmp_path):
    lines = ["the cat sat on the mat", "dogs bark loudly at night",
             "rivers flow toward the sea now"]
    (tmp_path / "cand.txt").write_text("".join(l + "\n" for l in lines))
    (tmp_path / "ref.txt").write_text("".join(l + "\n" for l in lines))
    result = invoke(runner, tmp_path / "store",
                    ["bleu", str(tmp_path / "cand.txt"),
                     str(tmp_path / "ref.txt"), "--json"])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["score"] == 1.0
    assert report["brevity_penalty"] == 1.0


def test_bleu_human_line(runner, tmp_path):
    (tmp_path / "c.txt").write_text("a b c d e\n")
    (tmp_path / "r.txt").write_text("a b c d e\n")
    result = invoke(runner, tmp_path / "store",
                    ["bleu", str(tmp_path / "c.txt"), str(tmp_path / "r.txt")])
    assert result.exit_code == 0
    assert result.output.startswith("bleu 1.0000")
    assert "p1=1.0000" in result.output


def test_bleu_mismatched_lines_exit_3(runner, tmp_path):
    (tmp_path / "c.txt").write_text("a b\nc d\n")
    (tmp_path / "r.txt").write_text("a b\n")
    result = invoke(runner, tmp_path / "store",
                    ["bleu", str(tmp_path / "c.txt"), str(tmp_path / "r.txt")])
    assert result.exit_code == 3


def test_bleu_writes_figure_and_tsv(runner, tmp_path):
    (tmp_path / "c.txt").write_text("the cat sat on the mat\n")
    (tmp_path / "r.txt").write_text("the cat sat on a mat\n")
    out = tmp_path / "report"
    result = invoke(runner, tmp_path / "store",
                    ["bleu", str(tmp_path / "c.txt"), str(tmp_path / "r.txt"),
                     "--smoothing", "add-epsilon", "--out", str(out)])
    assert result.exit_code == 0
    tsv = (out / "bleu.tsv").read_text().splitlines()
    assert any(line.startswith("bleu\t") for line in tsv)
    assert any(line.startswith("p4_counts\t") for line in tsv)
    png = (out / "bleu.png").read_bytes()
    assert png[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(png) > 1000


# -- stats ------------------------------------------------------------------------------------

def test_stats_counts_42_pairs(runner, tmp_path):
    src, tgt = write_bitext(tmp_path, "data", unique_rows(42))
    store = tmp_path / "store"
    invoke(runner, store, ["ingest", src, tgt])
    result = invoke(runner, store, ["stats", "--json"])
    assert result.exit_code == 0
    summary = json.loads(result.output)
    assert summary["pairs"] == 42
    assert summary["pairs_by_status"] == {"pending": 42}
    human = invoke(runner, store, ["stats"])
    assert "pairs 42" in human.output


def test_stats_writes_figure_and_tsv(runner, tmp_path):
    src, tgt = write_bitext(tmp_path, "data", unique_rows(5))
    store = tmp_path / "store"
    invoke(runner, store, ["ingest", src, tgt])
    out = tmp_path / "report"
    result = invoke(runner, store, ["stats", "--out", str(out)])
    assert result.exit_code == 0
    tsv = (out / "stats.tsv").read_text()
    assert "pairs\t5" in tsv
    assert (out / "stats.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_stats_on_empty_store(runner, tmp_path):
    result = invoke(runner, tmp_path / "store", ["stats"])
    assert result.exit_code == 0
    assert "pairs 0" in result.output


# -- exit codes and config ------------------------------------------------------------------------

def test_usage_error_exit_2(runner, tmp_path):
    assert invoke(runner, tmp_path / "s", ["no-such-command"]).exit_code == 2
    assert invoke(runner, tmp_path / "s",
                  ["export"]).exit_code == 2  # missing OUT_DIR
    assert invoke(runner, tmp_path / "s",
                  ["ingest", "a.en", "b.om", "--format", "csv"]).exit_code == 2


def test_corrupt_snapshot_exit_4(runner, tmp_path):
    store = tmp_path / "store"
    src, tgt = write_bitext(tmp_path, "data", unique_rows(2))
    invoke(runner, store, ["ingest", src, tgt])
    (store / "snapshot.json").write_text("{ not json")
    result = invoke(runner, store, ["stats"])
    assert result.exit_code == 4
    assert result.stderr.startswith("error: ")


def test_config_file_round_trip(tmp_path):
    cfg = AppConfig(store_dir=str(tmp_path / "s"), port=9000,
                    admin_token="t0p", translator_mode="external",
                    translator_url="http://mt.local/x")
    save_config(cfg, tmp_path / "conf.json")
    loaded = load_config(tmp_path / "conf.json")
    assert loaded == cfg


def test_cli_reads_config_store(runner, tmp_path):
    cfg = AppConfig(store_dir=str(tmp_path / "confstore"))
    save_config(cfg, tmp_path / "conf.json")
    src, tgt = write_bitext(tmp_path, "data", unique_rows(3))
    result = runner.invoke(cli, ["--config", str(tmp_path / "conf.json"),
                                 "ingest", src, tgt])
    assert result.exit_code == 0
    assert (tmp_path / "confstore" / "events.jsonl").exists()
    stats = runner.invoke(cli, ["--config", str(tmp_path / "conf.json"),
                                "stats"])
    assert "pairs 3" in stats.output


def test_config_env_var(runner, tmp_path, monkeypatch):
    cfg = AppConfig(store_dir=str(tmp_path / "envstore"))
    save_config(cfg, tmp_path / "conf.json")
    monkeypatch.setenv("BITEXTHUB_CONFIG", str(tmp_path / "conf.json"))
    src, tgt = write_bitext(tmp_path, "data", unique_rows(2))
    result = runner.invoke(cli, ["ingest", src, tgt])
    assert result.exit_code == 0
    assert (tmp_path / "envstore" / "events.jsonl").exists()


def test_env_overrides_config_values(tmp_path, monkeypatch):
    monkeypatch.setenv("BITEXTHUB_PORT", "9999")
    monkeypatch.setenv("BITEXTHUB_ADMIN_TOKEN", "sekrit")
    cfg = load_config(None)
    assert cfg.port == 9999
    assert cfg.admin_token == "sekrit"
