"""Operator command line: ingest, align, export, bleu, stats, serve.

Exit codes: 0 success, 2 usage error (click's own), 3 data error, 4 store
error. Errors print one line to stderr: `error: <message>`.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from .bleu import BleuConfig, CaseMode, Smoothing, corpus_bleu
from .config import load_config
from .corpus import LangTag, PairOrigin, PairStatus
from .engine import Platform
from .errors import DataError, StoreError
from .exporter import (
    DEFAULT_RATIOS,
    export_bitext,
    read_bitext_files,
)

STATUS_CHOICES = {
    "verified": {PairStatus.VERIFIED.value},
    "pending": {PairStatus.PENDING.value},
    "verified+pending": {PairStatus.VERIFIED.value, PairStatus.PENDING.value},
    "all": {s.value for s in PairStatus},
}


def _die(code: int, exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(code)


def guarded(fn):
    """Map exception classes onto the documented exit codes."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except StoreError as exc:
            _die(4, exc)
        except DataError as exc:
            _die(3, exc)
        except OSError as exc:
            _die(3, exc)
    return wrapper


def _config_for(ctx) -> tuple:
    path = ctx.obj.get("config") or os.environ.get("BITEXTHUB_CONFIG")
    cfg = load_config(path)
    store = ctx.obj.get("store") or cfg.store_dir
    return cfg, store


def _open_platform(ctx) -> Platform:
    cfg, store = _config_for(ctx)
    return Platform.open(store, policy=cfg.policy,
                         filter_rules=cfg.filter_rules,
                         align_params=cfg.align_params())


def _emit(as_json: bool, payload: dict, human: str) -> None:
    if as_json:
        click.echo(json.dumps(payload, indent=2, sort_keys=True))
    else:
        click.echo(human)


@click.group()
@click.option("--store", type=click.Path(), default=None,
              help="Store directory (overrides config).")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="JSON config file (or BITEXTHUB_CONFIG).")
@click.pass_context
def cli(ctx, store, config_path):
    """Parallel-corpus platform tools."""
    ctx.obj = {"store": store, "config": config_path}


@cli.command()
@click.argument("src_file", type=click.Path())
@click.argument("tgt_file", type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["bitext", "docpair"]),
              default="bitext", show_default=True)
@click.option("--src-lang", type=click.Choice(["en", "om"]), default="en",
              show_default=True)
@click.option("--tgt-lang", type=click.Choice(["en", "om"]), default="om",
              show_default=True)
@click.option("--name", default=None, help="Source label for the ingest.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
@guarded
def ingest(ctx, src_file, tgt_file, fmt, src_lang, tgt_lang, name, as_json):
    """Load a line-aligned bitext, or stage a raw document pair."""
    platform = _open_platform(ctx)
    src = LangTag(src_lang)
    tgt = LangTag(tgt_lang)
    label = name or Path(src_file).stem
    if fmt == "bitext":
        rows = read_bitext_files(src_file, tgt_file)
        report = platform.ingest_pairs(rows, src, tgt, PairOrigin.IMPORTED,
                                       source_doc=label)
        dropped = report["dropped"]
        _emit(as_json, report,
              f"added {report['added']}, duplicates {report['duplicates']}, "
              f"dropped {sum(dropped.values())} "
              f"(empty {dropped['empty']}, length {dropped['length']}, "
              f"ratio {dropped['ratio']})")
    else:
        src_doc = Path(src_file).read_text(encoding="utf-8")
        tgt_doc = Path(tgt_file).read_text(encoding="utf-8")
        doc = platform.stage_documents(src_doc, tgt_doc, src, tgt, name=label)
        _emit(as_json, {"doc_id": doc["id"], "name": doc["name"]},
              f"staged {doc['id']} ({doc['name']}); "
              f"run `bitexthub align {doc['id']}`")


@cli.command()
@click.argument("doc_id", required=False)
@click.option("--all", "align_all", is_flag=True,
              help="Align every staged, unaligned document pair.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
@guarded
def align(ctx, doc_id, align_all, as_json):
    """Sentence-align staged documents into pending pairs."""
    if not doc_id and not align_all:
        raise click.UsageError("give a DOC_ID or --all")
    platform = _open_platform(ctx)
    if align_all:
        targets = [d["id"] for d in platform.docs.values() if not d["aligned"]]
    else:
        targets = [doc_id]
    reports = {}
    for target in targets:
        reports[target] = platform.align_document(target)
    if as_json:
        click.echo(json.dumps(reports, indent=2, sort_keys=True))
    else:
        for target, report in reports.items():
            click.echo(
                f"{target}: {report['links']} links, "
                f"added {report['added']}, duplicates {report['duplicates']}, "
                f"dropped {sum(report['dropped'].values())}")
        if not reports:
            click.echo("nothing to align")


@cli.command()
@click.argument("out_dir", type=click.Path())
@click.option("--status", type=click.Choice(sorted(STATUS_CHOICES)),
              default="verified", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--ratios", default=None,
              help="train,dev,test fractions (default 0.8,0.1,0.1).")
@click.option("--no-split", is_flag=True, help="Single file pair, no splits.")
@click.option("--name", default="corpus", show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
@guarded
def export(ctx, out_dir, status, seed, ratios, no_split, name, as_json):
    """Write parallel text files plus a digest manifest."""
    platform = _open_platform(ctx)
    rows = platform.pairs_by_status(STATUS_CHOICES[status])
    if no_split:
        parsed = None
    elif ratios is None:
        parsed = DEFAULT_RATIOS
    else:
        try:
            parsed = tuple(float(x) for x in ratios.split(","))
        except ValueError:
            raise DataError(f"cannot parse ratios: {ratios!r}")
    manifest = export_bitext(rows, out_dir, name=name, status_filter=status,
                             seed=seed, ratios=parsed)
    _emit(as_json, manifest,
          f"exported {manifest['pairs']} pairs to {out_dir} "
          f"(digest {manifest['digest'][:12]})")


@cli.command()
@click.argument("candidate_file", type=click.Path())
@click.argument("reference_file", type=click.Path())
@click.option("--max-n", type=int, default=4, show_default=True)
@click.option("--lowercase", is_flag=True, help="Fold case before scoring.")
@click.option("--smoothing", type=click.Choice(["none", "add-epsilon"]),
              default="none", show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Write bleu.tsv and bleu.png here.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
@guarded
def bleu(ctx, candidate_file, reference_file, max_n, lowercase, smoothing,
         out_dir, as_json):
    """Score a candidate file against a line-aligned reference file."""
    cand_lines = Path(candidate_file).read_text(encoding="utf-8").splitlines()
    ref_lines = Path(reference_file).read_text(encoding="utf-8").splitlines()
    if len(cand_lines) != len(ref_lines):
        raise DataError(
            f"line counts differ: {len(cand_lines)} candidates vs "
            f"{len(ref_lines)} references")
    if not cand_lines:
        raise DataError("empty input")
    config = BleuConfig(
        max_n=max_n,
        case_mode=CaseMode.LOWERCASED if lowercase else CaseMode.CASED,
        smoothing=Smoothing.ADD_EPSILON if smoothing == "add-epsilon"
        else Smoothing.NONE,
    )
    report = corpus_bleu([line.split() for line in cand_lines],
                         [[line.split()] for line in ref_lines], config)
    if out_dir:
        from .reports import bleu_figure, bleu_rows, write_kv_tsv
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_kv_tsv(bleu_rows(report), out / "bleu.tsv")
        bleu_figure(report, out / "bleu.png")
    precisions = " ".join(f"p{n}={p.value:.4f}"
                          for n, p in enumerate(report.precisions, start=1))
    _emit(as_json, report.to_dict(),
          f"bleu {report.score:.4f} (bp {report.brevity_penalty:.4f}, "
          f"{precisions})")


@cli.command()
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Write stats.tsv and stats.png here.")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
@guarded
def stats(ctx, out_dir, as_json):
    """Corpus and contributor totals."""
    platform = _open_platform(ctx)
    summary = platform.stats()
    if out_dir:
        from .reports import stats_figure, stats_rows, write_kv_tsv
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_kv_tsv(stats_rows(summary), out / "stats.tsv")
        stats_figure(summary, out / "stats.png")
    by_status = ", ".join(f"{k}={v}"
                          for k, v in sorted(summary["pairs_by_status"].items()))
    _emit(as_json, summary,
          f"pairs {summary['pairs']} ({by_status or 'none'}), "
          f"contributors {summary['contributors']}, "
          f"points {summary['contributor_points']}")


@cli.command()
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--static", "static_dir", type=click.Path(), default=None,
              help="Serve a built UI from this directory.")
@click.pass_context
@guarded
def serve(ctx, host, port, static_dir):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app
    cfg, store = _config_for(ctx)
    platform = Platform.open(store, policy=cfg.policy,
                             filter_rules=cfg.filter_rules,
                             align_params=cfg.align_params())
    static = static_dir or cfg.static_dir or None
    app = create_app(platform, cfg, static_dir=static)
    uvicorn.run(app, host=host or cfg.host, port=port or cfg.port)


def main():
    cli(prog_name="bitexthub")


if __name__ == "__main__":
    main()
