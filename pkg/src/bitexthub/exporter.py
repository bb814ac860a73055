"""Corpus export and re-ingest: language-suffixed parallel text files, a JSON
manifest with per-file digests, TSV, and zip bundles.

Exported lines are the stored canonical texts, so reading an export back
yields byte-identical rows and identical dedup keys. Splits are produced by
a seeded shuffle of the pair list followed by exact-count slicing, so the
same seed always yields byte-identical files.
"""

from __future__ import annotations

import hashlib
import io
import json
import random
import zipfile
from pathlib import Path

from .corpus import LangTag
from .errors import DataError

MANIFEST_SUFFIX = ".manifest.json"

SPLIT_NAMES = ("train", "dev", "test")
DEFAULT_RATIOS = (0.8, 0.1, 0.1)


def _sha256_bytes(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def _file_body(lines: list[str]) -> bytes:
    if not lines:
        return b""
    return ("\n".join(lines) + "\n").encode("utf-8")


def allocate_counts(n: int, ratios: tuple[float, ...]) -> list[int]:
    """Largest-remainder allocation of n rows to the ratio buckets."""
    exact = [n * r for r in ratios]
    counts = [int(x) for x in exact]
    leftovers = n - sum(counts)
    by_remainder = sorted(range(len(ratios)),
                          key=lambda i: (-(exact[i] - counts[i]), i))
    for i in by_remainder[:leftovers]:
        counts[i] += 1
    return counts


def check_ratios(ratios: tuple[float, ...]) -> None:
    if len(ratios) != len(SPLIT_NAMES):
        raise DataError("ratios must give (train, dev, test)")
    if any(r <= 0 for r in ratios):
        raise DataError("split ratios must all be positive")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise DataError("split ratios must sum to 1")


def split_rows(rows: list[dict], seed: int,
               ratios: tuple[float, ...]) -> dict[str, list[dict]]:
    """Seeded shuffle, then slice into exact-count splits."""
    check_ratios(ratios)
    shuffled = list(rows)
    random.Random(seed).shuffle(shuffled)
    counts = allocate_counts(len(rows), ratios)
    splits: dict[str, list[dict]] = {}
    start = 0
    for name, count in zip(SPLIT_NAMES, counts):
        splits[name] = shuffled[start:start + count]
        start += count
    return splits


def _render_files(rows: list[dict], name: str, seed: int | None,
                  ratios: tuple[float, ...] | None) -> dict[str, list[str]]:
    """Map of file name to its lines; split names in the stem when splitting."""
    if ratios is None:
        buckets = {name: list(rows)}
    else:
        parts = split_rows(rows, 0 if seed is None else seed, ratios)
        buckets = {f"{name}.{part}": part_rows
                   for part, part_rows in parts.items()}
    files: dict[str, list[str]] = {}
    for stem, bucket in buckets.items():
        files[stem + "." + LangTag.EN.value] = [r["en"] for r in bucket]
        files[stem + "." + LangTag.OM.value] = [r["om"] for r in bucket]
    return files


def build_manifest(files: dict[str, list[str]], name: str,
                   status_filter: str, seed: int | None,
                   ratios: tuple[float, ...] | None) -> dict:
    entries = {
        fname: {"lines": len(lines), "sha256": _sha256_bytes(_file_body(lines))}
        for fname, lines in files.items()
    }
    pair_count = sum(
        meta["lines"] for fname, meta in entries.items()
        if fname.endswith("." + LangTag.EN.value))
    overall = _sha256_bytes("\n".join(
        f"{fname} {entries[fname]['sha256']}" for fname in sorted(entries)
    ).encode("utf-8"))
    return {
        "name": name,
        "filter": status_filter,
        "seed": seed,
        "ratios": list(ratios) if ratios else None,
        "pairs": pair_count,
        "files": entries,
        "digest": overall,
    }


def export_bitext(rows: list[dict], out_dir: str | Path, name: str = "corpus",
                  status_filter: str = "verified", seed: int | None = None,
                  ratios: tuple[float, ...] | None = None) -> dict:
    """Write parallel files plus manifest into out_dir; returns the manifest.

    rows carry canonical "en" and "om" texts. ratios=None writes one
    unsplit file pair; otherwise train/dev/test per the seeded shuffle.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = _render_files(rows, name, seed, ratios)
    for fname, lines in files.items():
        (out / fname).write_bytes(_file_body(lines))
    manifest = build_manifest(files, name, status_filter, seed, ratios)
    (out / (name + MANIFEST_SUFFIX)).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest


def export_zip_bytes(rows: list[dict], name: str = "corpus") -> bytes:
    """Unsplit export as a two-file zip archive, byte-stable for equal rows."""
    files = _render_files(rows, name, None, None)
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
        for fname in sorted(files):
            info = zipfile.ZipInfo(fname, date_time=(1980, 1, 1, 0, 0, 0))
            zf.writestr(info, _file_body(files[fname]))
    return buf.getvalue()


def export_tsv(rows: list[dict], path: str | Path) -> int:
    """Two-column en<TAB>om file; canonical text never contains tabs."""
    lines = [row["en"] + "\t" + row["om"] for row in rows]
    Path(path).write_bytes(_file_body(lines))
    return len(lines)


def read_tsv(path: str | Path) -> list[tuple[str, str]]:
    rows = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split("\t")
        if len(parts) != 2:
            raise DataError(f"{path}:{lineno}: expected two tab-separated columns")
        rows.append((parts[0], parts[1]))
    return rows


def read_bitext_files(src_path: str | Path, tgt_path: str | Path,
                      ) -> list[tuple[str, str]]:
    """Read two line-aligned files into rows; line counts must match."""
    sides = []
    for p in (Path(src_path), Path(tgt_path)):
        if not p.exists():
            raise DataError(f"missing bitext file: {p}")
        sides.append(p.read_text(encoding="utf-8").splitlines())
    first, second = sides
    if len(first) != len(second):
        raise DataError(
            f"bitext sides differ: {len(first)} vs {len(second)} lines")
    return list(zip(first, second))


def read_bitext(directory: str | Path, stem: str) -> list[tuple[str, str]]:
    """Read `<stem>.en`/`<stem>.om` from a directory as (en, om) rows."""
    base = Path(directory)
    return read_bitext_files(base / f"{stem}.{LangTag.EN.value}",
                             base / f"{stem}.{LangTag.OM.value}")


def verify_manifest(directory: str | Path, name: str) -> dict:
    """Check every manifest digest against the files on disk."""
    base = Path(directory)
    manifest_path = base / (name + MANIFEST_SUFFIX)
    if not manifest_path.exists():
        raise DataError(f"missing manifest: {manifest_path}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    for fname, meta in manifest["files"].items():
        p = base / fname
        if not p.exists():
            raise DataError(f"manifest lists missing file: {fname}")
        digest = _sha256_bytes(p.read_bytes())
        if digest != meta["sha256"]:
            raise DataError(f"digest mismatch for {fname}")
    return manifest
