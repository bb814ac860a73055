"""Report rendering: delimited summaries plus matplotlib figures.

Figures are written straight to files; the Agg backend keeps this headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .bleu import BleuReport  # noqa: E402


def write_kv_tsv(rows: list[tuple[str, object]], path: str | Path) -> None:
    """Two-column key<TAB>value file, one row per metric."""
    lines = [f"{key}\t{value}" for key, value in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def bleu_rows(report: BleuReport) -> list[tuple[str, object]]:
    rows: list[tuple[str, object]] = [
        ("bleu", f"{report.score:.6f}"),
        ("brevity_penalty", f"{report.brevity_penalty:.6f}"),
        ("candidate_len", report.candidate_len),
        ("reference_len", report.reference_len),
        ("segments", report.segments),
    ]
    for n, p in enumerate(report.precisions, start=1):
        rows.append((f"p{n}", f"{p.value:.6f}"))
        rows.append((f"p{n}_counts", f"{p.clipped}/{p.total}"))
    return rows


def bleu_figure(report: BleuReport, path: str | Path) -> Path:
    """Bar chart of n-gram precisions with the composite score in the title."""
    orders = [f"{n}-gram" for n in range(1, len(report.precisions) + 1)]
    values = [p.value for p in report.precisions]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(orders, values, color="#3b6ea5")
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel("modified precision")
    ax.set_title(f"BLEU {report.score:.4f}  "
                 f"(BP {report.brevity_penalty:.4f}, "
                 f"{report.segments} segments)")
    for idx, value in enumerate(values):
        ax.text(idx, value, f"{value:.3f}", ha="center", va="bottom")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out)
    plt.close(fig)
    return out


def stats_rows(stats: dict) -> list[tuple[str, object]]:
    rows: list[tuple[str, object]] = [
        ("pairs", stats["pairs"]),
        ("segments", stats["segments"]),
        ("candidates", stats["candidates"]),
        ("verifications", stats["verifications"]),
        ("contributors", stats["contributors"]),
        ("contributor_points", stats["contributor_points"]),
        ("documents_staged", stats["documents_staged"]),
        ("tokens_en", stats["token_counts"]["en"]),
        ("tokens_om", stats["token_counts"]["om"]),
    ]
    for status in sorted(stats["pairs_by_status"]):
        rows.append((f"pairs_{status}", stats["pairs_by_status"][status]))
    for origin in sorted(stats["pairs_by_origin"]):
        rows.append((f"origin_{origin}", stats["pairs_by_origin"][origin]))
    return rows


def stats_figure(stats: dict, path: str | Path) -> Path:
    """Two panels: pair counts by status and by origin."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    by_status = stats["pairs_by_status"]
    by_origin = stats["pairs_by_origin"]
    for ax, counts, label in ((ax1, by_status, "status"),
                              (ax2, by_origin, "origin")):
        keys = sorted(counts)
        values = [counts[k] for k in keys]
        ax.bar(keys or ["none"], values or [0], color="#7a9e57")
        ax.set_title(f"pairs by {label}")
        ax.tick_params(axis="x", rotation=20)
        for idx, value in enumerate(values):
            ax.text(idx, value, str(value), ha="center", va="bottom")
    fig.suptitle(f"{stats['pairs']} pairs, "
                 f"{stats['contributors']} contributors")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out)
    plt.close(fig)
    return out
