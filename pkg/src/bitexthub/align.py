"""Length-based dynamic-programming sentence alignment.

Aligns two sentence lists by character-count statistics alone (no lexicon,
which this language pair lacks). Each link consumes 0-2 sentences per side;
the DP finds the minimum-cost monotone sequence of links covering both
documents, where a link costs a length-mismatch term plus a prior penalty
for its kind.
"""

from __future__ import annotations

import math
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum

from .corpus import (
    DROP_EMPTY,
    DROP_LENGTH,
    DROP_RATIO,
    FilterRule,
    LangTag,
    PairOrigin,
    PairStatus,
    Segment,
    SegmentPair,
    canonical_text,
    filter_texts,
)


class LinkKind(str, Enum):
    ONE_ONE = "1-1"
    ONE_ZERO = "1-0"
    ZERO_ONE = "0-1"
    TWO_ONE = "2-1"
    ONE_TWO = "1-2"
    TWO_TWO = "2-2"


# (kind, source sentences consumed, target sentences consumed), in tie-break
# order: equal-cost cells prefer the earliest entry.
_MOVES: tuple[tuple[LinkKind, int, int], ...] = (
    (LinkKind.ONE_ONE, 1, 1),
    (LinkKind.ONE_ZERO, 1, 0),
    (LinkKind.ZERO_ONE, 0, 1),
    (LinkKind.TWO_ONE, 2, 1),
    (LinkKind.ONE_TWO, 1, 2),
    (LinkKind.TWO_TWO, 2, 2),
)

KIND_RANK = {kind: rank for rank, (kind, _, _) in enumerate(_MOVES)}

# Classical link frequencies, renormalized so the distribution sums to 1
# (the rounded literature values add up to 1.0098).
_RAW_PRIORS = {
    LinkKind.ONE_ONE: 0.89,
    LinkKind.ONE_ZERO: 0.0099,
    LinkKind.ZERO_ONE: 0.0099,
    LinkKind.TWO_ONE: 0.089 / 2,
    LinkKind.ONE_TWO: 0.089 / 2,
    LinkKind.TWO_TWO: 0.011,
}
_RAW_TOTAL = sum(_RAW_PRIORS.values())
DEFAULT_PRIORS = {kind: p / _RAW_TOTAL for kind, p in _RAW_PRIORS.items()}


@dataclass(frozen=True)
class AlignmentParams:
    """Length model: target chars ~ Normal(mean_ratio * source chars, variance * source chars)."""

    mean_ratio: float = 1.0
    variance: float = 6.8
    link_priors: dict[LinkKind, float] = field(
        default_factory=lambda: dict(DEFAULT_PRIORS))
    max_cost: float = 25.0

    def __post_init__(self) -> None:
        if self.mean_ratio <= 0 or self.variance <= 0:
            raise ValueError("mean_ratio and variance must be positive")
        if set(self.link_priors) != set(LinkKind):
            raise ValueError("link_priors must cover every link kind")
        total = sum(self.link_priors.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"link priors must sum to 1, got {total}")

    def prior_cost(self, kind: LinkKind) -> float:
        return -math.log(self.link_priors[kind])


@dataclass(frozen=True)
class AlignLink:
    """One alignment decision: a source span matched to a target span."""

    src_span: tuple[int, int]  # half-open sentence-index range
    tgt_span: tuple[int, int]
    kind: LinkKind
    cost: float

    def __post_init__(self) -> None:
        expected = {
            LinkKind.ONE_ONE: (1, 1), LinkKind.ONE_ZERO: (1, 0),
            LinkKind.ZERO_ONE: (0, 1), LinkKind.TWO_ONE: (2, 1),
            LinkKind.ONE_TWO: (1, 2), LinkKind.TWO_TWO: (2, 2),
        }[self.kind]
        sizes = (self.src_span[1] - self.src_span[0],
                 self.tgt_span[1] - self.tgt_span[0])
        if sizes != expected:
            raise ValueError(f"span sizes {sizes} inconsistent with {self.kind}")
        if self.cost < 0:
            raise ValueError("cost must be non-negative")


def length_cost(l_src: int, l_tgt: int, params: AlignmentParams | None = None) -> float:
    """Mismatch cost for a span pair with the given character totals.

    The deviation (l_tgt - l_src * mean_ratio) / sqrt(l_src * variance) is
    mapped through a two-tailed normal probability and negated-logged, then
    clamped at params.max_cost. Symmetric in the sign of the deviation.
    """
    if params is None:
        params = AlignmentParams()
    if l_src < 0 or l_tgt < 0:
        raise ValueError("span lengths must be non-negative")
    if l_src == 0 and l_tgt == 0:
        raise ValueError("at least one span must be non-empty")
    base = max(l_src, 1)  # floor so pure insertions still get a finite deviation
    delta = (l_tgt - l_src * params.mean_ratio) / math.sqrt(base * params.variance)
    prob = math.erfc(abs(delta) / math.sqrt(2.0))  # two-tailed
    if prob <= 0.0:
        return params.max_cost
    return min(-math.log(prob), params.max_cost)


def align(src_sentences: list[str], tgt_sentences: list[str],
          params: AlignmentParams | None = None) -> list[AlignLink]:
    """Minimum-cost monotone link sequence over the two sentence lists.

    Step cost = length_cost(span character totals) + prior penalty of the
    link kind. Ties prefer 1-1, then the remaining kinds in _MOVES order.
    Either list may be empty; the result partitions both inputs in order.
    """
    if params is None:
        params = AlignmentParams()
    n, m = len(src_sentences), len(tgt_sentences)
    src_cum = [0] * (n + 1)
    for i, s in enumerate(src_sentences):
        src_cum[i + 1] = src_cum[i] + len(s)
    tgt_cum = [0] * (m + 1)
    for j, t in enumerate(tgt_sentences):
        tgt_cum[j + 1] = tgt_cum[j] + len(t)

    prior = {kind: params.prior_cost(kind) for kind in LinkKind}
    inf = math.inf
    width = m + 1
    dist = [inf] * ((n + 1) * width)
    dist[0] = 0.0
    back: list[tuple[LinkKind, int, int] | None] = [None] * ((n + 1) * width)

    for i in range(n + 1):
        for j in range(m + 1):
            if i == 0 and j == 0:
                continue
            best = inf
            best_move = None
            for kind, di, dj in _MOVES:
                if i < di or j < dj:
                    continue
                prev = dist[(i - di) * width + (j - dj)]
                if prev == inf:
                    continue
                l_src = src_cum[i] - src_cum[i - di]
                l_tgt = tgt_cum[j] - tgt_cum[j - dj]
                step = length_cost(l_src, l_tgt, params) + prior[kind]
                cand = prev + step
                if cand < best:
                    best = cand
                    best_move = (kind, di, dj)
            dist[i * width + j] = best
            back[i * width + j] = best_move

    links: list[AlignLink] = []
    i, j = n, m
    while i > 0 or j > 0:
        kind, di, dj = back[i * width + j]  # type: ignore[misc]
        step = dist[i * width + j] - dist[(i - di) * width + (j - dj)]
        links.append(AlignLink(
            src_span=(i - di, i),
            tgt_span=(j - dj, j),
            kind=kind,
            cost=step,
        ))
        i, j = i - di, j - dj
    links.reverse()
    return links


def total_cost(links: list[AlignLink]) -> float:
    return sum(link.cost for link in links)


@dataclass
class DropReport:
    """Counts from the post-alignment reduction pass."""

    kept: int = 0
    unmatched: int = 0
    dropped: dict[str, int] = field(
        default_factory=lambda: {DROP_EMPTY: 0, DROP_LENGTH: 0, DROP_RATIO: 0})

    def total_links(self) -> int:
        return self.kept + self.unmatched + sum(self.dropped.values())

    def to_dict(self) -> dict:
        return {"kept": self.kept, "unmatched": self.unmatched,
                "dropped": dict(self.dropped)}


def emit_pair_texts(links: list[AlignLink], src_sentences: list[str],
                    tgt_sentences: list[str], rules: FilterRule,
                    ) -> tuple[list[tuple[str, str]], DropReport]:
    """Turn links into (source text, target text) pairs plus a drop report.

    Multi-sentence spans are joined with a single space. 1-0/0-1 links are
    counted as unmatched; surviving pairs still have to pass the filter.
    """
    pairs: list[tuple[str, str]] = []
    report = DropReport()
    for link in links:
        if link.kind in (LinkKind.ONE_ZERO, LinkKind.ZERO_ONE):
            report.unmatched += 1
            continue
        src_text = " ".join(src_sentences[link.src_span[0]:link.src_span[1]])
        tgt_text = " ".join(tgt_sentences[link.tgt_span[0]:link.tgt_span[1]])
        decision = filter_texts(src_text, tgt_text, rules)
        if decision.keep:
            pairs.append((src_text, tgt_text))
            report.kept += 1
        else:
            report.dropped[decision.reason] += 1
    return pairs, report


def emit_pairs(links: list[AlignLink], src_sentences: list[str],
               tgt_sentences: list[str], rules: FilterRule,
               src_lang: LangTag = LangTag.EN, tgt_lang: LangTag = LangTag.OM,
               source_doc: str = "aligned",
               ) -> tuple[list[SegmentPair], DropReport]:
    """emit_pair_texts, materialized as pending document-aligned SegmentPairs."""
    now = time.time()
    pairs: list[SegmentPair] = []
    report = DropReport()
    for link in links:
        if link.kind in (LinkKind.ONE_ZERO, LinkKind.ZERO_ONE):
            report.unmatched += 1
            continue
        src_text = " ".join(src_sentences[link.src_span[0]:link.src_span[1]])
        tgt_text = " ".join(tgt_sentences[link.tgt_span[0]:link.tgt_span[1]])
        decision = filter_texts(src_text, tgt_text, rules)
        if not decision.keep:
            report.dropped[decision.reason] += 1
            continue
        src_seg = Segment(
            id=uuid.uuid4().hex, lang=src_lang, raw=src_text,
            normalized=canonical_text(src_text, src_lang),
            source_doc=f"{source_doc}:src", position=link.src_span[0],
        )
        tgt_seg = Segment(
            id=uuid.uuid4().hex, lang=tgt_lang, raw=tgt_text,
            normalized=canonical_text(tgt_text, tgt_lang),
            source_doc=f"{source_doc}:tgt", position=link.tgt_span[0],
        )
        pairs.append(SegmentPair(
            id=uuid.uuid4().hex, src=src_seg, tgt=tgt_seg,
            origin=PairOrigin.DOCUMENT_ALIGNED, status=PairStatus.PENDING,
            created_at=now,
        ))
        report.kept += 1
    return pairs, report
