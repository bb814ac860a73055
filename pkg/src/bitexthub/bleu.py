"""Corpus-level and sentence-level BLEU, implemented from first principles.

Modified (clipped) n-gram precision, brevity penalty, weighted geometric
mean. No external metric library: the whole point of this module is to make
the score auditable for the attached translator.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum


class CaseMode(str, Enum):
    CASED = "cased"
    LOWERCASED = "lowercased"


class Smoothing(str, Enum):
    NONE = "none"
    ADD_EPSILON = "add_epsilon"


SMOOTH_EPSILON = 0.1


@dataclass(frozen=True)
class BleuConfig:
    max_n: int = 4
    weights: tuple[float, ...] | None = None  # None -> uniform 1/max_n
    case_mode: CaseMode = CaseMode.CASED
    smoothing: Smoothing = Smoothing.NONE

    def __post_init__(self) -> None:
        if not 1 <= self.max_n <= 9:
            raise ValueError("max_n must be in [1, 9]")
        if self.weights is not None:
            if len(self.weights) != self.max_n:
                raise ValueError("need one weight per n-gram order")
            if any(w < 0 for w in self.weights):
                raise ValueError("weights must be non-negative")
            if abs(sum(self.weights) - 1.0) > 1e-9:
                raise ValueError("weights must sum to 1")

    def effective_weights(self) -> tuple[float, ...]:
        if self.weights is not None:
            return tuple(self.weights)
        return tuple(1.0 / self.max_n for _ in range(self.max_n))


@dataclass(frozen=True)
class PrecisionCounts:
    clipped: int
    total: int
    value: float


@dataclass(frozen=True)
class BleuReport:
    """Corpus BLEU with the pieces needed to audit it."""

    score: float
    precisions: tuple[PrecisionCounts, ...]
    brevity_penalty: float
    candidate_len: int
    reference_len: int
    segments: int

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "precisions": [
                {"n": i + 1, "clipped": p.clipped, "total": p.total,
                 "value": p.value}
                for i, p in enumerate(self.precisions)
            ],
            "brevity_penalty": self.brevity_penalty,
            "candidate_len": self.candidate_len,
            "reference_len": self.reference_len,
            "segments": self.segments,
        }


def ngram_counts(tokens: list[str], n: int) -> Counter:
    """Multiset of contiguous n-grams; empty when the input is shorter than n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def modified_precision(candidate: list[str], references: list[list[str]],
                       n: int) -> tuple[int, int]:
    """Clipped and total candidate n-gram counts against the references.

    Each candidate n-gram count is clipped to the largest count it has in any
    single reference.
    """
    if not references:
        raise ValueError("at least one reference is required")
    counts = ngram_counts(candidate, n)
    total = sum(counts.values())
    if total == 0:
        return 0, 0
    max_ref: Counter = Counter()
    for ref in references:
        for gram, count in ngram_counts(ref, n).items():
            if count > max_ref[gram]:
                max_ref[gram] = count
    clipped = sum(min(count, max_ref[gram]) for gram, count in counts.items())
    return clipped, total


def brevity_penalty(c: int, r: int) -> float:
    """1 when the candidate is at least as long as the reference, else e^(1-r/c)."""
    if c < 1 or r < 1:
        raise ValueError("token counts must be >= 1")
    if c >= r:
        return 1.0
    return math.exp(1.0 - r / c)


def closest_ref_length(candidate_len: int, ref_lens: list[int]) -> int:
    """Reference length nearest the candidate's; ties go to the shorter."""
    return min(ref_lens, key=lambda rl: (abs(rl - candidate_len), rl))


def corpus_bleu(candidates: list[list[str]],
                references: list[list[list[str]]],
                config: BleuConfig | None = None) -> BleuReport:
    """BLEU over a whole corpus: counts pool across segments before dividing.

    references[i] is the set of acceptable translations for candidates[i].
    The effective reference length sums, per segment, the reference length
    closest to the candidate length.
    """
    if config is None:
        config = BleuConfig()
    if len(candidates) != len(references):
        raise ValueError("candidates and references must be parallel")
    if len(candidates) == 0:
        raise ValueError("need at least one segment")
    if any(len(refs) == 0 for refs in references):
        raise ValueError("every segment needs at least one reference")

    if config.case_mode is CaseMode.LOWERCASED:
        candidates = [[t.lower() for t in cand] for cand in candidates]
        references = [[[t.lower() for t in ref] for ref in refs]
                      for refs in references]

    clipped = [0] * config.max_n
    total = [0] * config.max_n
    cand_len = 0
    ref_len = 0
    for cand, refs in zip(candidates, references):
        cand_len += len(cand)
        ref_len += closest_ref_length(len(cand), [len(r) for r in refs])
        for n in range(1, config.max_n + 1):
            seg_clipped, seg_total = modified_precision(cand, refs, n)
            clipped[n - 1] += seg_clipped
            total[n - 1] += seg_total

    precisions: list[PrecisionCounts] = []
    log_sum = 0.0
    any_zero = False
    weights = config.effective_weights()
    for n in range(config.max_n):
        value = clipped[n] / total[n] if total[n] > 0 else 0.0
        precisions.append(PrecisionCounts(clipped[n], total[n], value))
        if weights[n] == 0:
            continue  # p^0 == 1 by convention
        smoothed = value
        if value == 0.0 and config.smoothing is Smoothing.ADD_EPSILON:
            # Epsilon goes to the numerator; a zero denominator is floored at 1.
            smoothed = (clipped[n] + SMOOTH_EPSILON) / max(total[n], 1)
        if smoothed == 0.0:
            any_zero = True
        else:
            log_sum += weights[n] * math.log(smoothed)

    if cand_len == 0:
        bp = 1.0  # degenerate: no candidate tokens, score is 0 via precisions
    else:
        bp = brevity_penalty(cand_len, max(ref_len, 1))
    score = 0.0 if any_zero else bp * math.exp(log_sum)
    return BleuReport(
        score=score,
        precisions=tuple(precisions),
        brevity_penalty=bp,
        candidate_len=cand_len,
        reference_len=ref_len,
        segments=len(candidates),
    )


def sentence_bleu(candidate: list[str], references: list[list[str]],
                  config: BleuConfig | None = None) -> BleuReport:
    """corpus_bleu on a single segment, smoothed by default.

    Short sentences almost always have a zero high-order precision, so the
    unsmoothed score would collapse to 0; pass an explicit config to disable.
    """
    if config is None:
        config = BleuConfig(smoothing=Smoothing.ADD_EPSILON)
    return corpus_bleu([candidate], [references], config)
