"""Crowdsourced English / Afaan Oromo parallel-corpus platform."""

from .align import AlignLink, AlignmentParams, LinkKind, align, length_cost
from .bleu import BleuConfig, BleuReport, corpus_bleu, sentence_bleu
from .corpus import (
    FilterRule,
    LangTag,
    PairOrigin,
    PairStatus,
    Segment,
    SegmentPair,
    canonical_text,
    normalize_text,
    sentence_split,
    tokenize,
)
from .engine import EnginePolicy, Platform, decide_status
from .errors import BitextHubError, DataError, EngineError, StoreError

__version__ = "0.1.0"

__all__ = [
    "AlignLink",
    "AlignmentParams",
    "BitextHubError",
    "BleuConfig",
    "BleuReport",
    "DataError",
    "EngineError",
    "EnginePolicy",
    "FilterRule",
    "LangTag",
    "LinkKind",
    "PairOrigin",
    "PairStatus",
    "Platform",
    "Segment",
    "SegmentPair",
    "StoreError",
    "align",
    "canonical_text",
    "corpus_bleu",
    "decide_status",
    "length_cost",
    "normalize_text",
    "sentence_bleu",
    "sentence_split",
    "tokenize",
    "__version__",
]
