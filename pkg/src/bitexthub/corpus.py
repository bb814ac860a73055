"""Domain types and deterministic text processing for the bilingual corpus.

Everything here is pure: normalization, tokenization, sentence splitting,
duplicate keys, and the keep/drop filters applied before a pair enters the
store. English and Afaan Oromo share one pipeline; the only language-specific
piece is the abbreviation list used by the sentence splitter.
"""

from __future__ import annotations

import hashlib
import re
import unicodedata
from dataclasses import dataclass
from enum import Enum


class LangTag(str, Enum):
    EN = "en"
    OM = "om"

    def other(self) -> "LangTag":
        return LangTag.OM if self is LangTag.EN else LangTag.EN


class PairOrigin(str, Enum):
    DOCUMENT_ALIGNED = "document_aligned"
    CROWDSOURCED = "crowdsourced"
    IMPORTED = "imported"


class PairStatus(str, Enum):
    PENDING = "pending"
    VERIFIED = "verified"
    REJECTED = "rejected"


# Typographic quote/apostrophe forms mapped to straight ASCII. U+02BC shows up
# in Oromo web text as the hudhaa (glottal stop) character.
_QUOTE_MAP = str.maketrans({
    "‘": "'", "’": "'", "‚": "'", "‛": "'", "ʼ": "'",
    "“": '"', "”": '"', "„": '"', "‟": '"',
    "«": '"', "»": '"',
})

_WHITESPACE_RE = re.compile(r"\s+")

# Punctuation detached from token edges. The apostrophe is deliberately
# absent: ba'e-style glottal stops must stay one token.
_DETACH_CHARS = set('.,;:!?"()[]')

_TERMINATORS = set(".!?")

# Words that end with "." but do not terminate a sentence.
_ABBREVIATIONS: dict[LangTag, frozenset[str]] = {
    LangTag.EN: frozenset({
        "Mr.", "Mrs.", "Ms.", "Dr.", "Prof.", "St.", "vs.",
        "e.g.", "i.e.", "etc.",
    }),
    LangTag.OM: frozenset({"kkf."}),
}


def normalize_text(raw: str, lang: LangTag) -> str:
    """Straighten quotes, strip controls, collapse whitespace, compose (NFC).

    Idempotent; case is preserved. Empty input yields empty output.
    Composition runs last so that removing format characters between a base
    letter and its combining mark cannot leave a decomposed sequence behind.
    """
    text = raw.translate(_QUOTE_MAP)
    text = "".join(
        ch for ch in text
        if not (unicodedata.category(ch) in ("Cc", "Cf") and not ch.isspace())
    )
    text = _WHITESPACE_RE.sub(" ", text).strip()
    return unicodedata.normalize("NFC", text)


def tokenize(text: str, lang: LangTag) -> list[str]:
    """Split normalized text into tokens, detaching edge punctuation.

    Leading/trailing .,;:!?"()[] become separate tokens; apostrophes always
    stay inside the token. Joining with single spaces and re-tokenizing gives
    back the identical list.
    """
    tokens: list[str] = []
    for chunk in text.split():
        head: list[str] = []
        tail: list[str] = []
        while chunk and chunk[0] in _DETACH_CHARS:
            head.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in _DETACH_CHARS:
            tail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(head)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(tail))
    return tokens


def canonical_text(raw: str, lang: LangTag) -> str:
    """Normalized text in its stored form: tokens joined by single spaces.

    This is the line format of bitext exports, so canonicalizing at ingest
    makes export -> ingest an exact round trip. Fixpoint of itself and of
    normalize_text.
    """
    return " ".join(tokenize(normalize_text(raw, lang), lang))


def sentence_split(document: str, lang: LangTag) -> list[str]:
    """Split normalized text into sentences.

    A sentence ends after . ! ? followed by a space and an uppercase letter,
    or at end of text. Abbreviations like "Mr." / "kkf." never end a sentence.
    Joining the result with single spaces reproduces the input.
    """
    abbreviations = _ABBREVIATIONS[lang]
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(document)
    while i < n:
        if document[i] in _TERMINATORS and (i + 1 == n or document[i + 1] == " "):
            at_end = i + 1 == n
            follows_upper = i + 2 < n and document[i + 2].isupper()
            last_space = document.rfind(" ", start, i)
            word_start = start if last_space == -1 else last_space + 1
            word = document[word_start:i + 1]
            if (at_end or follows_upper) and word not in abbreviations:
                sentences.append(document[start:i + 1])
                start = i + 2  # skip the separating space
                i += 2
                continue
        i += 1
    if start < n:
        sentences.append(document[start:])
    return sentences


@dataclass(frozen=True)
class Segment:
    """One sentence in one language, with provenance."""

    id: str
    lang: LangTag
    raw: str
    normalized: str
    source_doc: str
    position: int

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "lang": self.lang.value,
            "raw": self.raw,
            "normalized": self.normalized,
            "source_doc": self.source_doc,
            "position": self.position,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Segment":
        return cls(
            id=d["id"],
            lang=LangTag(d["lang"]),
            raw=d["raw"],
            normalized=d["normalized"],
            source_doc=d["source_doc"],
            position=d["position"],
        )


@dataclass(frozen=True)
class SegmentPair:
    """One aligned source/target sentence pair; the atom of the corpus."""

    id: str
    src: Segment
    tgt: Segment
    origin: PairOrigin
    status: PairStatus
    created_at: float

    def __post_init__(self) -> None:
        if self.src.lang == self.tgt.lang:
            raise ValueError("pair sides must be different languages")


@dataclass(frozen=True)
class FilterRule:
    """Thresholds for the data-reduction pass."""

    max_len_tokens: int = 120
    max_token_ratio: float = 3.0
    min_len_tokens: int = 1

    def __post_init__(self) -> None:
        if self.min_len_tokens < 1 or self.max_len_tokens < self.min_len_tokens:
            raise ValueError("need max_len_tokens >= min_len_tokens >= 1")
        if self.max_token_ratio < 1:
            raise ValueError("max_token_ratio must be >= 1")


@dataclass(frozen=True)
class FilterDecision:
    keep: bool
    reason: str | None = None


# Drop reasons, in the order they are checked.
DROP_EMPTY = "empty"
DROP_LENGTH = "length"
DROP_RATIO = "ratio"


def _fold(text: str) -> str:
    return " ".join(text.casefold().split())


def dedup_key_texts(src_text: str, tgt_text: str) -> str:
    """Deterministic digest of the casefolded, whitespace-collapsed pair."""
    material = _fold(src_text) + "\x1f" + _fold(tgt_text)
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


def dedup_key(pair: SegmentPair) -> str:
    return dedup_key_texts(pair.src.normalized, pair.tgt.normalized)


def filter_texts(src_text: str, tgt_text: str, rules: FilterRule,
                 src_lang: LangTag = LangTag.EN,
                 tgt_lang: LangTag = LangTag.OM) -> FilterDecision:
    """Keep/drop decision on normalized texts; reason is the first violated rule."""
    n_src = len(tokenize(src_text, src_lang))
    n_tgt = len(tokenize(tgt_text, tgt_lang))
    if n_src < rules.min_len_tokens or n_tgt < rules.min_len_tokens:
        return FilterDecision(keep=False, reason=DROP_EMPTY)
    if n_src > rules.max_len_tokens or n_tgt > rules.max_len_tokens:
        return FilterDecision(keep=False, reason=DROP_LENGTH)
    if max(n_src, n_tgt) / min(n_src, n_tgt) > rules.max_token_ratio:
        return FilterDecision(keep=False, reason=DROP_RATIO)
    return FilterDecision(keep=True)


def filter_pair(pair: SegmentPair, rules: FilterRule) -> FilterDecision:
    return filter_texts(pair.src.normalized, pair.tgt.normalized, rules,
                        pair.src.lang, pair.tgt.lang)
