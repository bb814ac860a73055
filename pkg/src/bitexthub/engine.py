"""Community platform engine: contributors, batches, translations, verification,
gamification, and the corpus store behind them.

All state changes are expressed as events. A command validates against
current state, builds one event carrying every generated id and timestamp,
appends it to the log, then applies it; replaying the log therefore rebuilds
the exact same state, byte for byte. A single lock makes every command atomic
with respect to concurrent requests.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
import uuid
from dataclasses import dataclass
from enum import Enum

from .align import AlignmentParams, align, emit_pair_texts
from .corpus import (
    FilterRule,
    LangTag,
    PairOrigin,
    PairStatus,
    canonical_text,
    dedup_key_texts,
    filter_texts,
    normalize_text,
    sentence_split,
)
from .errors import EngineError, StoreError
from .events import EventLog

MACHINE_AUTHOR = "machine"

BATCH_SIZE = 5


class BatchKind(str, Enum):
    TRANSLATE = "translate"
    VERIFY = "verify"


class ItemState(str, Enum):
    OPEN = "open"
    DONE = "done"
    SKIPPED = "skipped"


BADGE_TIERS: tuple[tuple[str, int], ...] = (
    ("bronze", 10), ("silver", 100), ("gold", 1000))


@dataclass(frozen=True)
class EnginePolicy:
    """Tunable verification quorum, point economy, and badge thresholds."""

    verification_quorum: int = 3
    verify_mean: float = 4.0
    reject_mean: float = 2.5
    translation_points: int = 2
    verification_points: int = 1
    max_translations_per_item: int = 5
    badge_tiers: tuple[tuple[str, int], ...] = BADGE_TIERS

    def to_dict(self) -> dict:
        return {
            "verification_quorum": self.verification_quorum,
            "verify_mean": self.verify_mean,
            "reject_mean": self.reject_mean,
            "translation_points": self.translation_points,
            "verification_points": self.verification_points,
            "max_translations_per_item": self.max_translations_per_item,
            "badge_tiers": [list(t) for t in self.badge_tiers],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EnginePolicy":
        tiers = tuple(tuple(t) for t in d.get("badge_tiers", BADGE_TIERS))
        return cls(
            verification_quorum=d.get("verification_quorum", 3),
            verify_mean=d.get("verify_mean", 4.0),
            reject_mean=d.get("reject_mean", 2.5),
            translation_points=d.get("translation_points", 2),
            verification_points=d.get("verification_points", 1),
            max_translations_per_item=d.get("max_translations_per_item", 5),
            badge_tiers=tiers,
        )


def decide_status(ratings: list[int], policy: EnginePolicy) -> PairStatus:
    """Quorum policy: below quorum stay pending; then mean decides."""
    if len(ratings) < policy.verification_quorum:
        return PairStatus.PENDING
    mean = sum(ratings) / len(ratings)
    if mean >= policy.verify_mean:
        return PairStatus.VERIFIED
    if mean < policy.reject_mean:
        return PairStatus.REJECTED
    return PairStatus.PENDING


def badges_for(points: int, policy: EnginePolicy) -> list[str]:
    return [tier for tier, threshold in policy.badge_tiers if points >= threshold]


def _fold(text: str) -> str:
    return " ".join(text.casefold().split())


class Platform:
    """The engine plus its corpus store.

    Records are kept as plain dicts so snapshots and digests are trivially
    canonical; indexes over them are derived and rebuilt on load.
    """

    def __init__(self, policy: EnginePolicy | None = None,
                 filter_rules: FilterRule | None = None,
                 align_params: AlignmentParams | None = None,
                 log: EventLog | None = None):
        self.policy = policy or EnginePolicy()
        self.filter_rules = filter_rules or FilterRule()
        self.align_params = align_params or AlignmentParams()
        self._log = log
        self._lock = threading.RLock()
        self._seq = 0
        self._ord = 0
        self.contributors: dict[str, dict] = {}
        self.segments: dict[str, dict] = {}
        self.pairs: dict[str, dict] = {}
        self.candidates: dict[str, dict] = {}
        self.verifications: dict[str, dict] = {}
        self.batches: dict[str, dict] = {}
        self.docs: dict[str, dict] = {}
        self._reindex()

    # -- store lifecycle ----------------------------------------------------

    @classmethod
    def open(cls, store_dir, policy=None, filter_rules=None, align_params=None,
             snapshot_every: int = 500) -> "Platform":
        """Open (or create) a store directory: snapshot plus event replay."""
        log = EventLog(store_dir)
        platform = cls(policy=policy, filter_rules=filter_rules,
                       align_params=align_params, log=log)
        platform._snapshot_every = snapshot_every
        snapshot = log.read_snapshot()
        after = 0
        if snapshot is not None:
            after, state = snapshot
            platform._load_state(state)
        events = log.read_all(after_seq=after)
        if log.last_seq < after:
            raise StoreError(
                f"event log ends at {log.last_seq} but snapshot is at {after}")
        for event in events:
            platform._apply(event)
        platform._seq = log.last_seq
        return platform

    _snapshot_every = 0

    @property
    def recovery(self):
        return self._log.recovery if self._log else None

    def save_snapshot(self) -> None:
        if self._log is None:
            raise StoreError("platform has no store attached")
        with self._lock:
            self._log.write_snapshot(self._seq, self._core_state())

    def _core_state(self) -> dict:
        return {
            "ord": self._ord,
            "contributors": self.contributors,
            "segments": self.segments,
            "pairs": self.pairs,
            "candidates": self.candidates,
            "verifications": self.verifications,
            "batches": self.batches,
            "docs": self.docs,
        }

    def _load_state(self, state: dict) -> None:
        self._ord = state["ord"]
        self.contributors = state["contributors"]
        self.segments = state["segments"]
        self.pairs = state["pairs"]
        self.candidates = state["candidates"]
        self.verifications = state["verifications"]
        self.batches = state["batches"]
        self.docs = state["docs"]
        self._reindex()

    def state_digest(self) -> str:
        """Canonical digest of the full engine state; replay-stable."""
        with self._lock:
            payload = json.dumps(self._core_state(), sort_keys=True,
                                 ensure_ascii=False, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    # -- derived indexes -----------------------------------------------------

    def _reindex(self) -> None:
        self._handles: dict[str, str] = {}
        self._tokens: dict[str, str] = {}
        self._pair_keys: dict[str, str] = {}
        self._cand_keys: dict[str, str] = {}
        self._item_index: dict[str, tuple[str, int]] = {}
        self._issued: dict[str, set[str]] = {}
        self._seg_candidates: dict[str, list[str]] = {}
        self._authored: dict[str, set[str]] = {}
        self._cand_verifs: dict[str, list[str]] = {}
        for profile in self.contributors.values():
            self._handles[profile["handle"]] = profile["id"]
            self._tokens[profile["token"]] = profile["id"]
            self._issued.setdefault(profile["id"], set())
        for cand in self.candidates.values():
            self._index_candidate(cand)
        for ver in self.verifications.values():
            self._cand_verifs.setdefault(ver["candidate"], []).append(ver["id"])
        for pair in self.pairs.values():
            self._pair_keys[pair["key"]] = pair["id"]
        for batch in self.batches.values():
            issued = self._issued.setdefault(batch["contributor"], set())
            for pos, item in enumerate(batch["items"]):
                self._item_index[item["item_id"]] = (batch["id"], pos)
                issued.add(item["target_id"])
        # verification lists must follow insertion order, which dict order
        # already preserves for both fresh and loaded state

    def _index_candidate(self, cand: dict) -> None:
        key = cand["source_segment"] + "\x1f" + _fold(cand["text"])
        self._cand_keys[key] = cand["id"]
        self._seg_candidates.setdefault(cand["source_segment"], []).append(cand["id"])
        if cand["author"] != MACHINE_AUTHOR:
            self._authored.setdefault(cand["author"], set()).add(cand["source_segment"])

    # -- event machinery -----------------------------------------------------

    def _commit(self, kind: str, data: dict) -> None:
        event = {"seq": self._seq + 1, "kind": kind, "data": data}
        if self._log is not None:
            self._log.append(event)
        self._apply(event)
        if (self._log is not None and self._snapshot_every
                and self._seq % self._snapshot_every == 0):
            self.save_snapshot()

    def _apply(self, event: dict) -> None:
        handler = getattr(self, "_apply_" + event["kind"])
        handler(event["data"])
        self._seq = event["seq"]

    def _next_ord(self) -> int:
        self._ord += 1
        return self._ord

    # -- contributors ---------------------------------------------------------

    def register_contributor(self, handle: str) -> dict:
        with self._lock:
            if not isinstance(handle, str):
                raise EngineError("empty_handle")
            clean = normalize_text(handle, LangTag.EN)
            if not clean:
                raise EngineError("empty_handle")
            if clean in self._handles:
                raise EngineError("duplicate_handle")
            profile_id = uuid.uuid4().hex
            self._commit("contributor_registered", {
                "id": profile_id,
                "handle": clean,
                "token": uuid.uuid4().hex,
                "ts": time.time(),
            })
            return dict(self.contributors[profile_id])

    def _apply_contributor_registered(self, data: dict) -> None:
        ord_ = self._next_ord()
        profile = {
            "id": data["id"],
            "handle": data["handle"],
            "token": data["token"],
            "points": 0,
            "badges": [],
            "translations_submitted": 0,
            "verifications_submitted": 0,
            "skips": 0,
            "created_at": data["ts"],
            "points_ord": ord_,
        }
        self.contributors[data["id"]] = profile
        self._handles[profile["handle"]] = profile["id"]
        self._tokens[profile["token"]] = profile["id"]
        self._issued.setdefault(profile["id"], set())

    def contributor_by_token(self, token: str) -> dict | None:
        with self._lock:
            cid = self._tokens.get(token)
            return dict(self.contributors[cid]) if cid else None

    def profile(self, contributor_id: str) -> dict:
        with self._lock:
            if contributor_id not in self.contributors:
                raise EngineError("unknown_contributor")
            return dict(self.contributors[contributor_id])

    def _award_points(self, profile: dict, points: int) -> None:
        if points == 0:
            return
        profile["points"] += points
        profile["points_ord"] = self._next_ord()
        self._apply_badges(profile)

    def _apply_badges(self, profile: dict) -> None:
        earned = badges_for(profile["points"], self.policy)
        merged = list(profile["badges"])
        for badge in earned:
            if badge not in merged:
                merged.append(badge)
        profile["badges"] = merged

    def award_badges(self, contributor_id: str) -> list[str]:
        with self._lock:
            profile = self.contributors.get(contributor_id)
            if profile is None:
                raise EngineError("unknown_contributor")
            self._apply_badges(profile)
            return list(profile["badges"])

    def leaderboard(self, limit: int) -> list[dict]:
        with self._lock:
            ranked = sorted(
                self.contributors.values(),
                key=lambda p: (-p["points"], p["points_ord"], p["handle"]))
            return [
                {"handle": p["handle"], "points": p["points"],
                 "badges": list(p["badges"])}
                for p in ranked[:max(limit, 0)]
            ]

    # -- batches ---------------------------------------------------------------

    def request_batch(self, contributor_id: str, kind: BatchKind) -> dict:
        with self._lock:
            if contributor_id not in self.contributors:
                raise EngineError("unknown_contributor")
            issued = self._issued.setdefault(contributor_id, set())
            if kind is BatchKind.TRANSLATE:
                targets = self._translate_pool(contributor_id, issued)
            else:
                targets = self._verify_pool(contributor_id, issued)
            targets = targets[:BATCH_SIZE]
            batch_id = uuid.uuid4().hex
            if not targets:
                return {"id": batch_id, "contributor": contributor_id,
                        "kind": kind.value, "items": [],
                        "issued_at": time.time()}
            self._commit("batch_issued", {
                "batch_id": batch_id,
                "contributor": contributor_id,
                "kind": kind.value,
                "targets": targets,
                "item_ids": [uuid.uuid4().hex for _ in targets],
                "ts": time.time(),
            })
            return self.batch(batch_id)

    def _translate_pool(self, contributor_id: str, issued: set[str]) -> list[str]:
        authored = self._authored.get(contributor_id, set())
        eligible = [
            seg for seg in self.segments.values()
            if seg["translatable"]
            and seg["id"] not in issued
            and seg["id"] not in authored
        ]
        eligible.sort(key=lambda s: (len(self._seg_candidates.get(s["id"], [])),
                                     s["ord"]))
        return [seg["id"] for seg in eligible]

    def _verify_pool(self, contributor_id: str, issued: set[str]) -> list[str]:
        eligible = [
            cand for cand in self.candidates.values()
            if cand["id"] not in issued and cand["author"] != contributor_id
        ]
        eligible.sort(key=lambda c: (len(self._cand_verifs.get(c["id"], [])),
                                     c["ord"]))
        return [cand["id"] for cand in eligible]

    def _apply_batch_issued(self, data: dict) -> None:
        items = [
            {"item_id": item_id, "target_id": target, "state": ItemState.OPEN.value}
            for item_id, target in zip(data["item_ids"], data["targets"])
        ]
        batch = {
            "id": data["batch_id"],
            "contributor": data["contributor"],
            "kind": data["kind"],
            "items": items,
            "issued_at": data["ts"],
        }
        self.batches[batch["id"]] = batch
        issued = self._issued.setdefault(data["contributor"], set())
        for pos, item in enumerate(items):
            self._item_index[item["item_id"]] = (batch["id"], pos)
            issued.add(item["target_id"])

    def batch(self, batch_id: str) -> dict:
        with self._lock:
            if batch_id not in self.batches:
                raise EngineError("unknown_batch")
            batch = self.batches[batch_id]
            return {**batch, "items": [dict(i) for i in batch["items"]]}

    def _open_item(self, contributor_id: str, item_id: str,
                   kind: BatchKind) -> tuple[dict, dict]:
        loc = self._item_index.get(item_id)
        if loc is None:
            raise EngineError("unknown_item")
        batch = self.batches[loc[0]]
        item = batch["items"][loc[1]]
        if batch["contributor"] != contributor_id:
            raise EngineError("item_not_owned")
        if batch["kind"] != kind.value:
            raise EngineError("wrong_batch_kind")
        if item["state"] != ItemState.OPEN.value:
            raise EngineError("item_not_open")
        return batch, item

    # -- translation ------------------------------------------------------------

    def submit_translation(self, contributor_id: str, item_id: str,
                           texts: list[str]) -> list[dict]:
        with self._lock:
            if contributor_id not in self.contributors:
                raise EngineError("unknown_contributor")
            _, item = self._open_item(contributor_id, item_id, BatchKind.TRANSLATE)
            segment = self.segments[item["target_id"]]
            tgt_lang = LangTag(segment["lang"]).other()
            survivors: list[str] = []
            seen: set[str] = set()
            for text in texts:
                if not isinstance(text, str):
                    raise EngineError("invalid_text")
                clean = canonical_text(text, tgt_lang)
                if not clean or _fold(clean) in seen:
                    continue
                seen.add(_fold(clean))
                survivors.append(clean)
            if not survivors:
                raise EngineError("empty_text")
            if len(survivors) > self.policy.max_translations_per_item:
                raise EngineError("too_many_texts")
            # Texts already in the store for this segment stay deduplicated.
            new_texts = [
                t for t in survivors
                if segment["id"] + "\x1f" + _fold(t) not in self._cand_keys
            ]
            candidate_ids = [uuid.uuid4().hex for _ in new_texts]
            self._commit("translation_submitted", {
                "item_id": item_id,
                "texts": new_texts,
                "candidate_ids": candidate_ids,
                "ts": time.time(),
            })
            return [dict(self.candidates[cid]) for cid in candidate_ids]

    def _apply_translation_submitted(self, data: dict) -> None:
        batch_id, pos = self._item_index[data["item_id"]]
        batch = self.batches[batch_id]
        item = batch["items"][pos]
        item["state"] = ItemState.DONE.value
        for cid, text in zip(data["candidate_ids"], data["texts"]):
            self._insert_candidate({
                "id": cid,
                "source_segment": item["target_id"],
                "text": text,
                "author": batch["contributor"],
                "pair_id": None,
                "status": PairStatus.PENDING.value,
                "created_at": data["ts"],
                "ord": self._next_ord(),
            })
        profile = self.contributors[batch["contributor"]]
        profile["translations_submitted"] += 1
        self._award_points(profile, self.policy.translation_points)

    def _insert_candidate(self, cand: dict) -> None:
        self.candidates[cand["id"]] = cand
        self._index_candidate(cand)

    def skip_item(self, contributor_id: str, item_id: str) -> None:
        with self._lock:
            if contributor_id not in self.contributors:
                raise EngineError("unknown_contributor")
            loc = self._item_index.get(item_id)
            if loc is None:
                raise EngineError("unknown_item")
            batch = self.batches[loc[0]]
            item = batch["items"][loc[1]]
            if batch["contributor"] != contributor_id:
                raise EngineError("item_not_owned")
            if item["state"] != ItemState.OPEN.value:
                raise EngineError("item_not_open")
            self._commit("item_skipped", {"item_id": item_id, "ts": time.time()})

    def _apply_item_skipped(self, data: dict) -> None:
        batch_id, pos = self._item_index[data["item_id"]]
        batch = self.batches[batch_id]
        batch["items"][pos]["state"] = ItemState.SKIPPED.value
        self.contributors[batch["contributor"]]["skips"] += 1

    # -- verification --------------------------------------------------------------

    def submit_verification(self, contributor_id: str, item_id: str, rating: int,
                            alternative: str | None = None) -> dict:
        with self._lock:
            if contributor_id not in self.contributors:
                raise EngineError("unknown_contributor")
            if not isinstance(rating, int) or isinstance(rating, bool) \
                    or not 1 <= rating <= 5:
                raise EngineError("rating_out_of_range")
            _, item = self._open_item(contributor_id, item_id, BatchKind.VERIFY)
            candidate = self.candidates[item["target_id"]]
            if candidate["author"] == contributor_id:
                raise EngineError("self_verification")
            for vid in self._cand_verifs.get(candidate["id"], []):
                if self.verifications[vid]["verifier"] == contributor_id:
                    raise EngineError("duplicate_verification")
            segment = self.segments[candidate["source_segment"]]
            tgt_lang = LangTag(segment["lang"]).other()
            alt_clean: str | None = None
            if alternative is not None:
                if not isinstance(alternative, str):
                    raise EngineError("invalid_text")
                alt_clean = canonical_text(alternative, tgt_lang)
                if not alt_clean or _fold(alt_clean) == _fold(candidate["text"]):
                    alt_clean = None  # no-op alternatives are treated as absent
            alt_is_new = (
                alt_clean is not None
                and segment["id"] + "\x1f" + _fold(alt_clean) not in self._cand_keys
            )
            self._commit("verification_submitted", {
                "verification_id": uuid.uuid4().hex,
                "item_id": item_id,
                "rating": rating,
                "alternative": alt_clean,
                "alt_candidate_id": uuid.uuid4().hex if alt_is_new else None,
                "mirror_pair_id": uuid.uuid4().hex,
                "mirror_segment_id": uuid.uuid4().hex,
                "ts": time.time(),
            })
            verification = dict(self.verifications[
                self._cand_verifs[candidate["id"]][-1]])
            verification["candidate_status"] = self.candidates[
                candidate["id"]]["status"]
            return verification

    def _apply_verification_submitted(self, data: dict) -> None:
        batch_id, pos = self._item_index[data["item_id"]]
        batch = self.batches[batch_id]
        item = batch["items"][pos]
        item["state"] = ItemState.DONE.value
        candidate = self.candidates[item["target_id"]]
        verification = {
            "id": data["verification_id"],
            "candidate": candidate["id"],
            "verifier": batch["contributor"],
            "rating": data["rating"],
            "alternative": data["alternative"],
            "created_at": data["ts"],
        }
        self.verifications[verification["id"]] = verification
        self._cand_verifs.setdefault(candidate["id"], []).append(verification["id"])

        profile = self.contributors[batch["contributor"]]
        profile["verifications_submitted"] += 1
        points = self.policy.verification_points
        if data["alt_candidate_id"] is not None:
            self._insert_candidate({
                "id": data["alt_candidate_id"],
                "source_segment": candidate["source_segment"],
                "text": data["alternative"],
                "author": batch["contributor"],
                "pair_id": None,
                "status": PairStatus.PENDING.value,
                "created_at": data["ts"],
                "ord": self._next_ord(),
            })
            profile["translations_submitted"] += 1
            points += self.policy.translation_points
        self._award_points(profile, points)
        self._refresh_candidate_status(candidate, data)

    def _refresh_candidate_status(self, candidate: dict, data: dict) -> None:
        if candidate["status"] != PairStatus.PENDING.value:
            return  # terminal states are frozen
        ratings = [self.verifications[vid]["rating"]
                   for vid in self._cand_verifs.get(candidate["id"], [])]
        status = decide_status(ratings, self.policy)
        if status is PairStatus.PENDING:
            return
        candidate["status"] = status.value
        if candidate["pair_id"] is not None:
            pair = self.pairs[candidate["pair_id"]]
            if pair["status"] == PairStatus.PENDING.value:
                pair["status"] = status.value
            return
        # Crowd candidate: mirror the decision as a new crowdsourced pair.
        segment = self.segments[candidate["source_segment"]]
        key = dedup_key_texts(segment["normalized"], candidate["text"])
        if key in self._pair_keys:
            return
        tgt_lang = LangTag(segment["lang"]).other()
        tgt_seg = {
            "id": data["mirror_segment_id"],
            "lang": tgt_lang.value,
            "raw": candidate["text"],
            "normalized": candidate["text"],
            "source_doc": "crowd:" + candidate["id"],
            "position": 0,
            "translatable": False,
            "ord": self._next_ord(),
        }
        self.segments[tgt_seg["id"]] = tgt_seg
        pair = {
            "id": data["mirror_pair_id"],
            "src_segment": segment["id"],
            "tgt_segment": tgt_seg["id"],
            "origin": PairOrigin.CROWDSOURCED.value,
            "status": status.value,
            "key": key,
            "created_at": data["ts"],
            "ord": self._next_ord(),
        }
        self.pairs[pair["id"]] = pair
        self._pair_keys[key] = pair["id"]

    def aggregate_status(self, candidate_id: str) -> str:
        with self._lock:
            if candidate_id not in self.candidates:
                raise EngineError("unknown_candidate")
            return self.candidates[candidate_id]["status"]

    # -- corpus ingestion ------------------------------------------------------------

    def ingest_pairs(self, rows: list[tuple[str, str]], src_lang: LangTag,
                     tgt_lang: LangTag, origin: PairOrigin,
                     source_doc: str) -> dict:
        """Normalize, filter, and dedup raw text pairs into the store.

        Returns a report with added/duplicate/dropped counts; conservation:
        added + duplicates + dropped == len(rows).
        """
        with self._lock:
            if src_lang == tgt_lang:
                raise EngineError("same_language_pair")
            doc_label = f"{source_doc}:{uuid.uuid4().hex[:8]}"
            report = {"added": 0, "duplicates": 0,
                      "dropped": {"empty": 0, "length": 0, "ratio": 0}}
            items: list[dict] = []
            seen_keys: set[str] = set()
            for position, (src_raw, tgt_raw) in enumerate(rows):
                src_text = canonical_text(src_raw, src_lang)
                tgt_text = canonical_text(tgt_raw, tgt_lang)
                decision = filter_texts(src_text, tgt_text, self.filter_rules,
                                        src_lang, tgt_lang)
                if not decision.keep:
                    report["dropped"][decision.reason] += 1
                    continue
                key = dedup_key_texts(src_text, tgt_text)
                if key in self._pair_keys or key in seen_keys:
                    report["duplicates"] += 1
                    continue
                seen_keys.add(key)
                items.append({
                    "pair_id": uuid.uuid4().hex,
                    "src_segment_id": uuid.uuid4().hex,
                    "tgt_segment_id": uuid.uuid4().hex,
                    "candidate_id": uuid.uuid4().hex,
                    "src_text": src_text,
                    "tgt_text": tgt_text,
                    "position": position,
                })
                report["added"] += 1
            if items:
                self._commit("pairs_ingested", {
                    "source_doc": doc_label,
                    "src_lang": src_lang.value,
                    "tgt_lang": tgt_lang.value,
                    "origin": origin.value,
                    "items": items,
                    "ts": time.time(),
                })
            return report

    def _apply_pairs_ingested(self, data: dict) -> None:
        src_lang = data["src_lang"]
        tgt_lang = data["tgt_lang"]
        for item in data["items"]:
            src_seg = {
                "id": item["src_segment_id"],
                "lang": src_lang,
                "raw": item["src_text"],
                "normalized": item["src_text"],
                "source_doc": data["source_doc"] + ":src",
                "position": item["position"],
                "translatable": True,
                "ord": self._next_ord(),
            }
            tgt_seg = {
                "id": item["tgt_segment_id"],
                "lang": tgt_lang,
                "raw": item["tgt_text"],
                "normalized": item["tgt_text"],
                "source_doc": data["source_doc"] + ":tgt",
                "position": item["position"],
                "translatable": False,
                "ord": self._next_ord(),
            }
            self.segments[src_seg["id"]] = src_seg
            self.segments[tgt_seg["id"]] = tgt_seg
            pair = {
                "id": item["pair_id"],
                "src_segment": src_seg["id"],
                "tgt_segment": tgt_seg["id"],
                "origin": data["origin"],
                "status": PairStatus.PENDING.value,
                "key": dedup_key_texts(item["src_text"], item["tgt_text"]),
                "created_at": data["ts"],
                "ord": self._next_ord(),
            }
            self.pairs[pair["id"]] = pair
            self._pair_keys[pair["key"]] = pair["id"]
            # The ingested target doubles as the candidate the crowd verifies.
            self._insert_candidate({
                "id": item["candidate_id"],
                "source_segment": src_seg["id"],
                "text": item["tgt_text"],
                "author": MACHINE_AUTHOR,
                "pair_id": pair["id"],
                "status": PairStatus.PENDING.value,
                "created_at": data["ts"],
                "ord": self._next_ord(),
            })

    # -- document staging and alignment ------------------------------------------------

    def stage_documents(self, src_doc: str, tgt_doc: str,
                        src_lang: LangTag = LangTag.EN,
                        tgt_lang: LangTag = LangTag.OM,
                        name: str = "docpair") -> dict:
        with self._lock:
            if src_lang == tgt_lang:
                raise EngineError("same_language_pair")
            if not src_doc.strip() or not tgt_doc.strip():
                raise EngineError("empty_document")
            doc_id = uuid.uuid4().hex
            self._commit("documents_staged", {
                "doc_id": doc_id,
                "name": name,
                "src_lang": src_lang.value,
                "tgt_lang": tgt_lang.value,
                "src_doc": src_doc,
                "tgt_doc": tgt_doc,
                "ts": time.time(),
            })
            return dict(self.docs[doc_id])

    def _apply_documents_staged(self, data: dict) -> None:
        self.docs[data["doc_id"]] = {
            "id": data["doc_id"],
            "name": data["name"],
            "src_lang": data["src_lang"],
            "tgt_lang": data["tgt_lang"],
            "src_doc": data["src_doc"],
            "tgt_doc": data["tgt_doc"],
            "aligned": False,
            "report": None,
            "created_at": data["ts"],
        }

    def align_document(self, doc_id: str) -> dict:
        """Sentence-align a staged document pair and ingest the linked pairs."""
        with self._lock:
            doc = self.docs.get(doc_id)
            if doc is None:
                raise EngineError("unknown_document")
            if doc["aligned"]:
                raise EngineError("document_already_aligned")
            src_lang = LangTag(doc["src_lang"])
            tgt_lang = LangTag(doc["tgt_lang"])
            src_sents = sentence_split(normalize_text(doc["src_doc"], src_lang),
                                       src_lang)
            tgt_sents = sentence_split(normalize_text(doc["tgt_doc"], tgt_lang),
                                       tgt_lang)
            links = align(src_sents, tgt_sents, self.align_params)
            text_pairs, drop_report = emit_pair_texts(
                links, src_sents, tgt_sents, self.filter_rules)
            report = self.ingest_pairs(text_pairs, src_lang, tgt_lang,
                                       PairOrigin.DOCUMENT_ALIGNED,
                                       source_doc=doc["name"])
            report["links"] = len(links)
            report["unmatched"] = drop_report.unmatched
            for reason, count in drop_report.dropped.items():
                report["dropped"][reason] += count
            self._commit("document_aligned", {
                "doc_id": doc_id,
                "report": report,
                "ts": time.time(),
            })
            return dict(report)

    def _apply_document_aligned(self, data: dict) -> None:
        doc = self.docs[data["doc_id"]]
        doc["aligned"] = True
        doc["report"] = data["report"]

    # -- queries ---------------------------------------------------------------------

    def batch_payload(self, batch: dict) -> dict:
        """Batch enriched with the texts a client needs to render each item."""
        with self._lock:
            items = []
            for item in batch["items"]:
                entry = {"item_id": item["item_id"], "state": item["state"]}
                if batch["kind"] == BatchKind.TRANSLATE.value:
                    segment = self.segments[item["target_id"]]
                    entry.update({
                        "segment_id": segment["id"],
                        "text": segment["normalized"],
                        "lang": segment["lang"],
                        "target_lang": LangTag(segment["lang"]).other().value,
                    })
                else:
                    candidate = self.candidates[item["target_id"]]
                    segment = self.segments[candidate["source_segment"]]
                    entry.update({
                        "candidate_id": candidate["id"],
                        "candidate_text": candidate["text"],
                        "source_text": segment["normalized"],
                        "source_lang": segment["lang"],
                        "target_lang": LangTag(segment["lang"]).other().value,
                    })
                items.append(entry)
            return {"id": batch["id"], "kind": batch["kind"], "items": items,
                    "issued_at": batch["issued_at"]}

    def pairs_by_status(self, statuses: set[str]) -> list[dict]:
        """Pairs in creation order with side texts resolved, EN/OM oriented."""
        with self._lock:
            rows = []
            ordered = sorted(self.pairs.values(), key=lambda p: p["ord"])
            for pair in ordered:
                if pair["status"] not in statuses:
                    continue
                src = self.segments[pair["src_segment"]]
                tgt = self.segments[pair["tgt_segment"]]
                en, om = (src, tgt) if src["lang"] == LangTag.EN.value else (tgt, src)
                rows.append({
                    "id": pair["id"],
                    "en": en["normalized"],
                    "om": om["normalized"],
                    "origin": pair["origin"],
                    "status": pair["status"],
                })
            return rows

    def lookup_translation(self, text: str, direction: str) -> str | None:
        """Exact translation-memory hit over verified pairs, or None."""
        with self._lock:
            if direction == "en-om":
                source_lang, source_field, target_field = LangTag.EN, "en", "om"
            elif direction == "om-en":
                source_lang, source_field, target_field = LangTag.OM, "om", "en"
            else:
                raise EngineError("unknown_direction")
            needle = _fold(canonical_text(text, source_lang))
            if not needle:
                raise EngineError("empty_text")
            for row in self.pairs_by_status({PairStatus.VERIFIED.value}):
                if _fold(row[source_field]) == needle:
                    return row[target_field]
            return None

    def stats(self) -> dict:
        with self._lock:
            by_status: dict[str, int] = {}
            by_origin: dict[str, int] = {}
            token_counts = {"en": 0, "om": 0}
            for row in self.pairs_by_status(
                    {s.value for s in PairStatus}):
                by_status[row["status"]] = by_status.get(row["status"], 0) + 1
                by_origin[row["origin"]] = by_origin.get(row["origin"], 0) + 1
                token_counts["en"] += len(row["en"].split())
                token_counts["om"] += len(row["om"].split())
            return {
                "pairs": len(self.pairs),
                "pairs_by_status": by_status,
                "pairs_by_origin": by_origin,
                "token_counts": token_counts,
                "segments": len(self.segments),
                "candidates": len(self.candidates),
                "verifications": len(self.verifications),
                "contributors": len(self.contributors),
                "documents_staged": len(self.docs),
                "contributor_points": sum(
                    p["points"] for p in self.contributors.values()),
            }
