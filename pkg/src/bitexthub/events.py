"""Append-only event log with snapshot support.

One JSON object per line, fsynced on append so an acknowledged write survives
a crash. On open, a corrupted or half-written tail is cut back to the last
valid event and the recovery point is reported; events are never rewritten.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import StoreError

EVENTS_FILENAME = "events.jsonl"
SNAPSHOT_FILENAME = "snapshot.json"


@dataclass(frozen=True)
class RecoveryReport:
    recovered_through: int  # last valid event seq (0 = none)
    discarded_lines: int

    @property
    def clean(self) -> bool:
        return self.discarded_lines == 0


class EventLog:
    """Durable, strictly-ordered event stream for one store directory."""

    def __init__(self, store_dir: str | Path):
        self.store_dir = Path(store_dir)
        try:
            self.store_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StoreError(f"cannot create store directory: {exc}") from exc
        self.path = self.store_dir / EVENTS_FILENAME
        self.last_seq = 0
        self.recovery: RecoveryReport | None = None

    def read_all(self, after_seq: int = 0) -> list[dict]:
        """Read events with seq > after_seq, truncating any corrupt tail.

        Stops at the first unparsable or out-of-order line; everything from
        that point on is discarded from the file so later appends extend a
        valid prefix.
        """
        events: list[dict] = []
        if not self.path.exists():
            self.recovery = RecoveryReport(0, 0)
            return events
        valid_bytes = 0
        discarded = 0
        seq = 0
        with self.path.open("rb") as fh:
            for line in fh:
                if not line.endswith(b"\n"):
                    discarded += 1
                    break
                try:
                    event = json.loads(line.decode("utf-8"))
                    if event.get("seq") != seq + 1:
                        raise ValueError("sequence gap")
                except (ValueError, UnicodeDecodeError):
                    discarded += 1
                    break
                seq = event["seq"]
                valid_bytes += len(line)
                if seq > after_seq:
                    events.append(event)
            else:
                self.last_seq = seq
                self.recovery = RecoveryReport(seq, 0)
                return events
            # Corrupt tail: count the rest, then cut the file back.
            for _ in fh:
                discarded += 1
        with self.path.open("r+b") as fh:
            fh.truncate(valid_bytes)
        self.last_seq = seq
        self.recovery = RecoveryReport(seq, discarded)
        return events

    def append(self, event: dict) -> None:
        """Durably append one event; returns only after fsync."""
        if event.get("seq") != self.last_seq + 1:
            raise StoreError(
                f"event seq {event.get('seq')} does not follow {self.last_seq}")
        line = json.dumps(event, ensure_ascii=False, sort_keys=True,
                          separators=(",", ":")) + "\n"
        try:
            with self.path.open("ab") as fh:
                fh.write(line.encode("utf-8"))
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise StoreError(f"cannot append event: {exc}") from exc
        self.last_seq = event["seq"]

    # -- snapshots ---------------------------------------------------------

    def snapshot_path(self) -> Path:
        return self.store_dir / SNAPSHOT_FILENAME

    def write_snapshot(self, last_seq: int, state: dict) -> None:
        payload = json.dumps(
            {"last_seq": last_seq, "state": state},
            ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        tmp = self.snapshot_path().with_suffix(".tmp")
        try:
            tmp.write_text(payload, encoding="utf-8")
            os.replace(tmp, self.snapshot_path())
        except OSError as exc:
            raise StoreError(f"cannot write snapshot: {exc}") from exc

    def read_snapshot(self) -> tuple[int, dict] | None:
        path = self.snapshot_path()
        if not path.exists():
            return None
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
            return payload["last_seq"], payload["state"]
        except (ValueError, KeyError, OSError) as exc:
            raise StoreError(f"snapshot unreadable: {exc}") from exc
