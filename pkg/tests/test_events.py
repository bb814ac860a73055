"""Event log durability: ordering, corrupt-tail recovery, snapshots."""

import json

import pytest

from bitexthub.errors import StoreError
from bitexthub.events import EVENTS_FILENAME, EventLog


def _event(seq, payload="x"):
    return {"seq": seq, "kind": "noted", "data": {"payload": payload}}


def test_append_and_read_round_trip(tmp_path):
    log = EventLog(tmp_path)
    log.read_all()
    for seq in range(1, 6):
        log.append(_event(seq, f"p{seq}"))
    fresh = EventLog(tmp_path)
    events = fresh.read_all()
    assert [e["seq"] for e in events] == [1, 2, 3, 4, 5]
    assert events[2]["data"]["payload"] == "p3"
    assert fresh.recovery.clean


def test_read_after_seq(tmp_path):
    log = EventLog(tmp_path)
    log.read_all()
    for seq in range(1, 6):
        log.append(_event(seq))
    fresh = EventLog(tmp_path)
    assert [e["seq"] for e in fresh.read_all(after_seq=3)] == [4, 5]
    assert fresh.last_seq == 5


def test_empty_store(tmp_path):
    log = EventLog(tmp_path)
    assert log.read_all() == []
    assert log.recovery.clean
    assert log.last_seq == 0


def test_append_rejects_sequence_gap(tmp_path):
    log = EventLog(tmp_path)
    log.read_all()
    log.append(_event(1))
    with pytest.raises(StoreError):
        log.append(_event(3))


def test_truncated_last_line_is_cut(tmp_path):
    log = EventLog(tmp_path)
    log.read_all()
    for seq in range(1, 4):
        log.append(_event(seq))
    path = tmp_path / EVENTS_FILENAME
    raw = path.read_bytes()
    path.write_bytes(raw[:-7])  # cut into the final record
    fresh = EventLog(tmp_path)
    events = fresh.read_all()
    assert [e["seq"] for e in events] == [1, 2]
    assert fresh.recovery.recovered_through == 2
    assert fresh.recovery.discarded_lines == 1
    # the corrupt bytes are gone; appends continue from the recovery point
    fresh.append(_event(3, "again"))
    final = EventLog(tmp_path)
    assert [e["seq"] for e in final.read_all()] == [1, 2, 3]
    assert final.recovery.clean


def test_garbage_line_discards_rest(tmp_path):
    log = EventLog(tmp_path)
    log.read_all()
    for seq in range(1, 3):
        log.append(_event(seq))
    path = tmp_path / EVENTS_FILENAME
    with path.open("ab") as fh:
        fh.write(b"{not json\n")
        fh.write(json.dumps(_event(3)).encode() + b"\n")
    fresh = EventLog(tmp_path)
    assert [e["seq"] for e in fresh.read_all()] == [1, 2]
    assert fresh.recovery.discarded_lines == 2


def test_sequence_gap_in_file_truncates(tmp_path):
    path = tmp_path / EVENTS_FILENAME
    lines = [json.dumps(_event(1)), json.dumps(_event(4))]
    path.write_text("\n".join(lines) + "\n")
    log = EventLog(tmp_path)
    assert [e["seq"] for e in log.read_all()] == [1]
    assert log.recovery.recovered_through == 1


def test_snapshot_round_trip(tmp_path):
    log = EventLog(tmp_path)
    state = {"counts": {"a": 1}, "names": ["x", "y"]}
    log.write_snapshot(7, state)
    assert log.read_snapshot() == (7, state)


def test_missing_snapshot(tmp_path):
    assert EventLog(tmp_path).read_snapshot() is None


def test_corrupt_snapshot_raises(tmp_path):
    log = EventLog(tmp_path)
    log.snapshot_path().write_text("{broken")
    with pytest.raises(StoreError):
        log.read_snapshot()


def test_snapshot_overwrite_is_atomic_replace(tmp_path):
    log = EventLog(tmp_path)
    log.write_snapshot(1, {"v": 1})
    log.write_snapshot(2, {"v": 2})
    assert log.read_snapshot() == (2, {"v": 2})
    assert not log.snapshot_path().with_suffix(".tmp").exists()
