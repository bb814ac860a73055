"""Record API response fixtures for the UI tests.

Drives the real service in-process and saves selected responses under
tests/fixtures/. Rerun after API changes: python3 scripts/record_fixtures.py
"""
import json
import sys
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from bitexthub.config import AppConfig
from bitexthub.engine import Platform
from bitexthub.service import create_app

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

SRC_DOC = " ".join(
    f"The village council discussed water project number {i} this morning."
    for i in ["one", "two", "three", "four", "five", "six", "seven", "eight",
              "nine", "ten", "eleven", "twelve"])
TGT_DOC = " ".join(
    f"Manni maree gandaa pirojektii bishaanii lakkoofsa {i} ganama kana mari'ate."
    for i in ["tokko", "lama", "sadii", "afur", "shan", "jaha", "torba",
              "saddeet", "sagal", "kudhan", "kudha tokko", "kudha lama"])


def dump(name: str, payload) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / name).write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    print(f"wrote {name}")


def register(client, handle):
    resp = client.post("/api/contributors", json={"handle": handle})
    assert resp.status_code == 201, resp.text
    return resp.json()


def auth(profile):
    return {"Authorization": f"Bearer {profile['token']}"}


def verify_candidate(client, profile, candidate_id, rating, alternative=None):
    """Walk verify batches, skipping, until the target candidate appears."""
    for _ in range(20):
        batch = client.get("/api/batch", params={"kind": "verify"},
                           headers=auth(profile)).json()
        if not batch["items"]:
            raise SystemExit(f"verify pool exhausted before {candidate_id}")
        for item in batch["items"]:
            if item["candidate_id"] == candidate_id:
                body = {"item_id": item["item_id"], "rating": rating}
                if alternative is not None:
                    body["alternative"] = alternative
                resp = client.post("/api/verifications", json=body,
                                   headers=auth(profile))
                assert resp.status_code == 201, resp.text
                return resp.json()
            client.post("/api/skips", json={"item_id": item["item_id"]},
                        headers=auth(profile))
    raise SystemExit(f"candidate {candidate_id} never issued")


def main() -> None:
    tmp = tempfile.mkdtemp()
    platform = Platform.open(Path(tmp) / "store")
    client = TestClient(create_app(platform, config=AppConfig(admin_token="ops")))

    seeded = client.post(
        "/api/admin/documents",
        json={"src_doc": SRC_DOC, "tgt_doc": TGT_DOC, "meta": {"name": "village"}},
        headers={"Authorization": "Bearer ops"})
    assert seeded.status_code == 202, seeded.text

    chaltu = register(client, "chaltu")
    dump("contributor_created.json", chaltu)

    batch = client.get("/api/batch", params={"kind": "translate"},
                       headers=auth(chaltu)).json()
    assert len(batch["items"]) == 5
    dump("batch_translate.json", batch)

    first = None
    for idx, item in enumerate(batch["items"]):
        resp = client.post(
            "/api/translations",
            json={"item_id": item["item_id"], "texts": [f"Hiikkaa {idx} kan gandaa."]},
            headers=auth(chaltu))
        assert resp.status_code == 201, resp.text
        if first is None:
            first = resp.json()
    dump("translations_created.json", first)

    bad = client.post("/api/translations",
                      json={"item_id": batch["items"][0]["item_id"], "texts": []},
                      headers=auth(chaltu))
    assert bad.status_code == 422, bad.status_code
    dump("error_422.json", {"status": bad.status_code, "body": bad.json()})

    vbatch = client.get("/api/batch", params={"kind": "verify"},
                        headers=auth(chaltu)).json()
    assert len(vbatch["items"]) == 5
    dump("batch_verify.json", vbatch)

    target = vbatch["items"][0]["candidate_id"]
    resp = client.post("/api/verifications",
                       json={"item_id": vbatch["items"][0]["item_id"], "rating": 4},
                       headers=auth(chaltu))
    assert resp.status_code == 201, resp.text
    dump("verification_created.json", resp.json())

    profile = client.get(f"/api/profile/{chaltu['id']}", headers=auth(chaltu)).json()
    assert profile["points"] == 11 and profile["badges"] == ["bronze"], profile
    dump("profile_bronze.json", profile)

    tolaa = register(client, "tolaa")
    tb = client.get("/api/batch", params={"kind": "translate"},
                    headers=auth(tolaa)).json()
    resp = client.post(
        "/api/translations",
        json={"item_id": tb["items"][0]["item_id"],
              "texts": ["Hiikkaa tokkoffaa.", "Hiikkaa lammaffaa.", "Hiikkaa sadaffaa."]},
        headers=auth(tolaa))
    assert resp.status_code == 201
    verify_candidate(client, tolaa, target, 5, alternative=None)

    abdi = register(client, "abdi")
    verify_candidate(client, abdi, target, 5)

    board = client.get("/api/leaderboard").json()
    assert board[0]["handle"] == "chaltu", board
    dump("leaderboard.json", board)

    # quorum reached on `target`, its pair is verified and in the memory
    src_text = vbatch["items"][0]["source_text"]
    hit = client.post("/api/translate",
                      json={"text": src_text, "direction": "en-om"})
    assert hit.status_code == 200, hit.text
    assert hit.json()["source"] == "memory"
    dump("translate_memory.json", hit.json())

    miss = client.post("/api/translate",
                       json={"text": "A sentence nobody translated yet.",
                             "direction": "en-om"})
    assert miss.status_code == 503, miss.status_code
    dump("translate_unavailable.json", {"status": miss.status_code, "body": miss.json()})


if __name__ == "__main__":
    sys.exit(main())
