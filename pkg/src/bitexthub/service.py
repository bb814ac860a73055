"""HTTP+JSON service over the platform engine.

Bearer tokens gate every write endpoint; leaderboard and the demo translator
are public. Engine precondition failures surface as 422 with a machine
readable `reason`. Events are fsynced by the engine before any 2xx response
leaves, so acknowledged writes survive a crash.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import httpx
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .config import AppConfig
from .corpus import LangTag, PairStatus
from .engine import BatchKind, Platform
from .errors import EngineError, StoreError
from .exporter import export_zip_bytes

PUBLIC_PROFILE_FIELDS = ("id", "handle", "points", "badges",
                         "translations_submitted", "verifications_submitted",
                         "skips")


class TranslatorUnavailable(Exception):
    pass


@dataclass
class TranslatorBinding:
    """Demo translator: translation memory first, then an optional HTTP hop."""

    kind: str = "memory"  # "memory" or "external"
    endpoint: str = ""
    timeout: float = 10.0

    def translate(self, platform: Platform, text: str,
                  direction: str) -> tuple[str, str]:
        hit = platform.lookup_translation(text, direction)
        if hit is not None:
            return hit, "memory"
        if self.kind == "external" and self.endpoint:
            try:
                resp = httpx.post(self.endpoint,
                                  json={"text": text, "direction": direction},
                                  timeout=self.timeout)
                resp.raise_for_status()
                translation = resp.json()["translation"]
            except (httpx.HTTPError, ValueError, KeyError):
                raise TranslatorUnavailable()
            if not isinstance(translation, str):
                raise TranslatorUnavailable()
            return translation, "external"
        raise TranslatorUnavailable()


def _public_profile(profile: dict) -> dict:
    return {k: profile[k] for k in PUBLIC_PROFILE_FIELDS}


def _reason(status: int, reason: str) -> JSONResponse:
    return JSONResponse({"reason": reason}, status_code=status)


class _ApiFail(Exception):
    def __init__(self, status: int, reason: str):
        self.status = status
        self.reason = reason


def create_app(platform: Platform, config: AppConfig | None = None,
               translator: TranslatorBinding | None = None,
               static_dir: str | Path | None = None) -> FastAPI:
    config = config or AppConfig()
    if translator is None:
        translator = TranslatorBinding(kind=config.translator_mode,
                                       endpoint=config.translator_url,
                                       timeout=config.translator_timeout)
    app = FastAPI(title="bitexthub", docs_url=None, redoc_url=None)
    app.state.platform = platform
    app.state.translator = translator
    app.state.request_counts = Counter()

    def bearer_token(request: Request) -> str:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            raise _ApiFail(401, "missing_token")
        return header[7:].strip()

    def authed(request: Request) -> dict:
        token = bearer_token(request)
        profile = platform.contributor_by_token(token)
        if profile is None:
            raise _ApiFail(401, "invalid_token")
        app.state.request_counts[token] += 1
        return profile

    def admin(request: Request) -> None:
        token = bearer_token(request)
        if not config.admin_token or token != config.admin_token:
            raise _ApiFail(401, "invalid_token")
        app.state.request_counts[token] += 1

    async def body_of(request: Request) -> dict:
        try:
            data = await request.json()
        except Exception:
            raise _ApiFail(422, "invalid_json")
        if not isinstance(data, dict):
            raise _ApiFail(422, "invalid_json")
        return data

    @app.exception_handler(_ApiFail)
    async def _fail_handler(request: Request, exc: _ApiFail):
        return _reason(exc.status, exc.reason)

    @app.exception_handler(EngineError)
    async def _engine_handler(request: Request, exc: EngineError):
        status = 409 if exc.reason == "duplicate_handle" else 422
        return _reason(status, exc.reason)

    @app.exception_handler(StoreError)
    async def _store_handler(request: Request, exc: StoreError):
        return _reason(500, "store_error")

    @app.post("/api/contributors", status_code=201)
    async def register(request: Request):
        data = await body_of(request)
        handle = data.get("handle")
        if not isinstance(handle, str):
            raise _ApiFail(422, "empty_handle")
        profile = platform.register_contributor(handle)
        # Registration is the one response that carries the secret token.
        return {**_public_profile(profile), "token": profile["token"]}

    @app.get("/api/batch")
    async def get_batch(request: Request):
        profile = authed(request)
        kind_raw = request.query_params.get("kind", "")
        try:
            kind = BatchKind(kind_raw)
        except ValueError:
            raise _ApiFail(422, "invalid_kind")
        batch = platform.request_batch(profile["id"], kind)
        return platform.batch_payload(batch)

    @app.post("/api/translations", status_code=201)
    async def post_translations(request: Request):
        profile = authed(request)
        data = await body_of(request)
        item_id = data.get("item_id")
        texts = data.get("texts")
        if not isinstance(item_id, str):
            raise _ApiFail(422, "unknown_item")
        if not isinstance(texts, list):
            raise _ApiFail(422, "invalid_texts")
        candidates = platform.submit_translation(profile["id"], item_id, texts)
        return {
            "item_id": item_id,
            "candidates": [
                {"id": c["id"], "text": c["text"], "status": c["status"]}
                for c in candidates
            ],
        }

    @app.post("/api/skips", status_code=204)
    async def post_skip(request: Request):
        profile = authed(request)
        data = await body_of(request)
        item_id = data.get("item_id")
        if not isinstance(item_id, str):
            raise _ApiFail(422, "unknown_item")
        platform.skip_item(profile["id"], item_id)
        return Response(status_code=204)

    @app.post("/api/verifications", status_code=201)
    async def post_verification(request: Request):
        profile = authed(request)
        data = await body_of(request)
        item_id = data.get("item_id")
        rating = data.get("rating")
        alternative = data.get("alternative")
        if not isinstance(item_id, str):
            raise _ApiFail(422, "unknown_item")
        if not isinstance(rating, int) or isinstance(rating, bool):
            raise _ApiFail(422, "rating_out_of_range")
        if alternative is not None and not isinstance(alternative, str):
            raise _ApiFail(422, "invalid_text")
        verification = platform.submit_verification(
            profile["id"], item_id, rating, alternative)
        return {
            "id": verification["id"],
            "candidate": verification["candidate"],
            "rating": verification["rating"],
            "alternative": verification["alternative"],
            "candidate_status": verification["candidate_status"],
        }

    @app.get("/api/leaderboard")
    async def leaderboard(request: Request):
        raw = request.query_params.get("limit", "10")
        try:
            limit = int(raw)
        except ValueError:
            raise _ApiFail(422, "invalid_limit")
        if limit < 0:
            raise _ApiFail(422, "invalid_limit")
        return platform.leaderboard(limit)

    @app.get("/api/profile/{contributor_id}")
    async def profile_route(request: Request, contributor_id: str):
        profile = authed(request)
        if contributor_id != profile["id"]:
            # Other profiles are invisible, not merely forbidden.
            raise _ApiFail(404, "not_found")
        return _public_profile(platform.profile(contributor_id))

    @app.post("/api/translate")
    async def translate(request: Request):
        data = await body_of(request)
        text = data.get("text")
        direction = data.get("direction")
        if not isinstance(text, str):
            raise _ApiFail(422, "empty_text")
        if direction not in ("en-om", "om-en"):
            raise _ApiFail(422, "unknown_direction")
        try:
            translation, source = app.state.translator.translate(
                platform, text, direction)
        except TranslatorUnavailable:
            return _reason(503, "translator_unavailable")
        return {"translation": translation, "source": source}

    @app.post("/api/admin/documents", status_code=202)
    async def admin_documents(request: Request):
        admin(request)
        data = await body_of(request)
        src_doc = data.get("src_doc")
        tgt_doc = data.get("tgt_doc")
        meta = data.get("meta") or {}
        if not isinstance(src_doc, str) or not isinstance(tgt_doc, str):
            raise _ApiFail(422, "empty_document")
        if not isinstance(meta, dict):
            raise _ApiFail(422, "invalid_meta")
        try:
            src_lang = LangTag(meta.get("src_lang", "en"))
            tgt_lang = LangTag(meta.get("tgt_lang", "om"))
        except ValueError:
            raise _ApiFail(422, "unknown_language")
        doc = platform.stage_documents(src_doc, tgt_doc, src_lang, tgt_lang,
                                       name=str(meta.get("name", "docpair")))
        report = platform.align_document(doc["id"])
        return {"doc_id": doc["id"], "status": "aligned", "report": report}

    @app.get("/api/export")
    async def export(request: Request):
        token = bearer_token(request)
        if platform.contributor_by_token(token) is None \
                and (not config.admin_token or token != config.admin_token):
            raise _ApiFail(401, "invalid_token")
        status = request.query_params.get("status", "verified")
        fmt = request.query_params.get("format", "bitext")
        if fmt != "bitext":
            raise _ApiFail(422, "unknown_format")
        wanted = {
            "verified": {PairStatus.VERIFIED.value},
            "pending": {PairStatus.PENDING.value},
            "all": {s.value for s in PairStatus},
        }.get(status)
        if wanted is None:
            raise _ApiFail(422, "unknown_status")
        rows = platform.pairs_by_status(wanted)
        payload = export_zip_bytes(rows, name="corpus")
        return Response(
            content=payload, media_type="application/zip",
            headers={"Content-Disposition":
                     'attachment; filename="corpus.zip"'})

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="ui")

    return app
