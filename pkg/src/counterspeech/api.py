"""HTTP surface: stream ingestion plus the operator control API.

Endpoints
---------
POST /ingest                  one tweet object; 202 on admit, 200 with a
                              reason when filtered out
GET  /stats                   live counters (plus derived abusive_rate)
PUT  /config/threshold        {"theta": float, "operator": str}
GET  /curation?state=         list entries, optionally by state
POST /curation                {"text": str, "credit_handle"?: str}
POST /curation/{id}/review    {"action": str, "new_text"?: str, "operator": str}

Errors return 4xx with ``{"error": {"code": ..., "message": ...}}`` so
clients can react to the code, not the prose.  When a bearer token is
configured every endpoint except /ingest requires it; without a token
the API runs in dev mode, unauthenticated.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .curation import CurationError, EntryState
from .pipeline.service import PipelineService


class ThresholdChange(BaseModel):
    theta: float
    operator: str


class CurationSubmission(BaseModel):
    text: str
    credit_handle: str | None = None


class ReviewAction(BaseModel):
    action: str
    operator: str
    new_text: str | None = None


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def create_app(service: PipelineService, token: str | None = None) -> FastAPI:
    app = FastAPI(title="counterspeech operator api")

    @app.middleware("http")
    async def check_token(request: Request, call_next):
        if token and request.url.path != "/ingest":
            supplied = request.headers.get("authorization", "")
            if supplied != f"Bearer {token}":
                return _error(401, "unauthorized", "missing or invalid bearer token")
        return await call_next(request)

    @app.post("/ingest")
    async def ingest(request: Request):
        from .corpus import CorpusError, Tweet

        try:
            tweet = Tweet.from_dict(await request.json())
        except (KeyError, ValueError, CorpusError) as exc:
            return _error(400, "malformed_tweet", str(exc))
        admitted, reason = service.submit(tweet)
        if admitted:
            return JSONResponse(status_code=202, content={"status": "admitted", "id": tweet.id})
        return JSONResponse(status_code=200, content={"status": "filtered", "reason": reason})

    @app.get("/stats")
    def stats():
        payload = service.stats()
        analysed = payload["analysed"]
        payload["abusive_rate"] = payload["abusive"] / analysed if analysed else 0.0
        return payload

    @app.put("/config/threshold")
    def set_threshold(change: ThresholdChange):
        try:
            service.config.set_theta(change.theta, change.operator)
        except CurationError as exc:
            return _error(422, exc.code, str(exc))
        return {
            "theta": service.config.theta,
            "history": [
                {"value": v, "at": at.isoformat(), "operator": op}
                for v, at, op in service.config.history
            ],
        }

    @app.get("/curation")
    def list_entries(state: str | None = None):
        try:
            entries = service.library.entries(EntryState(state) if state else None)
        except ValueError:
            return _error(422, "unknown_state", f"unknown state {state!r}")
        return {"entries": [e.to_dict() for e in entries]}

    @app.post("/curation", status_code=201)
    def submit_entry(submission: CurationSubmission):
        try:
            entry = service.library.submit(submission.text, submission.credit_handle)
        except CurationError as exc:
            return _error(422, exc.code, str(exc))
        return entry.to_dict()

    @app.post("/curation/{entry_id}/review")
    def review_entry(entry_id: str, review: ReviewAction):
        try:
            entry = service.library.review(
                entry_id, review.action, review.operator, review.new_text
            )
        except CurationError as exc:
            status = 404 if exc.code == "not_found" else 409 if exc.code == "terminal_state" else 422
            return _error(status, exc.code, str(exc))
        return entry.to_dict()

    return app
