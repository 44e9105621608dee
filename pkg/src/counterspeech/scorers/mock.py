"""Deterministic stand-in for the toxicity scoring endpoint.

A rules file maps regex patterns to attribute scores; the first matching
rule wins and is merged over the defaults.  The same rules engine backs
two frontends: ``MockToxicityClient`` (in-process, used by replay and by
unit tests) and the FastAPI app from :func:`create_scorer_app`, which
speaks the real wire protocol for integration tests.

Rules file shape::

    {
      "default_score": 0.02,
      "default": {"TOXICITY": 0.1},
      "rules": [{"pattern": "awful|disgrace", "scores": {"TOXICITY": 0.95}}],
      "omit_attributes": []
    }

``omit_attributes`` is fault injection: the server will deliberately
drop those attributes from its (otherwise 200) response so client error
handling can be exercised.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from pydantic import BaseModel

from .toxicity import DEFAULT_TOXICITY_ATTRIBUTES


class ScoreRequest(BaseModel):
    text: str
    attributes: list[str]


class ScoreRules:
    def __init__(
        self,
        rules: list[tuple[str, dict[str, float]]] | None = None,
        default: dict[str, float] | None = None,
        default_score: float = 0.02,
        omit_attributes: list[str] | None = None,
    ):
        self._rules = [(re.compile(p), dict(s)) for p, s in (rules or [])]
        self._default = dict(default or {})
        self._default_score = default_score
        self.omit_attributes = set(omit_attributes or [])

    @classmethod
    def from_file(cls, path: str | Path) -> "ScoreRules":
        cfg = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            rules=[(r["pattern"], r["scores"]) for r in cfg.get("rules", [])],
            default=cfg.get("default"),
            default_score=cfg.get("default_score", 0.02),
            omit_attributes=cfg.get("omit_attributes"),
        )

    def score(self, text: str, attributes) -> dict[str, float]:
        merged = dict(self._default)
        for pattern, scores in self._rules:
            if pattern.search(text):
                merged.update(scores)
                break
        return {a: float(merged.get(a, self._default_score)) for a in attributes}


class MockToxicityClient:
    """In-process client with the same contract as ``ToxicityClient``."""

    def __init__(self, rules: ScoreRules | None = None):
        self.rules = rules or ScoreRules()

    def score(self, text, attributes=DEFAULT_TOXICITY_ATTRIBUTES) -> dict[str, float]:
        text = str(text)
        if not text.strip():
            raise ValueError("cannot score empty text")
        return self.rules.score(text, list(attributes))


def create_scorer_app(rules: ScoreRules | None = None):
    """FastAPI app implementing the scoring wire protocol."""
    from fastapi import FastAPI
    from fastapi.responses import JSONResponse

    engine = rules or ScoreRules()
    app = FastAPI(title="mock toxicity scorer")

    @app.post("/v1/score")
    def score(req: ScoreRequest):
        if not req.text.strip():
            return JSONResponse(
                status_code=422, content={"error": "empty_text"}
            )
        scores = engine.score(req.text, req.attributes)
        for attribute in engine.omit_attributes:
            scores.pop(attribute, None)
        return {"scores": scores}

    return app
