"""HTTP client for the toxicity-attribute scoring endpoint.

Wire protocol (also spoken by the bundled mock server):

    POST {base_url}/v1/score
    request  {"text": <str>, "attributes": [<name>, ...]}
    response {"scores": {<name>: <float in [0,1]>, ...}}   (HTTP 200)

A 200 is only valid with a complete score set; anything else raises one
of three distinguishable errors: ``TransportError`` (connection/HTTP
failure after bounded retries), ``MalformedResponseError`` (unparseable
or out-of-range payload) or ``MissingAttributeError`` (a requested
attribute absent from an otherwise well-formed response).
"""

from __future__ import annotations

import os
import time

import requests

# Attribute set produced by the scoring endpoint, in registry order.
DEFAULT_TOXICITY_ATTRIBUTES = (
    "IDENTITY_ATTACK",
    "INCOHERENT",
    "TOXICITY_FAST",
    "THREAT",
    "INSULT",
    "LIKELY_TO_REJECT",
    "TOXICITY",
    "PROFANITY",
    "SEXUALLY_EXPLICIT",
    "ATTACK_ON_AUTHOR",
    "SPAM",
    "ATTACK_ON_COMMENTER",
    "OBSCENE",
    "SEVERE_TOXICITY",
    "INFLAMMATORY",
)

API_KEY_ENV_VAR = "COUNTERSPEECH_SCORER_API_KEY"


class ScorerError(Exception):
    """Base class for scorer-family failures."""


class TransportError(ScorerError):
    """Endpoint unreachable or persistently unhealthy after retries."""


class MalformedResponseError(ScorerError):
    """Response was not the documented shape or carried invalid values."""


class MissingAttributeError(ScorerError):
    """A requested attribute was absent from the response."""

    def __init__(self, attribute: str):
        super().__init__(f"response is missing requested attribute {attribute!r}")
        self.attribute = attribute


class ToxicityClient:
    """Shareable client with bounded retry and exponential backoff."""

    def __init__(
        self,
        base_url: str,
        api_key: str | None = None,
        timeout: float = 2.0,
        max_retries: int = 3,
        backoff_base: float = 0.25,
        session: requests.Session | None = None,
        sleep=time.sleep,
    ):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV_VAR)
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self._session = session or requests.Session()
        self._sleep = sleep

    def score(self, text, attributes=DEFAULT_TOXICITY_ATTRIBUTES) -> dict[str, float]:
        """Return one probability per requested attribute."""
        text = str(text)
        if not text.strip():
            raise ValueError("cannot score empty text")
        attributes = list(attributes)
        headers = {"X-Api-Key": self.api_key} if self.api_key else {}
        body = {"text": text, "attributes": attributes}

        last_error: Exception | None = None
        for attempt in range(self.max_retries):
            try:
                response = self._session.post(
                    f"{self.base_url}/v1/score",
                    json=body,
                    headers=headers,
                    timeout=self.timeout,
                )
            except requests.RequestException as exc:
                last_error = exc
            else:
                if response.status_code == 200:
                    return self._parse(response, attributes)
                last_error = requests.HTTPError(f"HTTP {response.status_code}")
            if attempt < self.max_retries - 1:
                self._sleep(self.backoff_base * 2**attempt)
        raise TransportError(
            f"scoring failed after {self.max_retries} attempts: {last_error}"
        ) from last_error

    @staticmethod
    def _parse(response, attributes: list[str]) -> dict[str, float]:
        try:
            payload = response.json()
        except ValueError as exc:
            raise MalformedResponseError("response body is not JSON") from exc
        scores = payload.get("scores") if isinstance(payload, dict) else None
        if not isinstance(scores, dict):
            raise MalformedResponseError('response lacks a "scores" object')
        out: dict[str, float] = {}
        for attribute in attributes:
            if attribute not in scores:
                raise MissingAttributeError(attribute)
            value = scores[attribute]
            if not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
                raise MalformedResponseError(
                    f"score for {attribute!r} is not a probability: {value!r}"
                )
            out[attribute] = float(value)
        return out
