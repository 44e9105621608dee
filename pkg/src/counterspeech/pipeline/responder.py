"""Single consumer that turns decided-true records into rate-limited
positivitweet responses.

Draws are uniform without repetition: the approved library is shuffled
into a deck and dealt until exhausted, then reshuffled.  Responses that
the limiter refuses are dropped (counted, never queued).  An empty
approved library raises an operator alert flag instead of responding.
"""

from __future__ import annotations

import random
import threading
from datetime import datetime

from ..curation import CurationLibrary
from .limiter import RateLimiter
from .store import PipelineStore, ResponseEvent, ScoreRecord


class Responder:
    def __init__(
        self,
        library: CurationLibrary,
        limiter: RateLimiter,
        store: PipelineStore,
        rng: random.Random | None = None,
    ):
        self.library = library
        self.limiter = limiter
        self.store = store
        self.rng = rng or random.Random()
        self.suppressed = 0
        self.sent = 0
        self.operator_alert = False
        self._deck: list[str] = []
        self._lock = threading.Lock()

    def _draw(self) -> str | None:
        """Next approved entry id, reshuffling a fresh deck on exhaustion."""
        approved_ids = [e.id for e in self.library.approved()]
        if not approved_ids:
            return None
        approved = set(approved_ids)
        while True:
            while self._deck:
                entry_id = self._deck.pop()
                if entry_id in approved:  # entries approved after the shuffle wait a deck
                    return entry_id
            fresh = list(approved_ids)
            self.rng.shuffle(fresh)
            self._deck = fresh

    def maybe_respond(self, record: ScoreRecord, at: datetime) -> ResponseEvent | None:
        """Respond to a decided-true record if the limiter permits."""
        if not record.decided:
            raise ValueError("maybe_respond requires a decided-true record")
        with self._lock:
            if not self.library.approved():
                self.operator_alert = True
                return None
            if not self.limiter.allow(at):
                self.suppressed += 1
                return None
            entry_id = self._draw()
            self.sent += 1
            event = ResponseEvent(
                response_id=f"r{self.sent:06d}",
                tweet_id=record.tweet_id,
                positivitweet_id=entry_id,
                sent_at=at,
            )
            self.store.insert_response(event)
            return event
