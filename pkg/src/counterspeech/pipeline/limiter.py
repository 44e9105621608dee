"""Response rate limiting: a per-UTC-day cap and a minimum spacing
between consecutive responses.  Both are hard invariants; the responder
drops (never queues) what the limiter refuses."""

from __future__ import annotations

import threading
from datetime import datetime, timezone

DEFAULT_DAILY_CAP = 100
DEFAULT_MIN_INTERVAL = 30.0


class RateLimiter:
    def __init__(self, daily_cap: int = DEFAULT_DAILY_CAP,
                 min_interval: float = DEFAULT_MIN_INTERVAL):
        if daily_cap < 0:
            raise ValueError("daily_cap must be >= 0")
        if min_interval < 0:
            raise ValueError("min_interval must be >= 0")
        self.daily_cap = daily_cap
        self.min_interval = min_interval
        self._day_counts: dict = {}
        self._last_at: datetime | None = None
        self._lock = threading.Lock()

    def allow(self, at: datetime) -> bool:
        """True iff a response at ``at`` keeps both invariants; the
        permit is recorded immediately."""
        at = at.astimezone(timezone.utc)
        day = at.date()
        with self._lock:
            if self._day_counts.get(day, 0) >= self.daily_cap:
                return False
            if (
                self._last_at is not None
                and (at - self._last_at).total_seconds() < self.min_interval
            ):
                return False
            self._day_counts[day] = self._day_counts.get(day, 0) + 1
            self._last_at = at
            return True

    def sent_today(self, at: datetime) -> int:
        with self._lock:
            return self._day_counts.get(at.astimezone(timezone.utc).date(), 0)
