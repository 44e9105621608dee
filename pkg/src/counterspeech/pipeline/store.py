"""Embedded single-file persistence for the live pipeline.

Four append-only tables: ``tweets`` (admitted stream items), ``scores``
(one row per analysis, including failure-marked rows), ``responses``
(sent positivitweets) and ``config_history`` (operator changes, one row
per change, append-only).  Rows are never updated or deleted; reports
are pure queries, so replaying a fixture and re-running a report is
idempotent.

SQLite is used in serialized mode behind a lock: admission and scoring
may run on several threads, writes are serialized per store.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from ..corpus import Tweet

_SCHEMA = """
CREATE TABLE IF NOT EXISTS tweets (
    id TEXT PRIMARY KEY,
    author_handle TEXT NOT NULL,
    lang TEXT NOT NULL,
    text TEXT NOT NULL,
    mentioned_handles TEXT NOT NULL,
    is_retweet INTEGER NOT NULL,
    timestamp TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS scores (
    tweet_id TEXT NOT NULL,
    clean_text TEXT NOT NULL,
    features TEXT,
    toxicity REAL,
    decided INTEGER,
    theta REAL,
    failed INTEGER NOT NULL DEFAULT 0,
    error TEXT,
    received_at TEXT NOT NULL,
    scored_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS responses (
    response_id TEXT PRIMARY KEY,
    tweet_id TEXT NOT NULL,
    positivitweet_id TEXT NOT NULL,
    sent_at TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS config_history (
    param TEXT NOT NULL,
    value TEXT NOT NULL,
    operator TEXT NOT NULL,
    changed_at TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS scores_scored_at ON scores (scored_at);
"""


def _iso(at: datetime) -> str:
    return at.astimezone(timezone.utc).isoformat()


def _parse_iso(text: str) -> datetime:
    return datetime.fromisoformat(text)


@dataclass(frozen=True)
class ScoreRecord:
    """Outcome of analysing one admitted tweet."""

    tweet_id: str
    clean_text: str
    feature_vector: tuple[float, ...] | None
    toxicity: float | None
    decided: bool | None
    theta_at_decision: float | None
    received_at: datetime
    scored_at: datetime
    failed: bool = False
    error: str | None = None

    def __post_init__(self):
        if not self.failed and self.decided is not None:
            assert self.decided == (self.toxicity >= self.theta_at_decision)


@dataclass(frozen=True)
class ResponseEvent:
    """A sent positivitweet.  Deliberately carries no trigger text or
    author: responses are anonymous with respect to the trigger."""

    response_id: str
    tweet_id: str
    positivitweet_id: str
    sent_at: datetime


class PipelineStore:
    def __init__(self, path: str | Path = ":memory:"):
        self._conn = sqlite3.connect(str(path), check_same_thread=False)
        self._lock = threading.Lock()
        self._defer_commits = False
        with self._lock:
            self._conn.executescript(_SCHEMA)
            self._conn.commit()

    def close(self) -> None:
        self._conn.close()

    def _commit(self) -> None:
        if not self._defer_commits:
            self._conn.commit()

    @contextmanager
    def batch(self):
        """Defer commits for a bulk load (single-threaded use only)."""
        self._defer_commits = True
        try:
            yield self
            with self._lock:
                self._conn.commit()
        finally:
            self._defer_commits = False

    # -- writers (append-only) ------------------------------------------

    def insert_tweet(self, tweet: Tweet) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT OR IGNORE INTO tweets VALUES (?,?,?,?,?,?,?)",
                (
                    tweet.id,
                    tweet.author_handle,
                    tweet.lang,
                    tweet.text,
                    json.dumps(list(tweet.mentioned_handles)),
                    int(tweet.is_retweet),
                    _iso(tweet.timestamp),
                ),
            )
            self._commit()

    def insert_score(self, record: ScoreRecord) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT INTO scores VALUES (?,?,?,?,?,?,?,?,?,?)",
                (
                    record.tweet_id,
                    record.clean_text,
                    json.dumps(list(record.feature_vector))
                    if record.feature_vector is not None
                    else None,
                    record.toxicity,
                    None if record.decided is None else int(record.decided),
                    record.theta_at_decision,
                    int(record.failed),
                    record.error,
                    _iso(record.received_at),
                    _iso(record.scored_at),
                ),
            )
            self._commit()

    def insert_response(self, event: ResponseEvent) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT INTO responses VALUES (?,?,?,?)",
                (event.response_id, event.tweet_id, event.positivitweet_id, _iso(event.sent_at)),
            )
            self._commit()

    def append_config(self, param: str, value: str, operator: str, at: datetime) -> None:
        with self._lock:
            self._conn.execute(
                "INSERT INTO config_history VALUES (?,?,?,?)",
                (param, value, operator, _iso(at)),
            )
            self._commit()

    # -- readers ----------------------------------------------------------

    def _count(self, sql: str, args=()) -> int:
        with self._lock:
            return int(self._conn.execute(sql, args).fetchone()[0])

    @staticmethod
    def _window(frm: datetime | None, to: datetime | None, column: str) -> tuple[str, list]:
        clauses, args = [], []
        if frm is not None:
            clauses.append(f"{column} >= ?")
            args.append(_iso(frm))
        if to is not None:
            clauses.append(f"{column} < ?")
            args.append(_iso(to))
        where = (" WHERE " + " AND ".join(clauses)) if clauses else ""
        return where, args

    def count_analysed(self, frm=None, to=None) -> int:
        where, args = self._window(frm, to, "scored_at")
        where = where + (" AND " if where else " WHERE ") + "failed = 0"
        return self._count(f"SELECT COUNT(*) FROM scores{where}", args)

    def count_abusive(self, frm=None, to=None) -> int:
        where, args = self._window(frm, to, "scored_at")
        where = where + (" AND " if where else " WHERE ") + "decided = 1"
        return self._count(f"SELECT COUNT(*) FROM scores{where}", args)

    def count_failed(self, frm=None, to=None) -> int:
        where, args = self._window(frm, to, "scored_at")
        where = where + (" AND " if where else " WHERE ") + "failed = 1"
        return self._count(f"SELECT COUNT(*) FROM scores{where}", args)

    def count_sent(self, frm=None, to=None) -> int:
        where, args = self._window(frm, to, "sent_at")
        return self._count(f"SELECT COUNT(*) FROM responses{where}", args)

    def last_response_at(self) -> datetime | None:
        with self._lock:
            row = self._conn.execute("SELECT MAX(sent_at) FROM responses").fetchone()
        return _parse_iso(row[0]) if row and row[0] else None

    def response_times(self) -> list[datetime]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT sent_at FROM responses ORDER BY sent_at"
            ).fetchall()
        return [_parse_iso(r[0]) for r in rows]

    def theta_history(self, frm=None, to=None) -> list[tuple[float, datetime, str]]:
        """Theta changes within the window plus the value in force at its
        start, oldest first."""
        with self._lock:
            rows = self._conn.execute(
                "SELECT value, changed_at, operator FROM config_history "
                "WHERE param = 'theta' ORDER BY changed_at, rowid"
            ).fetchall()
        history = [(float(v), _parse_iso(at), op) for v, at, op in rows]
        if frm is None and to is None:
            return history
        in_force = [h for h in history if frm is not None and h[1] <= frm]
        inside = [
            h
            for h in history
            if (frm is None or h[1] > frm) and (to is None or h[1] < to)
        ]
        return ([in_force[-1]] if in_force else []) + inside

    def score_rows(self, frm=None, to=None) -> list[dict]:
        where, args = self._window(frm, to, "scored_at")
        with self._lock:
            rows = self._conn.execute(
                "SELECT tweet_id, clean_text, features, toxicity, decided, theta,"
                " failed, error, received_at, scored_at FROM scores" + where,
                args,
            ).fetchall()
        keys = (
            "tweet_id", "clean_text", "features", "toxicity", "decided",
            "theta", "failed", "error", "received_at", "scored_at",
        )
        return [dict(zip(keys, row)) for row in rows]
