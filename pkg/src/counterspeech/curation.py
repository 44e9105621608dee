"""Positivitweet curation and live operator configuration.

Community-submitted supportive tweets enter a review queue; a human
operator approves, edits-and-approves, or rejects each one.  Only
approved entries are ever drawn by the responder.  Review states are
terminal: re-submission creates a new entry, keeping the audit trail
append-only.  The operator config owns the live decision threshold;
every change is recorded (value, instant, operator) and takes effect
for all subsequent decisions without a restart.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path

MAX_TWEET_LENGTH = 280


class CurationError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class EntryState(str, Enum):
    SUBMITTED = "submitted"
    APPROVED = "approved"
    REJECTED = "rejected"


@dataclass(frozen=True)
class Revision:
    editor: str
    old_text: str
    at: datetime


@dataclass
class PositivitweetEntry:
    id: str
    text: str
    credit_handle: str | None = None
    state: EntryState = EntryState.SUBMITTED
    history: list[Revision] = field(default_factory=list)
    submitted_at: datetime | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "credit_handle": self.credit_handle,
            "state": self.state.value,
            "history": [
                {"editor": r.editor, "old_text": r.old_text, "at": r.at.isoformat()}
                for r in self.history
            ],
            "submitted_at": self.submitted_at.isoformat() if self.submitted_at else None,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "PositivitweetEntry":
        return cls(
            id=obj["id"],
            text=obj["text"],
            credit_handle=obj.get("credit_handle"),
            state=EntryState(obj.get("state", "submitted")),
            history=[
                Revision(r["editor"], r["old_text"], datetime.fromisoformat(r["at"]))
                for r in obj.get("history", [])
            ],
            submitted_at=datetime.fromisoformat(obj["submitted_at"])
            if obj.get("submitted_at")
            else None,
        )


def _check_text(text: str) -> str:
    trimmed = text.strip()
    if not trimmed:
        raise CurationError("empty_text", "positivitweet text is empty")
    if len(trimmed) > MAX_TWEET_LENGTH:
        raise CurationError(
            "length_exceeded",
            f"positivitweet is {len(trimmed)} characters, limit is {MAX_TWEET_LENGTH}",
        )
    return trimmed


class CurationLibrary:
    """Thread-safe registry of positivitweet entries."""

    def __init__(self):
        self._entries: dict[str, PositivitweetEntry] = {}
        self._lock = threading.RLock()
        self._counter = 0

    def _next_id(self) -> str:
        self._counter += 1
        return f"p{self._counter:06d}"

    def submit(
        self, text: str, credit_handle: str | None = None, at: datetime | None = None
    ) -> PositivitweetEntry:
        """New entry in state submitted.  Content screening is the human
        reviewer's job, not the submission form's."""
        trimmed = _check_text(text)
        with self._lock:
            entry = PositivitweetEntry(
                id=self._next_id(),
                text=trimmed,
                credit_handle=credit_handle,
                submitted_at=at or datetime.now(timezone.utc),
            )
            self._entries[entry.id] = entry
            return entry

    def review(
        self,
        entry_id: str,
        action: str,
        operator: str,
        new_text: str | None = None,
        at: datetime | None = None,
    ) -> PositivitweetEntry:
        at = at or datetime.now(timezone.utc)
        with self._lock:
            entry = self._entries.get(entry_id)
            if entry is None:
                raise CurationError("not_found", f"no entry {entry_id!r}")
            if entry.state is not EntryState.SUBMITTED:
                raise CurationError(
                    "terminal_state",
                    f"entry {entry_id!r} is already {entry.state.value}",
                )
            if action == "approve":
                entry.state = EntryState.APPROVED
                entry.history.append(Revision(operator, entry.text, at))
            elif action == "edit_and_approve":
                if new_text is None:
                    raise CurationError("missing_text", "edit_and_approve needs new_text")
                trimmed = _check_text(new_text)
                entry.history.append(Revision(operator, entry.text, at))
                entry.text = trimmed
                entry.state = EntryState.APPROVED
            elif action == "reject":
                entry.state = EntryState.REJECTED
                entry.history.append(Revision(operator, entry.text, at))
            else:
                raise CurationError("unknown_action", f"unknown review action {action!r}")
            return entry

    def get(self, entry_id: str) -> PositivitweetEntry | None:
        with self._lock:
            return self._entries.get(entry_id)

    def entries(self, state: EntryState | str | None = None) -> list[PositivitweetEntry]:
        with self._lock:
            items = list(self._entries.values())
        if state is None:
            return items
        state = EntryState(state)
        return [e for e in items if e.state is state]

    def approved(self) -> list[PositivitweetEntry]:
        return self.entries(EntryState.APPROVED)

    def __len__(self) -> int:
        return len(self._entries)

    # -- import/export (JSON Lines) -----------------------------------

    def export_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            for entry in self.entries():
                f.write(json.dumps(entry.to_dict(), sort_keys=True) + "\n")

    @classmethod
    def import_jsonl(cls, path: str | Path) -> "CurationLibrary":
        library = cls()
        with open(path, encoding="utf-8") as f:
            for line in f:
                if not line.strip():
                    continue
                entry = PositivitweetEntry.from_dict(json.loads(line))
                library._entries[entry.id] = entry
                # keep sequential ids unique after import
                if entry.id.startswith("p"):
                    try:
                        library._counter = max(library._counter, int(entry.id[1:]))
                    except ValueError:
                        pass
        return library


class OperatorConfig:
    """Live decision threshold and responder limits, with audit history.

    Reads are atomic: a decision sees exactly one theta value.  Every
    change is appended to the pipeline store's config_history (when a
    store is attached) and to the in-memory history.
    """

    def __init__(
        self,
        theta: float = 0.8,
        daily_cap: int = 100,
        min_interval: float = 30.0,
        store=None,
        operator: str = "startup",
        at: datetime | None = None,
    ):
        if not 0.0 <= theta <= 1.0:
            raise CurationError("theta_range", f"theta {theta} outside [0, 1]")
        self._lock = threading.Lock()
        self._theta = theta
        self.daily_cap = daily_cap
        self.min_interval = min_interval
        self._store = store
        self.history: list[tuple[float, datetime, str]] = []
        self._record(theta, operator, at or datetime.now(timezone.utc))

    def _record(self, value: float, operator: str, at: datetime) -> None:
        self.history.append((value, at, operator))
        if self._store is not None:
            self._store.append_config("theta", repr(value), operator, at)

    @property
    def theta(self) -> float:
        with self._lock:
            return self._theta

    def set_theta(self, value: float, operator: str, at: datetime | None = None) -> None:
        """Appends to history even when the value is unchanged (the audit
        trail records the act, not just the delta)."""
        if not 0.0 <= value <= 1.0:
            raise CurationError("theta_range", f"theta {value} outside [0, 1]")
        at = at or datetime.now(timezone.utc)
        with self._lock:
            self._theta = value
            self._record(value, operator, at)
