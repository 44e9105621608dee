"""Stream admission: which tweets enter the pipeline at all.

A tweet is admitted iff it is in the required language, mentions at
least one tracked handle, is not a retweet, and was not written by the
bot itself.  Rejected tweets are never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..corpus import Tweet


@dataclass(frozen=True)
class StreamFilterConfig:
    tracked_handles: frozenset[str]
    self_handle: str = ""
    required_lang: str = "en"
    exclude_retweets: bool = True

    def __post_init__(self):
        object.__setattr__(
            self, "tracked_handles",
            frozenset(h.lower().lstrip("@") for h in self.tracked_handles),
        )
        if not self.tracked_handles:
            raise ValueError("tracked_handles must be non-empty")


def rejection_reason(tweet: Tweet, cfg: StreamFilterConfig) -> str | None:
    """None when admitted, else a machine-readable reason."""
    lang = tweet.lang.lower()
    if lang != cfg.required_lang and not lang.startswith(cfg.required_lang + "-"):
        return "language"
    if cfg.exclude_retweets and tweet.is_retweet:
        return "retweet"
    if tweet.author_handle.lower().lstrip("@") == cfg.self_handle.lower().lstrip("@") and cfg.self_handle:
        return "self_authored"
    mentioned = {h.lower().lstrip("@") for h in tweet.mentioned_handles}
    if not mentioned & cfg.tracked_handles:
        return "no_tracked_mention"
    return None


def admit(tweet: Tweet, cfg: StreamFilterConfig) -> bool:
    return rejection_reason(tweet, cfg) is None
