"""The live system wired together: admission, analyse-and-store,
threshold decision, rate-limited responses, replay, and reporting.

Each admitted tweet is handled as an independent task: clean, featurize,
persist the score record, evaluate the threshold with the theta value in
force at that instant, and hand decided-true records to the responder
(a single consumer, so the rate-limit invariants hold).  A scorer
failure still persists a failure-marked record and queues the tweet for
retry; failed records are excluded from the analysed count.

``replay`` drives the same pipeline from a JSON-Lines fixture using the
tweets' own timestamps as the clock, so two runs over the same fixture
and seed produce identical persistence state and byte-identical report
JSON.
"""

from __future__ import annotations

import json
import queue
import random
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..corpus import Tweet
from ..curation import CurationLibrary, OperatorConfig
from ..gbdt import threshold_decide
from ..scorers import DEFAULT_REGISTRY, FeatureRegistry, ScorerSet
from ..scorers.features import FeaturizeError
from ..textprep import clean
from .filters import StreamFilterConfig, rejection_reason
from .limiter import RateLimiter
from .responder import Responder
from .store import PipelineStore, ScoreRecord

TRIGGER_FEATURE = "TOXICITY"


@dataclass
class RunSummary:
    lines: int = 0
    malformed: int = 0
    admitted: int = 0
    filtered: int = 0
    analysed: int = 0
    abusive: int = 0
    sent: int = 0
    suppressed: int = 0
    failed: int = 0
    filter_reasons: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "lines": self.lines,
            "malformed": self.malformed,
            "admitted": self.admitted,
            "filtered": self.filtered,
            "analysed": self.analysed,
            "abusive": self.abusive,
            "sent": self.sent,
            "suppressed": self.suppressed,
            "failed": self.failed,
            "filter_reasons": dict(sorted(self.filter_reasons.items())),
        }


@dataclass
class ElectionReport:
    period_start: datetime | None
    period_end: datetime | None
    total_analysed: int
    total_abusive: int
    total_sent: int
    theta_history: list[float]
    empty: bool = False

    @property
    def abusive_rate(self) -> float:
        return self.total_abusive / self.total_analysed if self.total_analysed else 0.0

    @property
    def sent_rate(self) -> float:
        return self.total_sent / self.total_analysed if self.total_analysed else 0.0

    def to_dict(self) -> dict:
        return {
            "period_start": self.period_start.isoformat() if self.period_start else None,
            "period_end": self.period_end.isoformat() if self.period_end else None,
            "total_analysed": self.total_analysed,
            "total_abusive": self.total_abusive,
            "total_sent": self.total_sent,
            "abusive_rate": self.abusive_rate,
            "sent_rate": self.sent_rate,
            "theta_history": list(self.theta_history),
            "empty": self.empty,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def render_text(self) -> str:
        lines = [
            "Election report",
            f"  period: {self.period_start} .. {self.period_end}",
            f"  Total tweets analysed: {self.total_analysed}",
            f"  Total tweets scored abusive: {self.total_abusive}",
            f"  Total positivitweets sent: {self.total_sent}",
            f"  Abusive rate (abusive/analysed): {self.abusive_rate * 100:.2f}%",
            f"  Sent rate (sent/analysed): {self.sent_rate * 100:.2f}%",
            f"  Decision thresholds in force: {self.theta_history}",
        ]
        if self.empty:
            lines.append("  (no analysed tweets in this period)")
        return "\n".join(lines)


class PipelineService:
    def __init__(
        self,
        store: PipelineStore,
        scorers: ScorerSet,
        filter_config: StreamFilterConfig,
        config: OperatorConfig | None = None,
        library: CurationLibrary | None = None,
        registry: FeatureRegistry = DEFAULT_REGISTRY,
        seed: int = 0,
        workers: int = 0,
        clock=None,
    ):
        self.store = store
        self.scorers = scorers
        self.filter_config = filter_config
        self.config = config or OperatorConfig(store=store)
        self.library = library or CurationLibrary()
        self.registry = registry
        self.limiter = RateLimiter(self.config.daily_cap, self.config.min_interval)
        self.responder = Responder(
            self.library, self.limiter, store, random.Random(seed)
        )
        self.retry_queue: "queue.Queue[Tweet]" = queue.Queue()
        # clock None = use each tweet's own timestamp (deterministic replay);
        # live serving passes a wall clock.
        self.clock = clock
        self._executor = None
        if workers > 0:
            from concurrent.futures import ThreadPoolExecutor

            self._executor = ThreadPoolExecutor(max_workers=workers)

    # -- single-tweet path --------------------------------------------

    def submit(self, tweet: Tweet) -> tuple[bool, str | None]:
        """Admission gate; admitted tweets are analysed (asynchronously
        when workers are configured).  Rejected tweets are not stored."""
        reason = rejection_reason(tweet, self.filter_config)
        if reason is not None:
            return False, reason
        received_at = self._now(tweet)
        if self._executor is not None:
            self._executor.submit(self.process, tweet, received_at)
        else:
            self.process(tweet, received_at)
        return True, None

    def process(self, tweet: Tweet, received_at: datetime | None = None) -> ScoreRecord:
        """Analyse one admitted tweet: clean, featurize, persist, decide."""
        received_at = received_at or tweet.timestamp
        self.store.insert_tweet(tweet)
        cleaned = clean(tweet.text).value
        try:
            fv = self.scorers.featurize(cleaned, self.registry)
        except (FeaturizeError, ValueError) as exc:
            record = ScoreRecord(
                tweet_id=tweet.id,
                clean_text=cleaned,
                feature_vector=None,
                toxicity=None,
                decided=None,
                theta_at_decision=None,
                received_at=received_at,
                scored_at=self._now(tweet),
                failed=True,
                error=str(exc),
            )
            self.store.insert_score(record)
            self.retry_queue.put(tweet)
            return record

        toxicity = fv[TRIGGER_FEATURE]
        theta = self.config.theta  # atomic read: one theta per decision
        decided = threshold_decide(toxicity, theta)
        scored_at = self._now(tweet)
        record = ScoreRecord(
            tweet_id=tweet.id,
            clean_text=cleaned,
            feature_vector=fv.values,
            toxicity=toxicity,
            decided=decided,
            theta_at_decision=theta,
            received_at=received_at,
            scored_at=scored_at,
        )
        self.store.insert_score(record)
        if decided:
            self.responder.maybe_respond(record, at=scored_at)
        return record

    def _now(self, tweet: Tweet) -> datetime:
        return self.clock() if self.clock is not None else tweet.timestamp

    # -- fixture replay -------------------------------------------------

    def replay(self, fixture: str | Path, rate: float = 0.0) -> RunSummary:
        """Feed a JSON-Lines tweet fixture through the pipeline in order,
        using each tweet's timestamp as the clock.  ``rate`` > 0 throttles
        to that many tweets per second of wall time."""
        summary = RunSummary()
        previous_clock = self.clock
        self.clock = None  # replay runs on the tweets' own timestamps
        try:
            with self.store.batch(), open(fixture, encoding="utf-8") as f:
                for line in f:
                    line = line.strip()
                    if not line:
                        continue
                    summary.lines += 1
                    try:
                        tweet = Tweet.from_dict(json.loads(line))
                    except Exception:
                        summary.malformed += 1
                        continue
                    reason = rejection_reason(tweet, self.filter_config)
                    if reason is not None:
                        summary.filtered += 1
                        summary.filter_reasons[reason] = (
                            summary.filter_reasons.get(reason, 0) + 1
                        )
                        continue
                    summary.admitted += 1
                    record = self.process(tweet)
                    if record.failed:
                        summary.failed += 1
                    else:
                        summary.analysed += 1
                        if record.decided:
                            summary.abusive += 1
                    if rate > 0:
                        time.sleep(1.0 / rate)
        finally:
            self.clock = previous_clock
        summary.sent = self.responder.sent
        summary.suppressed = self.responder.suppressed
        return summary

    # -- reporting --------------------------------------------------------

    def report(self, frm: datetime | None = None, to: datetime | None = None) -> ElectionReport:
        return build_report(self.store, frm, to)

    def stats(self) -> dict:
        last = self.store.last_response_at()
        return {
            "analysed": self.store.count_analysed(),
            "abusive": self.store.count_abusive(),
            "sent": self.store.count_sent(),
            "suppressed": self.responder.suppressed,
            "failed": self.store.count_failed(),
            "approved_library_size": len(self.library.approved()),
            "current_theta": self.config.theta,
            "last_response_at": last.isoformat() if last else None,
            "operator_alert": self.responder.operator_alert,
        }

    def shutdown(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)


def build_report(store: PipelineStore, frm: datetime | None = None,
                 to: datetime | None = None) -> ElectionReport:
    analysed = store.count_analysed(frm, to)
    abusive = store.count_abusive(frm, to)
    sent = store.count_sent(frm, to)
    thetas = [value for value, _, _ in store.theta_history(frm, to)]
    return ElectionReport(
        period_start=frm,
        period_end=to,
        total_analysed=analysed,
        total_abusive=abusive,
        total_sent=sent,
        theta_history=thetas,
        empty=analysed == 0,
    )
