import json
import random
from datetime import datetime, timedelta, timezone

import pytest

from counterspeech.corpus import Tweet
from counterspeech.curation import CurationLibrary, OperatorConfig
from counterspeech.fixtures import default_mock_rules, generate_tweet_fixture
from counterspeech.pipeline import (
    ElectionReport,
    PipelineService,
    PipelineStore,
    RateLimiter,
    Responder,
    ScoreRecord,
    StreamFilterConfig,
    admit,
    build_report,
    rejection_reason,
)
from counterspeech.scorers import HateScorer, MockToxicityClient, ScorerSet, SentimentScorer

UTC = timezone.utc
T0 = datetime(2019, 4, 1, 0, 0, 0, tzinfo=UTC)

CFG = StreamFilterConfig(
    tracked_handles=frozenset({"candidate_a", "candidate_b", "candidate_c"}),
    self_handle="parity_bot",
)


def tweet(i=0, text="hello @candidate_a", lang="en", author="user1",
          mentions=("candidate_a",), retweet=False, at=T0):
    return Tweet(
        id=f"tw{i}", text=text, lang=lang, author_handle=author,
        mentioned_handles=tuple(mentions), is_retweet=retweet, timestamp=at,
    )


class TestAdmit:
    def test_retweet_with_tracked_mention_rejected(self):
        assert admit(tweet(retweet=True), CFG) is False
        assert rejection_reason(tweet(retweet=True), CFG) == "retweet"

    def test_non_english_rejected(self):
        assert admit(tweet(lang="fr"), CFG) is False
        assert rejection_reason(tweet(lang="fr"), CFG) == "language"

    def test_original_english_tracked_admitted(self):
        assert admit(tweet(), CFG) is True

    def test_untracked_mention_rejected(self):
        assert admit(tweet(mentions=("someone_else",)), CFG) is False

    def test_self_authored_rejected(self):
        assert admit(tweet(author="parity_bot"), CFG) is False

    def test_regional_english_admitted(self):
        assert admit(tweet(lang="en-GB"), CFG) is True


class TestRateLimiter:
    def test_daily_cap(self):
        limiter = RateLimiter(daily_cap=2, min_interval=0)
        at = T0
        assert limiter.allow(at)
        assert limiter.allow(at + timedelta(minutes=1))
        assert not limiter.allow(at + timedelta(minutes=2))
        # next UTC day opens a new budget
        assert limiter.allow(at + timedelta(days=1))

    def test_min_interval(self):
        limiter = RateLimiter(daily_cap=100, min_interval=30)
        assert limiter.allow(T0)
        assert not limiter.allow(T0 + timedelta(seconds=29))
        assert limiter.allow(T0 + timedelta(seconds=31))

    def test_fuzz_invariants_hold(self):
        """10k random decision instants: no day over cap, no interval
        below the minimum."""
        rng = random.Random(7)
        limiter = RateLimiter(daily_cap=23, min_interval=45)
        at = T0
        permitted = []
        for _ in range(10_000):
            at += timedelta(seconds=rng.uniform(0, 400))
            if limiter.allow(at):
                permitted.append(at)
        per_day = {}
        for stamp in permitted:
            per_day[stamp.date()] = per_day.get(stamp.date(), 0) + 1
        assert permitted, "fuzz produced no permits"
        assert max(per_day.values()) <= 23
        gaps = [
            (b - a).total_seconds() for a, b in zip(permitted, permitted[1:])
        ]
        assert all(gap >= 45 for gap in gaps)


def make_record(i, at, decided=True):
    return ScoreRecord(
        tweet_id=f"tw{i}", clean_text="x", feature_vector=None if not decided else (0.9,),
        toxicity=0.9, decided=decided, theta_at_decision=0.8,
        received_at=at, scored_at=at,
    )


def library_with(n_approved, seed=0):
    library = CurationLibrary()
    for i in range(n_approved):
        entry = library.submit(f"supportive message {i}")
        library.review(entry.id, "approve", "op")
    return library


class TestResponder:
    def test_election_scale_permit_arithmetic(self):
        """1468 decided-true records; per-day decided counts and a cap of
        69/day yield exactly 973 permits."""
        store = PipelineStore()
        limiter = RateLimiter(daily_cap=69, min_interval=30)
        responder = Responder(library_with(5), limiter, store, random.Random(1))
        day_counts = [104] * 13 + [109, 7]
        assert sum(day_counts) == 1468
        i = 0
        for day, count in enumerate(day_counts):
            for j in range(count):
                at = T0 + timedelta(days=day, seconds=j * 60)
                responder.maybe_respond(make_record(i, at), at=at)
                i += 1
        assert responder.sent == 973
        assert store.count_sent() == 973
        assert responder.suppressed == 1468 - 973

    def test_cap_consumed_increments_suppressed(self):
        store = PipelineStore()
        limiter = RateLimiter(daily_cap=1, min_interval=0)
        responder = Responder(library_with(2), limiter, store, random.Random(0))
        assert responder.maybe_respond(make_record(0, T0), at=T0) is not None
        assert responder.maybe_respond(make_record(1, T0), at=T0) is None
        assert responder.suppressed == 1

    def test_draws_without_repetition_then_reshuffle(self):
        store = PipelineStore()
        limiter = RateLimiter(daily_cap=100, min_interval=0)
        responder = Responder(library_with(3), limiter, store, random.Random(4))
        events = [
            responder.maybe_respond(make_record(i, T0 + timedelta(seconds=i)),
                                    at=T0 + timedelta(seconds=i))
            for i in range(5)
        ]
        drawn = [e.positivitweet_id for e in events]
        assert len(set(drawn[:3])) == 3  # first pass: all distinct
        assert set(drawn[3:]) <= set(drawn[:3])  # later draws from a fresh deck

    def test_empty_library_raises_alert_not_response(self):
        store = PipelineStore()
        responder = Responder(CurationLibrary(), RateLimiter(), store, random.Random(0))
        assert responder.maybe_respond(make_record(0, T0), at=T0) is None
        assert responder.operator_alert is True
        assert store.count_sent() == 0

    def test_responses_never_embed_trigger_content(self):
        store = PipelineStore()
        responder = Responder(library_with(1), RateLimiter(), store, random.Random(0))
        event = responder.maybe_respond(make_record(0, T0), at=T0)
        assert set(vars(event)) == {"response_id", "tweet_id", "positivitweet_id", "sent_at"}


def make_service(store=None, theta=0.8, daily_cap=50, min_interval=30, seed=0,
                 library=None, hate=None):
    store = store or PipelineStore()
    config = OperatorConfig(theta=theta, daily_cap=daily_cap,
                            min_interval=min_interval, store=store, at=T0)
    scorers = ScorerSet(
        toxicity=MockToxicityClient(default_mock_rules()),
        sentiment=SentimentScorer(),
        hate=hate or HateScorer(),
    )
    return PipelineService(
        store=store,
        scorers=scorers,
        filter_config=CFG,
        config=config,
        library=library if library is not None else library_with(10),
        seed=seed,
    )


class TestProcess:
    def test_above_threshold_decides_true(self):
        service = make_service(theta=0.9)
        record = service.process(tweet(text="you are an awful disgrace @candidate_a"))
        assert record.toxicity == 0.95
        assert record.decided is True
        assert record.theta_at_decision == 0.9

    def test_below_threshold_no_response(self):
        service = make_service(theta=0.8)
        record = service.process(tweet(text="thanks for the town hall @candidate_a"))
        assert record.toxicity == 0.1
        assert record.decided is False
        assert service.store.count_sent() == 0

    def test_scorer_failure_marks_record_and_queues_retry(self):
        class DownClient:
            def score(self, text, attributes):
                from counterspeech.scorers import TransportError

                raise TransportError("endpoint down")

        service = make_service()
        service.scorers.toxicity = DownClient()
        record = service.process(tweet())
        assert record.failed is True
        assert record.decided is None
        assert service.store.count_analysed() == 0  # unscored excluded
        assert service.store.count_failed() == 1
        assert service.retry_queue.qsize() == 1

    def test_theta_change_applies_only_to_later_records(self):
        service = make_service(theta=0.5)
        before = service.process(tweet(i=1, text="awful @candidate_a", at=T0))
        service.config.set_theta(0.8, "operator_kit", at=T0 + timedelta(hours=24))
        after = service.process(
            tweet(i=2, text="awful @candidate_a", at=T0 + timedelta(hours=25))
        )
        assert before.theta_at_decision == 0.5
        assert after.theta_at_decision == 0.8
        rows = service.store.score_rows()
        assert [r["theta"] for r in rows] == [0.5, 0.8]


class TestReplay:
    def test_empty_fixture_zero_counts(self, tmp_path):
        fixture = tmp_path / "empty.jsonl"
        fixture.write_text("")
        summary = make_service().replay(fixture)
        assert summary.to_dict() == {
            "lines": 0, "malformed": 0, "admitted": 0, "filtered": 0,
            "analysed": 0, "abusive": 0, "sent": 0, "suppressed": 0,
            "failed": 0, "filter_reasons": {},
        }

    def test_thousand_tweet_arithmetic(self, tmp_path):
        fixture = tmp_path / "f.jsonl"
        n_abusive = generate_tweet_fixture(fixture, 1000, abusive_every=10, seed=1)
        assert n_abusive == 100
        service = make_service(theta=0.8, daily_cap=50)
        summary = service.replay(fixture)
        assert summary.analysed == 1000
        assert summary.abusive == 100
        assert summary.sent == 50
        assert summary.suppressed == 50
        report = service.report()
        assert report.total_analysed == 1000
        assert report.total_abusive == 100
        assert report.total_sent == 50

    def test_same_seed_byte_identical_reports(self, tmp_path):
        fixture = tmp_path / "f.jsonl"
        generate_tweet_fixture(fixture, 400, abusive_every=8, seed=3)
        outputs = []
        for _ in range(2):
            service = make_service(seed=11)
            service.replay(fixture)
            outputs.append(service.report().to_json().encode())
        assert outputs[0] == outputs[1]

    def test_malformed_lines_skipped_with_count(self, tmp_path):
        fixture = tmp_path / "f.jsonl"
        generate_tweet_fixture(fixture, 5, abusive_every=0, seed=0)
        with open(fixture, "a") as f:
            f.write("not json at all\n")
            f.write('{"id": "x"}\n')  # missing fields
        summary = make_service().replay(fixture)
        assert summary.lines == 7
        assert summary.malformed == 2
        assert summary.admitted == 5

    def test_report_idempotent_after_replay(self, tmp_path):
        fixture = tmp_path / "f.jsonl"
        generate_tweet_fixture(fixture, 50, abusive_every=5, seed=2)
        service = make_service()
        service.replay(fixture)
        assert service.report().to_json() == service.report().to_json()

    def test_sent_never_exceeds_decided_nor_analysed(self, tmp_path):
        fixture = tmp_path / "f.jsonl"
        generate_tweet_fixture(fixture, 300, abusive_every=3, seed=5)
        service = make_service(daily_cap=20)
        summary = service.replay(fixture)
        assert summary.sent <= summary.abusive <= summary.analysed

    def test_response_spacing_invariant_in_store(self, tmp_path):
        fixture = tmp_path / "f.jsonl"
        generate_tweet_fixture(fixture, 400, abusive_every=4, seed=6, spacing_seconds=20)
        service = make_service(daily_cap=1000, min_interval=60)
        service.replay(fixture)
        times = service.store.response_times()
        gaps = [(b - a).total_seconds() for a, b in zip(times, times[1:])]
        assert times and all(gap >= 60 for gap in gaps)


class TestReport:
    def test_federal_scale_rate_rendering(self):
        report = ElectionReport(
            period_start=None, period_end=None,
            total_analysed=228255, total_abusive=9987, total_sent=2428,
            theta_history=[0.9],
        )
        assert report.abusive_rate * 100 == pytest.approx(4.375, abs=0.01)
        assert "4.38%" in report.render_text()

    def test_provincial_scale_emits_both_rates(self):
        report = ElectionReport(
            period_start=None, period_end=None,
            total_analysed=12726, total_abusive=1468, total_sent=973,
            theta_history=[0.5, 0.8],
        )
        text = report.render_text()
        assert "11.54%" in text
        assert "7.65%" in text
        payload = json.loads(report.to_json())
        assert payload["abusive_rate"] == pytest.approx(1468 / 12726)
        assert payload["sent_rate"] == pytest.approx(973 / 12726)

    def test_empty_store_all_zero_with_flag(self):
        report = build_report(PipelineStore())
        assert report.total_analysed == 0
        assert report.abusive_rate == 0.0
        assert report.empty is True

    def test_period_window_filters_records(self, tmp_path):
        fixture = tmp_path / "f.jsonl"
        generate_tweet_fixture(fixture, 100, abusive_every=10, seed=0, spacing_seconds=3600)
        service = make_service()
        service.replay(fixture)
        full = service.report()
        first_half = service.report(frm=T0, to=T0 + timedelta(hours=50))
        assert full.total_analysed == 100
        assert first_half.total_analysed == 50

    def test_theta_history_includes_value_in_force(self):
        store = PipelineStore()
        config = OperatorConfig(theta=0.5, store=store, at=T0)
        config.set_theta(0.8, "op", at=T0 + timedelta(days=1))
        config.set_theta(0.9, "op", at=T0 + timedelta(days=10))
        report = build_report(store, frm=T0 + timedelta(days=2), to=T0 + timedelta(days=20))
        assert report.theta_history == [0.8, 0.9]
