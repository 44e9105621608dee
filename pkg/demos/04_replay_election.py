"""Simulate an election deployment: replay a synthetic tweet stream
through the full pipeline (admission filter, scoring, threshold
decision, rate-limited responder) with a mid-run threshold change, then
render the period report.

Run:  python3 demos/04_replay_election.py
"""

import tempfile
from datetime import datetime, timedelta, timezone
from pathlib import Path

from counterspeech.curation import CurationLibrary, OperatorConfig
from counterspeech.fixtures import default_mock_rules, generate_tweet_fixture
from counterspeech.pipeline import PipelineService, PipelineStore, StreamFilterConfig
from counterspeech.scorers import HateScorer, MockToxicityClient, ScorerSet, SentimentScorer

T0 = datetime(2019, 4, 1, tzinfo=timezone.utc)
workdir = Path(tempfile.mkdtemp(prefix="counterspeech_demo_"))
fixture = workdir / "stream.jsonl"
n_abusive = generate_tweet_fixture(fixture, 3000, abusive_every=12, seed=4,
                                   spacing_seconds=300)
print(f"fixture: 3000 tweets over ~10 days, {n_abusive} carrying abusive markers")

library = CurationLibrary()
for i in range(25):
    entry = library.submit(f"fact {i + 1}: supportive words about public service")
    library.review(entry.id, "approve", "volunteer-team")

store = PipelineStore(workdir / "run.db")
config = OperatorConfig(theta=0.5, daily_cap=40, min_interval=60, store=store, at=T0)
service = PipelineService(
    store=store,
    scorers=ScorerSet(toxicity=MockToxicityClient(default_mock_rules()),
                      sentiment=SentimentScorer(), hate=HateScorer()),
    filter_config=StreamFilterConfig(
        tracked_handles=frozenset({"candidate_a", "candidate_b", "candidate_c"}),
        self_handle="counterspeech_bot",
    ),
    config=config,
    library=library,
    seed=0,
)

# after a day of operation the operator raises the threshold
config.set_theta(0.8, "operator-kit", at=T0 + timedelta(hours=24))

summary = service.replay(fixture)
print("\nrun summary:", summary.to_dict())

print("\n=== full-period report (text) ===")
print(service.report().render_text())

day_one = service.report(frm=T0, to=T0 + timedelta(days=1))
print("\n=== first 24 hours only ===")
print(day_one.render_text())

print("\nreport JSON:", service.report().to_json()[:160], "...")
print(f"\nartifacts kept in {workdir}")
