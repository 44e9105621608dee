"""Exercise the operator HTTP API in-process: ingest tweets, review
positivitweets, change the live threshold, watch the counters.

This drives the same FastAPI app that ``counterspeech serve`` exposes
(and that the web console under frontend/ consumes), via the test
client so no port is needed.

Run:  python3 demos/05_operator_console_api.py
"""

from fastapi.testclient import TestClient

from counterspeech.api import create_app
from counterspeech.curation import CurationLibrary, OperatorConfig
from counterspeech.fixtures import default_mock_rules
from counterspeech.pipeline import PipelineService, PipelineStore, StreamFilterConfig
from counterspeech.scorers import HateScorer, MockToxicityClient, ScorerSet, SentimentScorer

store = PipelineStore()
service = PipelineService(
    store=store,
    scorers=ScorerSet(toxicity=MockToxicityClient(default_mock_rules()),
                      sentiment=SentimentScorer(), hate=HateScorer()),
    filter_config=StreamFilterConfig(
        tracked_handles=frozenset({"candidate_a"}), self_handle="counterspeech_bot",
    ),
    config=OperatorConfig(theta=0.8, daily_cap=50, min_interval=0, store=store),
    library=CurationLibrary(),
)
client = TestClient(create_app(service))

print("=== curation lifecycle ===")
entry = client.post("/curation", json={"text": "you make this community stronger",
                                       "credit_handle": "volunteer_1"}).json()
print("submitted:", entry["id"], entry["state"])
reviewed = client.post(f"/curation/{entry['id']}/review",
                       json={"action": "edit_and_approve",
                             "new_text": "You make this community stronger.",
                             "operator": "kit"}).json()
print("reviewed :", reviewed["state"], "| history:", reviewed["history"][0]["old_text"])

print("\n=== threshold control ===")
changed = client.put("/config/threshold", json={"theta": 0.9, "operator": "kit"}).json()
print("theta:", changed["theta"], "| history:", [h["value"] for h in changed["history"]])
blocked = client.put("/config/threshold", json={"theta": 1.5, "operator": "kit"})
print("out-of-range response:", blocked.status_code, blocked.json()["error"]["code"])

print("\n=== ingestion and live counters ===")
for i, text in enumerate([
    "what an awful disgrace @candidate_a is",
    "thank you @candidate_a for the town hall",
]):
    result = client.post("/ingest", json={
        "id": f"demo{i}", "text": text, "lang": "en", "author_handle": "user1",
        "mentioned_handles": ["candidate_a"], "is_retweet": False,
        "timestamp": f"2019-04-01T10:{i:02d}:00+00:00",
    })
    print(f"ingest {i}: HTTP {result.status_code} {result.json()}")

filtered = client.post("/ingest", json={
    "id": "demo9", "text": "bonjour @candidate_a", "lang": "fr",
    "author_handle": "user1", "mentioned_handles": ["candidate_a"],
    "is_retweet": False, "timestamp": "2019-04-01T11:00:00+00:00",
})
print("filtered :", filtered.json())

print("\nstats:", client.get("/stats").json())
