"""Assemble the 22-feature vector for a tweet using a deterministic mock
toxicity endpoint (regex rules -> attribute scores).

The same rules engine also backs a real HTTP server with the wire
protocol (POST /v1/score); start one with
``counterspeech mock-scorer --port 8100`` and point a ToxicityClient at
it to see the identical numbers travel over the wire.

Run:  python3 demos/02_featurize_with_mock_endpoint.py
"""

from counterspeech.scorers import (
    DEFAULT_REGISTRY,
    HateScorer,
    MockToxicityClient,
    ScoreRules,
    ScorerSet,
    SentimentScorer,
    load_demo_corpus,
)
from counterspeech.textprep import clean

rules = ScoreRules(
    rules=[
        ("awful|disgrace", {"TOXICITY": 0.95, "INSULT": 0.9, "SEVERE_TOXICITY": 0.7}),
        ("brilliant|thank", {"TOXICITY": 0.03}),
    ],
    default={"TOXICITY": 0.1},
    default_score=0.05,
)

hate = HateScorer()
hate.train(load_demo_corpus())
scorers = ScorerSet(
    toxicity=MockToxicityClient(rules),
    sentiment=SentimentScorer(),
    hate=hate,
)

for raw in ("@candidate_a you are an awful disgrace",
            "@candidate_a thank you for a brilliant town hall"):
    text = clean(raw)
    fv = scorers.featurize(text, DEFAULT_REGISTRY)
    print(f"tweet: {raw!r}")
    print(f"  cleaned: {text.value!r}")
    print(f"  vector length: {len(fv.values)}")
    for name in ("TOXICITY", "INSULT", "sonar_hate_speech", "vader_compound"):
        print(f"    {name:>20}: {fv[name]:+.4f}")
    print()

print("note: featurize() accepts text only; tweet metadata can never enter the vector")
