"""Synthetic stream fixtures and featurized datasets for tests, demos
and load runs.

The tweet generator plants a marker word in a controllable fraction of
tweets; :func:`default_mock_rules` maps that marker to a high TOXICITY
score, so fixture runs have exactly predictable abusive counts.
"""

from __future__ import annotations

import csv
import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .scorers import DEFAULT_REGISTRY, FeatureRegistry
from .scorers.mock import ScoreRules

ABUSIVE_MARKER = "awful"
DEFAULT_TRACKED = ("candidate_a", "candidate_b", "candidate_c")

_BENIGN = [
    "great town hall tonight, thanks {mention} for showing up",
    "{mention} what is your plan for transit in the north end",
    "proud to volunteer for {mention} this weekend",
    "listening to {mention} talk about healthcare funding",
    "{mention} thanks for answering my question about schools",
]

_ABUSIVE = [
    "{mention} you are an awful disgrace and everyone knows it",
    "{mention} awful people like you ruin this province",
    "what an awful excuse for a candidate {mention}",
]


def default_mock_rules() -> ScoreRules:
    """Rules aligned with the generator's marker vocabulary."""
    return ScoreRules(
        rules=[(ABUSIVE_MARKER, {"TOXICITY": 0.95, "INSULT": 0.9, "SEVERE_TOXICITY": 0.7})],
        default={"TOXICITY": 0.1},
        default_score=0.05,
    )


def generate_tweet_fixture(
    path: str | Path,
    n: int,
    abusive_every: int = 10,
    seed: int = 0,
    start: datetime | None = None,
    spacing_seconds: float = 60.0,
    tracked_handles=DEFAULT_TRACKED,
) -> int:
    """Write ``n`` fixture tweets as JSON Lines; every ``abusive_every``-th
    tweet carries the abusive marker.  Returns the abusive count."""
    rng = random.Random(seed)
    start = start or datetime(2019, 4, 1, 0, 0, 0, tzinfo=timezone.utc)
    abusive = 0
    with open(path, "w", encoding="utf-8") as f:
        for i in range(n):
            handle = tracked_handles[rng.randrange(len(tracked_handles))]
            mention = f"@{handle}"
            is_abusive = abusive_every > 0 and i % abusive_every == abusive_every - 1
            template = _ABUSIVE[rng.randrange(len(_ABUSIVE))] if is_abusive else _BENIGN[
                rng.randrange(len(_BENIGN))
            ]
            abusive += int(is_abusive)
            tweet = {
                "id": f"t{i:07d}",
                "text": template.format(mention=mention),
                "lang": "en",
                "author_handle": f"user{rng.randrange(10_000):05d}",
                "mentioned_handles": [handle],
                "is_retweet": False,
                "timestamp": (start + timedelta(seconds=i * spacing_seconds)).isoformat(),
            }
            f.write(json.dumps(tweet) + "\n")
    return abusive


def generate_feature_dataset(
    path: str | Path,
    n: int,
    seed: int = 0,
    registry: FeatureRegistry = DEFAULT_REGISTRY,
    positive_fraction: float = 0.25,
) -> None:
    """Featurized CSV (one column per registry feature plus ``label``)
    where only the TOXICITY column separates the classes."""
    import numpy as np

    rng = np.random.default_rng(seed)
    y = (rng.random(n) < positive_fraction).astype(int)
    x = rng.random((n, len(registry)))
    tox = registry.index_of("TOXICITY")
    x[:, tox] = np.clip(
        np.where(y == 1, rng.normal(0.8, 0.1, n), rng.normal(0.25, 0.1, n)), 0, 1
    )
    if "vader_compound" in registry.names:
        x[:, registry.index_of("vader_compound")] = rng.random(n) * 2 - 1
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(list(registry.names) + ["label"])
        for row, label in zip(x, y):
            writer.writerow([f"{v:.6f}" for v in row] + ["hateful" if label else "not_hateful"])
