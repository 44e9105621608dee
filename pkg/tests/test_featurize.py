import pytest

from counterspeech.scorers import (
    DEFAULT_REGISTRY,
    FeatureRegistry,
    FeatureVector,
    FeaturizeError,
    HateScorer,
    MockToxicityClient,
    ScoreRules,
    ScorerSet,
    SentimentScorer,
)
from counterspeech.textprep import clean


@pytest.fixture(scope="module")
def scorer_set():
    return ScorerSet(
        toxicity=MockToxicityClient(ScoreRules(default={"TOXICITY": 0.4}, default_score=0.1)),
        sentiment=SentimentScorer(),
        hate=HateScorer(),
    )


class CountingHate(HateScorer):
    def __init__(self):
        super().__init__()
        self.calls = 0

    def score(self, text):
        self.calls += 1
        return super().score(text)


def test_default_registry_is_22_wide(scorer_set):
    fv = scorer_set.featurize(clean("some ordinary text"))
    assert len(fv.values) == 22
    assert fv["TOXICITY"] == 0.4
    assert fv["vader_neu"] == 1.0


def test_featurize_is_deterministic(scorer_set):
    text = clean("same text scored twice")
    assert scorer_set.featurize(text) == scorer_set.featurize(text)


def test_registry_without_hate_family_skips_hate_scorer():
    counting = CountingHate()
    scorers = ScorerSet(
        toxicity=MockToxicityClient(ScoreRules(default_score=0.2)),
        sentiment=SentimentScorer(),
        hate=counting,
    )
    registry = FeatureRegistry(
        tuple(n for n in DEFAULT_REGISTRY.names if not n.startswith("sonar_"))
    )
    fv = scorers.featurize(clean("hello world"), registry)
    assert len(fv.values) == 19
    assert counting.calls == 0


def test_scorer_failure_names_family():
    class Boom:
        def score(self, text, attributes):
            raise RuntimeError("kaput")

    scorers = ScorerSet(toxicity=Boom(), sentiment=SentimentScorer(), hate=HateScorer())
    with pytest.raises(FeaturizeError) as err:
        scorers.featurize(clean("text"))
    assert err.value.family == "toxicity"


def test_concurrent_featurize_matches_inline(scorer_set):
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=3) as pool:
        concurrent = ScorerSet(
            toxicity=scorer_set.toxicity,
            sentiment=scorer_set.sentiment,
            hate=scorer_set.hate,
            executor=pool,
        )
        text = clean("parallel and inline must agree")
        assert concurrent.featurize(text) == scorer_set.featurize(text)


def test_vector_range_validation():
    registry = FeatureRegistry(("TOXICITY", "vader_compound"))
    FeatureVector((0.5, -0.5), registry)
    with pytest.raises(ValueError):
        FeatureVector((1.5, 0.0), registry)
    with pytest.raises(ValueError):
        FeatureVector((0.5,), registry)


def test_registry_rejects_duplicates():
    with pytest.raises(ValueError):
        FeatureRegistry(("TOXICITY", "TOXICITY"))


def test_featurize_accepts_only_text(scorer_set):
    """The featurize interface takes text, not tweet objects."""
    import inspect

    params = inspect.signature(scorer_set.featurize).parameters
    assert list(params) == ["text", "registry"]
