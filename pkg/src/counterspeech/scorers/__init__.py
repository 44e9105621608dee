"""Scorer families and feature-vector assembly."""

from .features import (
    DEFAULT_REGISTRY,
    DEFAULT_REGISTRY_NAMES,
    FeatureRegistry,
    FeatureVector,
    FeaturizeError,
    ScorerSet,
)
from .hate import HateClassScores, HateScorer, HateScorerError, load_demo_corpus
from .mock import MockToxicityClient, ScoreRules, create_scorer_app
from .sentiment import RuleSentimentScores, SentimentScorer
from .toxicity import (
    DEFAULT_TOXICITY_ATTRIBUTES,
    MalformedResponseError,
    MissingAttributeError,
    ScorerError,
    ToxicityClient,
    TransportError,
)

__all__ = [
    "DEFAULT_REGISTRY",
    "DEFAULT_REGISTRY_NAMES",
    "DEFAULT_TOXICITY_ATTRIBUTES",
    "FeatureRegistry",
    "FeatureVector",
    "FeaturizeError",
    "HateClassScores",
    "HateScorer",
    "HateScorerError",
    "MalformedResponseError",
    "MissingAttributeError",
    "MockToxicityClient",
    "RuleSentimentScores",
    "ScoreRules",
    "ScorerError",
    "ScorerSet",
    "SentimentScorer",
    "ToxicityClient",
    "TransportError",
    "create_scorer_app",
    "load_demo_corpus",
]
