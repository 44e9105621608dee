"""Feature registry and the per-tweet featurization step.

The registry is the single source of truth for feature-vector layout:
an ordered list of feature names, fixed for the lifetime of a trained
model.  Names route to their scorer family by prefix (``vader_*`` to
the sentiment scorer, ``sonar_*`` to the hate scorer, everything else
to the toxicity endpoint); a family is only invoked if the registry
asks for at least one of its features.

``featurize`` deliberately accepts nothing but text: author and user
metadata can never leak into the feature vector.
"""

from __future__ import annotations

from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Sequence

from .hate import HateScorer
from .sentiment import SentimentScorer
from .toxicity import DEFAULT_TOXICITY_ATTRIBUTES, ScorerError

SENTIMENT_FEATURES = ("vader_neg", "vader_neu", "vader_pos", "vader_compound")
HATE_FEATURES = ("sonar_hate_speech", "sonar_offensive_language", "sonar_neither")

DEFAULT_REGISTRY_NAMES = DEFAULT_TOXICITY_ATTRIBUTES + HATE_FEATURES + SENTIMENT_FEATURES


class FeaturizeError(ScorerError):
    """A scorer family failed; carries the family name."""

    def __init__(self, family: str, cause: Exception):
        super().__init__(f"{family} scorer failed: {cause}")
        self.family = family
        self.cause = cause


def family_of(name: str) -> str:
    if name.startswith("sonar_"):
        return "hate"
    if name.startswith("vader_"):
        return "sentiment"
    return "toxicity"


def value_range(name: str) -> tuple[float, float]:
    return (-1.0, 1.0) if name == "vader_compound" else (0.0, 1.0)


@dataclass(frozen=True)
class FeatureRegistry:
    names: tuple[str, ...] = DEFAULT_REGISTRY_NAMES

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("registry names must be unique")
        object.__setattr__(self, "names", tuple(self.names))

    def __len__(self) -> int:
        return len(self.names)

    @property
    def families(self) -> set[str]:
        return {family_of(n) for n in self.names}

    def names_for(self, family: str) -> list[str]:
        return [n for n in self.names if family_of(n) == family]

    def index_of(self, name: str) -> int:
        return self.names.index(name)


DEFAULT_REGISTRY = FeatureRegistry()


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[float, ...]
    registry: FeatureRegistry

    def __post_init__(self):
        if len(self.values) != len(self.registry):
            raise ValueError(
                f"vector length {len(self.values)} != registry size {len(self.registry)}"
            )
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        for name, value in zip(self.registry.names, self.values):
            lo, hi = value_range(name)
            if not lo <= value <= hi:
                raise ValueError(f"{name}={value} outside [{lo}, {hi}]")

    def __getitem__(self, name: str) -> float:
        return self.values[self.registry.index_of(name)]


@dataclass
class ScorerSet:
    """The three scorer families behind one ``featurize`` call.

    With an executor the families run concurrently and join (bounded by
    ``family_timeout``); without one they run inline, which is what the
    deterministic replay path uses.
    """

    toxicity: object | None = None
    sentiment: SentimentScorer | None = None
    hate: HateScorer | None = None
    executor: Executor | None = field(default=None, repr=False)
    family_timeout: float = 2.0

    def _family_scores(self, family: str, text, wanted: Sequence[str]) -> dict[str, float]:
        if family == "toxicity":
            if self.toxicity is None:
                raise FeaturizeError("toxicity", ValueError("no toxicity client configured"))
            return self.toxicity.score(text, list(wanted))
        if family == "sentiment":
            if self.sentiment is None:
                raise FeaturizeError("sentiment", ValueError("no sentiment scorer configured"))
            return self.sentiment.score(str(text)).as_dict()
        if self.hate is None:
            raise FeaturizeError("hate", ValueError("no hate scorer configured"))
        return self.hate.score(text).as_dict()

    def featurize(self, text, registry: FeatureRegistry = DEFAULT_REGISTRY) -> FeatureVector:
        """Score ``text`` with every family the registry requires and
        assemble the values in registry order."""
        families = sorted(registry.families)
        results: dict[str, dict[str, float]] = {}
        if self.executor is not None and len(families) > 1:
            futures = {
                family: self.executor.submit(
                    self._family_scores, family, text, registry.names_for(family)
                )
                for family in families
            }
            for family, future in futures.items():
                try:
                    results[family] = future.result(timeout=self.family_timeout)
                except FeaturizeError:
                    raise
                except Exception as exc:
                    raise FeaturizeError(family, exc) from exc
        else:
            for family in families:
                try:
                    results[family] = self._family_scores(family, text, registry.names_for(family))
                except FeaturizeError:
                    raise
                except Exception as exc:
                    raise FeaturizeError(family, exc) from exc

        values = []
        for name in registry.names:
            scores = results[family_of(name)]
            if name not in scores:
                raise FeaturizeError(
                    family_of(name), KeyError(f"scorer returned no value for {name}")
                )
            values.append(scores[name])
        return FeatureVector(tuple(values), registry)
