"""Trainable three-class hate-speech scorer.

Multinomial logistic regression over TF-IDF unigram features of cleaned
text, mirroring the output shape of the hate/offensive/neither taggers
commonly used for tweet analysis.  Scoring an untrained model returns
the uniform distribution and sets the ``untrained`` flag (and logs a
warning) instead of failing, so a pipeline can come up before a model
has been fit.

Fitting uses scikit-learn; scoring re-implements the transform with
plain numpy over the extracted vocabulary/idf/coefficient arrays, which
is an order of magnitude faster for the one-tweet-at-a-time call pattern
of the live pipeline (and is verified against scikit-learn's own
``predict_proba`` in the test suite).
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

HATE_CLASSES = ("hate_speech", "offensive_language", "neither")

_TOKEN_RE = re.compile(r"(?u)\b\w\w+\b")


@dataclass(frozen=True)
class HateClassScores:
    hate: float
    offensive: float
    neither: float
    untrained: bool = False

    def as_dict(self) -> dict[str, float]:
        return {
            "sonar_hate_speech": self.hate,
            "sonar_offensive_language": self.offensive,
            "sonar_neither": self.neither,
        }


class HateScorerError(ValueError):
    pass


def load_demo_corpus() -> list[tuple[str, str]]:
    """Small bundled three-class corpus for demos and smoke tests."""
    import csv
    import io

    text = (
        resources.files("counterspeech.data")
        .joinpath("hate_demo_corpus.csv")
        .read_text(encoding="utf-8")
    )
    reader = csv.DictReader(io.StringIO(text))
    return [(row["text"], row["label"]) for row in reader]


class HateScorer:
    """Three-class scorer; ``train`` before ``score`` for real outputs."""

    def __init__(self):
        self._vocabulary: dict[str, int] | None = None
        self._idf: np.ndarray | None = None
        self._coef: np.ndarray | None = None
        self._intercept: np.ndarray | None = None
        self._sk_model = None
        self._warned = False

    @property
    def trained(self) -> bool:
        return self._vocabulary is not None

    def train(self, corpus: list[tuple[str, str]], c: float = 1.0, max_iter: int = 1000) -> None:
        """Fit on (text, label) pairs; all three classes must be present."""
        from sklearn.feature_extraction.text import TfidfVectorizer
        from sklearn.linear_model import LogisticRegression

        texts = [t for t, _ in corpus]
        labels = [l for _, l in corpus]
        present = set(labels)
        missing = [name for name in HATE_CLASSES if name not in present]
        if missing:
            raise HateScorerError(f"training corpus lacks classes: {missing}")
        unknown = present - set(HATE_CLASSES)
        if unknown:
            raise HateScorerError(f"unknown labels in corpus: {sorted(unknown)}")

        vectorizer = TfidfVectorizer(lowercase=True)
        x = vectorizer.fit_transform(texts)
        model = LogisticRegression(C=c, max_iter=max_iter)
        model.fit(x, labels)

        order = [list(model.classes_).index(name) for name in HATE_CLASSES]
        self._vocabulary = dict(vectorizer.vocabulary_)
        self._idf = vectorizer.idf_.astype(np.float64)
        self._coef = model.coef_[order].astype(np.float64)
        self._intercept = model.intercept_[order].astype(np.float64)
        self._sk_model = (vectorizer, model)

    def score(self, text) -> HateClassScores:
        text = str(text)
        if not self.trained:
            if not self._warned:
                logger.warning("hate scorer is untrained; returning uniform scores")
                self._warned = True
            third = 1.0 / 3.0
            return HateClassScores(third, third, third, untrained=True)

        counts: dict[int, float] = {}
        for token in _TOKEN_RE.findall(text.lower()):
            idx = self._vocabulary.get(token)
            if idx is not None:
                counts[idx] = counts.get(idx, 0.0) + 1.0
        logits = self._intercept.copy()
        if counts:
            cols = np.fromiter(counts.keys(), dtype=np.int64, count=len(counts))
            vals = np.fromiter(counts.values(), dtype=np.float64, count=len(counts))
            tfidf = vals * self._idf[cols]
            norm = np.linalg.norm(tfidf)
            if norm > 0:
                tfidf /= norm
            logits = logits + self._coef[:, cols] @ tfidf
        z = np.exp(logits - logits.max())
        probs = z / z.sum()
        return HateClassScores(float(probs[0]), float(probs[1]), float(probs[2]))
