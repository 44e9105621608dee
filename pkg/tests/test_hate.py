import numpy as np
import pytest

from counterspeech.scorers import HateScorer, HateScorerError, load_demo_corpus


def separable_corpus():
    """Three classes keyed by disjoint marker vocabularies."""
    corpus = []
    for i in range(10):
        corpus.append((f"purge vermin subhuman filth {i}", "hate_speech"))
        corpus.append((f"idiot moron clown loser {i}", "offensive_language"))
        corpus.append((f"budget schedule meeting library {i}", "neither"))
    return corpus


class TestHateScorer:
    def test_untrained_returns_uniform_with_flag(self):
        scorer = HateScorer()
        scores = scorer.score("anything at all")
        assert scores.untrained
        assert scores.hate == scores.offensive == scores.neither == pytest.approx(1 / 3)

    def test_scores_sum_to_one(self):
        scorer = HateScorer()
        scorer.train(separable_corpus())
        for text in ("you vile idiot", "the library opens monday", "filth everywhere"):
            s = scorer.score(text)
            assert s.hate + s.offensive + s.neither == pytest.approx(1.0, abs=1e-6)
            assert not s.untrained

    def test_separable_corpus_recovered(self):
        corpus = separable_corpus()
        scorer = HateScorer()
        scorer.train(corpus)
        label_to_field = {
            "hate_speech": "hate",
            "offensive_language": "offensive",
            "neither": "neither",
        }
        for text, label in corpus:
            s = scorer.score(text)
            values = {"hate": s.hate, "offensive": s.offensive, "neither": s.neither}
            assert max(values, key=values.get) == label_to_field[label]

    def test_missing_class_rejected(self):
        two_class = [(t, l) for t, l in separable_corpus() if l != "neither"]
        with pytest.raises(HateScorerError, match="neither"):
            HateScorer().train(two_class)

    def test_unknown_label_rejected(self):
        with pytest.raises(HateScorerError, match="unknown"):
            HateScorer().train(separable_corpus() + [("x", "spamish")])

    def test_fast_path_matches_sklearn(self):
        """The numpy scoring path must agree with sklearn's predict_proba."""
        corpus = load_demo_corpus()
        scorer = HateScorer()
        scorer.train(corpus)
        vectorizer, model = scorer._sk_model
        order = [list(model.classes_).index(n) for n in
                 ("hate_speech", "offensive_language", "neither")]
        for text, _ in corpus + [("an unrelated sentence with new words", "neither")]:
            mine = scorer.score(text)
            ref = model.predict_proba(vectorizer.transform([text]))[0][order]
            np.testing.assert_allclose(
                [mine.hate, mine.offensive, mine.neither], ref, atol=1e-9
            )

    def test_demo_corpus_loads_three_classes(self):
        corpus = load_demo_corpus()
        assert len(corpus) == 30
        assert {label for _, label in corpus} == {
            "hate_speech", "offensive_language", "neither",
        }
