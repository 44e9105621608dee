import math

import pytest
from hypothesis import given, strategies as st

from counterspeech.scorers.sentiment import SentimentScorer, load_default_lexicon

from helpers import DATA_DIR


@pytest.fixture(scope="module")
def scorer():
    return SentimentScorer()


def load_golden():
    rows = []
    for line in (DATA_DIR / "sentiment_golden.tsv").read_text(encoding="utf-8").split("\n"):
        if not line or line.startswith("#"):
            continue
        text, neg, neu, pos, compound = line.split("\t")
        rows.append((text, float(neg), float(neu), float(pos), float(compound)))
    return rows


GOLDEN = load_golden()


def test_golden_file_has_fifty_sentences():
    assert len(GOLDEN) == 50


@pytest.mark.parametrize("text,neg,neu,pos,compound", GOLDEN, ids=range(len(GOLDEN)))
def test_reference_parity(scorer, text, neg, neu, pos, compound):
    got = scorer.score(text)
    assert got.compound == pytest.approx(compound, abs=1e-4)
    assert got.neg == pytest.approx(neg, abs=1e-3)
    assert got.neu == pytest.approx(neu, abs=1e-3)
    assert got.pos == pytest.approx(pos, abs=1e-3)


def test_empty_text_scores_zero(scorer):
    got = scorer.score("")
    assert (got.neg, got.neu, got.pos, got.compound) == (0.0, 0.0, 0.0, 0.0)


def test_no_lexicon_hits_is_all_neutral(scorer):
    got = scorer.score("the the the")
    assert (got.neg, got.neu, got.pos, got.compound) == (0.0, 1.0, 0.0, 0.0)


def test_lexicon_loads_fully():
    lexicon = load_default_lexicon()
    assert len(lexicon) == 7503
    assert lexicon["good"] == 1.9


def test_booster_raises_intensity(scorer):
    assert scorer.score("very good").compound > scorer.score("good").compound
    assert scorer.score("slightly good").compound < scorer.score("good").compound


def test_negation_flips_sign(scorer):
    assert scorer.score("not good").compound < 0 < scorer.score("good").compound


def test_exclamation_amplifies(scorer):
    base = scorer.score("today is good")
    one = scorer.score("today is good!")
    three = scorer.score("today is good!!!")
    assert base.compound < one.compound < three.compound


_words = st.sampled_from(
    "good bad great terrible love hate the a political debate not very so "
    "candidate BAD GREAT never this but least at :) :( win lose".split()
)


@given(st.lists(_words, min_size=1, max_size=12))
def test_proportions_sum_to_one(scorer, tokens):
    text = " ".join(tokens)
    got = scorer.score(text)
    if got.neg == got.neu == got.pos == 0.0:
        return
    assert got.neg + got.neu + got.pos == pytest.approx(1.0, abs=1e-6)
    assert -1.0 <= got.compound <= 1.0
    assert math.isfinite(got.compound)


@given(st.lists(_words, min_size=1, max_size=12))
def test_deterministic(scorer, tokens):
    text = " ".join(tokens)
    assert scorer.score(text) == scorer.score(text)
