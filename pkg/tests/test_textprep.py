import re

import pytest
from hypothesis import given, strategies as st

from counterspeech.textprep import MENTION_TAG, clean

from helpers import DATA_DIR, load_tsv_pairs

GOLDEN = load_tsv_pairs(DATA_DIR / "cleaning_golden.tsv")

_MENTION_RE = re.compile(r"@[A-Za-z0-9_]+")
_URL_RE = re.compile(r"(?:https?://|www\.)\S+")


def test_golden_suite_has_twenty_cases():
    assert len(GOLDEN) == 20


@pytest.mark.parametrize("raw,expected", GOLDEN, ids=range(len(GOLDEN)))
def test_golden(raw, expected):
    assert clean(raw).value == expected


def test_spec_examples():
    assert clean("@Jane_Doe You are AMAZING!! https://t.co/xYz").value == "MENTION you are amazing!!"
    assert clean("").value == ""
    assert clean("line1\nline2   end").value == "line1 line2 end"


# ---------------------------------------------------------------------------
# Tweet-shaped input generator: whitespace-separated tokens of several kinds.

_words = st.text(alphabet="abcdefghijklmnopqrstuvxyz", min_size=1, max_size=8)
_caps = st.text(alphabet="ABCDEFGHIJKLMNOPQRSTUVXYZ", min_size=1, max_size=8)
_handles = st.builds(lambda w: "@" + w, st.text(alphabet="abcXY_19", min_size=1, max_size=10))
_urls = st.builds(lambda w: "https://" + w, _words) | st.builds(lambda w: "www." + w, _words)
_punct = st.sampled_from(["!!", "?!", "...", ":)", "&", "#tag"])
_token = _words | _caps | _handles | _urls | _punct
_sep = st.sampled_from([" ", "  ", "\n", "\t", " \n "])


@st.composite
def tweets(draw, allow_mentions=True):
    token = _token if allow_mentions else (_words | _caps | _urls | _punct)
    parts = draw(st.lists(token, min_size=0, max_size=12))
    seps = [draw(_sep) for _ in parts]
    return "".join(s + t for s, t in zip(seps, parts))


@given(tweets(allow_mentions=False))
def test_idempotent_on_mention_free_text(text):
    once = clean(text).value
    assert clean(once).value == once


@given(tweets())
def test_idempotent_after_masking_tags(text):
    once = clean(text).value
    masked = clean(once.replace(MENTION_TAG, " ")).value
    assert clean(masked).value == masked


@given(tweets())
def test_output_invariants(text):
    out = clean(text).value
    assert "\n" not in out
    assert "  " not in out
    assert not _URL_RE.search(out)
    assert not _MENTION_RE.search(out)


@given(tweets())
def test_length_bound(text):
    mentions = len(_MENTION_RE.findall(text))
    assert len(clean(text).value) <= len(text) + 6 * mentions
