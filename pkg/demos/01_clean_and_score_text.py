"""Walk through the text path: raw tweet -> cleaned text -> sentiment
and hate-class scores.

Run:  python3 demos/01_clean_and_score_text.py
"""

from counterspeech.scorers import HateScorer, SentimentScorer, load_demo_corpus
from counterspeech.textprep import clean

RAW_TWEETS = [
    "@Jane_Doe You are AMAZING!! https://t.co/xYz",
    "RT @Someone: this debate was a MESS\nhonestly awful",
    "Check www.example.com for my takes on @candidate_a, she's brilliant",
]

print("=== cleaning ===")
for raw in RAW_TWEETS:
    print(f"  raw:   {raw!r}")
    print(f"  clean: {clean(raw).value!r}\n")

print("=== rule-based sentiment ===")
sentiment = SentimentScorer()
for text in ("MENTION you are amazing!!", "what an awful excuse for a candidate",
             "the committee meets on tuesday"):
    s = sentiment.score(text)
    print(f"  {text!r}")
    print(f"    neg {s.neg:.3f}  neu {s.neu:.3f}  pos {s.pos:.3f}  compound {s.compound:+.4f}")

print("\n=== three-class hate scorer (trained on the bundled demo corpus) ===")
hate = HateScorer()
hate.train(load_demo_corpus())
for text in ("those people are a plague on this city",
             "you absolute clown, what a dumb take",
             "the library extended its weekend hours"):
    h = hate.score(text)
    print(f"  {text!r}")
    print(f"    hate {h.hate:.3f}  offensive {h.offensive:.3f}  neither {h.neither:.3f}")
