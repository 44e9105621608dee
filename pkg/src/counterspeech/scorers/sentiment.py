"""Rule-based lexicon sentiment scorer.

Implements the social-media sentiment model of Hutto & Gilbert (the
VADER rule set): token valences from an empirically rated lexicon,
adjusted by booster/dampener words (±0.293, damped with distance),
negations within a three-token window (×−0.74), ALL-CAPS emphasis
(±0.733, only when the text is not uniformly capitalized), special-case
idioms, contrastive ``but`` reweighting (×0.5 before, ×1.5 after) and
punctuation amplification.  The raw valence sum ``s`` is normalized to
``s/sqrt(s² + 15)`` for the compound score; neg/neu/pos are proportions
of the token valences.

Outputs are kept at full float precision (the upstream reference rounds
for display) so that neg + neu + pos == 1 holds to 1e-6 on any scored
text.  Scorers are immutable after construction and safe to share
between threads.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping

B_INCR = 0.293
B_DECR = -0.293
C_INCR = 0.733
N_SCALAR = -0.74
NORMALIZE_ALPHA = 15.0

_PUNC_TABLE = str.maketrans("", "", string.punctuation)

# leading/trailing punctuation variants recognised during tokenization
PUNC_LIST = [
    ".", "!", "?", ",", ";", ":", "-", "'", '"',
    "!!", "!!!", "??", "???", "?!?", "!?!", "?!?!", "!?!?",
]

NEGATE = frozenset([
    "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt",
    "ain't", "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't",
    "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt", "mustnt", "neither",
    "don't", "hadn't", "hasn't", "haven't", "isn't", "mightn't", "mustn't",
    "neednt", "needn't", "never", "none", "nope", "nor", "not", "nothing",
    "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent",
    "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't",
    "without", "wont", "wouldnt", "won't", "wouldn't", "rarely", "seldom",
    "despite",
])

BOOSTERS = {
    "absolutely": B_INCR, "amazingly": B_INCR, "awfully": B_INCR,
    "completely": B_INCR, "considerably": B_INCR, "decidedly": B_INCR,
    "deeply": B_INCR, "effing": B_INCR, "enormously": B_INCR,
    "entirely": B_INCR, "especially": B_INCR, "exceptionally": B_INCR,
    "extremely": B_INCR, "fabulously": B_INCR, "flipping": B_INCR,
    "flippin": B_INCR, "fricking": B_INCR, "frickin": B_INCR,
    "frigging": B_INCR, "friggin": B_INCR, "fully": B_INCR, "fucking": B_INCR,
    "greatly": B_INCR, "hella": B_INCR, "highly": B_INCR, "hugely": B_INCR,
    "incredibly": B_INCR, "intensely": B_INCR, "majorly": B_INCR,
    "more": B_INCR, "most": B_INCR, "particularly": B_INCR, "purely": B_INCR,
    "quite": B_INCR, "really": B_INCR, "remarkably": B_INCR, "so": B_INCR,
    "substantially": B_INCR, "thoroughly": B_INCR, "totally": B_INCR,
    "tremendously": B_INCR, "uber": B_INCR, "unbelievably": B_INCR,
    "unusually": B_INCR, "utterly": B_INCR, "very": B_INCR,
    "almost": B_DECR, "barely": B_DECR, "hardly": B_DECR,
    "just enough": B_DECR, "kind of": B_DECR, "kinda": B_DECR,
    "kindof": B_DECR, "kind-of": B_DECR, "less": B_DECR, "little": B_DECR,
    "marginally": B_DECR, "occasionally": B_DECR, "partly": B_DECR,
    "scarcely": B_DECR, "slightly": B_DECR, "somewhat": B_DECR,
    "sort of": B_DECR, "sorta": B_DECR, "sortof": B_DECR, "sort-of": B_DECR,
}

SPECIAL_IDIOMS = {
    "the shit": 3.0, "the bomb": 3.0, "bad ass": 1.5, "yeah right": -2.0,
    "cut the mustard": 2.0, "kiss of death": -1.5, "hand to mouth": -2.0,
}


@dataclass(frozen=True)
class RuleSentimentScores:
    """Sentiment proportions plus the normalized compound valence."""

    neg: float
    neu: float
    pos: float
    compound: float

    def as_dict(self) -> dict[str, float]:
        return {
            "vader_neg": self.neg,
            "vader_neu": self.neu,
            "vader_pos": self.pos,
            "vader_compound": self.compound,
        }


def load_default_lexicon() -> dict[str, float]:
    """Parse the bundled valence lexicon (token<TAB>mean rating ...)."""
    text = (
        resources.files("counterspeech.data")
        .joinpath("vader_lexicon.txt")
        .read_text(encoding="utf-8")
    )
    lexicon: dict[str, float] = {}
    for line in text.split("\n"):
        if not line.strip():
            continue
        token, rating = line.split("\t")[0:2]
        lexicon[token] = float(rating)
    return lexicon


def _is_upper(word: str) -> bool:
    return word.isupper()


def _some_words_allcaps(words: Iterable[str]) -> bool:
    words = list(words)
    n_caps = sum(1 for w in words if _is_upper(w))
    return 0 < len(words) - n_caps < len(words)


def _negated(word: str) -> bool:
    lower = word.lower()
    return lower in NEGATE or "n't" in lower


class SentimentScorer:
    """Pure scorer: construct once (loads the lexicon), call ``score``."""

    def __init__(self, lexicon: Mapping[str, float] | None = None):
        self.lexicon = dict(lexicon) if lexicon is not None else load_default_lexicon()

    # -- tokenization -------------------------------------------------

    def _tokenize(self, text: str) -> list[str]:
        """Whitespace tokens of length > 1, with a single known leading or
        trailing punctuation cluster stripped when the bare word also
        appears in the text (keeps emoticons and contractions intact)."""
        bare_words = {
            w for w in text.translate(_PUNC_TABLE).split() if len(w) > 1
        }
        tokens = [t for t in text.split() if len(t) > 1]
        out = []
        for token in tokens:
            stripped = token
            for punc in PUNC_LIST:
                if token.startswith(punc) and token[len(punc):] in bare_words:
                    stripped = token[len(punc):]
                    break
                if token.endswith(punc) and token[: -len(punc)] in bare_words:
                    stripped = token[: -len(punc)]
                    break
            out.append(stripped)
        return out

    # -- per-token valence --------------------------------------------

    def _booster_scalar(self, word: str, valence: float, is_cap_diff: bool) -> float:
        scalar = BOOSTERS.get(word.lower(), 0.0)
        if scalar == 0.0:
            return 0.0
        if valence < 0:
            scalar = -scalar
        if is_cap_diff and _is_upper(word):
            scalar += C_INCR if valence > 0 else -C_INCR
        return scalar

    def _negation_window(self, valence: float, tokens: list[str],
                         distance: int, i: int) -> float:
        prev = tokens[i - (distance + 1)]
        if distance == 0:
            if _negated(prev):
                valence *= N_SCALAR
        elif distance == 1:
            if tokens[i - 2] == "never" and tokens[i - 1] in ("so", "this"):
                valence *= 1.5
            elif _negated(prev):
                valence *= N_SCALAR
        elif distance == 2:
            if (
                tokens[i - 3] == "never"
                and tokens[i - 2] in ("so", "this")
                or tokens[i - 1] in ("so", "this")
            ):
                valence *= 1.25
            elif _negated(prev):
                valence *= N_SCALAR
        return valence

    def _idioms(self, valence: float, tokens: list[str], i: int) -> float:
        backward = [
            f"{tokens[i - 1]} {tokens[i]}",
            f"{tokens[i - 2]} {tokens[i - 1]} {tokens[i]}",
            f"{tokens[i - 2]} {tokens[i - 1]}",
            f"{tokens[i - 3]} {tokens[i - 2]} {tokens[i - 1]}",
            f"{tokens[i - 3]} {tokens[i - 2]}",
        ]
        for seq in backward:
            if seq in SPECIAL_IDIOMS:
                valence = SPECIAL_IDIOMS[seq]
                break
        if len(tokens) - 1 > i:
            seq = f"{tokens[i]} {tokens[i + 1]}"
            if seq in SPECIAL_IDIOMS:
                valence = SPECIAL_IDIOMS[seq]
        if len(tokens) - 1 > i + 1:
            seq = f"{tokens[i]} {tokens[i + 1]} {tokens[i + 2]}"
            if seq in SPECIAL_IDIOMS:
                valence = SPECIAL_IDIOMS[seq]
        if backward[4] in BOOSTERS or backward[2] in BOOSTERS:
            valence += B_DECR
        return valence

    def _least_damped(self, valence: float, tokens: list[str], i: int) -> float:
        if i > 0 and tokens[i - 1].lower() == "least" and tokens[i - 1].lower() not in self.lexicon:
            if i > 1 and tokens[i - 2].lower() in ("at", "very"):
                return valence
            valence *= N_SCALAR
        return valence

    def _token_valence(self, tokens: list[str], i: int, is_cap_diff: bool) -> float:
        item = tokens[i]
        lower = item.lower()
        if lower not in self.lexicon:
            return 0.0
        valence = self.lexicon[lower]
        if is_cap_diff and _is_upper(item):
            valence += C_INCR if valence > 0 else -C_INCR
        for distance in range(3):
            if i <= distance:
                break
            prev = tokens[i - (distance + 1)]
            if prev.lower() in self.lexicon:
                continue
            scalar = self._booster_scalar(prev, valence, is_cap_diff)
            if scalar != 0.0 and distance == 1:
                scalar *= 0.95
            elif scalar != 0.0 and distance == 2:
                scalar *= 0.9
            valence += scalar
            valence = self._negation_window(valence, tokens, distance, i)
            if distance == 2:
                valence = self._idioms(valence, tokens, i)
        return self._least_damped(valence, tokens, i)

    # -- sentence-level adjustments ------------------------------------

    @staticmethod
    def _but_reweight(tokens: list[str], valences: list[float]) -> list[float]:
        lowered = [t.lower() for t in tokens]
        if "but" not in lowered:
            return valences
        pivot = lowered.index("but")
        return [
            v * 0.5 if i < pivot else v * 1.5 if i > pivot else v
            for i, v in enumerate(valences)
        ]

    @staticmethod
    def _punctuation_emphasis(text: str) -> float:
        ep = min(text.count("!"), 4) * 0.292
        qm_count = text.count("?")
        if qm_count <= 1:
            qm = 0.0
        elif qm_count <= 3:
            qm = qm_count * 0.18
        else:
            qm = 0.96
        return ep + qm

    def score(self, text: str) -> RuleSentimentScores:
        """Score any string; total function, returns zeros for token-free text."""
        tokens = self._tokenize(text)
        if not tokens:
            return RuleSentimentScores(0.0, 0.0, 0.0, 0.0)
        is_cap_diff = _some_words_allcaps(tokens)

        valences = []
        for i, item in enumerate(tokens):
            lower = item.lower()
            if lower in BOOSTERS or (
                i < len(tokens) - 1 and lower == "kind" and tokens[i + 1].lower() == "of"
            ):
                valences.append(0.0)
                continue
            valences.append(self._token_valence(tokens, i, is_cap_diff))

        valences = self._but_reweight(tokens, valences)

        total_valence = math.fsum(valences)
        emphasis = self._punctuation_emphasis(text)
        if total_valence > 0:
            total_valence += emphasis
        elif total_valence < 0:
            total_valence -= emphasis
        compound = total_valence / math.sqrt(total_valence * total_valence + NORMALIZE_ALPHA)
        compound = max(-1.0, min(1.0, compound))

        pos_sum = sum(v + 1.0 for v in valences if v > 0)
        neg_sum = sum(v - 1.0 for v in valences if v < 0)
        neu_count = float(sum(1 for v in valences if v == 0))
        if pos_sum > abs(neg_sum):
            pos_sum += emphasis
        elif pos_sum < abs(neg_sum):
            neg_sum -= emphasis
        total = pos_sum + abs(neg_sum) + neu_count
        return RuleSentimentScores(
            neg=abs(neg_sum / total),
            neu=abs(neu_count / total),
            pos=abs(pos_sum / total),
            compound=compound,
        )
