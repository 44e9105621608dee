"""Deterministic tweet-text cleaning.

The cleaning rules run in a fixed order so that training, validation and
live-scored text all look the same to the downstream scorers:

1. lowercase the whole string
2. delete URLs (``http://``, ``https://`` or ``www.`` followed by
   non-whitespace)
3. replace newlines with spaces
4. collapse whitespace runs to a single space and trim the ends
5. replace ``@handle`` mentions with the literal tag ``MENTION``

Because the substitution runs after lowercasing, the tag survives in
uppercase.  The mention rule is applied until no ``@``-mention remains,
so pathological inputs such as ``@@handle`` cannot leak a raw mention
into the output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
_MENTION_RE = re.compile(r"@[A-Za-z0-9_]+")
_WHITESPACE_RE = re.compile(r"\s+")

MENTION_TAG = "MENTION"


@dataclass(frozen=True)
class CleanText:
    """Cleaned tweet text; safe to hand to the scorer families."""

    value: str

    def __str__(self) -> str:
        return self.value


def clean(text: str) -> CleanText:
    """Clean raw tweet text. Total function: any str in, CleanText out."""
    lowered = text.lower()
    no_urls = _URL_RE.sub("", lowered)
    no_newlines = no_urls.replace("\n", " ").replace("\r", " ")
    collapsed = _WHITESPACE_RE.sub(" ", no_newlines).strip()
    # Re-run until stable: replacing "@@x" once yields "@MENTION", which
    # still contains a raw mention.
    tagged = collapsed
    while _MENTION_RE.search(tagged):
        tagged = _MENTION_RE.sub(MENTION_TAG, tagged)
    return CleanText(tagged)
