"""Candidate rosters, gender lookup, and labeled training corpora.

Rosters and labeled datasets arrive as UTF-8 CSV files.  Gender is
predicted from the candidate's first name with a plain lookup table
(shipped as ``data/name_gender.tsv``); a manually declared gender always
overrides the prediction.  Labeled datasets are cleaned on load and
deduplicated on the *cleaned* text, first occurrence winning.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Mapping

from .textprep import clean


class CorpusError(ValueError):
    """Raised when a roster or dataset file violates its contract."""


class GenderCategory(str, Enum):
    FEMALE = "female"
    MOSTLY_FEMALE = "mostly_female"
    MALE = "male"
    MOSTLY_MALE = "mostly_male"
    AMBIGUOUS = "ambiguous"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Candidate:
    handle: str
    display_name: str
    first_name: str
    gender_declared: GenderCategory | None
    gender_predicted: GenderCategory
    party: str
    tracked: bool

    @property
    def effective_gender(self) -> GenderCategory:
        return self.gender_declared if self.gender_declared is not None else self.gender_predicted


@dataclass(frozen=True)
class Tweet:
    id: str
    text: str
    lang: str
    author_handle: str
    mentioned_handles: tuple[str, ...]
    is_retweet: bool
    timestamp: datetime

    def __post_init__(self):
        if not self.id:
            raise CorpusError("tweet id must be non-empty")
        deduped = tuple(dict.fromkeys(self.mentioned_handles))
        object.__setattr__(self, "mentioned_handles", deduped)

    @classmethod
    def from_dict(cls, obj: Mapping) -> "Tweet":
        ts = obj["timestamp"]
        if isinstance(ts, str):
            ts = datetime.fromisoformat(ts.replace("Z", "+00:00"))
        if ts.tzinfo is None:
            ts = ts.replace(tzinfo=timezone.utc)
        return cls(
            id=str(obj["id"]),
            text=obj["text"],
            lang=obj["lang"],
            author_handle=obj["author_handle"],
            mentioned_handles=tuple(obj.get("mentioned_handles", ())),
            is_retweet=bool(obj["is_retweet"]),
            timestamp=ts,
        )

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "text": self.text,
            "lang": self.lang,
            "author_handle": self.author_handle,
            "mentioned_handles": list(self.mentioned_handles),
            "is_retweet": self.is_retweet,
            "timestamp": self.timestamp.astimezone(timezone.utc).isoformat(),
        }


class Label(str, Enum):
    HATEFUL = "hateful"
    NOT_HATEFUL = "not_hateful"


@dataclass(frozen=True)
class LabeledExample:
    id: str
    raw_text: str
    clean_text: str
    label: Label


@dataclass
class LabeledCorpus:
    examples: list[LabeledExample] = field(default_factory=list)

    @property
    def class_balance(self) -> float:
        """Fraction of hateful examples; 0.0 for an empty corpus."""
        if not self.examples:
            return 0.0
        hateful = sum(1 for e in self.examples if e.label is Label.HATEFUL)
        return hateful / len(self.examples)

    def __len__(self) -> int:
        return len(self.examples)


# -- gender lookup -----------------------------------------------------

def load_name_table(path: str | Path | None = None) -> dict[str, GenderCategory]:
    """Load ``name<TAB>category`` rows; defaults to the bundled table."""
    if path is None:
        text = (
            resources.files("counterspeech.data")
            .joinpath("name_gender.tsv")
            .read_text(encoding="utf-8")
        )
    else:
        text = Path(path).read_text(encoding="utf-8")
    table: dict[str, GenderCategory] = {}
    for line in text.split("\n"):
        if not line.strip() or line.startswith("#"):
            continue
        name, _, category = line.partition("\t")
        table[name.strip().lower()] = GenderCategory(category.strip())
    return table


def predict_gender(first_name: str, name_table: Mapping[str, GenderCategory]) -> GenderCategory:
    """Case-insensitive exact lookup; names not in the table are unknown."""
    return name_table.get(first_name.strip().lower(), GenderCategory.UNKNOWN)


# -- roster loading ----------------------------------------------------

ROSTER_COLUMNS = ["handle", "display_name", "first_name", "gender_declared", "party", "tracked"]

_TRUE_TOKENS = {"true", "1", "yes"}
_FALSE_TOKENS = {"false", "0", "no", ""}


def _parse_tracked(token: str, handle: str) -> bool:
    lowered = token.strip().lower()
    if lowered in _TRUE_TOKENS:
        return True
    if lowered in _FALSE_TOKENS:
        return False
    raise CorpusError(f"unparseable tracked flag {token!r} for handle {handle!r}")


def load_roster(
    path: str | Path,
    name_table: Mapping[str, GenderCategory] | None = None,
) -> list[Candidate]:
    """Load a candidate roster CSV; duplicate handles are rejected."""
    if name_table is None:
        name_table = load_name_table()
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        for column in ROSTER_COLUMNS:
            if column not in header:
                raise CorpusError(f"roster is missing required column {column!r}")
        roster: list[Candidate] = []
        seen: set[str] = set()
        for row in reader:
            handle = row["handle"].strip().lstrip("@")
            if not handle:
                raise CorpusError("roster contains a row with an empty handle")
            if handle.lower() in seen:
                raise CorpusError(f"duplicate handle {handle!r} in roster")
            seen.add(handle.lower())
            declared_raw = (row["gender_declared"] or "").strip().lower()
            try:
                declared = GenderCategory(declared_raw) if declared_raw else None
            except ValueError:
                raise CorpusError(
                    f"unknown declared gender {declared_raw!r} for handle {handle!r}"
                ) from None
            roster.append(
                Candidate(
                    handle=handle,
                    display_name=row["display_name"].strip(),
                    first_name=row["first_name"].strip(),
                    gender_declared=declared,
                    gender_predicted=predict_gender(row["first_name"], name_table),
                    party=row["party"].strip(),
                    tracked=_parse_tracked(row["tracked"], handle),
                )
            )
    return roster


def save_roster(roster: list[Candidate], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(ROSTER_COLUMNS)
        for c in roster:
            writer.writerow([
                c.handle,
                c.display_name,
                c.first_name,
                c.gender_declared.value if c.gender_declared else "",
                c.party,
                "true" if c.tracked else "false",
            ])


# -- labeled datasets --------------------------------------------------

def load_labeled_dataset(path: str | Path) -> LabeledCorpus:
    """Load id,text,label rows; clean texts and collapse exact duplicates."""
    corpus = LabeledCorpus()
    seen_clean: set[str] = set()
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        for column in ("id", "text", "label"):
            if column not in header:
                raise CorpusError(f"dataset is missing required column {column!r}")
        for row_number, row in enumerate(reader, start=2):
            try:
                label = Label(row["label"].strip())
            except ValueError:
                raise CorpusError(
                    f"unknown label {row['label']!r} at row {row_number}"
                ) from None
            cleaned = clean(row["text"]).value
            if cleaned in seen_clean:
                continue
            seen_clean.add(cleaned)
            corpus.examples.append(
                LabeledExample(
                    id=row["id"], raw_text=row["text"], clean_text=cleaned, label=label
                )
            )
    return corpus


def split_train_test(
    corpus: LabeledCorpus, train_fraction: float, seed: int
) -> tuple[LabeledCorpus, LabeledCorpus]:
    """Stratified split: per class, floor(count × fraction) examples go to
    train (selection shuffled by ``seed``), the remainder to test."""
    if not 0 < train_fraction < 1:
        raise CorpusError(f"train_fraction must be in (0, 1), got {train_fraction}")
    by_label: dict[Label, list[int]] = {label: [] for label in Label}
    for idx, example in enumerate(corpus.examples):
        by_label[example.label].append(idx)
    for label, members in by_label.items():
        if not members:
            raise CorpusError(f"cannot split: class {label.value!r} has zero members")

    rng = random.Random(seed)
    train_idx: set[int] = set()
    for label in Label:
        members = list(by_label[label])
        rng.shuffle(members)
        take = int(len(members) * train_fraction)
        train_idx.update(members[:take])

    train = LabeledCorpus([e for i, e in enumerate(corpus.examples) if i in train_idx])
    test = LabeledCorpus([e for i, e in enumerate(corpus.examples) if i not in train_idx])
    return train, test
