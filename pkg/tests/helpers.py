"""Shared loaders for golden-file tests."""

from __future__ import annotations

from pathlib import Path

DATA_DIR = Path(__file__).parent / "data"


def _unescape(field: str) -> str:
    out = []
    i = 0
    while i < len(field):
        ch = field[i]
        if ch == "\\" and i + 1 < len(field):
            nxt = field[i + 1]
            if nxt == "n":
                out.append("\n")
                i += 2
                continue
            if nxt == "t":
                out.append("\t")
                i += 2
                continue
            if nxt == "\\":
                out.append("\\")
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def load_tsv_pairs(path: Path) -> list[tuple[str, str]]:
    """Load escaped two-column TSV, skipping comment lines."""
    pairs = []
    for line in path.read_text(encoding="utf-8").split("\n"):
        if not line or line.startswith("#"):
            continue
        left, _, right = line.partition("\t")
        pairs.append((_unescape(left), _unescape(right)))
    return pairs
