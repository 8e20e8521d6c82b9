"""Emoji sentiment lexicon and the per-post emoji feature block.

A lexicon row records how often an emoji sequence occurred in annotated
text and how those occurrences split across negative, neutral and positive
labels. The sentiment score of an entry is ``(pos - neg) / occurrences``.

Lexicon files are UTF-8 CSV with a header row::

    sequence_hex,occurrences,neg,neut,pos
    1F602,10,2,3,5
    1F468 200D 1F469 200D 1F467,3,0,1,2
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from typing import Iterable, Mapping

from .text_norm import SegmentedText, segment

__all__ = [
    "LexiconError",
    "EmojiLexiconEntry",
    "EmojiLexicon",
    "EmojiFeatureBlock",
    "load_lexicon",
    "parse_lexicon",
    "detect",
    "emoji_features",
    "convert_emoji_sentiment_ranking",
]

LEXICON_COLUMNS = ("sequence_hex", "occurrences", "neg", "neut", "pos")

_MODIFIERS = frozenset(
    ["\ufe0e", "\ufe0f"] + [chr(cp) for cp in range(0x1F3FB, 0x1F400)]
)


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class EmojiLexiconEntry:
    sequence: str
    occurrences: int
    neg: int
    neut: int
    pos: int

    def __post_init__(self):
        if self.occurrences < 1:
            raise LexiconError(f"{self.hex}: occurrences must be >= 1")
        if min(self.neg, self.neut, self.pos) < 0:
            raise LexiconError(f"{self.hex}: negative label count")
        if self.neg + self.neut + self.pos != self.occurrences:
            raise LexiconError(
                f"{self.hex}: neg+neut+pos={self.neg + self.neut + self.pos} "
                f"!= occurrences={self.occurrences}"
            )

    @property
    def score(self) -> float:
        return (self.pos - self.neg) / self.occurrences

    @property
    def hex(self) -> str:
        return " ".join(f"{ord(c):X}" for c in self.sequence)


class EmojiLexicon(Mapping[str, EmojiLexiconEntry]):
    """Immutable emoji sequence -> entry map with modifier-tolerant lookup."""

    def __init__(self, entries: Iterable[EmojiLexiconEntry] = ()):
        table: dict[str, EmojiLexiconEntry] = {}
        for entry in entries:
            if entry.sequence in table:
                raise LexiconError(f"duplicate sequence {entry.hex}")
            table[entry.sequence] = entry
        self._table = table

    def __getitem__(self, key: str) -> EmojiLexiconEntry:
        return self._table[key]

    def __iter__(self):
        return iter(self._table)

    def __len__(self) -> int:
        return len(self._table)

    def lookup(self, emoji: str) -> EmojiLexiconEntry | None:
        """Exact match, then the sequence without modifiers, then its base code point."""
        entry = self._table.get(emoji)
        if entry is not None:
            return entry
        stripped = "".join(c for c in emoji if c not in _MODIFIERS)
        entry = self._table.get(stripped)
        if entry is not None or not stripped:
            return entry
        return self._table.get(stripped[0])

    def score(self, emoji: str) -> float:
        entry = self.lookup(emoji)
        return 0.0 if entry is None else entry.score


def _parse_sequence(field: str) -> str:
    parts = field.replace("U+", "").replace("0x", "").split()
    if not parts:
        raise ValueError("empty sequence")
    return "".join(chr(int(p, 16)) for p in parts)


def parse_lexicon(text: str) -> EmojiLexicon:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise LexiconError("lexicon is empty, header row required") from None
    header = [h.strip().lstrip("\ufeff") for h in header]
    if tuple(header) != LEXICON_COLUMNS:
        raise LexiconError(f"line 1: expected header {','.join(LEXICON_COLUMNS)}, got {','.join(header)}")

    entries = []
    seen: dict[str, int] = {}
    for row in reader:
        lineno = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(LEXICON_COLUMNS):
            raise LexiconError(f"line {lineno}: expected {len(LEXICON_COLUMNS)} columns, got {len(row)}")
        try:
            seq = _parse_sequence(row[0])
            occ, neg, neut, pos = (int(c) for c in row[1:])
        except ValueError as exc:
            raise LexiconError(f"line {lineno}: malformed row ({exc})") from None
        if seq in seen:
            raise LexiconError(f"line {lineno}: duplicate sequence {row[0].strip()} (first on line {seen[seq]})")
        seen[seq] = lineno
        try:
            entries.append(EmojiLexiconEntry(seq, occ, neg, neut, pos))
        except LexiconError as exc:
            raise LexiconError(f"line {lineno}: {exc}") from None
    return EmojiLexicon(entries)


def load_lexicon(path: str | os.PathLike) -> EmojiLexicon:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_lexicon(fh.read())


def detect(text: SegmentedText | str) -> list[str]:
    """Emoji clusters of ``text`` in order, one item per occurrence."""
    if isinstance(text, str):
        text = segment(text)
    return text.of_kind("emoji")


@dataclass(frozen=True)
class EmojiFeatureBlock:
    n_emoji: int
    avg_score: float
    n_positive: int
    n_negative: int

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (float(self.n_emoji), self.avg_score, float(self.n_positive), float(self.n_negative))


def emoji_features(emojis: Iterable[str], lexicon: EmojiLexicon) -> EmojiFeatureBlock:
    # unknown emoji score 0: counted in n_emoji, neither positive nor negative
    scores = [lexicon.score(e) for e in emojis]
    if not scores:
        return EmojiFeatureBlock(0, 0.0, 0, 0)
    return EmojiFeatureBlock(
        n_emoji=len(scores),
        avg_score=sum(sorted(scores)) / len(scores),
        n_positive=sum(1 for s in scores if s > 0),
        n_negative=sum(1 for s in scores if s < 0),
    )


def convert_emoji_sentiment_ranking(src: str | os.PathLike, dst: str | os.PathLike) -> int:
    """Rewrite a published Emoji Sentiment Ranking CSV into lexicon format.

    The published table has columns ``Emoji, Unicode codepoint, Occurrences,
    Position, Negative, Neutral, Positive, Unicode name, Unicode block``, with
    code points written like ``0x1f602``. Returns the number of rows written.
    """
    with open(src, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    with open(dst, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(LEXICON_COLUMNS)
        for row in rows:
            cp = int(row["Unicode codepoint"].strip(), 16)
            writer.writerow(
                [f"{cp:X}", row["Occurrences"], row["Negative"], row["Neutral"], row["Positive"]]
            )
    return len(rows)
