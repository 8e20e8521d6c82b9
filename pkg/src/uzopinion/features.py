"""Post -> feature vector.

Three blocks are concatenated in a fixed order: 23 statistical features over
characters and words, 15 part-of-speech counts and 4 emoji features. Dropping
the emoji block gives the 38-dimensional variant used for ablation.
"""

from __future__ import annotations

import csv
import io
import json
import math
import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .emoji_lex import EmojiLexicon, emoji_features
from .text_norm import PosTag, RawPost, SegmentedText, graphemes, segment, transliterate

__all__ = [
    "FeatureSpec",
    "FEATURES",
    "STATISTICAL",
    "POS",
    "EMOJI",
    "schema",
    "describe",
    "FeatureVector",
    "Dataset",
    "statistical_features",
    "pos_features",
    "assemble",
    "build_dataset",
    "schema_json",
    "schema_csv",
    "moments",
    "percentile",
]


class FeatureSpec(NamedTuple):
    name: str
    description: str
    block: str


def _block(block: str, items: Iterable[tuple[str, str]]) -> tuple[FeatureSpec, ...]:
    return tuple(FeatureSpec(n, d, block) for n, d in items)


STATISTICAL = _block("statistical", [
    ("n_chars", "total number of characters"),
    ("n_chars_no_space", "total number of characters without spaces"),
    ("n_special", "number of special characters"),
    ("n_lower", "number of lower case characters"),
    ("n_upper", "number of upper case characters"),
    ("n_digits", "number of digits characters"),
    ("n_words", "number of all words"),
    ("n_unique_words", "number of unique words"),
    ("mean_unique_word_len", "mean length of all unique words"),
    ("max_word_len", "maximum length of all words"),
    ("min_word_len", "minimum length of all words"),
    ("mean_word_len", "mean length of all words"),
    ("std_word_len", "standard deviation of the length of all words"),
    ("var_word_len", "variance of the length of all words"),
    ("kurtosis_word_len", "kurtosis of the length of all words"),
    ("skewness_word_len", "skewness of the length of all words"),
    ("p25_word_len", "percentile 25% of the length of all words"),
    ("p50_word_len", "percentile 50% (median) of the length of all words"),
    ("p75_word_len", "percentile 75% of the length of all words"),
    ("n_punct", "number of punctuation characters"),
    ("n_short_words", "number of words with length less than 4 characters"),
    ("n_hapax_legomena", "number of the hapax-legomena"),
    ("n_hapax_dislegomena", "number of the hapax-dislegomena"),
])

_POS_DESCRIPTIONS = {
    PosTag.NOUN: "number of nouns",
    PosTag.PROPER_NOUN: "number of proper nouns",
    PosTag.VERB: "number of verbs",
    PosTag.ADJECTIVE: "number of adjectives",
    PosTag.NUMERAL: "number of numerals",
    PosTag.PRONOUN: "number of pronouns",
    PosTag.ADVERB: "number of adverbs",
    PosTag.HELPING_WORD: "number of helping words",
    PosTag.COORD_CONJ: "number of coordinating conjunctions",
    PosTag.SUBORD_CONJ: "number of subordinating conjunctions",
    PosTag.MODAL: "number of modal words",
    PosTag.IMITATIVE: "number of imitative words",
    PosTag.INTERJECTION: "number of interjections",
    PosTag.AUXILIARY: "number of auxiliaries",
    PosTag.OTHER_X: "number of other words (x)",
}
POS = _block("pos", [(f"pos_{t.value}", _POS_DESCRIPTIONS[t]) for t in PosTag])

EMOJI = _block("emoji", [
    ("n_emoji", "number of emoji"),
    ("emoji_avg_sentiment", "average sentiment score of all emoji per post"),
    ("n_positive_emoji", "number of positive emoji"),
    ("n_negative_emoji", "number of negative emoji"),
])

FEATURES = STATISTICAL + POS + EMOJI
_BY_NAME = {f.name: f for f in FEATURES}


def schema(include_emoji: bool = True) -> tuple[str, ...]:
    specs = FEATURES if include_emoji else STATISTICAL + POS
    return tuple(f.name for f in specs)


def describe(name: str) -> str:
    spec = _BY_NAME.get(name)
    return spec.description if spec else name


def schema_json(include_emoji: bool = True) -> str:
    rows = [
        {"index": i, "name": n, "description": _BY_NAME[n].description, "block": _BY_NAME[n].block}
        for i, n in enumerate(schema(include_emoji))
    ]
    return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"


def schema_csv(include_emoji: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "name", "description", "block"])
    for i, n in enumerate(schema(include_emoji)):
        writer.writerow([i, n, _BY_NAME[n].description, _BY_NAME[n].block])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# descriptive statistics

def percentile(sorted_values: Sequence[float], p: float) -> float:
    """Linear interpolation at rank ``(n - 1) * p`` of an ascending sequence."""
    n = len(sorted_values)
    if n == 0:
        return 0.0
    rank = (n - 1) * p
    lo = math.floor(rank)
    hi = min(lo + 1, n - 1)
    frac = rank - lo
    return sorted_values[lo] + (sorted_values[hi] - sorted_values[lo]) * frac


def moments(values: Sequence[float]) -> tuple[float, float, float, float]:
    """Population (mean, variance, skewness, excess kurtosis).

    Skewness and kurtosis fall back to 0 for fewer than two values or zero
    variance.
    """
    n = len(values)
    if n == 0:
        return 0.0, 0.0, 0.0, 0.0
    mean = math.fsum(values) / n
    dev = [v - mean for v in values]
    m2 = math.fsum(d * d for d in dev) / n
    if n < 2 or m2 == 0.0:
        return mean, m2, 0.0, 0.0
    m3 = math.fsum(d ** 3 for d in dev) / n
    m4 = math.fsum(d ** 4 for d in dev) / n
    return mean, m2, m3 / m2 ** 1.5, m4 / (m2 * m2) - 3.0


def _char_class_counts(seg: SegmentedText) -> tuple[int, int, int]:
    lower = upper = digits = 0
    for s in seg.segments:
        if s.kind == "emoji":
            continue
        for cluster in graphemes(s.content):
            cat = unicodedata.category(cluster[0])
            if cat == "Ll":
                lower += 1
            elif cat in ("Lu", "Lt"):
                upper += 1
            elif cat == "Nd":
                digits += 1
    return lower, upper, digits


def statistical_features(seg: SegmentedText) -> list[float]:
    words = seg.words
    lengths = sorted(len(graphemes(w)) for w in words)
    folded = Counter(w.casefold() for w in words)
    lower, upper, digits = _char_class_counts(seg)

    if lengths:
        mean, var, skew, kurt = moments(lengths)
        unique_mean = math.fsum(len(graphemes(w)) for w in folded) / len(folded)
        word_stats = [
            len(words), len(folded), unique_mean,
            lengths[-1], lengths[0], mean, math.sqrt(var), var, kurt, skew,
            percentile(lengths, 0.25), percentile(lengths, 0.5), percentile(lengths, 0.75),
        ]
    else:
        word_stats = [0.0] * 13

    return [float(v) for v in [
        seg.graphemes_total,
        seg.graphemes_no_space,
        len(seg.of_kind("special")),
        lower,
        upper,
        digits,
        *word_stats,
        len(seg.of_kind("punctuation")),
        sum(1 for n in lengths if n <= 3),
        sum(1 for c in folded.values() if c == 1),
        sum(1 for c in folded.values() if c == 2),
    ]]


def pos_features(tags: Iterable[PosTag | str]) -> list[float]:
    counts = Counter(PosTag(t) for t in tags)
    return [float(counts.get(t, 0)) for t in PosTag]


# ---------------------------------------------------------------------------
# vectors and datasets

@dataclass(frozen=True)
class FeatureVector:
    values: tuple[float, ...]
    schema: tuple[str, ...]
    label: str | None = None
    id: str | None = None

    def __post_init__(self):
        if len(self.values) != len(self.schema):
            raise ValueError(f"{len(self.values)} values for {len(self.schema)} schema names")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.schema, self.values))


def assemble(post: RawPost, lexicon: EmojiLexicon, include_emoji: bool = True) -> FeatureVector:
    seg = segment(transliterate(post.text))
    values = statistical_features(seg) + pos_features(post.tags)
    if include_emoji:
        values += list(emoji_features(seg.of_kind("emoji"), lexicon).as_tuple())
    return FeatureVector(tuple(values), schema(include_emoji), post.label.value, post.id)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix with labels, row ids and column names."""

    X: np.ndarray
    labels: tuple[str, ...]
    schema: tuple[str, ...]
    ids: tuple[str, ...] = ()

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim != 2:
            raise ValueError("feature matrix must be 2-D")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "schema", tuple(self.schema))
        ids = tuple(self.ids) or tuple(str(i) for i in range(len(X)))
        object.__setattr__(self, "ids", ids)
        if not (len(X) == len(self.labels) == len(ids)):
            raise ValueError("rows, labels and ids differ in length")
        if X.shape[1] != len(self.schema):
            raise ValueError(f"{X.shape[1]} columns for {len(self.schema)} schema names")

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def y(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=object)

    def subset(self, idx: Sequence[int] | np.ndarray) -> "Dataset":
        idx = np.asarray(idx, dtype=int)
        return Dataset(self.X[idx], [self.labels[i] for i in idx], self.schema, [self.ids[i] for i in idx])

    def select(self, names: Sequence[str]) -> "Dataset":
        cols = [self.schema.index(n) for n in names]
        return Dataset(self.X[:, cols], self.labels, names, self.ids)

    def without_emoji(self) -> "Dataset":
        emoji = {f.name for f in EMOJI}
        return self.select([n for n in self.schema if n not in emoji])

    def vectors(self) -> list[FeatureVector]:
        return [
            FeatureVector(tuple(float(v) for v in row), self.schema, lab, i)
            for row, lab, i in zip(self.X, self.labels, self.ids)
        ]

    @classmethod
    def from_vectors(cls, vectors: Sequence[FeatureVector]) -> "Dataset":
        if not vectors:
            raise ValueError("no feature vectors")
        first = vectors[0].schema
        for v in vectors:
            if v.schema != first:
                raise ValueError(f"vector {v.id!r} has a different schema")
            if v.label is None:
                raise ValueError(f"vector {v.id!r} is unlabeled")
        return cls(
            np.array([v.values for v in vectors], dtype=float),
            [v.label for v in vectors],
            first,
            [v.id if v.id is not None else str(i) for i, v in enumerate(vectors)],
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", *self.schema, "label"])
        for i, row, lab in zip(self.ids, self.X, self.labels):
            writer.writerow([i, *(repr(float(v)) for v in row), lab])
        return buf.getvalue()


def build_dataset(posts: Iterable[RawPost], lexicon: EmojiLexicon, include_emoji: bool = True) -> Dataset:
    return Dataset.from_vectors([assemble(p, lexicon, include_emoji) for p in posts])
