"""Brute-force reference for the 42 post features.

Written separately from the package: graphemes come from the ``grapheme``
library, words from one regular expression, moments from exact rational
arithmetic and percentiles from ``statistics.quantiles``. Only the input
conventions are shared (feature order, case folding, population moments,
emoji = first code point with the Emoji property).
"""

from __future__ import annotations

import statistics
from collections import Counter
from fractions import Fraction

import grapheme
import regex

SPECIAL = "()[]{}-/&|^_#%+*@$~=«»<>"
PUNCT = ".,!?:;"
APOS = "'ʻʼ‘’`"
TAGS = ["noun", "proper_noun", "verb", "adjective", "numeral", "pronoun", "adverb",
        "helping_word", "coord_conj", "subord_conj", "modal", "imitative",
        "interjection", "auxiliary", "other_x"]

_LETTER = r"(?:(?![ʻʼ])\p{L})"
_WORD = regex.compile(
    rf"(?:{_LETTER}|\p{{M}}|\p{{Nd}}"
    rf"|(?<={_LETTER})[{APOS}](?={_LETTER})"
    rf"|(?<=[gG])[{APOS}])+"
)


def is_emoji(cluster: str) -> bool:
    if not regex.match(r"\p{Emoji}", cluster[0]):
        return False
    if cluster[0] in "0123456789#*":
        return len(cluster) > 1
    return True


def oracle_words(latin: str) -> list[str]:
    # emoji are removed first so a word never runs into one
    cleaned = "".join(" " if is_emoji(g) else g for g in grapheme.graphemes(latin))
    return [w for w in _WORD.findall(cleaned) if regex.search(_LETTER, w)]


def _exact_stats(lengths: list[int]):
    n = len(lengths)
    mean = Fraction(sum(lengths), n)
    m2 = sum((Fraction(x) - mean) ** 2 for x in lengths) / n
    m3 = sum((Fraction(x) - mean) ** 3 for x in lengths) / n
    m4 = sum((Fraction(x) - mean) ** 4 for x in lengths) / n
    if n < 2 or m2 == 0:
        skew = kurt = 0.0
    else:
        skew = float(m3) / float(m2) ** 1.5
        kurt = float(m4 / (m2 * m2)) - 3.0
    return float(mean), float(m2), float(m2) ** 0.5, skew, kurt


def oracle_features(latin: str, tags: list[str], lexicon_scores: dict[str, float]) -> list[float]:
    clusters = list(grapheme.graphemes(latin))
    emoji = [g for g in clusters if is_emoji(g)]
    plain = [g for g in clusters if not is_emoji(g) and not g.isspace()]

    words = oracle_words(latin)
    lengths = [grapheme.length(w) for w in words]
    freq = Counter(w.casefold() for w in words)

    if words:
        mean, var, std, skew, kurt = _exact_stats(lengths)
        if len(lengths) >= 2:
            p25, p50, p75 = statistics.quantiles(lengths, n=4, method="inclusive")
        else:
            p25 = p50 = p75 = lengths[0]
        word_block = [
            len(words), len(freq),
            float(Fraction(sum(grapheme.length(w) for w in freq), len(freq))),
            max(lengths), min(lengths), mean, std, var, kurt, skew, p25, p50, p75,
        ]
    else:
        word_block = [0] * 13

    stat = [
        len(clusters),
        len([g for g in clusters if not g.isspace()]),
        sum(g in SPECIAL for g in plain),
        sum(g[0].islower() for g in plain),
        sum(g[0].isupper() for g in plain),
        sum(g[0].isdecimal() for g in plain),
        *word_block,
        sum(g in PUNCT for g in plain),
        sum(1 for x in lengths if x < 4),
        sum(1 for c in freq.values() if c == 1),
        sum(1 for c in freq.values() if c == 2),
    ]
    pos = [sum(t == name for t in tags) for name in TAGS]

    scores = [lexicon_scores.get(e, 0.0) for e in emoji]
    emo = [
        len(emoji),
        float(Fraction(sum(Fraction(s) for s in scores), len(scores))) if scores else 0.0,
        sum(s > 0 for s in scores),
        sum(s < 0 for s in scores),
    ]
    return [float(v) for v in stat + pos + emo]
