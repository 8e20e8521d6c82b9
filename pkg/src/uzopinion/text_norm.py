"""Script normalization and segmentation of review posts.

Posts arrive in Cyrillic, Latin or a mix of both. Everything downstream works
on Latin text, so Cyrillic is converted with a fixed rule table shipped in
``data/translit_uz.tsv``. Segmentation then splits the Latin text into typed
units over extended grapheme clusters.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import NamedTuple

import regex

__all__ = [
    "PosTag",
    "RawPost",
    "Script",
    "Label",
    "Segment",
    "SegmentedText",
    "RuleTable",
    "load_rule_table",
    "transliterate",
    "transliterate_report",
    "segment",
    "graphemes",
    "is_emoji_cluster",
    "PUNCTUATION",
    "SPECIAL_CHARS",
    "APOSTROPHES",
]


class PosTag(str, enum.Enum):
    NOUN = "noun"
    PROPER_NOUN = "proper_noun"
    VERB = "verb"
    ADJECTIVE = "adjective"
    NUMERAL = "numeral"
    PRONOUN = "pronoun"
    ADVERB = "adverb"
    HELPING_WORD = "helping_word"
    COORD_CONJ = "coord_conj"
    SUBORD_CONJ = "subord_conj"
    MODAL = "modal"
    IMITATIVE = "imitative"
    INTERJECTION = "interjection"
    AUXILIARY = "auxiliary"
    OTHER_X = "other_x"


class Script(str, enum.Enum):
    LATIN = "latin"
    CYRILLIC = "cyrillic"
    MIXED = "mixed"


class Label(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


@dataclass(frozen=True)
class RawPost:
    id: str
    text: str
    script: Script
    pos_tags: tuple[tuple[str, PosTag], ...]
    label: Label

    def __post_init__(self):
        if not self.text:
            raise ValueError(f"post {self.id!r}: text is empty")
        object.__setattr__(self, "script", Script(self.script))
        object.__setattr__(self, "label", Label(self.label))
        object.__setattr__(
            self, "pos_tags", tuple((str(t), PosTag(p)) for t, p in self.pos_tags)
        )

    @property
    def tags(self) -> list[PosTag]:
        return [tag for _, tag in self.pos_tags]


# ---------------------------------------------------------------------------
# transliteration

_CYRILLIC_RE = regex.compile(r"\p{Script=Cyrillic}")
_CTX_FLAG = "initial_or_after_vowel"
# letters that trigger the contextual "ye" reading of a following е
_VOWEL_CONTEXT = set("аеёиоуўэюяыъьaeiouАЕЁИОУЎЭЮЯЫЪЬAEIOU")


class Rule(NamedTuple):
    replacement: str
    contextual: str | None


@dataclass(frozen=True)
class RuleTable:
    rules: dict[str, Rule]

    @property
    def max_source_len(self) -> int:
        return max(len(k) for k in self.rules)


def parse_rule_table(text: str) -> RuleTable:
    rules: dict[str, Rule] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) < 2 or len(cols) > 3:
            raise ValueError(f"rule table line {lineno}: expected 2 or 3 columns")
        source = "".join(chr(int(cp, 16)) for cp in cols[0].split())
        contextual = None
        if len(cols) == 3 and cols[2]:
            name, _, value = cols[2].partition("=")
            if name != _CTX_FLAG:
                raise ValueError(f"rule table line {lineno}: unknown context flag {name!r}")
            contextual = value
        if source in rules:
            raise ValueError(f"rule table line {lineno}: duplicate source {cols[0]}")
        rules[source] = Rule(cols[1], contextual)
    return RuleTable(rules)


@lru_cache(maxsize=None)
def load_rule_table(path: str | None = None) -> RuleTable:
    """Load a rule table; the bundled Uzbek table when ``path`` is None."""
    if path is None:
        text = resources.files("uzopinion").joinpath("data/translit_uz.tsv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_rule_table(text)


def _is_letter(ch: str) -> bool:
    return bool(ch) and unicodedata.category(ch).startswith("L")


def _apply_case(replacement: str, source: str, prev: str, nxt: str) -> str:
    # Sh vs SH: a capital maps to a fully uppercased digraph inside all-caps words
    if len(replacement) < 2 or not source.isupper():
        return replacement
    if nxt.isupper() or (not _is_letter(nxt) and prev.isupper()):
        return replacement.upper()
    return replacement


def transliterate_report(text: str, table: RuleTable | None = None) -> tuple[str, list[str]]:
    """Convert Cyrillic to Latin, returning the text and a list of warnings.

    Each warning names one unmappable Cyrillic code point that was passed
    through unchanged.
    """
    table = table or load_rule_table()
    width = table.max_source_len
    out: list[str] = []
    warnings: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        for size in range(min(width, n - i), 0, -1):
            src = text[i:i + size]
            rule = table.rules.get(src)
            if rule is not None:
                break
        else:
            ch = text[i]
            if _CYRILLIC_RE.match(ch):
                warnings.append(f"unmapped U+{ord(ch):04X} at offset {i}")
            out.append(ch)
            i += 1
            continue
        prev = text[i - 1] if i > 0 else ""
        nxt = text[i + size] if i + size < n else ""
        replacement = rule.replacement
        if rule.contextual is not None:
            if not prev or not _is_letter(prev) or prev in _VOWEL_CONTEXT:
                replacement = rule.contextual
        out.append(_apply_case(replacement, src, prev, nxt))
        i += size
    return "".join(out), warnings


def transliterate(text: str, table: RuleTable | None = None) -> str:
    return transliterate_report(text, table)[0]


# ---------------------------------------------------------------------------
# segmentation

PUNCTUATION = frozenset(".,!?:;")
SPECIAL_CHARS = frozenset("()[]{}-/&|^_#%+*@$~=«»<>")
APOSTROPHES = frozenset("'ʻʼ‘’`")
# g' keeps its apostrophe at the end of a word (tog', bog')
_DIGRAPH_BASES = frozenset("gG")
_KEYCAP_BASES = frozenset("0123456789#*")

_GRAPHEME_RE = regex.compile(r"\X")
_EMOJI_RE = regex.compile(r"\p{Emoji}")


def graphemes(text: str) -> list[str]:
    return _GRAPHEME_RE.findall(text)


def is_emoji_cluster(cluster: str) -> bool:
    """True if the cluster's first code point carries the Unicode Emoji property.

    Bare digits, ``#`` and ``*`` have that property too; they only count when
    followed by a variation selector or keycap mark.
    """
    if not cluster or not _EMOJI_RE.match(cluster[0]):
        return False
    if cluster[0] in _KEYCAP_BASES:
        return "\ufe0f" in cluster or "\u20e3" in cluster
    return True


class Segment(NamedTuple):
    kind: str  # word | punctuation | special | digit_run | emoji | other
    content: str
    start: int  # code point offset into the normalized text


@dataclass(frozen=True)
class SegmentedText:
    text: str
    graphemes_total: int
    graphemes_no_space: int
    segments: tuple[Segment, ...] = field(default_factory=tuple)

    def of_kind(self, kind: str) -> list[str]:
        return [s.content for s in self.segments if s.kind == kind]

    @property
    def words(self) -> list[str]:
        return self.of_kind("word")

    @property
    def whitespace_clusters(self) -> int:
        return self.graphemes_total - self.graphemes_no_space

    def reconstruct(self) -> str:
        chars = [" "] * len(self.text)
        for start, end in self._gaps():
            chars[start:end] = self.text[start:end]
        for seg in self.segments:
            chars[seg.start:seg.start + len(seg.content)] = seg.content
        return "".join(chars)

    def _gaps(self):
        pos = 0
        for seg in self.segments:
            if seg.start > pos:
                yield pos, seg.start
            pos = seg.start + len(seg.content)
        if pos < len(self.text):
            yield pos, len(self.text)


def _cluster_kind(cluster: str) -> str:
    if cluster.isspace():
        return "space"
    if is_emoji_cluster(cluster):
        return "emoji"
    base = cluster[0]
    # ʻ and ʼ are modifier letters (Lm); test them before the letter check
    if base in APOSTROPHES:
        return "apostrophe"
    if _is_letter(base):
        return "letter"
    if unicodedata.category(base) == "Nd":
        return "digit"
    if cluster in PUNCTUATION:
        return "punctuation"
    if cluster in SPECIAL_CHARS:
        return "special"
    if unicodedata.category(base).startswith("M"):
        # orphan combining mark; glue it to the preceding unit
        return "letter"
    return "other"


def segment(text: str) -> SegmentedText:
    """Split Latin-script text into typed segments.

    Words are maximal runs of letters and digits holding at least one letter;
    an apostrophe stays inside the word when it sits between letters or
    directly after g. Runs of digits alone become ``digit_run``. Every other
    non-space cluster is its own segment.
    """
    clusters = graphemes(text)
    kinds = [_cluster_kind(c) for c in clusters]
    offsets = []
    pos = 0
    for c in clusters:
        offsets.append(pos)
        pos += len(c)

    segments: list[Segment] = []
    i = 0
    n = len(clusters)
    while i < n:
        kind = kinds[i]
        if kind == "space":
            i += 1
            continue
        if kind in ("letter", "digit"):
            j = i
            has_letter = False
            while j < n:
                k = kinds[j]
                if k == "letter":
                    has_letter = True
                elif k == "digit":
                    pass
                elif k == "apostrophe" and j > i and kinds[j - 1] == "letter":
                    after = kinds[j + 1] if j + 1 < n else None
                    if not (after == "letter" or clusters[j - 1] in _DIGRAPH_BASES):
                        break
                else:
                    break
                j += 1
            content = "".join(clusters[i:j])
            segments.append(Segment("word" if has_letter else "digit_run", content, offsets[i]))
            i = j
            continue
        seg_kind = "other" if kind == "apostrophe" else kind
        segments.append(Segment(seg_kind, clusters[i], offsets[i]))
        i += 1

    total = len(clusters)
    no_space = sum(1 for k in kinds if k != "space")
    return SegmentedText(text, total, no_space, tuple(segments))
