"""JSONL dataset files and corpus statistics.

One post per line::

    {"id": "p1", "text": "Zoʻr kino! 😂", "script": "latin",
     "tokens": [{"t": "Zoʻr", "pos": "adjective"}, {"t": "kino", "pos": "noun"}],
     "label": "positive"}
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from typing import Iterable

from .text_norm import Label, PosTag, RawPost, Script, segment, transliterate

__all__ = ["DatasetError", "IngestStats", "post_from_record", "post_to_record",
           "load_dataset", "read_posts", "write_dataset", "ingest_stats", "emoji_count"]


class DatasetError(ValueError):
    pass


def post_from_record(rec: dict) -> RawPost:
    if not isinstance(rec, dict):
        raise ValueError("record must be a JSON object")
    missing = [k for k in ("id", "text", "script", "tokens", "label") if k not in rec]
    if missing:
        raise ValueError(f"missing field(s) {', '.join(missing)}")
    label = rec["label"]
    if label not in {l.value for l in Label}:
        raise ValueError(f"unknown label {label!r}")
    script = rec["script"]
    if script not in {s.value for s in Script}:
        raise ValueError(f"unknown script {script!r}")
    tokens = []
    for tok in rec["tokens"]:
        if tok.get("pos") not in {t.value for t in PosTag}:
            raise ValueError(f"unknown POS tag {tok.get('pos')!r}")
        tokens.append((tok["t"], tok["pos"]))
    if not isinstance(rec["text"], str) or not rec["text"]:
        raise ValueError("text must be a non-empty string")
    return RawPost(str(rec["id"]), rec["text"], script, tuple(tokens), label)


def post_to_record(post: RawPost) -> dict:
    return {
        "id": post.id,
        "text": post.text,
        "script": post.script.value,
        "tokens": [{"t": t, "pos": p.value} for t, p in post.pos_tags],
        "label": post.label.value,
    }


def read_posts(path: str | os.PathLike) -> list[RawPost]:
    posts = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                post = post_from_record(json.loads(line))
            except (ValueError, KeyError, TypeError, AttributeError) as exc:
                raise DatasetError(f"{path}:{lineno}: {exc}") from None
            if post.id in seen:
                raise DatasetError(f"{path}:{lineno}: duplicate id {post.id!r}")
            seen.add(post.id)
            posts.append(post)
    return posts


def write_dataset(posts: Iterable[RawPost], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for post in posts:
            fh.write(json.dumps(post_to_record(post), ensure_ascii=False) + "\n")


def emoji_count(post: RawPost) -> int:
    return len(segment(transliterate(post.text)).of_kind("emoji"))


@dataclass
class IngestStats:
    n_posts: int = 0
    by_script: dict[str, int] = field(default_factory=dict)
    by_label: dict[str, int] = field(default_factory=dict)
    min_emoji: int = 0
    max_emoji: int = 0
    mean_emoji: float = 0.0
    n_words: int = 0
    zero_emoji_ids: list[str] = field(default_factory=list)

    def rows(self) -> list[tuple[str, str]]:
        return [
            ("# posts in Cyrillic", str(self.by_script.get("cyrillic", 0))),
            ("# posts in Latin", str(self.by_script.get("latin", 0))),
            ("# posts in mixed Cyrillic - Latin", str(self.by_script.get("mixed", 0))),
            ("total # posts", str(self.n_posts)),
            ("# positive posts", str(self.by_label.get("positive", 0))),
            ("# negative posts", str(self.by_label.get("negative", 0))),
            ("minimum # emoji per post", str(self.min_emoji)),
            ("maximum # emoji per post", str(self.max_emoji)),
            ("average # emoji per post", f"{self.mean_emoji:.2f}"),
            ("total # words", str(self.n_words)),
            ("# posts without emoji", str(len(self.zero_emoji_ids))),
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["characteristic", "value"])
        w.writerows(self.rows())
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(
            {"n_posts": self.n_posts, "by_script": self.by_script, "by_label": self.by_label,
             "min_emoji": self.min_emoji, "max_emoji": self.max_emoji,
             "mean_emoji": self.mean_emoji, "n_words": self.n_words,
             "zero_emoji_ids": self.zero_emoji_ids},
            indent=2, sort_keys=True, ensure_ascii=False,
        ) + "\n"


def ingest_stats(posts: list[RawPost]) -> IngestStats:
    """Corpus summary by script, label and emoji count; posts without emoji are listed by id."""
    stats = IngestStats(n_posts=len(posts))
    counts = []
    for post in posts:
        stats.by_script[post.script.value] = stats.by_script.get(post.script.value, 0) + 1
        stats.by_label[post.label.value] = stats.by_label.get(post.label.value, 0) + 1
        seg = segment(transliterate(post.text))
        n = len(seg.of_kind("emoji"))
        stats.n_words += len(seg.words)
        counts.append(n)
        if n == 0:
            stats.zero_emoji_ids.append(post.id)
    if counts:
        stats.min_emoji, stats.max_emoji = min(counts), max(counts)
        stats.mean_emoji = sum(counts) / len(counts)
    return stats


def load_dataset(path: str | os.PathLike) -> tuple[list[RawPost], IngestStats]:
    posts = read_posts(path)
    return posts, ingest_stats(posts)
