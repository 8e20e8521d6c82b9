"""ReliefF feature ranking for labelled feature matrices."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .classifiers.normalize import MinMax
from .features import Dataset, describe

__all__ = ["RankEntry", "FeatureRanking", "relieff_weights", "rank", "top_n"]


class RankEntry(NamedTuple):
    rank: int
    score: float
    feature: str


@dataclass(frozen=True)
class FeatureRanking:
    entries: tuple[RankEntry, ...]
    k_neighbors: int
    m_iterations: int
    seed: int
    scope: str = "whole dataset"

    def scores(self) -> dict[str, float]:
        return {e.feature: e.score for e in self.entries}

    def position(self, feature: str) -> int:
        for e in self.entries:
            if e.feature == feature:
                return e.rank
        raise KeyError(feature)

    def to_csv(self, n: int | None = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rank", "score", "feature", "description"])
        for e in top_n(self, len(self.entries) if n is None else n):
            writer.writerow([e.rank, repr(e.score), e.feature, describe(e.feature)])
        return buf.getvalue()

    def header(self) -> dict:
        return {"method": "relieff", "k_neighbors": self.k_neighbors,
                "m_iterations": self.m_iterations, "seed": self.seed, "scope": self.scope,
                "n_features": len(self.entries)}

    def to_json(self, n: int | None = None) -> str:
        rows = [e._asdict() for e in top_n(self, len(self.entries) if n is None else n)]
        return json.dumps({**self.header(), "ranking": rows}, indent=2) + "\n"


def relieff_weights(
    X: np.ndarray,
    y: Sequence,
    k: int = 10,
    m: int | None = None,
    seed: int = 0,
) -> np.ndarray:
    """ReliefF weight of every column of ``X``.

    Features are min-max scaled first, so the per-feature difference of two
    instances is ``|a - b| / (max - min)`` and constant columns contribute
    nothing. Neighbours are found with Euclidean distance on the scaled
    features; distance ties resolve to the lower instance index.
    """
    X = np.asarray(X, dtype=float)
    labels = np.asarray(y)
    n, d = X.shape
    classes, yi = np.unique(labels, return_inverse=True)
    counts = np.bincount(yi, minlength=len(classes))
    if len(classes) < 2:
        raise ValueError("ReliefF needs at least two classes")
    if k < 1:
        raise ValueError("k must be >= 1")
    small = [str(c) for c, cnt in zip(classes, counts) if cnt < k + 1]
    if small:
        limit = int(counts.min()) - 1
        raise ValueError(
            f"class(es) {', '.join(small)} have fewer than k+1={k + 1} instances; "
            f"use k <= {max(limit, 0)}"
        )
    m = n if m is None else int(m)
    if not 1 <= m <= n:
        raise ValueError(f"m must be in [1, {n}]")

    Z = MinMax.fit(X).apply(X)

    rng = np.random.default_rng(seed)
    samples = rng.permutation(n)[:m]
    members = [np.flatnonzero(yi == c) for c in range(len(classes))]

    hit_sum = np.zeros(d)
    miss_sum = np.zeros(d)
    for r in samples:
        cr = yi[r]
        dist = ((Z - Z[r]) ** 2).sum(axis=1)
        for c, idx in enumerate(members):
            if c == cr:
                idx = idx[idx != r]
            near = idx[np.argsort(dist[idx], kind="stable")[:k]]
            diff = np.abs(Z[near] - Z[r]).sum(axis=0)
            if c == cr:
                hit_sum += diff
            else:
                # P(c) / (1 - P(class of r)), exactly 1 for two classes
                miss_sum += counts[c] / (n - counts[cr]) * diff
    return (miss_sum - hit_sum) / (m * k)


def rank(data: Dataset, k: int = 10, m: int | None = None, seed: int = 0) -> FeatureRanking:
    w = relieff_weights(data.X, data.labels, k=k, m=m, seed=seed)
    order = sorted(range(len(w)), key=lambda j: (-w[j], j))
    entries = tuple(RankEntry(i + 1, float(w[j]), data.schema[j]) for i, j in enumerate(order))
    return FeatureRanking(entries, k, len(data) if m is None else m, seed)


def top_n(ranking: FeatureRanking, n: int) -> list[RankEntry]:
    if n < 0 or n > len(ranking.entries):
        raise ValueError(f"n must be in [0, {len(ranking.entries)}]")
    return list(ranking.entries[:n])
