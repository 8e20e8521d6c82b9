"""Bayes classifier over discretized features.

Every feature has the class as its only parent, so the network reduces to
class-conditional independence. Features are cut into equal-frequency bins
on the training data and bin counts are smoothed by adding ``alpha``.
"""

from __future__ import annotations

import numpy as np


def equal_frequency_cuts(values: np.ndarray, bins: int) -> np.ndarray:
    """Cut points splitting ``values`` into ``bins`` groups of near-equal size.

    A cut sits midway between the two neighbouring distinct values; cuts that
    would fall inside a run of equal values are dropped, so heavily repeated
    features get fewer bins.
    """
    v = np.sort(np.asarray(values, dtype=float))
    n = len(v)
    cuts = []
    for b in range(1, bins):
        pos = int(round(b * n / bins))
        if 0 < pos < n and v[pos - 1] < v[pos]:
            cut = (v[pos - 1] + v[pos]) / 2.0
            if not cuts or cut > cuts[-1]:
                cuts.append(cut)
    return np.asarray(cuts, dtype=float)


class DiscretizedBayes:
    name = "bayes"
    defaults = {"bins": 10, "alpha": 0.5}

    def __init__(self, bins: int = 10, alpha: float = 0.5):
        if bins < 1:
            raise ValueError("bins must be >= 1")
        if alpha <= 0:
            raise ValueError("alpha must be > 0")
        self.bins = int(bins)
        self.alpha = float(alpha)

    def discretize(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        # values beyond the outer cuts land in the edge bins
        return np.stack(
            [np.searchsorted(cuts, X[:, j], side="right") for j, cuts in enumerate(self.cuts_)],
            axis=1,
        ) if self.cuts_ else np.zeros((len(X), 0), dtype=int)

    def fit(self, X, y, n_classes, rng=None):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        self.n_classes = n_classes
        self.cuts_ = [equal_frequency_cuts(X[:, j], self.bins) for j in range(X.shape[1])]
        B = self.discretize(X)
        class_counts = np.bincount(y, minlength=n_classes).astype(float)
        self.log_prior_ = np.log(
            (class_counts + self.alpha) / (class_counts.sum() + self.alpha * n_classes)
        )
        self.log_cond_ = []
        for j, cuts in enumerate(self.cuts_):
            n_bins = len(cuts) + 1
            counts = np.zeros((n_classes, n_bins))
            np.add.at(counts, (y, B[:, j]), 1.0)
            probs = (counts + self.alpha) / (class_counts[:, None] + self.alpha * n_bins)
            self.log_cond_.append(np.log(probs))
        return self

    def conditional(self, j: int) -> np.ndarray:
        """P(bin | class) table of feature ``j``, shape (classes, bins)."""
        return np.exp(self.log_cond_[j])

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        B = self.discretize(X)
        logp = np.tile(self.log_prior_, (len(B), 1))
        for j, table in enumerate(self.log_cond_):
            logp += table[:, B[:, j]].T
        logp -= logp.max(axis=1, keepdims=True)
        p = np.exp(logp)
        return p / p.sum(axis=1, keepdims=True)

    def to_state(self) -> dict:
        return {
            "bins": self.bins, "alpha": self.alpha, "n_classes": self.n_classes,
            "cuts": [c.tolist() for c in self.cuts_],
            "log_prior": self.log_prior_.tolist(),
            "log_cond": [t.tolist() for t in self.log_cond_],
        }

    @classmethod
    def from_state(cls, state: dict) -> "DiscretizedBayes":
        model = cls(state["bins"], state["alpha"])
        model.n_classes = state["n_classes"]
        model.cuts_ = [np.asarray(c, dtype=float) for c in state["cuts"]]
        model.log_prior_ = np.asarray(state["log_prior"], dtype=float)
        model.log_cond_ = [np.asarray(t, dtype=float).reshape(model.n_classes, -1) for t in state["log_cond"]]
        return model
