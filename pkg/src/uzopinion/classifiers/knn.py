"""k-nearest-neighbour classifier with linear search and unweighted votes."""

from __future__ import annotations

import numpy as np

from .normalize import MinMax


class KNN:
    name = "knn"
    defaults = {"k": 1}

    def __init__(self, k: int = 1):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = int(k)

    def fit(self, X, y, n_classes, rng=None):
        self.scaler = MinMax.fit(X)
        self.X_ = self.scaler.apply(X)
        self.y_ = np.asarray(y, dtype=int)
        self.n_classes = n_classes
        return self

    def neighbours(self, X: np.ndarray) -> np.ndarray:
        """Indices of the k nearest stored instances per query row.

        Distance ties go to the lower stored index.
        """
        Q = self.scaler.apply(X)
        k = min(self.k, len(self.X_))
        out = np.empty((len(Q), k), dtype=int)
        step = max(1, 2_000_000 // max(1, self.X_.size))
        for start in range(0, len(Q), step):
            block = Q[start:start + step]
            d2 = ((block[:, None, :] - self.X_[None, :, :]) ** 2).sum(axis=2)
            out[start:start + step] = np.argsort(d2, axis=1, kind="stable")[:, :k]
        return out

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        nn = self.neighbours(X)
        votes = np.zeros((len(nn), self.n_classes))
        for c in range(self.n_classes):
            votes[:, c] = (self.y_[nn] == c).sum(axis=1)
        return votes / nn.shape[1]

    def to_state(self) -> dict:
        return {"k": self.k, "scaler": self.scaler.to_state(), "X": self.X_.tolist(),
                "y": self.y_.tolist(), "n_classes": self.n_classes}

    @classmethod
    def from_state(cls, state: dict) -> "KNN":
        model = cls(state["k"])
        model.scaler = MinMax.from_state(state["scaler"])
        model.X_ = np.asarray(state["X"], dtype=float).reshape(-1, len(model.scaler.mins))
        model.y_ = np.asarray(state["y"], dtype=int)
        model.n_classes = state["n_classes"]
        return model
