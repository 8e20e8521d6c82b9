"""Per-feature min-max scaling fitted on training data only."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class MinMax:
    mins: np.ndarray
    maxs: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "MinMax":
        X = np.asarray(X, dtype=float)
        return cls(X.min(axis=0), X.max(axis=0))

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Scale into [0, 1]; values outside the training range are clamped
        and constant features map to 0."""
        X = np.asarray(X, dtype=float)
        span = self.maxs - self.mins
        safe = np.where(span > 0, span, 1.0)
        out = np.clip((X - self.mins) / safe, 0.0, 1.0)
        out[..., span <= 0] = 0.0
        return out

    def to_state(self) -> dict:
        return {"mins": self.mins.tolist(), "maxs": self.maxs.tolist()}

    @classmethod
    def from_state(cls, state: dict) -> "MinMax":
        return cls(np.asarray(state["mins"], dtype=float), np.asarray(state["maxs"], dtype=float))


def normalize_fit(X: np.ndarray) -> MinMax:
    return MinMax.fit(X)


def normalize_apply(scaler: MinMax, X: np.ndarray) -> np.ndarray:
    return scaler.apply(X)
