"""Train/predict contract shared by all classifiers.

>>> spec = ClassifierSpec("knn", {"k": 1}, seed=0)
>>> model = train(spec, dataset)          # doctest: +SKIP
>>> label, scores = predict(model, vec)   # doctest: +SKIP
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from ..features import Dataset, FeatureVector
from .bayes import DiscretizedBayes
from .knn import KNN
from .normalize import MinMax, normalize_apply, normalize_fit
from .trees import RandomForest, REPTree

__all__ = [
    "ALGORITHMS",
    "ClassifierSpec",
    "TrainedModel",
    "TrainingError",
    "SchemaMismatch",
    "train",
    "predict",
    "predict_labels",
    "save_model",
    "load_model",
    "MinMax",
    "normalize_fit",
    "normalize_apply",
]

MODEL_FORMAT = "uzopinion-model"
MODEL_VERSION = 1

ALGORITHMS = {cls.name: cls for cls in (KNN, DiscretizedBayes, REPTree, RandomForest)}


class TrainingError(ValueError):
    pass


class SchemaMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ClassifierSpec:
    algorithm: str
    params: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {sorted(ALGORITHMS)}")
        allowed = ALGORITHMS[self.algorithm].defaults
        unknown = sorted(set(self.params) - set(allowed))
        if unknown:
            raise ValueError(f"{self.algorithm}: unknown parameter(s) {', '.join(unknown)}")
        object.__setattr__(self, "params", dict(self.params))

    @property
    def resolved_params(self) -> dict[str, Any]:
        return {**ALGORITHMS[self.algorithm].defaults, **self.params}

    def label(self) -> str:
        if not self.params:
            return self.algorithm
        inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.algorithm}({inner})"

    def to_dict(self) -> dict:
        return {"algorithm": self.algorithm, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ClassifierSpec":
        return cls(d["algorithm"], dict(d.get("params", {})), int(d.get("seed", 0)))


@dataclass(frozen=True, eq=False)
class TrainedModel:
    spec: ClassifierSpec
    classes: tuple[str, ...]
    schema: tuple[str, ...]
    normalization: MinMax
    preference: tuple[int, ...]  # class indices, majority training class first
    estimator: Any

    def check_schema(self, schema: Sequence[str]) -> None:
        schema = tuple(schema)
        if schema == self.schema:
            return
        for i, (a, b) in enumerate(zip(self.schema, schema)):
            if a != b:
                raise SchemaMismatch(f"feature {i}: model expects {a!r}, got {b!r}")
        raise SchemaMismatch(
            f"model expects {len(self.schema)} features, got {len(schema)}"
            + (f"; first missing {self.schema[len(schema)]!r}" if len(schema) < len(self.schema) else "")
        )

    def scores(self, X: np.ndarray) -> np.ndarray:
        return self.estimator.predict_proba(np.asarray(X, dtype=float))

    def decide(self, scores: np.ndarray) -> np.ndarray:
        """Argmax per row, ties to the majority training class then lowest index."""
        best = scores.max(axis=1, keepdims=True)
        out = np.empty(len(scores), dtype=int)
        tied = np.isclose(scores, best, rtol=0.0, atol=1e-12)
        for i, row in enumerate(tied):
            out[i] = next(c for c in self.preference if row[c])
        return out


def _as_dataset(data: Dataset | Sequence[FeatureVector]) -> Dataset:
    return data if isinstance(data, Dataset) else Dataset.from_vectors(list(data))


def train(spec: ClassifierSpec, data: Dataset | Sequence[FeatureVector]) -> TrainedModel:
    data = _as_dataset(data)
    X = data.X
    if len(data) < 2:
        raise TrainingError("need at least 2 training instances")
    if not np.all(np.isfinite(X)):
        row, col = np.argwhere(~np.isfinite(X))[0]
        raise TrainingError(f"non-finite value in feature {data.schema[col]!r} (row {row})")
    classes = tuple(sorted(set(data.labels)))
    if len(classes) < 2:
        raise TrainingError(f"training data holds a single class {classes[0]!r}")
    index = {c: i for i, c in enumerate(classes)}
    y = np.array([index[lab] for lab in data.labels], dtype=int)
    counts = np.bincount(y, minlength=len(classes))
    preference = tuple(sorted(range(len(classes)), key=lambda c: (-counts[c], c)))

    params = spec.resolved_params
    cls = ALGORITHMS[spec.algorithm]
    est = cls(**params)
    if spec.algorithm == "random_forest":
        est.fit(X, y, len(classes), preference=preference, seed=spec.seed)
    elif spec.algorithm == "reptree":
        est.fit(X, y, len(classes), rng=np.random.default_rng(spec.seed), preference=preference)
    else:
        est.fit(X, y, len(classes))
    return TrainedModel(spec, classes, data.schema, MinMax.fit(X), preference, est)


def predict(model: TrainedModel, v: FeatureVector) -> tuple[str, dict[str, float]]:
    model.check_schema(v.schema)
    scores = model.scores(np.asarray([v.values], dtype=float))
    label = model.classes[model.decide(scores)[0]]
    return label, {c: float(s) for c, s in zip(model.classes, scores[0])}


def predict_labels(model: TrainedModel, data: Dataset) -> list[str]:
    model.check_schema(data.schema)
    if len(data) == 0:
        return []
    idx = model.decide(model.scores(data.X))
    return [model.classes[i] for i in idx]


def model_to_json(model: TrainedModel) -> str:
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "spec": model.spec.to_dict(),
        "classes": list(model.classes),
        "schema": list(model.schema),
        "normalization": model.normalization.to_state(),
        "preference": list(model.preference),
        "state": model.estimator.to_state(),
    }
    return json.dumps(doc, sort_keys=True) + "\n"


def model_from_json(text: str, expected_schema: Sequence[str] | None = None) -> TrainedModel:
    doc = json.loads(text)
    if doc.get("format") != MODEL_FORMAT:
        raise ValueError("not a uzopinion model file")
    if doc.get("version") != MODEL_VERSION:
        raise ValueError(f"unsupported model version {doc.get('version')}")
    spec = ClassifierSpec.from_dict(doc["spec"])
    model = TrainedModel(
        spec,
        tuple(doc["classes"]),
        tuple(doc["schema"]),
        MinMax.from_state(doc["normalization"]),
        tuple(doc["preference"]),
        ALGORITHMS[spec.algorithm].from_state(doc["state"]),
    )
    if expected_schema is not None:
        model.check_schema(expected_schema)
    return model


def save_model(model: TrainedModel, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_json(model))


def load_model(path: str | os.PathLike, expected_schema: Sequence[str] | None = None) -> TrainedModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_json(fh.read(), expected_schema)
