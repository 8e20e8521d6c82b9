"""Stratified k-fold cross-validation and the with/without-emoji ablation."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .classifiers import ClassifierSpec, TrainingError, predict_labels, train
from .features import EMOJI, Dataset

__all__ = [
    "ConfusionMatrix",
    "CVError",
    "CVReport",
    "AblationRow",
    "AblationTable",
    "accuracy",
    "stratified_folds",
    "cross_validate",
    "ablation",
    "has_emoji_block",
]

POSITIVE = "positive"


class CVError(RuntimeError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.tn, self.fp, self.fn) < 0:
            raise ValueError("confusion matrix counts must be >= 0")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(self.tp + other.tp, self.tn + other.tn,
                               self.fp + other.fp, self.fn + other.fn)

    @classmethod
    def from_labels(cls, truth: Sequence[str], pred: Sequence[str], positive: str = POSITIVE):
        tp = tn = fp = fn = 0
        for t, p in zip(truth, pred, strict=True):
            if p == positive:
                if t == positive:
                    tp += 1
                else:
                    fp += 1
            elif t == positive:
                fn += 1
            else:
                tn += 1
        return cls(tp, tn, fp, fn)

    def as_dict(self) -> dict[str, int]:
        return {"tp": self.tp, "tn": self.tn, "fp": self.fp, "fn": self.fn}


def accuracy(cm: ConfusionMatrix) -> float:
    """(TP + TN) / (TP + FP + TN + FN)."""
    if cm.total == 0:
        raise ValueError("accuracy of an empty confusion matrix is undefined")
    return (cm.tp + cm.tn) / cm.total


def stratified_folds(labels: Sequence[str], k_folds: int, seed: int) -> list[np.ndarray]:
    """Partition row indices into ``k_folds`` class-stratified folds.

    Each class is shuffled and dealt round-robin; the next class continues
    from the fold where the previous one stopped, so fold sizes stay level.
    """
    labels = list(labels)
    n = len(labels)
    if k_folds < 2:
        raise ValueError("k_folds must be >= 2")
    if k_folds > n:
        raise ValueError(f"k_folds={k_folds} exceeds the {n} instances")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k_folds)]
    slot = 0
    for cls in sorted(set(labels)):
        idx = np.array([i for i, lab in enumerate(labels) if lab == cls], dtype=int)
        for i in idx[rng.permutation(len(idx))]:
            folds[slot].append(int(i))
            slot = (slot + 1) % k_folds
    return [np.array(sorted(f), dtype=int) for f in folds]


def has_emoji_block(schema: Sequence[str]) -> bool:
    return all(f.name in schema for f in EMOJI)


@dataclass
class CVReport:
    algorithm: str
    spec: ClassifierSpec
    include_emoji: bool
    seed: int
    k_folds: int
    folds: list[ConfusionMatrix] = field(default_factory=list)
    predictions: list[str] = field(default_factory=list, repr=False)

    @property
    def pooled(self) -> ConfusionMatrix:
        total = ConfusionMatrix()
        for cm in self.folds:
            total = total + cm
        return total

    @property
    def accuracy(self) -> float:
        return accuracy(self.pooled)

    @property
    def mean_fold_accuracy(self) -> float:
        return float(np.mean([accuracy(cm) for cm in self.folds]))

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "spec": self.spec.to_dict(),
            "params": self.spec.resolved_params,
            "include_emoji": self.include_emoji,
            "seed": self.seed,
            "k_folds": self.k_folds,
            "pooled_accuracy": self.accuracy,
            "mean_fold_accuracy": self.mean_fold_accuracy,
            "pooled": self.pooled.as_dict(),
            "folds": [cm.as_dict() for cm in self.folds],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["fold", "tp", "tn", "fp", "fn", "accuracy"])
        for i, cm in enumerate(self.folds):
            w.writerow([i, cm.tp, cm.tn, cm.fp, cm.fn, repr(accuracy(cm))])
        p = self.pooled
        w.writerow(["pooled", p.tp, p.tn, p.fp, p.fn, repr(self.accuracy)])
        return buf.getvalue()


def cross_validate(
    data: Dataset,
    spec: ClassifierSpec,
    k_folds: int = 10,
    seed: int = 0,
    folds: Sequence[np.ndarray] | None = None,
) -> CVReport:
    """Train on k-1 folds, predict the held-out fold, for every fold.

    Scaling and discretisation are fitted inside ``train`` and therefore only
    ever see training folds.
    """
    if folds is None:
        folds = stratified_folds(data.labels, k_folds, seed)
    report = CVReport(spec.label(), spec, has_emoji_block(data.schema), seed, len(folds))
    predictions: list[str | None] = [None] * len(data)
    all_idx = np.arange(len(data))
    for i, test_idx in enumerate(folds):
        train_idx = np.setdiff1d(all_idx, test_idx, assume_unique=True)
        try:
            model = train(spec, data.subset(train_idx))
        except TrainingError as exc:
            raise CVError(f"fold {i}: {exc}") from exc
        test = data.subset(test_idx)
        pred = predict_labels(model, test)
        for j, p in zip(test_idx, pred):
            predictions[j] = p
        report.folds.append(ConfusionMatrix.from_labels(test.labels, pred))
    report.predictions = predictions
    return report


@dataclass(frozen=True)
class AblationRow:
    algorithm: str
    without_emoji: CVReport
    with_emoji: CVReport


@dataclass
class AblationTable:
    seed: int
    k_folds: int
    rows: list[AblationRow] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([
            "algorithm",
            "accuracy_pct_without_emoji",
            "accuracy_pct_with_emoji",
            "mean_fold_accuracy_pct_without_emoji",
            "mean_fold_accuracy_pct_with_emoji",
        ])
        for r in self.rows:
            w.writerow([
                r.algorithm,
                f"{100 * r.without_emoji.accuracy:.2f}",
                f"{100 * r.with_emoji.accuracy:.2f}",
                f"{100 * r.without_emoji.mean_fold_accuracy:.2f}",
                f"{100 * r.with_emoji.mean_fold_accuracy:.2f}",
            ])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "seed": self.seed,
            "k_folds": self.k_folds,
            "rows": [
                {"algorithm": r.algorithm,
                 "without_emoji": r.without_emoji.to_dict(),
                 "with_emoji": r.with_emoji.to_dict()}
                for r in self.rows
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def ablation(
    data: Dataset,
    specs: Sequence[ClassifierSpec],
    k_folds: int = 10,
    seed: int = 0,
) -> AblationTable:
    """Cross-validate every spec on the 38- and 42-feature views with shared folds."""
    if not specs:
        raise ValueError("ablation needs at least one classifier spec")
    if not has_emoji_block(data.schema):
        raise ValueError("ablation needs data assembled with the emoji block")
    folds = stratified_folds(data.labels, k_folds, seed)
    reduced = data.without_emoji()
    table = AblationTable(seed, k_folds)
    for spec in specs:
        without = cross_validate(reduced, spec, folds=folds, seed=seed)
        with_ = cross_validate(data, spec, folds=folds, seed=seed)
        table.rows.append(AblationRow(spec.label(), without, with_))
    return table
