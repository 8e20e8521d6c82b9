import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import uzopinion.evaluation as evaluation
from uzopinion.classifiers import ClassifierSpec, model_to_json
from uzopinion.evaluation import (
    CVError,
    ConfusionMatrix,
    ablation,
    accuracy,
    cross_validate,
    stratified_folds,
)
from uzopinion.features import Dataset, schema


def test_accuracy_example():
    assert accuracy(ConfusionMatrix(tp=10, tn=5, fp=3, fn=2)) == 0.75


def test_majority_baseline():
    cm = ConfusionMatrix(tp=2044, tn=0, fp=519, fn=0)
    assert abs(accuracy(cm) - 0.7975) < 1e-4
    assert accuracy(cm) == 2044 / 2563


def test_accuracy_of_empty_matrix_fails():
    with pytest.raises(ValueError):
        accuracy(ConfusionMatrix())


def test_confusion_from_labels():
    cm = ConfusionMatrix.from_labels(["positive", "negative", "positive", "negative"],
                                     ["positive", "positive", "negative", "negative"])
    assert cm.as_dict() == {"tp": 1, "tn": 1, "fp": 1, "fn": 1}


def _check_folds(labels, folds):
    n = len(labels)
    joined = np.concatenate(folds)
    assert sorted(joined.tolist()) == list(range(n))  # disjoint and exhaustive
    for cls in set(labels):
        per = [sum(labels[i] == cls for i in f) for f in folds]
        assert max(per) - min(per) <= 1


def test_fold_sizes_at_corpus_ratio():
    labels = ["positive"] * 2044 + ["negative"] * 519
    folds = stratified_folds(labels, 10, seed=0)
    _check_folds(labels, folds)
    pos = sorted(sum(labels[i] == "positive" for i in f) for f in folds)
    neg = sorted(sum(labels[i] == "negative" for i in f) for f in folds)
    assert set(pos) == {204, 205} and set(neg) == {51, 52}
    sizes = [len(f) for f in folds]
    assert max(sizes) - min(sizes) <= 1


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(["positive", "negative", "neutral"]), min_size=2, max_size=60),
       st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_fold_properties(labels, k, seed):
    k = min(k, len(labels))
    folds = stratified_folds(labels, k, seed)
    assert len(folds) == k
    _check_folds(labels, folds)
    again = stratified_folds(labels, k, seed)
    assert all((a == b).all() for a, b in zip(folds, again))


def test_fold_argument_errors():
    with pytest.raises(ValueError):
        stratified_folds(["a", "b"], 1, 0)
    with pytest.raises(ValueError, match="exceeds"):
        stratified_folds(["a", "b"], 3, 0)


def toy(n=60, seed=0, d=5):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 3 != 0
    X = rng.normal(size=(n, d))
    X[:, 0] += 1.5 * y
    return Dataset(X, tuple("positive" if v else "negative" for v in y),
                   tuple(f"f{j}" for j in range(d)), tuple(map(str, range(n))))


def brute_loo_1nn(X, labels):
    n = len(X)
    correct = 0
    for i in range(n):
        rest = [j for j in range(n) if j != i]
        lo = X[rest].min(axis=0)
        span = X[rest].max(axis=0) - lo
        def scaled(row):
            z = np.where(span > 0, (row - lo) / np.where(span > 0, span, 1), 0.0)
            return np.clip(z, 0, 1)
        q = scaled(X[i])
        best = min(rest, key=lambda j: (float(((scaled(X[j]) - q) ** 2).sum()), j))
        correct += labels[best] == labels[i]
    return correct / n


def test_leave_one_out_knn_matches_brute_force():
    data = toy(40, seed=2)
    report = cross_validate(data, ClassifierSpec("knn", {"k": 1}), k_folds=len(data), seed=0)
    assert report.k_folds == 40
    assert report.accuracy == pytest.approx(brute_loo_1nn(data.X, data.labels), abs=1e-12)


def test_pooled_equals_size_weighted_mean():
    data = toy(57, seed=3)
    report = cross_validate(data, ClassifierSpec("bayes"), k_folds=10, seed=1)
    sizes = [cm.total for cm in report.folds]
    weighted = sum(accuracy(cm) * s for cm, s in zip(report.folds, sizes)) / sum(sizes)
    assert report.accuracy == pytest.approx(weighted, abs=1e-12)
    assert sum(sizes) == len(data)
    assert all(p is not None for p in report.predictions)


@pytest.mark.parametrize("algorithm", ["knn", "bayes", "reptree", "random_forest"])
def test_models_ignore_test_fold_content(monkeypatch, algorithm):
    data = toy(50, seed=4)
    spec = ClassifierSpec(algorithm, {"n_trees": 10} if algorithm == "random_forest" else {}, seed=2)
    folds = stratified_folds(data.labels, 5, seed=9)

    real = evaluation.train

    def run(d):
        seen = []

        def recording(s, sub):
            model = real(s, sub)
            seen.append(model_to_json(model))
            return model

        monkeypatch.setattr(evaluation, "train", recording)
        cross_validate(d, spec, folds=folds)
        return seen

    base = run(data)
    X = data.X.copy()
    X[folds[2]] = 1e6  # wreck the held-out rows of fold 2
    altered = run(Dataset(X, data.labels, data.schema, data.ids))
    assert altered[2] == base[2]


def test_cv_deterministic():
    data = toy(60, seed=5)
    spec = ClassifierSpec("random_forest", {"n_trees": 10}, seed=4)
    a = cross_validate(data, spec, k_folds=5, seed=7).to_json()
    b = cross_validate(data, spec, k_folds=5, seed=7).to_json()
    assert a == b


def test_cv_error_names_fold():
    labels = ("positive",) * 9 + ("negative",)
    data = Dataset(np.arange(10.0)[:, None], labels, ("f0",))
    folds = [np.array([9]), np.arange(9)]
    with pytest.raises(CVError, match="fold 0"):
        cross_validate(data, ClassifierSpec("knn"), folds=folds)


def test_ablation_table(posts, lexicon):
    from uzopinion.features import build_dataset
    data = build_dataset(posts, lexicon)
    specs = [ClassifierSpec("knn"), ClassifierSpec("bayes")]
    table = ablation(data, specs, k_folds=3, seed=0)
    lines = table.to_csv().splitlines()
    assert lines[0].startswith("algorithm,accuracy_pct_without_emoji,accuracy_pct_with_emoji")
    assert [l.split(",")[0] for l in lines[1:]] == ["knn", "bayes"]
    doc = json.loads(table.to_json())
    row = doc["rows"][0]
    assert row["with_emoji"]["include_emoji"] and not row["without_emoji"]["include_emoji"]
    with pytest.raises(ValueError):
        ablation(data.without_emoji(), specs)
    assert len(schema()) == 42
