import json

import numpy as np
import pytest

from uzopinion.features import Dataset
from uzopinion.relieff import rank, relieff_weights, top_n


def brute_relieff(X, y, k, samples):
    """Loop-by-loop ReliefF with explicit diff(), for cross-checking."""
    n, d = len(X), len(X[0])
    lo = [min(r[j] for r in X) for j in range(d)]
    hi = [max(r[j] for r in X) for j in range(d)]

    def diff(j, a, b):
        return 0.0 if hi[j] == lo[j] else abs(X[a][j] - X[b][j]) / (hi[j] - lo[j])

    def dist(a, b):
        return sum(diff(j, a, b) ** 2 for j in range(d))

    classes = sorted(set(y))
    prior = {c: y.count(c) / n for c in classes}
    w = [0.0] * d
    for r in samples:
        for c in classes:
            pool = [i for i in range(n) if y[i] == c and i != r]
            near = sorted(pool, key=lambda i: (dist(r, i), i))[:k]
            for j in range(d):
                s = sum(diff(j, r, i) for i in near) / (len(samples) * k)
                if c == y[r]:
                    w[j] -= s
                else:
                    w[j] += prior[c] / (1 - prior[y[r]]) * s
    return w


def planted(n=120, seed=0, d_noise=5):
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2
    signal = y + rng.normal(0, 0.2, n)
    noise = rng.uniform(size=(n, d_noise))
    const = np.full(n, 3.0)
    X = np.column_stack([noise[:, :2], signal, const, noise[:, 2:]])
    names = ("n0", "n1", "signal", "const") + tuple(f"n{j}" for j in range(2, d_noise))
    labels = tuple("positive" if v else "negative" for v in y)
    return Dataset(X, labels, names)


@pytest.mark.parametrize("n_classes", [2, 3])
def test_matches_brute_force(n_classes):
    rng = np.random.default_rng(n_classes)
    # a grid spanning 0..4 scales exactly, so tied distances stay tied in floats
    X = rng.integers(0, 5, size=(24, 4)).astype(float)
    X[0], X[1] = 0.0, 4.0
    y = [i % n_classes for i in range(24)]
    w = relieff_weights(X, y, k=3, m=10, seed=5)
    samples = np.random.default_rng(5).permutation(24)[:10]
    np.testing.assert_allclose(w, brute_relieff(X.tolist(), y, 3, samples), atol=1e-12)


def test_planted_feature_ranks_first():
    r = rank(planted(), k=10)
    assert r.entries[0].feature == "signal"
    assert r.entries[0].score > 0
    assert r.position("signal") == 1


def test_constant_feature_scores_exactly_zero():
    assert rank(planted(), k=10).scores()["const"] == 0.0


def test_noise_features_score_near_zero():
    scores = []
    for seed in range(10):
        s = rank(planted(n=200, seed=seed), k=10).scores()
        scores += [abs(v) for name, v in s.items() if name.startswith("n")]
    assert np.mean(scores) < 0.05


def test_label_names_do_not_matter():
    data = planted(seed=3)
    swapped = Dataset(data.X, tuple({"positive": "negative", "negative": "positive"}[l] for l in data.labels),
                      data.schema)
    np.testing.assert_array_equal(
        relieff_weights(data.X, data.labels, k=5), relieff_weights(swapped.X, swapped.labels, k=5)
    )


def test_duplicating_instances_keeps_planted_order():
    data = planted(n=80, seed=4)
    doubled = Dataset(np.vstack([data.X, data.X]), data.labels * 2, data.schema)
    a = [e.feature for e in rank(data, k=5).entries[:1]]
    b = [e.feature for e in rank(doubled, k=5).entries[:1]]
    assert a == b == ["signal"]


def test_small_class_error():
    X = np.arange(12.0)[:, None]
    y = ["a"] * 9 + ["b"] * 3
    with pytest.raises(ValueError, match="fewer than k\\+1=11 instances; use k <= 2"):
        relieff_weights(X, y, k=10)
    with pytest.raises(ValueError, match="two classes"):
        relieff_weights(X, ["a"] * 12, k=1)


def test_deterministic_and_seeded_sampling():
    data = planted(seed=6)
    assert rank(data, k=5, m=40, seed=1) == rank(data, k=5, m=40, seed=1)
    assert rank(data, k=5, m=40, seed=1).scores() != rank(data, k=5, m=40, seed=2).scores()


def test_exports():
    r = rank(planted(), k=10)
    assert [e.rank for e in top_n(r, 3)] == [1, 2, 3]
    with pytest.raises(ValueError):
        top_n(r, 99)
    lines = r.to_csv(2).splitlines()
    assert lines[0] == "rank,score,feature,description" and len(lines) == 3
    doc = json.loads(r.to_json())
    assert doc["scope"] == "whole dataset" and doc["k_neighbors"] == 10
    assert len(doc["ranking"]) == len(planted().schema)
