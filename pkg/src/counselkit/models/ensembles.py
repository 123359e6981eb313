"""Tree ensembles: bagged forest, softmax boosting, SAMME stumps."""

from __future__ import annotations

import numpy as np

from .trees import ClassificationTree, RegressionTree


def _softmax(scores: np.ndarray) -> np.ndarray:
    z = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


class RandomForest:
    """Bootstrap-sampled Gini trees; probabilities are exact vote fractions."""

    def __init__(self, n_trees: int = 100, max_features: str | int = "sqrt"):
        self.n_trees = n_trees
        self.max_features = max_features
        self.trees: list[ClassificationTree] = []
        self.n_classes = 0

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, seed: int) -> "RandomForest":
        self.n_classes = n_classes
        n, d = X.shape
        if self.max_features == "sqrt":
            m = max(1, int(round(np.sqrt(d))))
        else:
            m = int(self.max_features)
        rng = np.random.default_rng(seed)
        self.trees = []
        for _ in range(self.n_trees):
            boot = rng.integers(0, n, size=n)
            tree = ClassificationTree(max_features=m)
            tree.fit(X[boot], y[boot], n_classes, rng=rng)
            self.trees.append(tree)
        return self

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        votes = np.zeros(self.n_classes)
        for tree in self.trees:
            votes[tree.predict_vote(x)] += 1
        return votes / len(self.trees)

    def to_params(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "max_features": self.max_features,
            "n_classes": self.n_classes,
            "trees": [t.to_params() for t in self.trees],
        }

    @classmethod
    def from_params(cls, params: dict) -> "RandomForest":
        model = cls(n_trees=params["n_trees"], max_features=params["max_features"])
        model.n_classes = params["n_classes"]
        model.trees = [ClassificationTree.from_params(p) for p in params["trees"]]
        return model


class GradientBoosting:
    """Per-class depth-3 regression trees on softmax log-loss gradients."""

    def __init__(self, n_rounds: int = 100, learning_rate: float = 0.1, max_depth: int = 3):
        self.n_rounds = n_rounds
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.rounds: list[list[RegressionTree]] = []
        self.n_classes = 0

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, seed: int = 0) -> "GradientBoosting":
        self.n_classes = n_classes
        n = len(y)
        onehot = np.eye(n_classes)[y]
        scores = np.zeros((n, n_classes))
        self.rounds = []
        for _ in range(self.n_rounds):
            p = _softmax(scores)
            residual = onehot - p  # negative gradient of the log-loss
            round_trees: list[RegressionTree] = []
            for c in range(n_classes):
                tree = RegressionTree(max_depth=self.max_depth).fit(X, residual[:, c])
                scores[:, c] += self.learning_rate * tree.predict_batch(X)
                round_trees.append(tree)
            self.rounds.append(round_trees)
        return self

    def _raw_scores(self, x: np.ndarray) -> np.ndarray:
        scores = np.zeros(self.n_classes)
        for round_trees in self.rounds:
            for c, tree in enumerate(round_trees):
                scores[c] += self.learning_rate * tree.predict(x)
        return scores

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        return _softmax(self._raw_scores(x))

    def to_params(self) -> dict:
        return {
            "n_rounds": self.n_rounds,
            "learning_rate": self.learning_rate,
            "max_depth": self.max_depth,
            "n_classes": self.n_classes,
            "rounds": [[t.to_params() for t in rt] for rt in self.rounds],
        }

    @classmethod
    def from_params(cls, params: dict) -> "GradientBoosting":
        model = cls(
            n_rounds=params["n_rounds"],
            learning_rate=params["learning_rate"],
            max_depth=params["max_depth"],
        )
        model.n_classes = params["n_classes"]
        model.rounds = [
            [RegressionTree.from_params(p) for p in rt] for rt in params["rounds"]
        ]
        return model


class AdaBoost:
    """SAMME with decision stumps; scores are alpha-weighted votes."""

    EPS = 1e-12

    def __init__(self, n_rounds: int = 100):
        self.n_rounds = n_rounds
        self.stumps: list[ClassificationTree] = []
        self.alphas: list[float] = []
        self.n_classes = 0

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, seed: int = 0) -> "AdaBoost":
        self.n_classes = n_classes
        n = len(y)
        w = np.full(n, 1.0 / n)
        self.stumps, self.alphas = [], []
        for _ in range(self.n_rounds):
            stump = ClassificationTree(max_depth=1)
            stump.fit(X, y, n_classes, sample_weight=w)
            pred = np.array([stump.predict_vote(x) for x in X])
            miss = pred != y
            err = float(w[miss].sum() / w.sum())
            if err >= 1.0 - 1.0 / n_classes:
                break  # no better than chance: stop adding rounds
            err = max(err, self.EPS)
            alpha = float(np.log((1.0 - err) / err) + np.log(n_classes - 1.0))
            self.stumps.append(stump)
            self.alphas.append(alpha)
            if err <= self.EPS:
                break  # perfect stump dominates; further rounds are redundant
            w = w * np.exp(alpha * miss)
            w = w / w.sum()
        return self

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        scores = np.zeros(self.n_classes)
        for stump, alpha in zip(self.stumps, self.alphas):
            scores[stump.predict_vote(x)] += alpha
        total = scores.sum()
        if total <= 0:
            return np.full(self.n_classes, 1.0 / self.n_classes)
        return scores / total

    def to_params(self) -> dict:
        return {
            "n_rounds": self.n_rounds,
            "n_classes": self.n_classes,
            "alphas": self.alphas,
            "stumps": [s.to_params() for s in self.stumps],
        }

    @classmethod
    def from_params(cls, params: dict) -> "AdaBoost":
        model = cls(n_rounds=params["n_rounds"])
        model.n_classes = params["n_classes"]
        model.alphas = list(params["alphas"])
        model.stumps = [ClassificationTree.from_params(p) for p in params["stumps"]]
        return model
