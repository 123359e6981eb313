"""Linear SVM: one-vs-rest hinge loss by deterministic subgradient descent."""

from __future__ import annotations

import numpy as np


class LinearSVM:
    """Standardized features, fixed-order epochs, softmax over OvR scores."""

    def __init__(
        self,
        epochs: int = 200,
        learning_rate: float = 0.01,
        l2: float = 1e-4,
    ):
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.l2 = l2
        self.weights = np.zeros((0, 0))
        self.biases = np.zeros(0)
        self.mean = np.zeros(0)
        self.scale = np.ones(0)
        self.n_classes = 0

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, seed: int = 0) -> "LinearSVM":
        self.n_classes = n_classes
        X = np.asarray(X, dtype=float)
        self.mean = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale = np.where(std > 0, std, 1.0)
        Z = (X - self.mean) / self.scale

        n, d = Z.shape
        self.weights = np.zeros((n_classes, d))
        self.biases = np.zeros(n_classes)
        for c in range(n_classes):
            target = np.where(y == c, 1.0, -1.0)
            w = self.weights[c]
            b = 0.0
            for _ in range(self.epochs):
                # Samples visited in dataset order: no shuffling, so the
                # trajectory is identical across runs.
                for i in range(n):
                    margin = target[i] * (float(Z[i] @ w) + b)
                    if margin < 1.0:
                        w += self.learning_rate * (target[i] * Z[i] - self.l2 * w)
                        b += self.learning_rate * target[i]
                    else:
                        w -= self.learning_rate * self.l2 * w
            self.weights[c] = w
            self.biases[c] = b
        return self

    def _scores(self, x: np.ndarray) -> np.ndarray:
        z = (np.asarray(x, dtype=float) - self.mean) / self.scale
        return self.weights @ z + self.biases

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        s = self._scores(x)
        z = s - s.max()
        e = np.exp(z)
        return e / e.sum()

    def to_params(self) -> dict:
        return {
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "l2": self.l2,
            "n_classes": self.n_classes,
            "weights": self.weights.tolist(),
            "biases": self.biases.tolist(),
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
        }

    @classmethod
    def from_params(cls, params: dict) -> "LinearSVM":
        model = cls(
            epochs=params["epochs"],
            learning_rate=params["learning_rate"],
            l2=params["l2"],
        )
        model.n_classes = params["n_classes"]
        model.weights = np.asarray(params["weights"], dtype=float)
        model.biases = np.asarray(params["biases"], dtype=float)
        model.mean = np.asarray(params["mean"], dtype=float)
        model.scale = np.asarray(params["scale"], dtype=float)
        return model
