"""Gaussian naive Bayes with a variance floor, computed in log space."""

from __future__ import annotations

import numpy as np

VARIANCE_FLOOR = 1e-9


class GaussianNB:
    def __init__(self):
        self.means = np.zeros((0, 0))
        self.variances = np.zeros((0, 0))
        self.log_priors = np.zeros(0)
        self.n_classes = 0

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, seed: int = 0) -> "GaussianNB":
        self.n_classes = n_classes
        X = np.asarray(X, dtype=float)
        d = X.shape[1]
        self.means = np.zeros((n_classes, d))
        self.variances = np.zeros((n_classes, d))
        priors = np.zeros(n_classes)
        for c in range(n_classes):
            rows = X[y == c]
            priors[c] = len(rows) / len(X)
            self.means[c] = rows.mean(axis=0)
            self.variances[c] = np.maximum(rows.var(axis=0), VARIANCE_FLOOR)
        self.log_priors = np.log(priors)
        return self

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        log_lik = -0.5 * (
            np.log(2.0 * np.pi * self.variances)
            + (x[None, :] - self.means) ** 2 / self.variances
        ).sum(axis=1)
        log_post = log_lik + self.log_priors
        z = log_post - log_post.max()
        e = np.exp(z)
        return e / e.sum()

    def to_params(self) -> dict:
        return {
            "n_classes": self.n_classes,
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
            "log_priors": self.log_priors.tolist(),
        }

    @classmethod
    def from_params(cls, params: dict) -> "GaussianNB":
        model = cls()
        model.n_classes = params["n_classes"]
        model.means = np.asarray(params["means"], dtype=float)
        model.variances = np.asarray(params["variances"], dtype=float)
        model.log_priors = np.asarray(params["log_priors"], dtype=float)
        return model
