"""Model zoo facade: training, prediction, versioned persistence."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import (
    DimensionMismatchError,
    NonFiniteFeatureError,
    SingleClassTrainSetError,
)
from ..fusion import EmotionDistribution
from .bayes import GaussianNB
from .data import LabeledSample, canonical_label_set
from .ensembles import AdaBoost, GradientBoosting, RandomForest
from .linear import LinearSVM

MODEL_KINDS = (
    "random_forest",
    "gradient_boosting",
    "adaboost",
    "svm_linear",
    "naive_bayes",
)

_CLASSES = {
    "random_forest": RandomForest,
    "gradient_boosting": GradientBoosting,
    "adaboost": AdaBoost,
    "svm_linear": LinearSVM,
    "naive_bayes": GaussianNB,
}

PERSIST_VERSION = 1


@dataclass
class TrainedModel:
    kind: str
    label_set: tuple[str, ...]
    seed: int
    n_features: int
    impl: object

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        x = np.asarray(features, dtype=float)
        if x.shape != (self.n_features,):
            raise DimensionMismatchError(
                f"model expects {self.n_features} features, got {x.shape}"
            )
        return self.impl.predict_proba(x)


def train_model(
    kind: str,
    train_set: Sequence[LabeledSample],
    hyperparams: dict | None = None,
    seed: int = 0,
) -> TrainedModel:
    """Fit one model kind on a labeled set; deterministic for a fixed seed."""
    if kind not in _CLASSES:
        raise ValueError(f"unknown model kind {kind!r}; choose from {MODEL_KINDS}")
    if not train_set:
        raise ValueError("train_set is empty")

    label_set = canonical_label_set(s.label for s in train_set)
    if len(label_set) < 2:
        raise SingleClassTrainSetError(f"training needs >= 2 classes, got {label_set}")

    X = np.vstack([s.features for s in train_set])
    if not np.all(np.isfinite(X)):
        raise NonFiniteFeatureError("feature matrix contains NaN or infinity")
    index = {label: i for i, label in enumerate(label_set)}
    y = np.array([index[s.label] for s in train_set], dtype=int)

    impl = _CLASSES[kind](**(hyperparams or {}))
    impl.fit(X, y, n_classes=len(label_set), seed=seed)
    return TrainedModel(
        kind=kind,
        label_set=label_set,
        seed=seed,
        n_features=X.shape[1],
        impl=impl,
    )


def predict_distribution(model: TrainedModel, features: np.ndarray) -> dict[str, float]:
    """Probability per label; sums to 1 within 1e-6."""
    probs = model.predict_proba(features)
    return {label: float(p) for label, p in zip(model.label_set, probs)}


def predict_label(model: TrainedModel, features: np.ndarray) -> str:
    """Argmax label; ties break toward the earlier label_set entry."""
    probs = model.predict_proba(features)
    return model.label_set[int(np.argmax(probs))]


def as_emotion_distribution(dist: dict[str, float]) -> EmotionDistribution:
    """Adapter for three-class models feeding the fusion engine."""
    return EmotionDistribution(
        p_sad=dist.get("sad", 0.0),
        p_neutral=dist.get("neutral", 0.0),
        p_positive=dist.get("positive", 0.0),
    )


def save_model(model: TrainedModel, path: str | Path) -> None:
    doc = {
        "version": PERSIST_VERSION,
        "kind": model.kind,
        "label_set": list(model.label_set),
        "seed": model.seed,
        "n_features": model.n_features,
        "params": model.impl.to_params(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_model(path: str | Path) -> TrainedModel:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("version") != PERSIST_VERSION:
        raise ValueError(f"unsupported model file version {doc.get('version')}")
    impl = _CLASSES[doc["kind"]].from_params(doc["params"])
    return TrainedModel(
        kind=doc["kind"],
        label_set=tuple(doc["label_set"]),
        seed=int(doc["seed"]),
        n_features=int(doc["n_features"]),
        impl=impl,
    )
