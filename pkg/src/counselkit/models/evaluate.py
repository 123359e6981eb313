"""Accuracy and support-weighted F1 over argmax predictions."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import EmptyEvalSetError
from .data import LabeledSample
from .zoo import TrainedModel, predict_label


def accuracy_and_weighted_f1(
    y_true: Sequence[str], y_pred: Sequence[str], labels: Sequence[str]
) -> tuple[float, float]:
    """Weighted F1 = sum over classes of support_c/n * F1_c.

    A class with precision + recall == 0 contributes F1_c = 0.
    """
    n = len(y_true)
    accuracy = sum(t == p for t, p in zip(y_true, y_pred)) / n
    weighted = 0.0
    for label in labels:
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == label and p == label)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != label and p == label)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == label and p != label)
        support = tp + fn
        if support == 0:
            continue
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / support
        f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
        weighted += support / n * f1
    return accuracy, weighted


def evaluate(model: TrainedModel, eval_set: Sequence[LabeledSample]) -> tuple[float, float]:
    if not eval_set:
        raise EmptyEvalSetError("evaluation set is empty")
    y_true = [s.label for s in eval_set]
    y_pred = [predict_label(model, s.features) for s in eval_set]
    return accuracy_and_weighted_f1(y_true, y_pred, model.label_set)
