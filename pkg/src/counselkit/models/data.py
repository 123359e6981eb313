"""Labeled datasets: sample type, JSONL format, stratified splitting."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..errors import TooFewSamplesError

EMOTION_LABEL_ORDER = ("sad", "neutral", "positive")


@dataclass
class LabeledSample:
    """One feature vector with its elicitation label."""

    features: np.ndarray
    label: str
    participant: int | None = None

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)


def canonical_label_set(labels: Iterable[str]) -> tuple[str, ...]:
    """Fixed label ordering: the emotion trio keeps its wire order."""
    unique = set(labels)
    if unique == set(EMOTION_LABEL_ORDER):
        return EMOTION_LABEL_ORDER
    return tuple(sorted(unique))


def read_dataset_jsonl(path: str | Path) -> list[LabeledSample]:
    samples: list[LabeledSample] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            participant = obj.get("participant")
            samples.append(
                LabeledSample(
                    features=np.asarray(obj["features"], dtype=float),
                    label=str(obj["label"]),
                    participant=int(participant) if participant is not None else None,
                )
            )
    return samples


def write_dataset_jsonl(path: str | Path, samples: Iterable[LabeledSample]) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            row = {"features": s.features.tolist(), "label": s.label}
            if s.participant is not None:
                row["participant"] = s.participant
            fh.write(json.dumps(row) + "\n")
            n += 1
    return n


def split_dataset(
    samples: Sequence[LabeledSample],
    ratios: tuple[float, float, float] = (0.70, 0.20, 0.10),
    seed: int = 0,
) -> tuple[list[LabeledSample], list[LabeledSample], list[LabeledSample]]:
    """Stratified train/validation/test split.

    Within each label group: validation and test sizes are round(n_label *
    ratio) and the remainder goes to train, after a seeded shuffle.
    """
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    if len(samples) < 10:
        raise TooFewSamplesError(f"need >= 10 samples to split, got {len(samples)}")

    rng = np.random.default_rng(seed)
    by_label: dict[str, list[int]] = {}
    for i, s in enumerate(samples):
        by_label.setdefault(s.label, []).append(i)

    train, val, test = [], [], []
    for label in sorted(by_label):
        idx = np.array(by_label[label])
        rng.shuffle(idx)
        n_l = len(idx)
        n_val = int(round(n_l * ratios[1]))
        n_test = min(int(round(n_l * ratios[2])), n_l - n_val)
        val.extend(idx[:n_val])
        test.extend(idx[n_val : n_val + n_test])
        train.extend(idx[n_val + n_test :])

    return (
        [samples[i] for i in sorted(train)],
        [samples[i] for i in sorted(val)],
        [samples[i] for i in sorted(test)],
    )
