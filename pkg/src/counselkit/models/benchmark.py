"""Benchmark harness: five model kinds by two held-out splits."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from ..errors import CounselkitError
from .data import LabeledSample, split_dataset
from .evaluate import evaluate
from .zoo import MODEL_KINDS, train_model

SPLITS = ("validation", "test")


@dataclass(frozen=True)
class BenchRow:
    model: str
    dataset: str  # validation | test
    accuracy: float | None
    f1: float | None
    n: int
    error: str | None = None


@dataclass
class BenchReport:
    rows: list[BenchRow]
    seed: int
    split_sizes: dict[str, int]
    f1_averaging: str = "weighted"

    def row(self, model: str, dataset: str) -> BenchRow:
        for r in self.rows:
            if r.model == model and r.dataset == dataset:
                return r
        raise KeyError((model, dataset))

    def to_csv_text(self) -> str:
        lines = ["model,dataset,accuracy,f1"]
        for r in self.rows:
            acc = "" if r.accuracy is None else f"{r.accuracy:.6f}"
            f1 = "" if r.f1 is None else f"{r.f1:.6f}"
            lines.append(f"{r.model},{r.dataset},{acc},{f1}")
        return "\n".join(lines) + "\n"

    def to_json_text(self) -> str:
        doc = {
            "version": 1,
            "seed": self.seed,
            "split_sizes": self.split_sizes,
            "f1_averaging": self.f1_averaging,
            "rows": [
                {
                    "model": r.model,
                    "dataset": r.dataset,
                    "accuracy": r.accuracy,
                    "f1": r.f1,
                    "n": r.n,
                    "error": r.error,
                }
                for r in self.rows
            ],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"

    def save(self, csv_path: str | Path, json_path: str | Path) -> None:
        Path(csv_path).write_text(self.to_csv_text(), encoding="utf-8")
        Path(json_path).write_text(self.to_json_text(), encoding="utf-8")


def run_benchmark(
    samples: Sequence[LabeledSample],
    seed: int = 0,
    hyperparams: dict[str, dict] | None = None,
) -> BenchReport:
    """Train all five kinds on the 70% split, score on validation and test.

    A model whose training raises gets failure rows instead of aborting
    the rest of the table.
    """
    train, val, test = split_dataset(samples, seed=seed)
    eval_sets = {"validation": val, "test": test}
    rows: list[BenchRow] = []
    for kind in MODEL_KINDS:
        try:
            model = train_model(
                kind, train, hyperparams=(hyperparams or {}).get(kind), seed=seed
            )
        except CounselkitError as exc:
            rows.extend(
                BenchRow(model=kind, dataset=split, accuracy=None, f1=None,
                         n=len(eval_sets[split]), error=str(exc))
                for split in SPLITS
            )
            continue
        for split in SPLITS:
            accuracy, f1 = evaluate(model, eval_sets[split])
            rows.append(
                BenchRow(model=kind, dataset=split, accuracy=accuracy, f1=f1,
                         n=len(eval_sets[split]))
            )
    return BenchReport(
        rows=rows,
        seed=seed,
        split_sizes={"train": len(train), "validation": len(val), "test": len(test)},
    )
