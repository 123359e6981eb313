"""Classifier zoo, datasets, evaluation, and the benchmark harness."""

from .benchmark import BenchReport, BenchRow, run_benchmark
from .data import (
    LabeledSample,
    canonical_label_set,
    read_dataset_jsonl,
    split_dataset,
    write_dataset_jsonl,
)
from .evaluate import accuracy_and_weighted_f1, evaluate
from .synthetic import (
    BlockLabel,
    ParticipantStream,
    extract_features,
    generate_synthetic_elicitation,
)
from .zoo import (
    MODEL_KINDS,
    TrainedModel,
    as_emotion_distribution,
    load_model,
    predict_distribution,
    predict_label,
    save_model,
    train_model,
)

__all__ = [
    "BenchReport",
    "BenchRow",
    "BlockLabel",
    "LabeledSample",
    "MODEL_KINDS",
    "ParticipantStream",
    "TrainedModel",
    "accuracy_and_weighted_f1",
    "as_emotion_distribution",
    "canonical_label_set",
    "evaluate",
    "extract_features",
    "generate_synthetic_elicitation",
    "load_model",
    "predict_distribution",
    "predict_label",
    "read_dataset_jsonl",
    "run_benchmark",
    "save_model",
    "split_dataset",
    "train_model",
    "write_dataset_jsonl",
]
