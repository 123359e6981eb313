"""Domain types for the speech pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..fusion import EmotionDistribution

ROLE_COUNSELOR = "counselor"
ROLE_CLIENT = "client"
ROLE_UNKNOWN = "unknown"


@dataclass
class AudioFrameFeatures:
    """One analysis frame: time, mean-square energy, acoustic embedding."""

    t_ms: int
    energy: float
    embedding: np.ndarray

    def __post_init__(self):
        if self.energy < 0:
            raise ValueError(f"energy must be >= 0, got {self.energy}")
        self.embedding = np.asarray(self.embedding, dtype=float)


@dataclass
class SpeechSegment:
    """A voiced span with its mean acoustic signature."""

    start_ms: int
    end_ms: int
    centroid_embedding: np.ndarray
    cluster_id: int | None = None
    role: str = ROLE_UNKNOWN
    mean_energy: float = 0.0

    def __post_init__(self):
        if self.end_ms <= self.start_ms:
            raise ValueError(f"segment span [{self.start_ms}, {self.end_ms}) is empty")
        self.centroid_embedding = np.asarray(self.centroid_embedding, dtype=float)

    @property
    def duration_ms(self) -> int:
        return self.end_ms - self.start_ms


@dataclass
class CounselorProfile:
    """Enrolled counselor voice signature with a match threshold."""

    counselor_id: str
    reference_embedding: np.ndarray
    match_threshold: float = 0.3

    def __post_init__(self):
        if not 0.0 <= self.match_threshold <= 2.0:
            raise ValueError("match_threshold must be a cosine distance in [0, 2]")
        emb = np.asarray(self.reference_embedding, dtype=float)
        norm = float(np.linalg.norm(emb))
        if norm == 0.0:
            raise ValueError("reference embedding must be non-zero")
        self.reference_embedding = emb / norm


@dataclass(frozen=True)
class SpeechEmotionEvent:
    """Per-interval client speech emotion distribution with quality flag."""

    t_ms: int
    dist: EmotionDistribution
    quality: str  # high | low
