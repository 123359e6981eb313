"""Per-interval client speech emotion events from a pluggable provider."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from ..fusion import EmotionDistribution
from .types import ROLE_CLIENT, SpeechEmotionEvent, SpeechSegment

EmotionProvider = Callable[[SpeechSegment], EmotionDistribution]

QUALITY_COVERAGE_MIN = 0.2
UNIFORM = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)


class AnnotationProvider:
    """Reference stub provider: per-segment distributions from a JSONL file.

    Each row {"seg_start_ms", "seg_end_ms", "p"} annotates one span; a
    segment takes the row with the largest time overlap, renormalized.
    Segments with no annotated overlap get the uniform distribution.
    """

    def __init__(self, path: str | Path):
        self.rows: list[tuple[int, int, tuple[float, float, float]]] = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                p = np.asarray(obj["p"], dtype=float)
                if p.shape != (3,) or p.min() < 0 or p.sum() <= 0:
                    raise ValueError(f"bad annotation distribution {obj['p']}")
                p = p / p.sum()
                self.rows.append(
                    (int(obj["seg_start_ms"]), int(obj["seg_end_ms"]), tuple(p))
                )

    def __call__(self, segment: SpeechSegment) -> EmotionDistribution:
        best, best_overlap = UNIFORM, 0
        for start, end, p in self.rows:
            overlap = min(end, segment.end_ms) - max(start, segment.start_ms)
            if overlap > best_overlap:
                best, best_overlap = p, overlap
        return EmotionDistribution.from_sequence(best)


def emit_speech_emotion(
    segments: Sequence[SpeechSegment],
    source: EmotionProvider,
    interval_ms: int = 60_000,
    energy_threshold: float = 0.0,
    session_start_ms: int = 0,
) -> list[SpeechEmotionEvent]:
    """Duration-weighted per-interval aggregation of client segments.

    Intervals without client speech emit nothing (the fusion engine then
    falls back to PPG-only). Quality is high iff voiced coverage of the
    interval is at least 20% and the weighted mean energy clears the
    voicing threshold.
    """
    client = [s for s in segments if s.role == ROLE_CLIENT]
    if not client:
        return []

    first = min(s.start_ms for s in client)
    last = max(s.end_ms for s in client)
    k_lo = (first - session_start_ms) // interval_ms
    k_hi = (last - 1 - session_start_ms) // interval_ms

    events: list[SpeechEmotionEvent] = []
    for k in range(k_lo, k_hi + 1):
        lo = session_start_ms + k * interval_ms
        hi = lo + interval_ms
        weights: list[float] = []
        dists: list[np.ndarray] = []
        energies: list[float] = []
        for s in client:
            overlap = min(hi, s.end_ms) - max(lo, s.start_ms)
            if overlap <= 0:
                continue
            weights.append(float(overlap))
            dists.append(np.asarray(source(s).as_tuple()))
            energies.append(s.mean_energy)
        if not weights:
            continue
        w = np.asarray(weights)
        mixed = np.einsum("i,ij->j", w, np.vstack(dists))
        mixed = mixed / mixed.sum()
        coverage = float(w.sum()) / interval_ms
        mean_energy = float(np.dot(w, energies) / w.sum())
        quality = (
            "high"
            if coverage >= QUALITY_COVERAGE_MIN and mean_energy > energy_threshold
            else "low"
        )
        events.append(
            SpeechEmotionEvent(
                t_ms=hi,
                dist=EmotionDistribution.from_sequence(mixed),
                quality=quality,
            )
        )
    return events
