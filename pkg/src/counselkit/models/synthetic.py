"""Synthetic elicitation corpus: labeled PPG pulse trains per participant.

Alternating low-variability/high-arousal blocks ("sad") and
high-variability/low-arousal blocks ("relax"), with per-participant
Gaussian offsets. Streams are raw sample trains so feature extraction
exercises the whole signal path rather than shortcutting to vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..ppg.stream import ingest_ppg_stream
from ..ppg.types import PpgSample
from .data import LabeledSample

SAMPLE_PERIOD_MS = 10  # 100 Hz
PULSE_SIGMA_MS = 40.0

# Block targets: (mean HR bpm, RMSSD ms).
BLOCK_PROFILES = {"sad": (85.0, 20.0), "relax": (65.0, 60.0)}
HR_OFFSET_STD = 3.0
RMSSD_OFFSET_STD = 5.0


@dataclass(frozen=True)
class BlockLabel:
    start_ms: int
    end_ms: int
    label: str


@dataclass
class ParticipantStream:
    participant: int
    samples: list[PpgSample]
    blocks: list[BlockLabel]


def _render_pulse_train(beat_times_ms: list[int], dur_ms: int) -> list[PpgSample]:
    t = np.arange(0, dur_ms, SAMPLE_PERIOD_MS, dtype=float)
    v = np.zeros_like(t)
    half = int(5 * PULSE_SIGMA_MS / SAMPLE_PERIOD_MS)
    for b in beat_times_ms:
        center = b // SAMPLE_PERIOD_MS
        lo = max(0, center - half)
        hi = min(len(t), center + half + 1)
        v[lo:hi] += np.exp(-((t[lo:hi] - b) ** 2) / (2.0 * PULSE_SIGMA_MS**2))
    return [PpgSample(t_ms=int(ti), value=float(vi)) for ti, vi in zip(t, v)]


def generate_synthetic_elicitation(
    n_participants: int = 30,
    seed: int = 0,
    n_blocks: int = 6,
    block_len_s: float = 60.0,
) -> list[ParticipantStream]:
    """Seed-deterministic labeled streams, one per participant."""
    if n_participants < 1:
        raise ValueError("n_participants must be >= 1")
    rng = np.random.default_rng(seed)
    block_len_ms = int(round(block_len_s * 1000))
    streams: list[ParticipantStream] = []

    for pid in range(n_participants):
        hr_offset = float(rng.normal(0.0, HR_OFFSET_STD))
        rmssd_offset = float(rng.normal(0.0, RMSSD_OFFSET_STD))

        beats: list[int] = []
        blocks: list[BlockLabel] = []
        cursor = 0.0
        for b in range(n_blocks):
            label = "sad" if b % 2 == 0 else "relax"
            hr_center, rmssd_center = BLOCK_PROFILES[label]
            mean_ibi = 60_000.0 / (hr_center + hr_offset)
            # Successive IBI differences of i.i.d. jitter have RMS
            # sqrt(2) * sigma, so sigma = target / sqrt(2).
            sigma = max(1.0, (rmssd_center + rmssd_offset) / np.sqrt(2.0))
            block_end = (b + 1) * block_len_ms
            blocks.append(BlockLabel(start_ms=b * block_len_ms, end_ms=block_end, label=label))
            while cursor < block_end:
                grid_t = int(round(cursor / SAMPLE_PERIOD_MS)) * SAMPLE_PERIOD_MS
                if grid_t < block_end:
                    beats.append(grid_t)
                ibi = float(np.clip(rng.normal(mean_ibi, sigma), 400.0, 1500.0))
                cursor += ibi

        samples = _render_pulse_train(beats, n_blocks * block_len_ms)
        streams.append(ParticipantStream(participant=pid, samples=samples, blocks=blocks))
    return streams


def extract_features(
    streams: list[ParticipantStream], window_len_s: float = 60.0
) -> list[LabeledSample]:
    """Windowed HRV vectors labeled by the block containing the window."""
    dataset: list[LabeledSample] = []
    for stream in streams:
        label_at = {
            (b.start_ms, b.end_ms): b.label for b in stream.blocks
        }
        for window, features, _ in ingest_ppg_stream(
            iter(stream.samples), window_len_s=window_len_s
        ):
            mid = (window.start_ms + window.end_ms) // 2
            label = next(
                (lbl for (lo, hi), lbl in label_at.items() if lo <= mid < hi), None
            )
            if label is None:
                continue
            dataset.append(
                LabeledSample(
                    features=features.to_vector(),
                    label=label,
                    participant=stream.participant,
                )
            )
    return dataset
