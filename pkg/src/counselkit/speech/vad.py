"""Energy-threshold voice activity detection."""

from __future__ import annotations

import numpy as np

from .types import AudioFrameFeatures, SpeechSegment

NOISE_FLOOR_PERCENTILE = 10.0


def vad_threshold(
    frames: list[AudioFrameFeatures], energy_threshold_factor: float = 3.0
) -> float:
    """Voicing threshold: factor times the 10th-percentile energy."""
    if not frames:
        return 0.0
    energies = np.array([f.energy for f in frames], dtype=float)
    return energy_threshold_factor * float(np.percentile(energies, NOISE_FLOOR_PERCENTILE))


def detect_voice_activity(
    frames: list[AudioFrameFeatures],
    energy_threshold_factor: float = 3.0,
    min_gap_ms: int = 300,
    min_seg_ms: int = 250,
    frame_len_ms: int = 10,
) -> list[SpeechSegment]:
    """Voiced segments: threshold, merge nearby runs, drop short ones.

    A frame is voiced iff its energy strictly exceeds the threshold. Runs
    whose gap is shorter than min_gap_ms merge into one segment; segments
    shorter than min_seg_ms are dropped. Segment centroids average only
    the voiced member frames.
    """
    if not frames:
        return []
    threshold = vad_threshold(frames, energy_threshold_factor)

    # Voiced runs as [start_idx, end_idx] inclusive frame index pairs.
    runs: list[list[int]] = []
    for i, f in enumerate(frames):
        if f.energy > threshold:
            if runs and runs[-1][1] == i - 1:
                runs[-1][1] = i
            else:
                runs.append([i, i])
    if not runs:
        return []

    merged: list[list[int]] = [runs[0]]
    for lo, hi in runs[1:]:
        prev_end_ms = frames[merged[-1][1]].t_ms + frame_len_ms
        if frames[lo].t_ms - prev_end_ms < min_gap_ms:
            merged[-1][1] = hi
        else:
            merged.append([lo, hi])

    segments: list[SpeechSegment] = []
    for lo, hi in merged:
        start = frames[lo].t_ms
        end = frames[hi].t_ms + frame_len_ms
        if end - start < min_seg_ms:
            continue
        voiced = [f for f in frames[lo : hi + 1] if f.energy > threshold]
        centroid = np.mean([f.embedding for f in voiced], axis=0)
        mean_energy = float(np.mean([f.energy for f in voiced]))
        segments.append(
            SpeechSegment(
                start_ms=start,
                end_ms=end,
                centroid_embedding=centroid,
                mean_energy=mean_energy,
            )
        )
    return segments
