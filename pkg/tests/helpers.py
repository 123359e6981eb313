"""Synthetic signal builders shared across test modules."""

from __future__ import annotations

import numpy as np

from counselkit.fusion import EmotionDistribution
from counselkit.ppg.types import HrvFeatures, PpgSample, ReactivitySample

SAMPLE_PERIOD_MS = 10  # 100 Hz grid


def pulse_trace(
    beat_times_ms: list[int],
    dur_ms: int,
    amp: float = 1.0,
    sigma_ms: float = 40.0,
    drift_per_ms: float = 0.0,
    baseline: float = 0.0,
    start_ms: int = 0,
) -> list[PpgSample]:
    """Sum-of-Gaussians pulse train on the 100 Hz sample grid.

    Beat times must sit on the grid so each pulse has a unique strict
    local maximum at its center sample.
    """
    t = np.arange(start_ms, start_ms + dur_ms, SAMPLE_PERIOD_MS, dtype=float)
    v = np.full_like(t, baseline)
    for b in beat_times_ms:
        v += amp * np.exp(-((t - b) ** 2) / (2.0 * sigma_ms**2))
    v += drift_per_ms * (t - start_ms)
    return [PpgSample(t_ms=int(ti), value=float(vi)) for ti, vi in zip(t, v)]


def beats_at_rate(bpm: float, dur_ms: int, start_ms: int = 0) -> list[int]:
    """Beat timestamps at a constant rate, snapped to the sample grid."""
    ibi = 60000.0 / bpm
    beats = []
    k = 0
    while True:
        b = start_ms + int(round(k * ibi / SAMPLE_PERIOD_MS)) * SAMPLE_PERIOD_MS
        if b >= start_ms + dur_ms:
            break
        beats.append(b)
        k += 1
    return beats


def beats_from_ibis(ibis_ms: list[float], start_ms: int = 0) -> list[int]:
    """Cumulative beat times from an IBI sequence, snapped to the grid."""
    beats = [start_ms]
    t = float(start_ms)
    for ibi in ibis_ms:
        t += ibi
        beats.append(int(round(t / SAMPLE_PERIOD_MS)) * SAMPLE_PERIOD_MS)
    return beats


def random_dist(rng: np.random.Generator) -> EmotionDistribution:
    p = rng.random(3) + 1e-6
    p /= p.sum()
    return EmotionDistribution.from_sequence(p)


def some_hrv(rng: np.random.Generator) -> HrvFeatures:
    mean_ibi = float(rng.uniform(400.0, 1200.0))
    return HrvFeatures(
        mean_hr_bpm=60_000.0 / mean_ibi,
        mean_ibi_ms=mean_ibi,
        sdnn_ms=float(rng.uniform(5.0, 80.0)),
        rmssd_ms=float(rng.uniform(5.0, 80.0)),
        pnn50=float(rng.uniform(0.0, 1.0)),
        n_beats=int(rng.integers(10, 90)),
        artifact_ratio=float(rng.uniform(0.0, 0.5)),
    )


def drive_random_session(runtime, rng: np.random.Generator, n_inputs: int = 40) -> None:
    """Feed a session a plausible random input mix, then end it.

    Per-kind timestamps are non-decreasing (the runtime's ordering rule);
    speech and ppg clocks advance independently. Some alerts get acked
    along the way to confirm acks never perturb the update stream.
    """
    modality = runtime.config.modality
    kinds = {"speech_only": ["speech"], "ppg_only": ["ppg"],
             "multimodal": ["speech", "ppg"]}[modality]
    clocks = {k: 0 for k in kinds}
    for _ in range(n_inputs):
        kind = kinds[int(rng.integers(0, len(kinds)))]
        clocks[kind] += int(rng.integers(5_000, 70_000))
        t = clocks[kind]
        if kind == "speech":
            runtime.ingest_speech(
                t, random_dist(rng),
                "high" if rng.random() < 0.7 else "low",
            )
        else:
            reactivity = None
            if rng.random() < 0.8:
                reactivity = ReactivitySample(
                    t_ms=t, mu=float(rng.uniform(0.0, 4.0)),
                    stale=bool(rng.random() < 0.1),
                )
            dist = random_dist(rng) if rng.random() < 0.7 else None
            hrv = some_hrv(rng) if rng.random() < 0.5 else None
            runtime.ingest_ppg(t, hrv=hrv, reactivity=reactivity, dist=dist)
        if rng.random() < 0.1:
            pending = [a for a in runtime.alerts() if not a.acknowledged]
            if pending:
                runtime.ack_alert(pending[0].alert_id)
    runtime.end_session()
