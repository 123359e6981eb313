"""Reference frame-feature extractor for tests and offline runs.

Produces per-frame mean-square energy plus a 13-dimensional embedding
(log energy and 12 spectral-band log powers). Any acoustic front end that
emits the same frame schema can replace it.
"""

from __future__ import annotations

import numpy as np

from .types import AudioFrameFeatures

N_BANDS = 12
LOG_FLOOR = 1e-12


def extract_frame_features(
    signal: np.ndarray,
    rate_hz: float,
    frame_ms: int = 25,
    hop_ms: int = 10,
) -> list[AudioFrameFeatures]:
    """Sliding-frame energy and band-power embeddings over a waveform."""
    x = np.asarray(signal, dtype=float)
    frame_len = int(round(frame_ms * rate_hz / 1000.0))
    hop = int(round(hop_ms * rate_hz / 1000.0))
    if frame_len < 2 or hop < 1:
        raise ValueError("frame/hop too short for the sample rate")

    frames: list[AudioFrameFeatures] = []
    for start in range(0, len(x) - frame_len + 1, hop):
        seg = x[start : start + frame_len]
        energy = float(np.mean(seg**2))
        power = np.abs(np.fft.rfft(seg)) ** 2
        bands = np.array_split(power[1:], N_BANDS)
        band_feats = [float(np.log(np.mean(b) + LOG_FLOOR)) for b in bands]
        embedding = np.array([np.log(energy + LOG_FLOOR)] + band_feats)
        frames.append(
            AudioFrameFeatures(
                t_ms=int(round(start / rate_hz * 1000.0)),
                energy=energy,
                embedding=embedding,
            )
        )
    return frames
