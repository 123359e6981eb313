"""Pulse-amplitude reactivity envelope.

The fusion rule consumes a per-window scalar reactivity mean. It is derived
here as the mean peak-to-preceding-trough amplitude of the detected pulses,
after removing the window's linear drift.
"""

from __future__ import annotations

import numpy as np

from ..errors import FlatSignalError
from .peaks import detect_peaks_in_trace
from .types import PpgWindow, ReactivitySample


def _linear_detrend(times_ms: np.ndarray, values: np.ndarray) -> np.ndarray:
    # Closed-form least squares keeps the residual exactly linear in the
    # input values, so uniform amplitude scaling scales mu exactly.
    t = times_ms - times_ms[0]
    t_c = t - np.mean(t)
    denom = float(np.dot(t_c, t_c))
    if denom == 0.0:
        return values - np.mean(values)
    slope = float(np.dot(t_c, values)) / denom
    intercept = float(np.mean(values)) - slope * float(np.mean(t))
    return values - (slope * t + intercept)


def reactivity_envelope(
    window: PpgWindow, sample_rate_hz: float = 100.0
) -> ReactivitySample:
    """Mean (peak - preceding trough) amplitude over detected beats.

    Raises FlatSignalError when the window yields no beats; the stream
    ingester carries the previous value forward with a staleness flag.
    """
    if not window.samples:
        raise FlatSignalError("empty window")

    times = window.times_ms()
    detrended = _linear_detrend(times, window.values())
    # Peaks are located on the detrended trace so the adaptive threshold
    # sees the same signal the amplitudes are read from.
    peak_times = detect_peaks_in_trace(times, detrended, sample_rate_hz=sample_rate_hz)
    if not peak_times:
        raise FlatSignalError("no beats detected in window")

    time_to_idx = {int(t): i for i, t in enumerate(times)}
    peak_idx = [time_to_idx[t] for t in peak_times]

    amplitudes = []
    prev = 0
    for idx in peak_idx:
        trough = float(np.min(detrended[prev:idx + 1]))
        amplitudes.append(float(detrended[idx]) - trough)
        prev = idx
    mu = float(np.mean(amplitudes))
    return ReactivitySample(t_ms=window.end_ms, mu=mu)
