"""Pulse-signal processing: peak detection, HRV features, reactivity."""

from .hrv import compute_hrv_features
from .io import read_ppg, read_ppg_csv, read_ppg_jsonl, write_ppg_csv, write_ppg_jsonl
from .peaks import adaptive_threshold, detect_peaks_in_trace, detect_pulse_peaks
from .reactivity import reactivity_envelope
from .stream import PpgStreamIngester, StreamStats, ingest_ppg_stream
from .types import (
    IBI_MAX_MS,
    IBI_MIN_MS,
    HrvFeatures,
    IbiSeries,
    PpgSample,
    PpgWindow,
    ReactivitySample,
)

__all__ = [
    "IBI_MAX_MS",
    "IBI_MIN_MS",
    "HrvFeatures",
    "IbiSeries",
    "PpgSample",
    "PpgWindow",
    "PpgStreamIngester",
    "ReactivitySample",
    "StreamStats",
    "adaptive_threshold",
    "compute_hrv_features",
    "detect_peaks_in_trace",
    "detect_pulse_peaks",
    "ingest_ppg_stream",
    "reactivity_envelope",
    "read_ppg",
    "read_ppg_csv",
    "read_ppg_jsonl",
    "write_ppg_csv",
    "write_ppg_jsonl",
]
