"""Domain types for the PPG signal path."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Physiological gate for inter-beat intervals; beats outside are artifacts.
IBI_MIN_MS = 300.0
IBI_MAX_MS = 2000.0


@dataclass(frozen=True)
class PpgSample:
    """One raw optical sample: milliseconds since session start, amplitude."""

    t_ms: int
    value: float


@dataclass
class PpgWindow:
    """A fixed-length, non-overlapping analysis window of raw samples."""

    start_ms: int
    end_ms: int
    samples: list[PpgSample]
    window_len_s: float = 60.0

    def values(self) -> np.ndarray:
        return np.array([s.value for s in self.samples], dtype=float)

    def times_ms(self) -> np.ndarray:
        return np.array([s.t_ms for s in self.samples], dtype=float)


@dataclass
class IbiSeries:
    """Ordered inter-beat intervals in ms, after the [300, 2000] ms gate."""

    ibis_ms: np.ndarray
    n_rejected: int = 0

    @classmethod
    def from_peak_times(cls, peak_times_ms: list[int] | np.ndarray) -> "IbiSeries":
        """Differences of consecutive peak times, dropping out-of-range beats."""
        diffs = np.diff(np.asarray(peak_times_ms, dtype=float))
        keep = (diffs >= IBI_MIN_MS) & (diffs <= IBI_MAX_MS)
        return cls(ibis_ms=diffs[keep], n_rejected=int((~keep).sum()))

    def __len__(self) -> int:
        return len(self.ibis_ms)


@dataclass(frozen=True)
class HrvFeatures:
    """Time-domain HR/HRV summary of one window."""

    mean_hr_bpm: float
    mean_ibi_ms: float
    sdnn_ms: float
    rmssd_ms: float
    pnn50: float
    n_beats: int
    artifact_ratio: float

    # Fixed flattening order for classifier feature vectors.
    VECTOR_FIELDS = ("mean_hr_bpm", "mean_ibi_ms", "sdnn_ms", "rmssd_ms", "pnn50")

    def to_vector(self) -> np.ndarray:
        return np.array([getattr(self, f) for f in self.VECTOR_FIELDS], dtype=float)

    def to_dict(self) -> dict:
        return {
            "mean_hr_bpm": self.mean_hr_bpm,
            "mean_ibi_ms": self.mean_ibi_ms,
            "sdnn_ms": self.sdnn_ms,
            "rmssd_ms": self.rmssd_ms,
            "pnn50": self.pnn50,
            "n_beats": self.n_beats,
            "artifact_ratio": self.artifact_ratio,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HrvFeatures":
        return cls(
            mean_hr_bpm=float(d["mean_hr_bpm"]),
            mean_ibi_ms=float(d["mean_ibi_ms"]),
            sdnn_ms=float(d["sdnn_ms"]),
            rmssd_ms=float(d["rmssd_ms"]),
            pnn50=float(d["pnn50"]),
            n_beats=int(d["n_beats"]),
            artifact_ratio=float(d["artifact_ratio"]),
        )


@dataclass(frozen=True)
class ReactivitySample:
    """Mean pulse-amplitude envelope over a window (the reactivity proxy)."""

    t_ms: int
    mu: float
    stale: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu >= 0.0):
            raise ValueError(f"mu must be finite and non-negative, got {self.mu}")

    def to_dict(self) -> dict:
        return {"t_ms": self.t_ms, "mu": self.mu, "stale": self.stale}

    @classmethod
    def from_dict(cls, d: dict) -> "ReactivitySample":
        return cls(t_ms=int(d["t_ms"]), mu=float(d["mu"]), stale=bool(d.get("stale", False)))
