"""Windowed ingestion of raw PPG sample streams.

Produces non-overlapping windows aligned to the first accepted sample,
filling short gaps by zero-order hold and rejecting non-monotone
timestamps. Each completed window yields (window, HRV features, reactivity
sample); a flat window carries the previous reactivity value forward with
a staleness flag.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from ..errors import FlatSignalError, InsufficientBeatsError, RateMismatchWarning
from .hrv import compute_hrv_features
from .peaks import detect_pulse_peaks
from .reactivity import reactivity_envelope
from .types import HrvFeatures, IbiSeries, PpgSample, PpgWindow, ReactivitySample

log = logging.getLogger(__name__)

GAP_FILL_FACTOR = 2  # gaps longer than this many sample periods get ZOH-filled
RATE_TOLERANCE = 0.05


@dataclass
class StreamStats:
    """Bookkeeping for the windowing-conservation invariant."""

    total_in: int = 0
    rejected_non_monotone: int = 0
    windowed: int = 0          # input samples that landed in emitted windows
    filled: int = 0            # synthetic ZOH samples added across all windows
    tail_unemitted: int = 0    # input samples left in an incomplete final window
    per_window_filled: list[int] = field(default_factory=list)


class PpgStreamIngester:
    """Single-consumer windowing pipeline over one sample stream."""

    def __init__(
        self,
        source: Iterable[PpgSample],
        window_len_s: float = 60.0,
        sample_rate_hz: float = 100.0,
    ):
        self.source = source
        self.window_len_ms = int(round(window_len_s * 1000))
        self.window_len_s = window_len_s
        self.rate = sample_rate_hz
        self.period_ms = 1000.0 / sample_rate_hz
        self.stats = StreamStats()
        self._prev_mu: float | None = None
        self._rate_checked = False

    def __iter__(self) -> Iterator[tuple[PpgWindow, HrvFeatures, ReactivitySample]]:
        buf: list[PpgSample] = []
        n_filled = 0
        n_input = 0
        win_start: int | None = None
        last_t: float = -np.inf

        for sample in self.source:
            self.stats.total_in += 1
            if sample.t_ms <= last_t:
                self.stats.rejected_non_monotone += 1
                log.warning("non-monotone timestamp %d rejected (last %s)", sample.t_ms, last_t)
                continue

            if win_start is None:
                win_start = sample.t_ms

            # Emit any windows that close strictly before this sample. A gap
            # spanning whole windows yields nothing for the empty strides.
            while sample.t_ms >= win_start + self.window_len_ms:
                if buf:
                    yield self._emit(win_start, buf, n_filled, n_input)
                    buf, n_filled, n_input = [], 0, 0
                win_start += self.window_len_ms

            # Zero-order-hold fill for gaps beyond the tolerance, within the
            # current window only.
            if buf and sample.t_ms - last_t > GAP_FILL_FACTOR * self.period_ms:
                t_fill = last_t + self.period_ms
                hold = buf[-1].value
                while t_fill < sample.t_ms - self.period_ms / 2:
                    buf.append(PpgSample(t_ms=int(round(t_fill)), value=hold))
                    n_filled += 1
                    t_fill += self.period_ms

            buf.append(sample)
            n_input += 1
            last_t = sample.t_ms

        if win_start is not None and buf:
            span = buf[-1].t_ms - win_start
            if self.window_len_ms - span <= self.period_ms:
                yield self._emit(win_start, buf, n_filled, n_input)
            else:
                self.stats.tail_unemitted = n_input

    def _emit(
        self, win_start: int, buf: list[PpgSample], n_filled: int, n_input: int
    ) -> tuple[PpgWindow, HrvFeatures, ReactivitySample]:
        window = PpgWindow(
            start_ms=win_start,
            end_ms=win_start + self.window_len_ms,
            samples=buf,
            window_len_s=self.window_len_s,
        )
        self.stats.windowed += n_input
        self.stats.filled += n_filled
        self.stats.per_window_filled.append(n_filled)
        self._check_rate(window)

        fill_ratio = n_filled / len(buf) if buf else 0.0
        try:
            peaks = detect_pulse_peaks(window, sample_rate_hz=self.rate)
            ibis = IbiSeries.from_peak_times(peaks)
            features = compute_hrv_features(ibis)
        except InsufficientBeatsError:
            features = HrvFeatures(
                mean_hr_bpm=0.0, mean_ibi_ms=0.0, sdnn_ms=0.0, rmssd_ms=0.0,
                pnn50=0.0, n_beats=len(peaks), artifact_ratio=1.0,
            )
        else:
            if fill_ratio > features.artifact_ratio:
                # Quality summary: the worse of beat rejection and gap fill.
                features = HrvFeatures(
                    mean_hr_bpm=features.mean_hr_bpm,
                    mean_ibi_ms=features.mean_ibi_ms,
                    sdnn_ms=features.sdnn_ms,
                    rmssd_ms=features.rmssd_ms,
                    pnn50=features.pnn50,
                    n_beats=features.n_beats,
                    artifact_ratio=fill_ratio,
                )

        try:
            reactivity = reactivity_envelope(window, sample_rate_hz=self.rate)
            self._prev_mu = reactivity.mu
        except FlatSignalError:
            carried = self._prev_mu if self._prev_mu is not None else 0.0
            reactivity = ReactivitySample(t_ms=window.end_ms, mu=carried, stale=True)

        return window, features, reactivity

    def _check_rate(self, window: PpgWindow) -> None:
        if self._rate_checked or len(window.samples) < 10:
            return
        self._rate_checked = True
        observed = 1000.0 / float(np.median(np.diff(window.times_ms())))
        if abs(observed - self.rate) > RATE_TOLERANCE * self.rate:
            warnings.warn(
                f"declared rate {self.rate} Hz but observed ~{observed:.1f} Hz",
                RateMismatchWarning,
                stacklevel=2,
            )


def ingest_ppg_stream(
    source: Iterable[PpgSample],
    window_len_s: float = 60.0,
    sample_rate_hz: float = 100.0,
) -> PpgStreamIngester:
    """Convenience constructor mirroring the functional call shape."""
    return PpgStreamIngester(source, window_len_s=window_len_s, sample_rate_hz=sample_rate_hz)
