"""Reactivity envelope: detrending, amplitude scaling, carry-over."""

from __future__ import annotations

import numpy as np
import pytest

from counselkit.errors import FlatSignalError
from counselkit.ppg.reactivity import reactivity_envelope
from counselkit.ppg.types import PpgSample, PpgWindow

from helpers import SAMPLE_PERIOD_MS, beats_from_ibis, pulse_trace


def window_of(samples, start_ms, end_ms):
    return PpgWindow(
        start_ms=start_ms,
        end_ms=end_ms,
        samples=samples,
        window_len_s=(end_ms - start_ms) / 1000.0,
    )


def oracle_envelope(samples, peak_times):
    """Hand recomputation: explicit detrend, then peak minus preceding trough."""
    t = np.array([s.t_ms for s in samples], dtype=float)
    v = np.array([s.value for s in samples], dtype=float)
    t0 = t - t[0]
    coeffs = np.polyfit(t0, v, 1)
    resid = v - np.polyval(coeffs, t0)
    idx = {int(ti): i for i, ti in enumerate(t)}
    amps = []
    prev = 0
    for pt in peak_times:
        i = idx[pt]
        amps.append(resid[i] - resid[prev : i + 1].min())
        prev = i
    return float(np.mean(amps))


def two_windows(amp2: float = 1.0, drift: float = 0.0):
    beats = beats_from_ibis([800] * 149)  # covers 120 s
    w1_samples = pulse_trace(
        [b for b in beats if b < 60_000], dur_ms=60_000, drift_per_ms=drift
    )
    w2_beats = [b for b in beats if b >= 60_000]
    w2_samples = pulse_trace(
        w2_beats, dur_ms=60_000, amp=amp2, drift_per_ms=drift, start_ms=60_000
    )
    return window_of(w1_samples, 0, 60_000), window_of(w2_samples, 60_000, 120_000)


def test_constant_train_stable_across_windows():
    w1, w2 = two_windows()
    r1 = reactivity_envelope(w1)
    r2 = reactivity_envelope(w2)
    assert r1.mu > 0
    assert r2.mu == pytest.approx(r1.mu, rel=1e-9)
    assert r1.t_ms == 60_000 and r2.t_ms == 120_000
    assert not r1.stale and not r2.stale


def test_amplitude_doubling_doubles_mu_exactly():
    w1, _ = two_windows()
    doubled = window_of(
        [PpgSample(t_ms=s.t_ms, value=2.0 * s.value) for s in w1.samples],
        w1.start_ms,
        w1.end_ms,
    )
    r1 = reactivity_envelope(w1)
    r2 = reactivity_envelope(doubled)
    assert r2.mu == 2.0 * r1.mu


def test_linear_drift_does_not_move_mu():
    flat, _ = two_windows()
    drifty, _ = two_windows(drift=5e-5)
    r_flat = reactivity_envelope(flat)
    r_drift = reactivity_envelope(drifty)
    assert r_drift.mu == pytest.approx(r_flat.mu, rel=1e-6)


def test_matches_hand_recomputed_envelope():
    from counselkit.ppg.peaks import detect_peaks_in_trace
    from counselkit.ppg.reactivity import _linear_detrend

    w1, _ = two_windows(drift=2e-5)
    r = reactivity_envelope(w1)
    t = w1.times_ms()
    detrended = _linear_detrend(t, w1.values())
    peaks = detect_peaks_in_trace(t, detrended)
    assert r.mu == pytest.approx(oracle_envelope(w1.samples, peaks), rel=1e-9)


def test_empty_window_raises_flat_signal():
    with pytest.raises(FlatSignalError):
        reactivity_envelope(window_of([], 0, 60_000))


def test_flat_window_raises_flat_signal():
    samples = [
        PpgSample(t_ms=i * SAMPLE_PERIOD_MS, value=3.3) for i in range(6000)
    ]
    with pytest.raises(FlatSignalError):
        reactivity_envelope(window_of(samples, 0, 60_000))


def test_mu_is_non_negative_under_noise():
    rng = np.random.default_rng(5)
    beats = beats_from_ibis([800] * 70)
    base = pulse_trace(beats, dur_ms=60_000)
    noisy = [
        PpgSample(t_ms=s.t_ms, value=s.value + float(rng.normal(0, 0.05)))
        for s in base
    ]
    r = reactivity_envelope(window_of(noisy, 0, 60_000))
    assert np.isfinite(r.mu)
    assert r.mu >= 0.0
