"""Windowed stream ingestion: window count, gap fill, conservation."""

from __future__ import annotations

import json

import numpy as np
import pytest

from counselkit.errors import RateMismatchWarning
from counselkit.ppg.stream import ingest_ppg_stream
from counselkit.ppg.types import PpgSample

from helpers import SAMPLE_PERIOD_MS, beats_at_rate, beats_from_ibis, pulse_trace


def test_180s_stream_yields_exactly_three_windows():
    beats = beats_at_rate(75.0, 180_000)
    samples = pulse_trace(beats, dur_ms=180_000)
    out = list(ingest_ppg_stream(iter(samples), window_len_s=60.0))
    assert len(out) == 3
    starts = [w.start_ms for w, _, _ in out]
    ends = [w.end_ms for w, _, _ in out]
    assert starts == [0, 60_000, 120_000]
    assert ends == [60_000, 120_000, 180_000]


def test_windows_align_to_first_accepted_sample():
    beats = beats_at_rate(75.0, 120_000, start_ms=5_000)
    samples = pulse_trace(beats, dur_ms=120_000, start_ms=5_000)
    out = list(ingest_ppg_stream(iter(samples), window_len_s=60.0))
    assert [w.start_ms for w, _, _ in out] == [5_000, 65_000]


def test_gap_fill_raises_artifact_ratio():
    beats = beats_at_rate(75.0, 60_000)
    samples = [s for s in pulse_trace(beats, dur_ms=60_000)
               if not (20_000 <= s.t_ms < 20_500)]
    ingester = ingest_ppg_stream(iter(samples), window_len_s=60.0)
    out = list(ingester)
    assert len(out) == 1
    _, feats, _ = out[0]
    assert feats.artifact_ratio > 0.0
    assert ingester.stats.filled > 0
    # Filled samples are synthetic: window holds input + filled.
    w = out[0][0]
    assert len(w.samples) == ingester.stats.windowed + ingester.stats.filled


def test_small_jitter_is_not_filled():
    samples = [PpgSample(t_ms=i * SAMPLE_PERIOD_MS, value=float(i % 7)) for i in range(6000)]
    ingester = ingest_ppg_stream(iter(samples), window_len_s=60.0)
    list(ingester)
    assert ingester.stats.filled == 0


def test_decreasing_timestamp_rejected_stream_continues():
    beats = beats_at_rate(75.0, 60_000)
    samples = pulse_trace(beats, dur_ms=60_000)
    glitch = samples[:3000] + [PpgSample(t_ms=samples[2999].t_ms - 50, value=0.5)] + samples[3000:]
    ingester = ingest_ppg_stream(iter(glitch), window_len_s=60.0)
    out = list(ingester)
    assert len(out) == 1
    assert ingester.stats.rejected_non_monotone == 1
    assert ingester.stats.total_in == len(glitch)


def test_windowing_conservation():
    rng = np.random.default_rng(11)
    samples: list[PpgSample] = []
    t = 0
    for _ in range(20_000):
        samples.append(PpgSample(t_ms=t, value=float(rng.normal())))
        # Occasional long gaps and occasional duplicate (non-monotone) times.
        if rng.random() < 0.002:
            t += int(rng.integers(500, 3000))
        else:
            t += SAMPLE_PERIOD_MS
        if rng.random() < 0.001:
            samples.append(PpgSample(t_ms=t - 40, value=0.0))
    ingester = ingest_ppg_stream(iter(samples), window_len_s=60.0)
    out = list(ingester)
    st = ingester.stats
    assert st.total_in == len(samples)
    assert st.windowed + st.rejected_non_monotone + st.tail_unemitted == st.total_in
    input_in_windows = sum(len(w.samples) for w, _, _ in out) - st.filled
    assert input_in_windows == st.windowed
    assert len(st.per_window_filled) == len(out)


def test_rate_mismatch_warns():
    samples = [PpgSample(t_ms=i * 20, value=float(i % 5)) for i in range(6000)]
    with pytest.warns(RateMismatchWarning):
        list(ingest_ppg_stream(iter(samples), window_len_s=60.0, sample_rate_hz=100.0))


def test_flat_second_window_carries_mu_with_stale_flag():
    beats = [b for b in beats_at_rate(75.0, 60_000)]
    active = pulse_trace(beats, dur_ms=60_000)
    flat = [PpgSample(t_ms=60_000 + i * SAMPLE_PERIOD_MS, value=0.0) for i in range(6000)]
    out = list(ingest_ppg_stream(iter(active + flat), window_len_s=60.0))
    assert len(out) == 2
    r1, r2 = out[0][2], out[1][2]
    assert not r1.stale and r1.mu > 0
    assert r2.stale
    assert r2.mu == r1.mu
    assert r2.t_ms == 120_000


def test_identical_streams_give_byte_identical_features():
    rng = np.random.default_rng(3)
    ibis = rng.choice([700, 750, 800, 850], size=220).tolist()
    beats = [b for b in beats_from_ibis(ibis) if b < 180_000]
    samples = pulse_trace(beats, dur_ms=180_000)

    def run():
        rows = []
        for w, feats, react in ingest_ppg_stream(iter(samples), window_len_s=60.0):
            rows.append({"w": [w.start_ms, w.end_ms], "f": feats.to_dict(), "r": react.to_dict()})
        return json.dumps(rows, sort_keys=True)

    assert run() == run()


@pytest.mark.parametrize("bpm", [40, 55, 75, 100, 130, 160, 180])
def test_peak_rate_accuracy_within_one_bpm(bpm):
    beats = beats_at_rate(float(bpm), 60_000)
    samples = pulse_trace(beats, dur_ms=60_000, sigma_ms=min(40.0, 15000.0 / bpm))
    out = list(ingest_ppg_stream(iter(samples), window_len_s=60.0))
    assert len(out) == 1
    feats = out[0][1]
    assert abs(feats.mean_hr_bpm - bpm) <= 1.0
