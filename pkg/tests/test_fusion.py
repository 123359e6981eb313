"""Fusion rules against independent oracles and rule-table enumeration."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from counselkit.errors import InvalidDistributionError, NegativeMuError
from counselkit.fusion import (
    COLORS,
    LABELS,
    VALENCE,
    Alert,
    EmotionDistribution,
    EmotionUpdate,
    FusionConfig,
    FusionState,
    TickInputs,
    compute_trend,
    evaluate_alerts,
    fuse,
    ppg_only_update,
    speech_only_decision,
    tick,
)
from counselkit.ppg.types import ReactivitySample


def dist(p_sad, p_neutral, p_positive):
    return EmotionDistribution(p_sad=p_sad, p_neutral=p_neutral, p_positive=p_positive)


def update_with(label, t_ms=0, mode="speech_only", trend="flat", s_p=0.0):
    return EmotionUpdate(
        t_ms=t_ms, mode=mode, label=label, valence=VALENCE[label], trend=trend, s_p=s_p
    )


# --- speech-only decision -----------------------------------------------------

def test_neutral_argmax_with_any_sadness_overrides_to_sad():
    assert speech_only_decision(dist(0.10, 0.60, 0.30), epsilon=0.0) == "sad"


def test_neutral_argmax_with_zero_sadness_stays_neutral():
    assert speech_only_decision(dist(0.00, 0.60, 0.40), epsilon=0.0) == "neutral"


def test_positive_argmax_never_overridden():
    assert speech_only_decision(dist(0.20, 0.30, 0.50)) == "positive"


def test_rule_table_enumeration():
    def oracle(p, eps):
        vals = {"sad": p[0], "neutral": p[1], "positive": p[2]}
        best = max(vals.values())
        for name in ("sad", "neutral", "positive"):
            if vals[name] == best:
                arg = name
                break
        if arg == "neutral" and p[0] > eps:
            return "sad"
        return arg

    grid = [i / 10 for i in range(11)]
    for a in grid:
        for b in grid:
            c = round(1.0 - a - b, 10)
            if c < 0:
                continue
            for eps in (0.0, 0.15):
                p = (a, b, c)
                assert speech_only_decision(dist(*p), eps) == oracle(p, eps), (p, eps)


def test_argmax_ties_prefer_sad_then_neutral():
    assert dist(0.4, 0.4, 0.2).argmax_label() == "sad"
    assert dist(0.2, 0.4, 0.4).argmax_label() == "neutral"
    third = 1.0 / 3.0
    assert dist(third, third, third).argmax_label() == "sad"


def test_invalid_distribution_rejected():
    with pytest.raises(InvalidDistributionError):
        dist(0.5, 0.2, 0.2)
    with pytest.raises(InvalidDistributionError):
        dist(-0.1, 0.6, 0.5)
    with pytest.raises(InvalidDistributionError):
        EmotionDistribution.from_sequence([0.5, 0.5])


@settings(max_examples=300, deadline=None)
@given(
    st.tuples(
        st.floats(0, 1, allow_nan=False),
        st.floats(0, 1, allow_nan=False),
        st.floats(0, 1, allow_nan=False),
    ).filter(lambda p: sum(p) > 1e-6),
    st.floats(0, 0.5),
)
def test_override_soundness(raw, eps):
    total = sum(raw)
    p = dist(raw[0] / total, raw[1] / total, raw[2] / total)
    label = speech_only_decision(p, eps)
    if label == "neutral":
        assert p.argmax_label() == "neutral"
        assert p.p_sad <= eps


# --- ppg-only score updates ----------------------------------------------------

def test_positive_reactivity_jump_raises_score():
    state = FusionState(s_p=0.0, prev_mu=1.0, m=1.0)
    new, label = ppg_only_update(state, ReactivitySample(t_ms=0, mu=2.0))
    assert new.s_p == pytest.approx(0.5)
    assert label == "neutral"


def test_score_above_threshold_labels_positive():
    state = FusionState(s_p=1.2, prev_mu=1.0)
    new, label = ppg_only_update(state, ReactivitySample(t_ms=0, mu=1.0))
    assert new.s_p == 1.2
    assert label == "positive"


def test_unchanged_reactivity_leaves_score():
    state = FusionState(s_p=-0.4, prev_mu=0.8)
    new, label = ppg_only_update(state, ReactivitySample(t_ms=0, mu=0.8))
    assert new.s_p == -0.4
    assert label == "neutral"


def test_first_sample_only_stores_mu():
    state = FusionState(s_p=0.0)
    new, label = ppg_only_update(state, ReactivitySample(t_ms=0, mu=3.0))
    assert new.prev_mu == 3.0
    assert new.s_p == 0.0
    assert label == "neutral"


def test_both_zero_mu_is_no_change():
    state = FusionState(s_p=0.7, prev_mu=0.0)
    new, label = ppg_only_update(state, ReactivitySample(t_ms=0, mu=0.0))
    assert new.s_p == 0.7
    assert label == "neutral"


def test_negative_mu_rejected():
    with pytest.raises(NegativeMuError):
        ppg_only_update(FusionState(prev_mu=1.0), -0.5)


def test_label_thresholds_are_strict():
    cfg = FusionConfig()
    for s_p, expect in [
        (1.0, "neutral"),
        (np.nextafter(1.0, 2.0), "positive"),
        (-1.0, "neutral"),
        (np.nextafter(-1.0, -2.0), "sad"),
    ]:
        state = FusionState(s_p=float(s_p), prev_mu=1.0)
        _, label = ppg_only_update(state, ReactivitySample(t_ms=0, mu=1.0), cfg)
        assert label == expect, s_p


def oracle_resimulate(trace, lam=0.5, theta=0.3, delta1=1.0, m=0.5):
    """Brute-force replay of the score rules, coded independently."""
    s_p, prev = 0.0, None
    out = []
    for mu in trace:
        if prev is None:
            label = "neutral"
        else:
            top = mu if mu > prev else prev
            d = 0.0 if top == 0.0 else (mu - prev) / top
            if d > theta:
                s_p = s_p + lam * m
            elif d < -theta:
                s_p = s_p - lam * (1.0 - m)
            if s_p > delta1:
                label = "positive"
            elif s_p < -delta1:
                label = "sad"
            else:
                label = "neutral"
        prev = mu
        out.append((s_p, label))
    return out


def test_score_replay_matches_brute_force_oracle():
    rng = np.random.default_rng(9)
    for m in (0.0, 0.25, 0.5, 1.0):
        trace = [float(x) for x in rng.uniform(0.0, 3.0, size=200)]
        trace[10] = 0.0
        trace[11] = 0.0
        cfg = FusionConfig()
        state = FusionState(m=m)
        expected = oracle_resimulate(trace, m=m)
        for mu, (want_sp, want_label) in zip(trace, expected):
            state, label = ppg_only_update(state, ReactivitySample(t_ms=0, mu=mu), cfg)
            assert abs(state.s_p - want_sp) <= 1e-12
            assert label == want_label


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(0.0, 10.0, allow_nan=False), min_size=1, max_size=50),
    st.floats(0.0, 1.0),
)
def test_score_magnitude_bound(trace, m):
    cfg = FusionConfig()
    state = FusionState(m=m)
    for n, mu in enumerate(trace, start=1):
        state, _ = ppg_only_update(state, ReactivitySample(t_ms=0, mu=mu), cfg)
        assert abs(state.s_p) <= n * cfg.lambda_ * max(m, 1.0 - m) + 1e-12


# --- multimodal fusion ----------------------------------------------------------

def test_fuse_high_quality_example():
    p_f, label = fuse(dist(0.2, 0.5, 0.3), dist(0.6, 0.2, 0.2), "high")
    assert p_f.as_tuple() == pytest.approx((0.32, 0.41, 0.27))
    assert label == "neutral"


def test_fuse_alpha_one_returns_speech_exactly():
    cfg = FusionConfig(alpha_high=1.0)
    p_s = dist(0.2, 0.5, 0.3)
    p_f, _ = fuse(p_s, dist(0.6, 0.2, 0.2), "high", cfg)
    assert p_f.as_tuple() == p_s.as_tuple()


def test_fuse_low_quality_example():
    p_f, label = fuse(dist(1.0, 0.0, 0.0), dist(0.0, 0.0, 1.0), "low")
    assert p_f.as_tuple() == pytest.approx((0.3, 0.0, 0.7))
    assert label == "positive"


def test_fusion_arithmetic_against_oracle():
    rng = np.random.default_rng(17)
    cfg = FusionConfig()
    for _ in range(1000):
        raw_s = rng.uniform(0.01, 1.0, 3)
        raw_p = rng.uniform(0.01, 1.0, 3)
        p_s = raw_s / raw_s.sum()
        p_p = raw_p / raw_p.sum()
        quality = "high" if rng.random() < 0.5 else "low"
        alpha = cfg.alpha_high if quality == "high" else cfg.alpha_low

        p_f, label = fuse(
            EmotionDistribution.from_sequence(p_s),
            EmotionDistribution.from_sequence(p_p),
            quality,
            cfg,
        )
        want = [alpha * s + (1 - alpha) * p for s, p in zip(p_s, p_p)]
        got = p_f.as_tuple()
        for g, w in zip(got, want):
            assert abs(g - w) <= 1e-9
        assert abs(sum(got) - 1.0) <= 1e-9
        assert label == LABELS[int(np.argmax(want))]


# --- interval tick dispatch ------------------------------------------------------

def test_tick_speech_only():
    upd, state = tick(
        TickInputs(t_ms=60_000, speech_dist=dist(0.1, 0.6, 0.3), speech_quality="high"),
        FusionState(),
    )
    assert upd.mode == "speech_only"
    assert upd.label == "sad"  # override fires
    assert upd.valence == -1
    assert upd.dist.as_tuple() == (0.1, 0.6, 0.3)
    assert state.tick == 1


def test_tick_multimodal_high_quality():
    inputs = TickInputs(
        t_ms=60_000,
        speech_dist=dist(0.2, 0.5, 0.3),
        speech_quality="high",
        ppg_dist=dist(0.6, 0.2, 0.2),
        reactivity=ReactivitySample(t_ms=60_000, mu=1.0),
    )
    upd, state = tick(inputs, FusionState())
    assert upd.mode == "multimodal"
    assert upd.dist.as_tuple() == pytest.approx((0.32, 0.41, 0.27))
    assert upd.label == "neutral"
    # Multimodal interval leaves the score machinery untouched.
    assert state.s_p == 0.0 and state.prev_mu is None and state.m == 0.5


def test_tick_ppg_only_refreshes_m_and_score():
    inputs = TickInputs(
        t_ms=60_000,
        ppg_dist=dist(0.1, 0.1, 0.8),
        reactivity=ReactivitySample(t_ms=60_000, mu=2.0),
    )
    state0 = FusionState(prev_mu=1.0)
    upd, state = tick(inputs, state0)
    assert upd.mode == "ppg_only"
    assert upd.dist is None
    assert state.m == 0.8
    assert state.s_p == pytest.approx(0.5 * 0.8)
    assert upd.s_p == state.s_p


def test_tick_without_inputs_is_stale_neutral():
    upd, state = tick(TickInputs(t_ms=60_000), FusionState())
    assert upd.mode == "none"
    assert upd.label == "neutral"
    assert upd.stale
    assert state.tick == 1


def test_tick_trend_uses_history():
    history = [update_with("sad", t_ms=60_000), update_with("neutral", t_ms=120_000)]
    upd, _ = tick(
        TickInputs(t_ms=180_000, speech_dist=dist(0.0, 0.2, 0.8), speech_quality="high"),
        FusionState(),
        history=history,
    )
    assert upd.label == "positive"
    assert upd.trend == "up"


def test_tick_is_deterministic():
    inputs = TickInputs(
        t_ms=60_000,
        speech_dist=dist(0.3, 0.3, 0.4),
        speech_quality="low",
        ppg_dist=dist(0.5, 0.25, 0.25),
        reactivity=ReactivitySample(t_ms=60_000, mu=1.5),
    )
    a = tick(inputs, FusionState(prev_mu=1.0))
    b = tick(inputs, FusionState(prev_mu=1.0))
    assert a == b


# --- trend ------------------------------------------------------------------------

def test_trend_examples():
    def updates(valences):
        names = {-1: "sad", 0: "neutral", 1: "positive"}
        return [update_with(names[v], t_ms=i) for i, v in enumerate(valences)]

    assert compute_trend(updates([-1, 0, 1])) == "up"
    assert compute_trend(updates([0, 0, 0])) == "flat"
    assert compute_trend(updates([1, 0, -1])) == "down"
    assert compute_trend(updates([0])) == "flat"
    assert compute_trend(updates([])) == "flat"
    # Only the last k=3 matter.
    assert compute_trend(updates([1, 1, -1, 0, 0])) == "up"


# --- alerts -------------------------------------------------------------------------

def labeled_history(labels):
    return [update_with(lbl, t_ms=(i + 1) * 60_000) for i, lbl in enumerate(labels)]


def test_sustained_alert_fires_once_per_run():
    three = evaluate_alerts(labeled_history(["sad", "sad", "sad"]))
    assert [a.kind for a in three] == ["sustained_low_valence"]
    assert three[0].t_ms == 180_000

    four = evaluate_alerts(labeled_history(["sad", "sad", "sad", "sad"]))
    assert [a.kind for a in four] == ["sustained_low_valence"]
    assert four[0].t_ms == 180_000


def test_sustained_alert_rearms_after_non_sad():
    labels = ["sad", "sad", "sad", "neutral", "sad", "sad", "sad"]
    alerts = [a for a in evaluate_alerts(labeled_history(labels))
              if a.kind == "sustained_low_valence"]
    assert [a.t_ms for a in alerts] == [180_000, 420_000]


def test_abrupt_shift_on_two_step_jump():
    alerts = evaluate_alerts(labeled_history(["sad", "positive"]))
    assert [a.kind for a in alerts] == ["abrupt_shift"]
    assert alerts[0].evidence_t_ms == (60_000, 120_000)


def test_small_moves_raise_nothing():
    assert evaluate_alerts(labeled_history(["neutral", "sad"])) == []
    assert evaluate_alerts(labeled_history(["neutral", "sad", "neutral"])) == []


def test_alert_evaluation_is_idempotent_and_unique():
    labels = ["sad", "positive", "sad", "sad", "sad", "sad", "neutral", "sad"]
    history = labeled_history(labels)
    a1 = evaluate_alerts(history)
    a2 = evaluate_alerts(history)
    assert a1 == a2
    keys = [(a.kind, a.t_ms) for a in a1]
    assert len(keys) == len(set(keys))


# --- wire contract -----------------------------------------------------------------

def test_update_wire_roundtrip_and_keys():
    upd = EmotionUpdate(
        t_ms=60_000, mode="multimodal", label="positive", valence=1,
        trend="up", s_p=0.25, dist=dist(0.1, 0.2, 0.7),
    )
    wire = upd.to_wire()
    assert set(wire) == {"t_ms", "mode", "label", "valence", "trend", "s_p", "dist", "stale"}
    assert wire["dist"] == [0.1, 0.2, 0.7]
    assert EmotionUpdate.from_wire(wire) == upd

    bare = update_with("neutral", mode="ppg_only").to_wire()
    assert bare["dist"] is None


def test_alert_wire_roundtrip():
    alert = Alert(t_ms=180_000, kind="abrupt_shift", evidence_t_ms=(120_000, 180_000))
    assert alert.alert_id == "abrupt_shift:180000"
    assert Alert.from_wire(alert.to_wire()) == alert


def test_color_contract():
    assert COLORS == {"sad": "blue", "neutral": "green", "positive": "yellow"}


def test_valence_label_consistency_enforced():
    with pytest.raises(ValueError):
        EmotionUpdate(t_ms=0, mode="none", label="sad", valence=1, trend="flat", s_p=0.0)
