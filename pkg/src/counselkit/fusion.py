"""Decision-level emotion fusion state machine.

Three per-interval modes: speech-only (argmax with a sad override),
PPG-only (cumulative affect score s_p driven by reactivity changes), and
multimodal (quality-weighted average of the two class distributions). Also
derives the valence trend arrow and the two alert kinds consumed by the
dashboard. Everything here is deterministic and side-effect free; one
FusionState per session, ticked serially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .errors import InvalidDistributionError, NegativeMuError
from .ppg.types import ReactivitySample

LABELS = ("sad", "neutral", "positive")
VALENCE = {"sad": -1, "neutral": 0, "positive": 1}
# Dashboard color contract.
COLORS = {"sad": "blue", "neutral": "green", "positive": "yellow"}

DIST_SUM_TOL = 1e-6


@dataclass(frozen=True)
class EmotionDistribution:
    """Probability over the three-class emotion set."""

    p_sad: float
    p_neutral: float
    p_positive: float

    def __post_init__(self):
        vals = (self.p_sad, self.p_neutral, self.p_positive)
        if not all(math.isfinite(v) and v >= 0.0 for v in vals):
            raise InvalidDistributionError(f"components must be finite and >= 0: {vals}")
        if abs(sum(vals) - 1.0) > DIST_SUM_TOL:
            raise InvalidDistributionError(f"components sum to {sum(vals)}, not 1")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_sad, self.p_neutral, self.p_positive)

    def argmax_label(self) -> str:
        # Ties resolve to the lowest index: sad > neutral > positive.
        vals = self.as_tuple()
        return LABELS[vals.index(max(vals))]

    @classmethod
    def from_sequence(cls, p: Sequence[float]) -> "EmotionDistribution":
        if len(p) != 3:
            raise InvalidDistributionError(f"need 3 components, got {len(p)}")
        return cls(p_sad=float(p[0]), p_neutral=float(p[1]), p_positive=float(p[2]))


@dataclass(frozen=True)
class FusionConfig:
    lambda_: float = 0.5
    theta: float = 0.3
    delta1: float = 1.0
    alpha_high: float = 0.7
    alpha_low: float = 0.3
    sad_override_epsilon: float = 0.0
    interval_ms: int = 60_000

    def __post_init__(self):
        if not self.lambda_ > 0:
            raise ValueError("lambda_ must be > 0")
        if not 0 < self.theta < 1:
            raise ValueError("theta must be in (0, 1)")
        if not self.delta1 > 0:
            raise ValueError("delta1 must be > 0")
        for a in (self.alpha_high, self.alpha_low):
            if not 0 <= a <= 1:
                raise ValueError("alpha weights must be in [0, 1]")


@dataclass(frozen=True)
class FusionState:
    s_p: float = 0.0
    prev_mu: float | None = None
    m: float = 0.5
    tick: int = 0

    def __post_init__(self):
        if not math.isfinite(self.s_p):
            raise ValueError("s_p must be finite")
        if not 0.0 <= self.m <= 1.0:
            raise ValueError("m must be in [0, 1]")


@dataclass(frozen=True)
class EmotionUpdate:
    t_ms: int
    mode: str  # speech_only | ppg_only | multimodal | none
    label: str
    valence: int
    trend: str  # up | down | flat
    s_p: float
    dist: EmotionDistribution | None = None
    stale: bool = False

    def __post_init__(self):
        if VALENCE[self.label] != self.valence:
            raise ValueError(f"valence {self.valence} inconsistent with label {self.label}")

    def to_wire(self) -> dict:
        return {
            "t_ms": self.t_ms,
            "mode": self.mode,
            "label": self.label,
            "valence": self.valence,
            "trend": self.trend,
            "s_p": self.s_p,
            "dist": list(self.dist.as_tuple()) if self.dist is not None else None,
            "stale": self.stale,
        }

    @classmethod
    def from_wire(cls, obj: dict) -> "EmotionUpdate":
        dist = obj.get("dist")
        return cls(
            t_ms=int(obj["t_ms"]),
            mode=str(obj["mode"]),
            label=str(obj["label"]),
            valence=int(obj["valence"]),
            trend=str(obj["trend"]),
            s_p=float(obj["s_p"]),
            dist=EmotionDistribution.from_sequence(dist) if dist is not None else None,
            stale=bool(obj.get("stale", False)),
        )


@dataclass(frozen=True)
class Alert:
    t_ms: int
    kind: str  # sustained_low_valence | abrupt_shift
    evidence_t_ms: tuple[int, ...]
    acknowledged: bool = False

    @property
    def alert_id(self) -> str:
        return f"{self.kind}:{self.t_ms}"

    def to_wire(self) -> dict:
        return {
            "alert_id": self.alert_id,
            "t_ms": self.t_ms,
            "kind": self.kind,
            "evidence_t_ms": list(self.evidence_t_ms),
            "acknowledged": self.acknowledged,
        }

    @classmethod
    def from_wire(cls, obj: dict) -> "Alert":
        return cls(
            t_ms=int(obj["t_ms"]),
            kind=str(obj["kind"]),
            evidence_t_ms=tuple(int(t) for t in obj["evidence_t_ms"]),
            acknowledged=bool(obj.get("acknowledged", False)),
        )


@dataclass(frozen=True)
class TickInputs:
    """Everything the engine may see for one interval.

    Speech arrives as the event's distribution plus its quality flag; the
    PPG side brings the classifier posterior and the reactivity sample.
    """

    t_ms: int
    speech_dist: EmotionDistribution | None = None
    speech_quality: str | None = None  # high | low
    ppg_dist: EmotionDistribution | None = None
    reactivity: ReactivitySample | None = None


def speech_only_decision(p_s: EmotionDistribution, epsilon: float = 0.0) -> str:
    """Argmax label; neutral flips to sad whenever p_sad exceeds epsilon."""
    label = p_s.argmax_label()
    if label == "neutral" and p_s.p_sad > epsilon:
        return "sad"
    return label


def _label_from_sp(s_p: float, delta1: float) -> str:
    if s_p > delta1:
        return "positive"
    if s_p < -delta1:
        return "sad"
    return "neutral"


def ppg_only_update(
    state: FusionState,
    mu_t: ReactivitySample | float,
    config: FusionConfig = FusionConfig(),
) -> tuple[FusionState, str]:
    """One reactivity-driven step of the cumulative affect score.

    Relative change beyond +theta adds lambda*m; beyond -theta subtracts
    lambda*(1-m). The label comes from thresholding s_p at +/-delta1,
    strictly on both sides.
    """
    mu = mu_t.mu if isinstance(mu_t, ReactivitySample) else float(mu_t)
    if not math.isfinite(mu) or mu < 0.0:
        raise NegativeMuError(f"reactivity mean must be finite and >= 0, got {mu}")

    if state.prev_mu is None:
        return replace(state, prev_mu=mu), "neutral"

    denom = max(mu, state.prev_mu)
    delta = 0.0 if denom == 0.0 else (mu - state.prev_mu) / denom
    s_p = state.s_p
    if delta > config.theta:
        s_p += config.lambda_ * state.m
    elif delta < -config.theta:
        s_p -= config.lambda_ * (1.0 - state.m)
    new_state = replace(state, s_p=s_p, prev_mu=mu)
    return new_state, _label_from_sp(s_p, config.delta1)


def fuse(
    p_s: EmotionDistribution,
    p_p: EmotionDistribution,
    quality: str,
    config: FusionConfig = FusionConfig(),
) -> tuple[EmotionDistribution, str]:
    """Quality-weighted average of the two modality distributions."""
    alpha = config.alpha_high if quality == "high" else config.alpha_low
    p_f = EmotionDistribution(
        p_sad=alpha * p_s.p_sad + (1.0 - alpha) * p_p.p_sad,
        p_neutral=alpha * p_s.p_neutral + (1.0 - alpha) * p_p.p_neutral,
        p_positive=alpha * p_s.p_positive + (1.0 - alpha) * p_p.p_positive,
    )
    return p_f, p_f.argmax_label()


def _trend_from_valences(valences: Sequence[int], k: int = 3) -> str:
    if len(valences) < 2:
        return "flat"
    window = valences[-k:]
    diff = window[-1] - window[0]
    if diff > 0:
        return "up"
    if diff < 0:
        return "down"
    return "flat"


def compute_trend(history: Sequence[EmotionUpdate], k: int = 3) -> str:
    """Sign of the valence change across the last k updates."""
    return _trend_from_valences([u.valence for u in history], k)


def tick(
    inputs: TickInputs,
    state: FusionState,
    config: FusionConfig = FusionConfig(),
    history: Sequence[EmotionUpdate] = (),
) -> tuple[EmotionUpdate, FusionState]:
    """Emit exactly one update for an interval, dispatching on availability.

    The cumulative score and the confidence coefficient m belong to the
    PPG-only path: multimodal intervals label from the fused distribution
    and leave s_p untouched.
    """
    has_speech = inputs.speech_dist is not None
    has_ppg = inputs.ppg_dist is not None or inputs.reactivity is not None
    new_state = replace(state, tick=state.tick + 1)
    dist: EmotionDistribution | None = None
    stale = False

    if has_speech and inputs.ppg_dist is not None:
        mode = "multimodal"
        quality = inputs.speech_quality or "low"
        dist, label = fuse(inputs.speech_dist, inputs.ppg_dist, quality, config)
    elif has_speech:
        mode = "speech_only"
        dist = inputs.speech_dist
        label = speech_only_decision(inputs.speech_dist, config.sad_override_epsilon)
    elif has_ppg:
        mode = "ppg_only"
        if inputs.ppg_dist is not None:
            new_state = replace(new_state, m=max(inputs.ppg_dist.as_tuple()))
        if inputs.reactivity is not None:
            new_state, label = ppg_only_update(new_state, inputs.reactivity, config)
        else:
            label = _label_from_sp(new_state.s_p, config.delta1)
    else:
        mode = "none"
        label = "neutral"
        stale = True

    valence = VALENCE[label]
    trend = _trend_from_valences([u.valence for u in history] + [valence])
    update = EmotionUpdate(
        t_ms=inputs.t_ms,
        mode=mode,
        label=label,
        valence=valence,
        trend=trend,
        s_p=new_state.s_p,
        dist=dist,
        stale=stale,
    )
    return update, new_state


def evaluate_alerts(
    history: Sequence[EmotionUpdate],
    sustained_n: int = 3,
    abrupt_delta: int = 2,
) -> list[Alert]:
    """All alerts implied by an update history, oldest first.

    Pure function: identical histories give identical alert lists. The
    sustained alert fires once per sad run and re-arms after any non-sad
    update; the abrupt alert fires on any single-step valence jump of at
    least abrupt_delta.
    """
    alerts: list[Alert] = []
    run: list[EmotionUpdate] = []
    armed = True
    for i, u in enumerate(history):
        if u.label == "sad":
            run.append(u)
            if armed and len(run) >= sustained_n:
                alerts.append(
                    Alert(
                        t_ms=u.t_ms,
                        kind="sustained_low_valence",
                        evidence_t_ms=tuple(x.t_ms for x in run[-sustained_n:]),
                    )
                )
                armed = False
        else:
            run = []
            armed = True
        if i >= 1 and abs(u.valence - history[i - 1].valence) >= abrupt_delta:
            alerts.append(
                Alert(
                    t_ms=u.t_ms,
                    kind="abrupt_shift",
                    evidence_t_ms=(history[i - 1].t_ms, u.t_ms),
                )
            )
    return alerts
