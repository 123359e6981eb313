"""Session lifecycle: consent-gated creation, interval ticks, persistence.

One writer per session. Every mutation appends a single contiguous batch
to the event log (the triggering input plus whatever updates and alerts it
produced), then wakes subscribers. All timing comes from input timestamps,
never the wall clock, so a recorded session replays deterministically.
"""

from __future__ import annotations

import threading
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Iterator

from ..errors import (
    ConsentViolationError,
    InputOutOfOrderError,
    SessionClosedError,
)
from ..fusion import (
    Alert,
    EmotionDistribution,
    EmotionUpdate,
    FusionConfig,
    FusionState,
    LABELS,
    TickInputs,
    evaluate_alerts,
    tick,
)
from ..ppg.types import HrvFeatures, ReactivitySample
from .store import SessionEvent, SessionStore

MODALITIES = ("speech_only", "ppg_only", "multimodal")

# Which consent flags each modality needs before a session may start.
MODALITY_REQUIRES = {
    "speech_only": ("speech",),
    "ppg_only": ("ppg",),
    "multimodal": ("speech", "ppg"),
}

ALERT_KINDS = ("sustained_low_valence", "abrupt_shift")


@dataclass(frozen=True)
class ClientConsent:
    speech: bool = False
    ppg: bool = False

    def to_dict(self) -> dict:
        return {"speech": self.speech, "ppg": self.ppg}

    @classmethod
    def from_dict(cls, d: dict) -> "ClientConsent":
        return cls(speech=bool(d["speech"]), ppg=bool(d["ppg"]))


@dataclass(frozen=True)
class SessionConfig:
    session_id: str
    modality: str
    consent: ClientConsent
    counselor_id: str
    client_pseudonym: str
    fusion: FusionConfig = FusionConfig()

    def __post_init__(self):
        if not self.session_id or "/" in self.session_id:
            raise ValueError(f"invalid session_id {self.session_id!r}")
        if self.modality not in MODALITIES:
            raise ValueError(
                f"modality must be one of {MODALITIES}, got {self.modality!r}"
            )

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "modality": self.modality,
            "consent": self.consent.to_dict(),
            "counselor_id": self.counselor_id,
            "client_pseudonym": self.client_pseudonym,
            "fusion": asdict(self.fusion),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SessionConfig":
        return cls(
            session_id=str(d["session_id"]),
            modality=str(d["modality"]),
            consent=ClientConsent.from_dict(d["consent"]),
            counselor_id=str(d["counselor_id"]),
            client_pseudonym=str(d["client_pseudonym"]),
            fusion=FusionConfig(**d["fusion"]),
        )


def validate_consent(modality: str, consent: ClientConsent) -> None:
    for flag in MODALITY_REQUIRES[modality]:
        if not getattr(consent, flag):
            raise ConsentViolationError(
                f"modality {modality!r} requires {flag} consent, which is false"
            )


class IntervalScheduler:
    """Pure in-memory tick scheduling shared by live sessions and replay.

    Unimodal sessions tick once per input. Multimodal sessions buffer the
    current interval until both modalities arrive; an input for a different
    interval, a second input of an already-buffered modality, or a final
    flush releases the buffered interval with whatever it has.
    """

    def __init__(self, fusion_config: FusionConfig, modality: str):
        self.fusion_config = fusion_config
        self.modality = modality
        self.state = FusionState()
        self.history: list[EmotionUpdate] = []
        self._alert_keys: set[tuple[str, int]] = set()
        self._pending_interval: int | None = None
        self._pending_speech: tuple[int, EmotionDistribution, str] | None = None
        self._pending_ppg: tuple[int, ReactivitySample | None,
                                 EmotionDistribution | None] | None = None

    def on_ppg(
        self,
        t_ms: int,
        reactivity: ReactivitySample | None,
        dist: EmotionDistribution | None,
    ) -> list[EmotionUpdate | Alert]:
        if self.modality != "multimodal":
            return self._tick(TickInputs(t_ms=t_ms, ppg_dist=dist, reactivity=reactivity))
        outputs = self._make_room("ppg", t_ms)
        self._pending_ppg = (t_ms, reactivity, dist)
        self._pending_interval = self._interval(t_ms)
        if self._pending_speech is not None:
            outputs.extend(self.flush())
        return outputs

    def on_speech(
        self, t_ms: int, dist: EmotionDistribution, quality: str
    ) -> list[EmotionUpdate | Alert]:
        if self.modality != "multimodal":
            return self._tick(TickInputs(t_ms=t_ms, speech_dist=dist, speech_quality=quality))
        outputs = self._make_room("speech", t_ms)
        self._pending_speech = (t_ms, dist, quality)
        self._pending_interval = self._interval(t_ms)
        if self._pending_ppg is not None:
            outputs.extend(self.flush())
        return outputs

    def flush(self) -> list[EmotionUpdate | Alert]:
        """Tick the buffered interval with whatever inputs it holds."""
        if self._pending_speech is None and self._pending_ppg is None:
            return []
        t_candidates = []
        speech_dist = quality = None
        reactivity = ppg_dist = None
        if self._pending_speech is not None:
            t, speech_dist, quality = self._pending_speech
            t_candidates.append(t)
        if self._pending_ppg is not None:
            t, reactivity, ppg_dist = self._pending_ppg
            t_candidates.append(t)
        self._pending_speech = None
        self._pending_ppg = None
        self._pending_interval = None
        return self._tick(
            TickInputs(
                t_ms=max(t_candidates),
                speech_dist=speech_dist,
                speech_quality=quality,
                ppg_dist=ppg_dist,
                reactivity=reactivity,
            )
        )

    def _interval(self, t_ms: int) -> int:
        return t_ms // self.fusion_config.interval_ms

    def _make_room(self, kind: str, t_ms: int) -> list[EmotionUpdate | Alert]:
        """Flush the buffer when the new input cannot join it."""
        if self._pending_interval is None:
            return []
        same_kind_buffered = (
            self._pending_ppg if kind == "ppg" else self._pending_speech
        ) is not None
        if self._interval(t_ms) != self._pending_interval or same_kind_buffered:
            return self.flush()
        return []

    def _tick(self, inputs: TickInputs) -> list[EmotionUpdate | Alert]:
        update, self.state = tick(
            inputs, self.state, self.fusion_config, history=self.history
        )
        self.history.append(update)
        outputs: list[EmotionUpdate | Alert] = [update]
        for alert in evaluate_alerts(self.history):
            key = (alert.kind, alert.t_ms)
            if key not in self._alert_keys:
                self._alert_keys.add(key)
                outputs.append(alert)
        return outputs


class SessionRuntime:
    """Handle for one open session: ingestion, alert acks, subscriptions."""

    def __init__(self, config: SessionConfig, store: SessionStore, start_t_ms: int = 0):
        validate_consent(config.modality, config.consent)
        self.config = config
        self.store = store
        store.create_session_dir(config.session_id, config.to_dict())
        self._fh = store.events_path(config.session_id).open("a", encoding="utf-8")
        self._cond = threading.Condition()
        self._events: list[SessionEvent] = []
        self._scheduler = IntervalScheduler(config.fusion, config.modality)
        self._last_input_t: dict[str, int] = {}
        self._acked: set[str] = set()
        self._closed = False
        with self._cond:
            self._append_batch([("session_start", start_t_ms,
                                 {"config": config.to_dict()})])

    # -- ingestion ---------------------------------------------------------

    def ingest_ppg(
        self,
        t_ms: int,
        hrv: HrvFeatures | None = None,
        reactivity: ReactivitySample | None = None,
        dist: EmotionDistribution | None = None,
    ) -> list[SessionEvent]:
        with self._cond:
            self._ensure_open()
            if self.config.modality == "speech_only":
                raise ConsentViolationError(
                    "ppg input is not allowed on a speech_only session"
                )
            self._check_order("ppg_features", t_ms)
            payload = {
                "hrv": hrv.to_dict() if hrv is not None else None,
                "reactivity": reactivity.to_dict() if reactivity is not None else None,
                "dist": list(dist.as_tuple()) if dist is not None else None,
            }
            outputs = self._scheduler.on_ppg(t_ms, reactivity, dist)
            return self._append_batch(
                [("ppg_features", t_ms, payload)] + _output_items(outputs)
            )

    def ingest_speech(
        self, t_ms: int, dist: EmotionDistribution, quality: str
    ) -> list[SessionEvent]:
        if quality not in ("high", "low"):
            raise ValueError(f"quality must be high or low, got {quality!r}")
        with self._cond:
            self._ensure_open()
            if self.config.modality == "ppg_only":
                raise ConsentViolationError(
                    "speech input is not allowed on a ppg_only session"
                )
            self._check_order("speech_emotion", t_ms)
            payload = {"dist": list(dist.as_tuple()), "quality": quality}
            outputs = self._scheduler.on_speech(t_ms, dist, quality)
            return self._append_batch(
                [("speech_emotion", t_ms, payload)] + _output_items(outputs)
            )

    # -- alerts ------------------------------------------------------------

    def alerts(self) -> list[Alert]:
        with self._cond:
            return [
                replace(a, acknowledged=a.alert_id in self._acked)
                for a in self._alerts_emitted()
            ]

    def ack_alert(self, alert_id: str, t_ms: int | None = None) -> SessionEvent | None:
        """Mark an alert acknowledged; a repeat ack is a no-op."""
        with self._cond:
            self._ensure_open()
            known = {a.alert_id for a in self._alerts_emitted()}
            if alert_id not in known:
                raise KeyError(alert_id)
            if alert_id in self._acked:
                return None
            self._acked.add(alert_id)
            at = t_ms if t_ms is not None else self._events[-1].t_ms
            return self._append_batch([("alert_ack", at, {"alert_id": alert_id})])[0]

    # -- lifecycle ---------------------------------------------------------

    def end_session(self, end_t_ms: int | None = None) -> dict:
        with self._cond:
            self._ensure_open()
            flush_items = _output_items(self._scheduler.flush())
            latest = max(
                [e.t_ms for e in self._events] + [t for _, t, _ in flush_items]
            )
            end_t = end_t_ms if end_t_ms is not None else latest
            self._append_batch(flush_items + [("session_end", end_t, {})])
            self._closed = True
            self._fh.close()
            summary = compute_summary(self.config, self._events)
            self.store.write_summary(self.config.session_id, summary)
            self._cond.notify_all()
            return summary

    @property
    def closed(self) -> bool:
        return self._closed

    # -- reads -------------------------------------------------------------

    @property
    def updates(self) -> list[EmotionUpdate]:
        with self._cond:
            return list(self._scheduler.history)

    def events_since(self, since_seq: int = 0) -> list[SessionEvent]:
        with self._cond:
            return self._events[since_seq:]

    def subscribe(self, since_seq: int = 0) -> Iterator[SessionEvent]:
        """Yield events after since_seq, blocking until the session ends.

        Sequence numbers are contiguous from 1, so a subscriber that lags
        or reconnects resumes exactly by passing the last seq it saw.
        """
        cursor = since_seq
        while True:
            with self._cond:
                while not self._closed and len(self._events) <= cursor:
                    self._cond.wait(timeout=0.5)
                batch = self._events[cursor:]
                closed = self._closed
            for event in batch:
                cursor = event.seq
                yield event
                if event.kind == "session_end":
                    return
            if closed and not batch:
                return

    # -- internals ----------------------------------------------------------

    def _alerts_emitted(self) -> list[Alert]:
        return [
            Alert.from_wire(e.payload) for e in self._events if e.kind == "alert"
        ]

    def _ensure_open(self) -> None:
        if self._closed:
            raise SessionClosedError(
                f"session {self.config.session_id!r} has ended"
            )

    def _check_order(self, kind: str, t_ms: int) -> None:
        last = self._last_input_t.get(kind)
        if last is not None and t_ms < last:
            raise InputOutOfOrderError(
                f"{kind} at t={t_ms} arrived after t={last}"
            )
        self._last_input_t[kind] = t_ms

    def _append_batch(
        self, items: list[tuple[str, int, dict]]
    ) -> list[SessionEvent]:
        events = []
        seq = self._events[-1].seq if self._events else 0
        for kind, t_ms, payload in items:
            seq += 1
            events.append(SessionEvent(seq=seq, t_ms=t_ms, kind=kind, payload=payload))
        self._fh.write("".join(e.to_line() for e in events))
        self._fh.flush()
        self._events.extend(events)
        self._cond.notify_all()
        return events


def _output_items(
    outputs: list[EmotionUpdate | Alert],
) -> list[tuple[str, int, dict]]:
    items = []
    for out in outputs:
        if isinstance(out, EmotionUpdate):
            items.append(("emotion_update", out.t_ms, out.to_wire()))
        else:
            items.append(("alert", out.t_ms, out.to_wire()))
    return items


def create_session(
    config: SessionConfig, store: SessionStore | str | Path, start_t_ms: int = 0
) -> SessionRuntime:
    if not isinstance(store, SessionStore):
        store = SessionStore(store)
    return SessionRuntime(config, store, start_t_ms=start_t_ms)


def alerts_from_log(events: list[SessionEvent]) -> list[Alert]:
    """Alerts recorded in a log, with acknowledged flags applied."""
    acked = {
        e.payload["alert_id"] for e in events if e.kind == "alert_ack"
    }
    return [
        replace(
            Alert.from_wire(e.payload),
            acknowledged=e.payload["alert_id"] in acked,
        )
        for e in events
        if e.kind == "alert"
    ]


def updates_from_log(events: list[SessionEvent]) -> list[EmotionUpdate]:
    return [
        EmotionUpdate.from_wire(e.payload)
        for e in events
        if e.kind == "emotion_update"
    ]


def compute_summary(config: SessionConfig, events: list[SessionEvent]) -> dict:
    """Label/alert tallies, duration, and final score, all from the log."""
    label_counts = {label: 0 for label in LABELS}
    alert_counts = {kind: 0 for kind in ALERT_KINDS}
    final_s_p = 0.0
    n_updates = 0
    for event in events:
        if event.kind == "emotion_update":
            label_counts[event.payload["label"]] += 1
            final_s_p = float(event.payload["s_p"])
            n_updates += 1
        elif event.kind == "alert":
            alert_counts[event.payload["kind"]] += 1
    return {
        "session_id": config.session_id,
        "counselor_id": config.counselor_id,
        "client_pseudonym": config.client_pseudonym,
        "modality": config.modality,
        "start_t_ms": events[0].t_ms,
        "end_t_ms": events[-1].t_ms,
        "duration_ms": events[-1].t_ms - events[0].t_ms,
        "n_updates": n_updates,
        "label_counts": label_counts,
        "alert_counts": alert_counts,
        "final_s_p": final_s_p,
    }
