"""Deterministic reconstruction of a session's outputs from its log.

The log records every input the fusion engine saw (derived features and
posteriors, never raw signal), so re-driving the same scheduler over the
input events must reproduce the recorded updates and alerts byte for byte.
"""

from __future__ import annotations

from ..errors import CorruptLogError
from ..fusion import EmotionDistribution
from ..ppg.types import ReactivitySample
from .runtime import IntervalScheduler, SessionConfig, _output_items
from .store import SessionEvent, canonical_json

OUTPUT_KINDS = ("emotion_update", "alert")


def _output_record(kind: str, t_ms: int, payload: dict) -> dict:
    return {"kind": kind, "t_ms": t_ms, "payload": payload}


def recorded_outputs(events: list[SessionEvent]) -> list[dict]:
    """The update/alert stream as it was logged, sans sequence numbers."""
    return [
        _output_record(e.kind, e.t_ms, e.payload)
        for e in events
        if e.kind in OUTPUT_KINDS
    ]


def replay(
    events: list[SessionEvent], config: SessionConfig | None = None
) -> list[dict]:
    """Re-run fusion over the logged inputs; return the implied outputs."""
    if not events or events[0].kind != "session_start":
        raise CorruptLogError("log does not begin with session_start")
    if config is None:
        try:
            config = SessionConfig.from_dict(events[0].payload["config"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptLogError(f"unreadable session_start config: {exc}") from exc

    scheduler = IntervalScheduler(config.fusion, config.modality)
    outputs: list[dict] = []

    def emit(produced) -> None:
        for kind, t_ms, payload in _output_items(produced):
            outputs.append(_output_record(kind, t_ms, payload))

    for event in events:
        if event.kind == "ppg_features":
            if config.modality == "speech_only":
                raise CorruptLogError(
                    f"ppg_features at seq {event.seq} in a speech_only session"
                )
            r = event.payload.get("reactivity")
            d = event.payload.get("dist")
            emit(scheduler.on_ppg(
                event.t_ms,
                ReactivitySample.from_dict(r) if r is not None else None,
                EmotionDistribution.from_sequence(d) if d is not None else None,
            ))
        elif event.kind == "speech_emotion":
            if config.modality == "ppg_only":
                raise CorruptLogError(
                    f"speech_emotion at seq {event.seq} in a ppg_only session"
                )
            emit(scheduler.on_speech(
                event.t_ms,
                EmotionDistribution.from_sequence(event.payload["dist"]),
                str(event.payload["quality"]),
            ))
        elif event.kind == "session_end":
            emit(scheduler.flush())
    return outputs


def verify_replay(
    events: list[SessionEvent], config: SessionConfig | None = None
) -> None:
    """Raise CorruptLogError unless replaying the log reproduces it exactly."""
    recorded = recorded_outputs(events)
    replayed = replay(events, config)
    if canonical_json(replayed) != canonical_json(recorded):
        n = min(len(recorded), len(replayed))
        at = next(
            (i for i in range(n) if recorded[i] != replayed[i]),
            n,
        )
        raise CorruptLogError(
            f"replay diverges from the recorded log at output index {at}"
        )
