"""Append-only per-session event store.

Layout under a store root:

    <root>/<session_id>/events.jsonl   one canonical JSON record per line
    <root>/<session_id>/config.json    the session configuration
    <root>/<session_id>/summary.json   written when the session ends

Records are serialized canonically (sorted keys, no whitespace) so that a
log replayed through the same code is byte-identical to the original.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import CorruptLogError, DuplicateSessionError

EVENT_KINDS = (
    "session_start",
    "ppg_features",
    "speech_emotion",
    "emotion_update",
    "alert",
    "alert_ack",
    "session_end",
)

EVENTS_FILENAME = "events.jsonl"
CONFIG_FILENAME = "config.json"
SUMMARY_FILENAME = "summary.json"


def canonical_json(obj: object) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    t_ms: int
    kind: str
    payload: dict

    def to_record(self) -> dict:
        return {"seq": self.seq, "t_ms": self.t_ms, "kind": self.kind,
                "payload": self.payload}

    def to_line(self) -> str:
        return canonical_json(self.to_record()) + "\n"

    @classmethod
    def from_record(cls, record: dict) -> "SessionEvent":
        return cls(
            seq=int(record["seq"]),
            t_ms=int(record["t_ms"]),
            kind=str(record["kind"]),
            payload=dict(record["payload"]),
        )


class SessionStore:
    """Path bookkeeping plus validated log reading for one store root."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def session_dir(self, session_id: str) -> Path:
        return self.root / session_id

    def events_path(self, session_id: str) -> Path:
        return self.session_dir(session_id) / EVENTS_FILENAME

    def config_path(self, session_id: str) -> Path:
        return self.session_dir(session_id) / CONFIG_FILENAME

    def summary_path(self, session_id: str) -> Path:
        return self.session_dir(session_id) / SUMMARY_FILENAME

    def list_sessions(self) -> list[str]:
        return sorted(
            p.name for p in self.root.iterdir()
            if p.is_dir() and (p / EVENTS_FILENAME).exists()
        )

    def create_session_dir(self, session_id: str, config_doc: dict) -> Path:
        path = self.session_dir(session_id)
        if path.exists():
            raise DuplicateSessionError(f"session {session_id!r} already exists")
        path.mkdir(parents=True)
        self.config_path(session_id).write_text(
            canonical_json(config_doc) + "\n", encoding="utf-8"
        )
        return path

    def read_config(self, session_id: str) -> dict:
        return json.loads(self.config_path(session_id).read_text(encoding="utf-8"))

    def write_summary(self, session_id: str, summary: dict) -> None:
        self.summary_path(session_id).write_text(
            canonical_json(summary) + "\n", encoding="utf-8"
        )

    def read_summary(self, session_id: str) -> dict:
        return json.loads(self.summary_path(session_id).read_text(encoding="utf-8"))

    def read_events(self, session_id: str) -> list[SessionEvent]:
        return read_log(self.events_path(session_id))


def read_log(path: str | Path) -> list[SessionEvent]:
    """Parse and validate an event log.

    Raises CorruptLogError for unparseable lines, unknown kinds, a first
    event that is not session_start, sequence gaps (named in the message),
    or events after session_end.
    """
    events: list[SessionEvent] = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            event = SessionEvent.from_record(record)
        except (ValueError, KeyError, TypeError) as exc:
            raise CorruptLogError(f"line {lineno}: unreadable event ({exc})") from exc
        if event.kind not in EVENT_KINDS:
            raise CorruptLogError(f"line {lineno}: unknown event kind {event.kind!r}")
        events.append(event)

    if not events:
        raise CorruptLogError("log is empty")
    if events[0].kind != "session_start":
        raise CorruptLogError(f"first event is {events[0].kind!r}, not session_start")
    if events[0].seq != 1:
        raise CorruptLogError(f"first seq is {events[0].seq}, expected 1")
    for prev, cur in zip(events, events[1:]):
        if cur.seq != prev.seq + 1:
            raise CorruptLogError(f"seq gap between {prev.seq} and {cur.seq}")
    for event in events[:-1]:
        if event.kind == "session_end":
            raise CorruptLogError(
                f"session_end at seq {event.seq} is not the last event"
            )
    return events
