"""Session lifecycle, append-only event persistence, and replay."""

from .replay import recorded_outputs, replay, verify_replay
from .runtime import (
    ALERT_KINDS,
    MODALITIES,
    MODALITY_REQUIRES,
    ClientConsent,
    IntervalScheduler,
    SessionConfig,
    SessionRuntime,
    alerts_from_log,
    compute_summary,
    create_session,
    updates_from_log,
    validate_consent,
)
from .store import (
    EVENT_KINDS,
    SessionEvent,
    SessionStore,
    canonical_json,
    read_log,
)

__all__ = [
    "ALERT_KINDS",
    "EVENT_KINDS",
    "MODALITIES",
    "MODALITY_REQUIRES",
    "ClientConsent",
    "IntervalScheduler",
    "SessionConfig",
    "SessionEvent",
    "SessionRuntime",
    "SessionStore",
    "alerts_from_log",
    "canonical_json",
    "compute_summary",
    "create_session",
    "read_log",
    "recorded_outputs",
    "replay",
    "updates_from_log",
    "validate_consent",
    "verify_replay",
]
