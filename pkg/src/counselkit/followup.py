"""Trigger-gated follow-up messages with a bounded delivery outbox.

Three trigger kinds gate message creation: a scheduled check-in, a
low-valence trend over the last session, and a technique reminder keyed
off the latest report's suggestions. Every path respects the client's
enabled flag and a per-rule cooldown, and every message is short text
plus a synthesis-request stub that always uses a generic voice.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

from .errors import GeneratorUnavailableError, QueueFullError
from .fusion import EmotionUpdate
from .reporting import StructuredReport, TextGenerator

GOAL_KINDS = ("emotional_regulation", "cognitive_reframing", "supportive")
TONES = ("warm", "neutral")
TRIGGER_KINDS = ("daily_checkin", "low_valence_trend", "technique_reminder")
DELIVERY_STATUSES = ("queued", "delivered", "read")

MAX_MESSAGE_CHARS = 400
TTS_VOICE = "generic_neutral"
OUTBOX_CAPACITY = 1000

HOUR_MS = 3_600_000
WEEK_MS = 7 * 24 * HOUR_MS

DEFAULT_COOLDOWN_HOURS = {
    "daily_checkin": 20.0,
    "low_valence_trend": 48.0,
    "technique_reminder": 72.0,
}

# Suggestion phrases that mark a report as carrying a teachable technique.
TECHNIQUE_TAGS = ("breathing", "grounding", "reframing", "body scan", "journaling")

_SENTENCE_END = re.compile(r"[.!?]")


@dataclass(frozen=True)
class ClientGoals:
    client_pseudonym: str
    goals: tuple[str, ...] = ()
    frequency_per_week: int = 0
    tone: str = "warm"
    enabled: bool = True

    def __post_init__(self):
        for goal in self.goals:
            if goal not in GOAL_KINDS:
                raise ValueError(f"unknown goal {goal!r}")
        if self.frequency_per_week < 0:
            raise ValueError("frequency_per_week must be >= 0")
        if self.tone not in TONES:
            raise ValueError(f"tone must be one of {TONES}, got {self.tone!r}")

    def to_dict(self) -> dict:
        return {
            "client_pseudonym": self.client_pseudonym,
            "goals": list(self.goals),
            "frequency_per_week": self.frequency_per_week,
            "tone": self.tone,
            "enabled": self.enabled,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClientGoals":
        return cls(
            client_pseudonym=str(d["client_pseudonym"]),
            goals=tuple(d.get("goals", ())),
            frequency_per_week=int(d.get("frequency_per_week", 0)),
            tone=str(d.get("tone", "warm")),
            enabled=bool(d.get("enabled", True)),
        )


@dataclass(frozen=True)
class FollowupMessage:
    message_id: str
    client_pseudonym: str
    text: str
    created_at_ms: int
    trigger: str
    delivery_status: str = "queued"
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("message text must be non-empty")
        if len(self.text) > MAX_MESSAGE_CHARS:
            raise ValueError(
                f"message text is {len(self.text)} chars, cap is {MAX_MESSAGE_CHARS}"
            )
        if self.trigger not in TRIGGER_KINDS:
            raise ValueError(f"unknown trigger {self.trigger!r}")
        if self.delivery_status not in DELIVERY_STATUSES:
            raise ValueError(f"unknown delivery status {self.delivery_status!r}")

    @property
    def tts_request(self) -> dict:
        return {"voice": TTS_VOICE, "text": self.text}

    def to_dict(self) -> dict:
        return {
            "message_id": self.message_id,
            "client_pseudonym": self.client_pseudonym,
            "text": self.text,
            "created_at_ms": self.created_at_ms,
            "trigger": self.trigger,
            "delivery_status": self.delivery_status,
            "provenance": dict(self.provenance),
            "tts_request": self.tts_request,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FollowupMessage":
        return cls(
            message_id=str(d["message_id"]),
            client_pseudonym=str(d["client_pseudonym"]),
            text=str(d["text"]),
            created_at_ms=int(d["created_at_ms"]),
            trigger=str(d["trigger"]),
            delivery_status=str(d.get("delivery_status", "queued")),
            provenance=dict(d.get("provenance", {})),
        )


@dataclass(frozen=True)
class ClientState:
    """What one trigger sweep sees for one client."""

    goals: ClientGoals
    latest_report: StructuredReport | None = None
    recent_updates: tuple[EmotionUpdate, ...] = ()
    trend: str = "flat"


@dataclass(frozen=True)
class TriggerRule:
    kind: str
    cooldown_hours: float
    condition: Callable[[ClientState, int], bool]

    def cooldown_ms(self) -> int:
        return int(self.cooldown_hours * HOUR_MS)


def _daily_checkin_due(state: ClientState, now_ms: int) -> bool:
    return state.goals.frequency_per_week > 0


def _majority_sad(state: ClientState, now_ms: int) -> bool:
    updates = state.recent_updates
    if not updates:
        return False
    sad = sum(1 for u in updates if u.label == "sad")
    return (
        sad * 2 > len(updates)
        and "emotional_regulation" in state.goals.goals
    )


def report_technique_tags(report: StructuredReport | None) -> list[str]:
    if report is None:
        return []
    text = report.followup_suggestions.lower()
    return [tag for tag in TECHNIQUE_TAGS if tag in text]


def _has_technique(state: ClientState, now_ms: int) -> bool:
    return bool(report_technique_tags(state.latest_report))


def default_rules(
    cooldown_hours: dict[str, float] | None = None,
) -> tuple[TriggerRule, ...]:
    hours = dict(DEFAULT_COOLDOWN_HOURS)
    hours.update(cooldown_hours or {})
    conditions = {
        "daily_checkin": _daily_checkin_due,
        "low_valence_trend": _majority_sad,
        "technique_reminder": _has_technique,
    }
    return tuple(
        TriggerRule(kind=kind, cooldown_hours=hours[kind], condition=conditions[kind])
        for kind in TRIGGER_KINDS
    )


# -- message templates ---------------------------------------------------------

# The warm daily check-in keeps its published sample wording exactly.
CANONICAL_CHECKIN_TEXT = (
    "Hi, just checking in with you today. Remember to take a few minutes to "
    "breathe and slow down if you're feeling overwhelmed. You're doing your "
    "best—and that matters."
)

_TEMPLATES: dict[tuple[str, str, str], str] = {}


def _register(trigger: str, goal: str, tone: str, text: str) -> None:
    assert len(text) <= MAX_MESSAGE_CHARS
    _TEMPLATES[(trigger, goal, tone)] = text


for _goal in GOAL_KINDS:
    _register("daily_checkin", _goal, "warm", CANONICAL_CHECKIN_TEXT)
    _register(
        "daily_checkin", _goal, "neutral",
        "Checking in as scheduled. If today has felt demanding, a short pause "
        "to breathe can help you reset.",
    )

_register(
    "low_valence_trend", "emotional_regulation", "warm",
    "The last session sounded heavy, and it makes sense to feel worn down "
    "afterwards. When the weight shows up, try one slow round of breathing "
    "in for four counts and out for six. I'm glad you keep showing up for "
    "yourself.",
)
_register(
    "low_valence_trend", "emotional_regulation", "neutral",
    "Recent sessions trended low. A brief regulation exercise, such as "
    "paced breathing for two minutes, can reduce the intensity before it "
    "builds.",
)
for _tone in TONES:
    _register(
        "low_valence_trend", "cognitive_reframing", _tone,
        _TEMPLATES[("low_valence_trend", "emotional_regulation", _tone)],
    )
    _register(
        "low_valence_trend", "supportive", _tone,
        _TEMPLATES[("low_valence_trend", "emotional_regulation", _tone)],
    )

_register(
    "technique_reminder", "emotional_regulation", "warm",
    "A gentle reminder from your last session: the grounding and breathing "
    "practice works best with a little daily repetition. Even two quiet "
    "minutes count.",
)
_register(
    "technique_reminder", "emotional_regulation", "neutral",
    "Reminder: practice the grounding and breathing exercise discussed in "
    "your last session once today.",
)
_register(
    "technique_reminder", "cognitive_reframing", "warm",
    "A small nudge from your last session: when a harsh thought lands, try "
    "the reframing step you practiced and write down one kinder reading of "
    "the moment.",
)
_register(
    "technique_reminder", "cognitive_reframing", "neutral",
    "Reminder: apply the cognitive reframing step from your last session to "
    "one difficult thought today.",
)
_register(
    "technique_reminder", "supportive", "warm",
    "Thinking of the practice you discussed last session. Trying it once "
    "today, even briefly, keeps the progress warm.",
)
_register(
    "technique_reminder", "supportive", "neutral",
    "Reminder: revisit the technique suggested in your last session once "
    "today.",
)


def _select_goal(goals: ClientGoals) -> str:
    for goal in GOAL_KINDS:
        if goal in goals.goals:
            return goal
    return "supportive"


def template_text(trigger: str, goals: ClientGoals) -> str:
    return _TEMPLATES[(trigger, _select_goal(goals), goals.tone)]


def truncate_to_sentence(text: str, cap: int = MAX_MESSAGE_CHARS) -> str:
    """Cap length, preferring the last sentence end, then the last word end."""
    text = text.strip()
    if len(text) <= cap:
        return text
    window = text[:cap]
    ends = [m.end() for m in _SENTENCE_END.finditer(window)]
    if ends:
        return window[: ends[-1]].rstrip()
    cut = window.rsplit(" ", 1)[0].rstrip()
    return cut if cut else window


def generate_followup(
    trigger: TriggerRule | str,
    goals: ClientGoals,
    now_ms: int,
    report: StructuredReport | None = None,
    trend: str = "flat",
    generator: TextGenerator | None = None,
) -> FollowupMessage:
    """One message per fired trigger; the template fallback makes this total."""
    kind = trigger.kind if isinstance(trigger, TriggerRule) else trigger
    goal = _select_goal(goals)
    fallback = template_text(kind, goals)

    text = None
    source = "template"
    if generator is not None:
        prompt = (
            f"Write one short supportive follow-up message (under "
            f"{MAX_MESSAGE_CHARS} characters) for a counseling client.\n"
            f"Trigger: {kind}. Therapeutic goal: {goal}. Tone: {goals.tone}. "
            f"Recent emotional trend: {trend}.\n"
            + (
                "Latest report suggestions: "
                + report.followup_suggestions + "\n"
                if report is not None
                else ""
            )
            + "Respond with the message text only."
        )
        try:
            raw = generator.generate(prompt).strip()
            if raw:
                text = truncate_to_sentence(raw)
                source = getattr(generator, "kind", type(generator).__name__)
        except GeneratorUnavailableError:
            text = None
    if not text:
        text = fallback
        source = "template"

    return FollowupMessage(
        message_id=f"{goals.client_pseudonym}:{kind}:{now_ms}",
        client_pseudonym=goals.client_pseudonym,
        text=text,
        created_at_ms=now_ms,
        trigger=kind,
        provenance={"tone": goals.tone, "goal": goal, "generator": source},
    )


class Outbox:
    """Bounded, thread-safe delivery queue with idempotent enqueues.

    The bound counts undelivered (queued) messages: the oldest stay put and
    new arrivals beyond the cap are rejected. Polling marks delivery, which
    frees capacity; receipts are keyed by message_id so repeats are no-ops.
    """

    def __init__(self, capacity: int = OUTBOX_CAPACITY):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._lock = threading.Lock()
        self._messages: dict[str, FollowupMessage] = {}

    def enqueue(self, message: FollowupMessage) -> FollowupMessage:
        with self._lock:
            existing = self._messages.get(message.message_id)
            if existing is not None:
                return existing
            queued = sum(
                1 for m in self._messages.values() if m.delivery_status == "queued"
            )
            if queued >= self.capacity:
                raise QueueFullError(
                    f"outbox holds {queued} queued messages (cap {self.capacity})"
                )
            stored = replace(message, delivery_status="queued")
            self._messages[message.message_id] = stored
            return stored

    def poll(self, client_pseudonym: str) -> list[FollowupMessage]:
        """Queued messages for one client, oldest first, marked delivered."""
        with self._lock:
            out = []
            for message_id, message in self._messages.items():
                if (
                    message.client_pseudonym == client_pseudonym
                    and message.delivery_status == "queued"
                ):
                    delivered = replace(message, delivery_status="delivered")
                    self._messages[message_id] = delivered
                    out.append(delivered)
            out.sort(key=lambda m: (m.created_at_ms, m.message_id))
            return out

    def mark_read(self, message_id: str) -> FollowupMessage:
        with self._lock:
            message = self._messages[message_id]
            if message.delivery_status == "queued":
                raise ValueError(
                    f"message {message_id!r} has not been delivered yet"
                )
            updated = replace(message, delivery_status="read")
            self._messages[message_id] = updated
            return updated

    def receipt(self, message_id: str) -> dict:
        with self._lock:
            return self._messages[message_id].to_dict()

    def messages(self) -> list[FollowupMessage]:
        with self._lock:
            return sorted(
                self._messages.values(),
                key=lambda m: (m.created_at_ms, m.message_id),
            )

    def save(self, path: str | Path) -> None:
        with self._lock:
            snapshot = [m.to_dict() for m in self._messages.values()]
        with Path(path).open("w", encoding="utf-8") as fh:
            for doc in snapshot:
                fh.write(json.dumps(doc, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str | Path, capacity: int = OUTBOX_CAPACITY) -> "Outbox":
        outbox = cls(capacity=capacity)
        with Path(path).open("r", encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    message = FollowupMessage.from_dict(json.loads(line))
                    outbox._messages[message.message_id] = message
        return outbox


class FollowupEngine:
    """Single-threaded trigger sweep feeding the outbox."""

    def __init__(
        self,
        outbox: Outbox | None = None,
        rules: Sequence[TriggerRule] | None = None,
        generator: TextGenerator | None = None,
    ):
        self.outbox = outbox if outbox is not None else Outbox()
        self.rules = tuple(rules) if rules is not None else default_rules()
        self.generator = generator
        self._last_fired: dict[tuple[str, str], int] = {}

    def check_triggers(self, state: ClientState, now_ms: int) -> list[TriggerRule]:
        """Fired rules for one client; firing starts the rule's cooldown."""
        if not state.goals.enabled:
            return []
        client = state.goals.client_pseudonym
        fired = []
        for rule in self.rules:
            gate_ms = rule.cooldown_ms()
            if rule.kind == "daily_checkin" and state.goals.frequency_per_week > 0:
                schedule_ms = WEEK_MS // state.goals.frequency_per_week
                gate_ms = max(gate_ms, schedule_ms)
            last = self._last_fired.get((client, rule.kind))
            if last is not None and now_ms - last < gate_ms:
                continue
            if rule.condition(state, now_ms):
                self._last_fired[(client, rule.kind)] = now_ms
                fired.append(rule)
        return fired

    def sweep(
        self, states: Sequence[ClientState], now_ms: int
    ) -> list[FollowupMessage]:
        enqueued = []
        for state in states:
            for rule in self.check_triggers(state, now_ms):
                message = generate_followup(
                    rule,
                    state.goals,
                    now_ms,
                    report=state.latest_report,
                    trend=state.trend,
                    generator=self.generator,
                )
                enqueued.append(self.outbox.enqueue(message))
        return enqueued


def read_goals_json(path: str | Path) -> ClientGoals:
    return ClientGoals.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def write_goals_json(path: str | Path, goals: ClientGoals) -> None:
    Path(path).write_text(
        json.dumps(goals.to_dict(), sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )
