"""Structured session reports: pluggable generator, extractive fallback.

A report always carries the same five sections, in order: Session Context,
Exploration Highlights, Observed Progress, Follow-up Suggestions, Summary.
Any text generator (prompt in, completion out) can produce one; when the
generator is missing, unreachable, or emits text the strict section parser
rejects twice, a deterministic extractive summarizer takes over so report
generation is total.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

from .errors import (
    EmptyTranscriptError,
    GeneratorUnavailableError,
    SchemaParseFailureError,
)
from .fusion import LABELS

ROLE_COUNSELOR = "counselor"
ROLE_CLIENT = "client"

SECTION_FIELDS = (
    "session_context",
    "exploration_highlights",
    "observed_progress",
    "followup_suggestions",
    "summary",
)
SECTION_TITLES = (
    "Session Context",
    "Exploration Highlights",
    "Observed Progress",
    "Follow-up Suggestions",
    "Summary",
)
_FIELD_BY_TITLE = dict(zip(SECTION_TITLES, SECTION_FIELDS))

MAX_HIGHLIGHTS = 5
MAX_CONTEXT_TURNS = 3

_HEADER_RE = re.compile(r"^##\s+(.+?)\s*$")
_WORD_RE = re.compile(r"[a-z0-9']+")


@dataclass(frozen=True)
class TranscriptTurn:
    t_ms: int
    role: str
    text: str

    def __post_init__(self):
        if self.role not in (ROLE_COUNSELOR, ROLE_CLIENT):
            raise ValueError(f"role must be counselor or client, got {self.role!r}")

    def to_dict(self) -> dict:
        return {"t_ms": self.t_ms, "role": self.role, "text": self.text}

    @classmethod
    def from_dict(cls, d: dict) -> "TranscriptTurn":
        return cls(t_ms=int(d["t_ms"]), role=str(d["role"]), text=str(d["text"]))


@dataclass(frozen=True)
class StructuredReport:
    session_context: str
    exploration_highlights: str
    observed_progress: str
    followup_suggestions: str
    summary: str
    provenance: dict = field(default_factory=dict)
    emotional_markers: tuple[tuple[int, str], ...] = ()

    def sections(self) -> list[tuple[str, str]]:
        return [
            (title, getattr(self, fname))
            for title, fname in zip(SECTION_TITLES, SECTION_FIELDS)
        ]

    def to_dict(self) -> dict:
        doc = {fname: getattr(self, fname) for fname in SECTION_FIELDS}
        doc["section_order"] = list(SECTION_TITLES)
        doc["provenance"] = dict(self.provenance)
        doc["emotional_markers"] = [[t, label] for t, label in self.emotional_markers]
        return doc

    def to_markdown(self) -> str:
        parts = []
        for title, body in self.sections():
            parts.append(f"## {title}\n\n{body.strip()}\n")
        return "\n".join(parts)

    @classmethod
    def from_dict(cls, doc: dict) -> "StructuredReport":
        return cls(
            provenance=dict(doc.get("provenance", {})),
            emotional_markers=tuple(
                (int(t), str(label))
                for t, label in doc.get("emotional_markers", ())
            ),
            **{fname: str(doc[fname]) for fname in SECTION_FIELDS},
        )


@dataclass(frozen=True)
class PromptTemplate:
    """Instruction text with transcript / summary / prior-report slots."""

    template_id: str
    version: str
    instruction: str

    SLOTS = ("transcript", "session_summary", "prior_reports")

    def render(
        self,
        transcript: Sequence[TranscriptTurn],
        session_summary: dict,
        prior_reports: Sequence[StructuredReport] = (),
    ) -> str:
        if not transcript:
            raise EmptyTranscriptError("cannot render a prompt without turns")
        if not session_summary:
            raise ValueError("session_summary slot must not be empty")
        transcript_text = "\n".join(
            f"[{turn.t_ms} ms] {turn.role}: {turn.text}" for turn in transcript
        )
        prior_text = (
            "\n---\n".join(r.to_markdown() for r in prior_reports)
            if prior_reports
            else "(no prior reports)"
        )
        return self.instruction.format(
            transcript=transcript_text,
            session_summary=json.dumps(session_summary, sort_keys=True),
            prior_reports=prior_text,
        )


_EXEMPLAR = """## Session Context
The client described ongoing tension at work and difficulty sleeping.

## Exploration Highlights
- [60000 ms] "I keep replaying the argument in my head."
- [180000 ms] "Sleep has been the first thing to go."

## Observed Progress
First recorded session; no prior baseline to compare against.

## Follow-up Suggestions
Introduce a brief wind-down routine before bed and revisit workload limits.

## Summary
An engaged first session focused on work stress and sleep disruption."""

DEFAULT_TEMPLATE = PromptTemplate(
    template_id="session-report",
    version="1",
    instruction=(
        "You are assisting a counselor with post-session documentation.\n"
        "Write a report with exactly these five markdown sections, in this\n"
        "order, each introduced by a '## ' header and each non-empty:\n"
        "Session Context, Exploration Highlights, Observed Progress,\n"
        "Follow-up Suggestions, Summary.\n"
        "\n"
        "Example of the required format:\n"
        f"{_EXEMPLAR}\n"
        "\n"
        "Session summary (machine-generated):\n"
        "{session_summary}\n"
        "\n"
        "Prior reports:\n"
        "{prior_reports}\n"
        "\n"
        "Transcript (role and time tagged):\n"
        "{transcript}\n"
    ),
)

REPAIR_INSTRUCTION = (
    "Your previous answer did not match the required format. Respond again "
    "using exactly five markdown sections with these headers, in this order, "
    "each non-empty, and no other text before, between, or after them:\n"
    + "\n".join(f"## {title}" for title in SECTION_TITLES)
)


class TextGenerator(Protocol):
    """Prompt in, completion out. Implementations name themselves via .kind."""

    kind: str

    def generate(self, prompt: str) -> str: ...


def parse_report_sections(text: str) -> dict[str, str]:
    """Strict scanner: the five headers, in order, each with a body.

    Anything else (preamble, unknown headers, missing or empty sections,
    wrong order) raises SchemaParseFailureError.
    """
    titles: list[str] = []
    bodies: list[list[str]] = []
    for line in text.splitlines():
        m = _HEADER_RE.match(line)
        if m:
            title = m.group(1)
            if title not in _FIELD_BY_TITLE:
                raise SchemaParseFailureError(f"unknown section header {title!r}")
            if title in titles:
                raise SchemaParseFailureError(f"duplicate section {title!r}")
            titles.append(title)
            bodies.append([])
        elif titles:
            bodies[-1].append(line)
        elif line.strip():
            raise SchemaParseFailureError("text before the first section header")
    if tuple(titles) != SECTION_TITLES:
        raise SchemaParseFailureError(
            f"expected sections {list(SECTION_TITLES)}, got {titles}"
        )
    sections = {}
    for title, lines in zip(titles, bodies):
        body = "\n".join(lines).strip()
        if not body:
            raise SchemaParseFailureError(f"section {title!r} is empty")
        sections[_FIELD_BY_TITLE[title]] = body
    return sections


def _tokens(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def _term_weights(transcript: Sequence[TranscriptTurn]) -> dict[str, float]:
    """ln(n_turns / document frequency) per term, over all turns."""
    n = len(transcript)
    df = Counter()
    for turn in transcript:
        df.update(set(_tokens(turn.text)))
    return {word: math.log(n / count) for word, count in df.items()}


def _highlight_turns(
    transcript: Sequence[TranscriptTurn], limit: int = MAX_HIGHLIGHTS
) -> list[TranscriptTurn]:
    client_turns = [t for t in transcript if t.role == ROLE_CLIENT]
    if not client_turns:
        return []
    weights = _term_weights(transcript)
    scored = [
        (sum(weights[w] for w in _tokens(turn.text)), i, turn)
        for i, turn in enumerate(client_turns)
    ]
    scored.sort(key=lambda s: (-s[0], s[1]))
    chosen = sorted(scored[:limit], key=lambda s: (s[2].t_ms, s[1]))
    return [turn for _, _, turn in chosen]


def _dominant_label(label_counts: dict) -> str:
    best = "neutral"  # a session with no updates gets the steady-state advice
    best_count = 0
    for label in LABELS:
        count = int(label_counts.get(label, 0))
        if count > best_count:
            best, best_count = label, count
    return best


_SUGGESTION_TABLE = {
    "sad": (
        "Schedule an earlier-than-usual check-in, revisit grounding and "
        "breathing exercises, and keep next session's pacing gentle."
    ),
    "neutral": (
        "Maintain the current session cadence and continue monitoring for "
        "shifts in mood or engagement."
    ),
    "positive": (
        "Reinforce the strategies that are working and invite the client to "
        "name what contributed to the improvement."
    ),
}


def fallback_summarize(
    transcript: Sequence[TranscriptTurn],
    session_summary: dict,
    prior_summary: dict | None = None,
    emotional_markers: Sequence[tuple[int, str]] = (),
    fallback_reason: str | None = None,
    template_version: str = DEFAULT_TEMPLATE.version,
) -> StructuredReport:
    """Deterministic extractive report; no model, no fabricated sentences."""
    if not transcript:
        raise EmptyTranscriptError("transcript has no turns")

    client_turns = [t for t in transcript if t.role == ROLE_CLIENT]
    if client_turns:
        context = "\n".join(
            f"- [{t.t_ms} ms] {t.text}" for t in client_turns[:MAX_CONTEXT_TURNS]
        )
    else:
        context = "No client turns were recorded in this transcript."

    highlights = _highlight_turns(transcript)
    if highlights:
        highlights_text = "\n".join(
            f"- [{t.t_ms} ms] {t.text}" for t in highlights
        )
    else:
        highlights_text = "No client dialogue available to highlight."

    label_counts = dict(session_summary.get("label_counts", {}))
    if prior_summary is not None:
        prior_counts = dict(prior_summary.get("label_counts", {}))
        deltas = []
        for label in LABELS:
            now = int(label_counts.get(label, 0))
            before = int(prior_counts.get(label, 0))
            deltas.append(f"{label}: {now} ({now - before:+d} vs prior session)")
        progress = "Emotion label counts relative to the prior session: " + "; ".join(deltas) + "."
    else:
        progress = (
            "No prior session on record; this session establishes the baseline."
        )

    suggestions = _SUGGESTION_TABLE[_dominant_label(label_counts)]

    counts_line = ", ".join(
        f"{label} {int(label_counts.get(label, 0))}" for label in LABELS
    )
    n_alerts = sum(int(v) for v in session_summary.get("alert_counts", {}).values())
    summary_text = (
        f"{int(session_summary.get('n_updates', 0))} emotion updates over "
        f"{int(session_summary.get('duration_ms', 0))} ms ({counts_line}); "
        f"{n_alerts} alerts raised; {len(transcript)} transcript turns."
    )

    provenance = {
        "generator": "extractive_fallback",
        "template_version": template_version,
    }
    if fallback_reason is not None:
        provenance["fallback_reason"] = fallback_reason

    return StructuredReport(
        session_context=context,
        exploration_highlights=highlights_text,
        observed_progress=progress,
        followup_suggestions=suggestions,
        summary=summary_text,
        provenance=provenance,
        emotional_markers=tuple(emotional_markers),
    )


def _markers_for_session(
    updates: Sequence, session_summary: dict
) -> tuple[tuple[int, str], ...]:
    """(t_ms, label) pairs from updates that fall inside the session span."""
    lo = session_summary.get("start_t_ms")
    hi = session_summary.get("end_t_ms")
    markers = []
    for u in updates:
        t_ms, label = (u.t_ms, u.label) if hasattr(u, "t_ms") else (u[0], u[1])
        if lo is not None and t_ms < lo:
            continue
        if hi is not None and t_ms > hi:
            continue
        markers.append((int(t_ms), str(label)))
    return tuple(markers)


def generate_report(
    transcript: Sequence[TranscriptTurn],
    session_summary: dict,
    generator: TextGenerator | None = None,
    template: PromptTemplate = DEFAULT_TEMPLATE,
    prior_reports: Sequence[StructuredReport] = (),
    prior_summary: dict | None = None,
    updates: Sequence = (),
) -> StructuredReport:
    """Generate, parse, retry once with a repair instruction, else fall back."""
    if not transcript:
        raise EmptyTranscriptError("transcript has no turns")
    markers = _markers_for_session(updates, session_summary)

    def fall_back(reason: str | None) -> StructuredReport:
        return fallback_summarize(
            transcript,
            session_summary,
            prior_summary=prior_summary,
            emotional_markers=markers,
            fallback_reason=reason,
            template_version=template.version,
        )

    if generator is None:
        return fall_back(None)

    prompt = template.render(transcript, session_summary, prior_reports)
    attempts = (prompt, prompt + "\n\n" + REPAIR_INSTRUCTION)
    for attempt, text_prompt in enumerate(attempts):
        try:
            raw = generator.generate(text_prompt)
        except GeneratorUnavailableError:
            return fall_back("generator_unavailable")
        try:
            sections = parse_report_sections(raw)
        except SchemaParseFailureError:
            continue
        provenance = {
            "generator": getattr(generator, "kind", type(generator).__name__),
            "template_version": template.version,
        }
        if attempt > 0:
            provenance["format_repaired"] = True
        return StructuredReport(
            provenance=provenance, emotional_markers=markers, **sections
        )
    return fall_back("schema_parse_failure")


def validate_report(report: StructuredReport | dict) -> list[str]:
    """Empty list when the report satisfies the schema; else violations."""
    doc = report.to_dict() if isinstance(report, StructuredReport) else report
    violations = []
    for fname, title in zip(SECTION_FIELDS, SECTION_TITLES):
        value = doc.get(fname)
        if not isinstance(value, str) or not value.strip():
            violations.append(f"section {title!r} is missing or empty")
    order = doc.get("section_order")
    if order is not None and list(order) != list(SECTION_TITLES):
        violations.append(
            f"section order {order!r} differs from {list(SECTION_TITLES)}"
        )
    provenance = doc.get("provenance")
    if not isinstance(provenance, dict):
        violations.append("provenance is missing")
    else:
        for key in ("generator", "template_version"):
            if not provenance.get(key):
                violations.append(f"provenance is missing {key!r}")
    return violations


def read_transcript_jsonl(path: str | Path) -> list[TranscriptTurn]:
    turns = []
    last_t = None
    with Path(path).open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            turn = TranscriptTurn.from_dict(json.loads(line))
            if last_t is not None and turn.t_ms < last_t:
                raise ValueError(
                    f"line {lineno}: turn at t={turn.t_ms} is out of order"
                )
            last_t = turn.t_ms
            turns.append(turn)
    return turns


def write_transcript_jsonl(path: str | Path, turns: Sequence[TranscriptTurn]) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for turn in turns:
            fh.write(json.dumps(turn.to_dict()) + "\n")
