"""Command-line workflows.

Everything here runs fully offline except `serve`: dataset simulation,
feature extraction, training, benchmarking, recorded-input sessions,
report generation, and follow-up sweeps all work without a network.

Exit codes: 0 on success, 1 for usage errors, 2 for data or I/O errors.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from ..errors import CounselkitError
from ..followup import (
    ClientState,
    FollowupEngine,
    Outbox,
    read_goals_json,
)
from ..fusion import EmotionDistribution, EmotionUpdate, FusionConfig, compute_trend
from ..models import (
    MODEL_KINDS,
    as_emotion_distribution,
    extract_features,
    generate_synthetic_elicitation,
    load_model,
    predict_distribution,
    read_dataset_jsonl,
    run_benchmark,
    save_model,
    train_model,
    write_dataset_jsonl,
)
from ..ppg import HrvFeatures, ReactivitySample, ingest_ppg_stream, read_ppg
from ..reporting import (
    StructuredReport,
    generate_report,
    read_transcript_jsonl,
)
from ..session import (
    ClientConsent,
    MODALITIES,
    SessionConfig,
    SessionStore,
    create_session,
    read_log,
    updates_from_log,
)
from .config import load_config


@click.group(help="Counseling session toolkit: signals, models, sessions, reports.")
def cli() -> None:
    pass


# -- datasets and models -------------------------------------------------------


@cli.command(help="Generate a synthetic elicitation dataset of labeled feature windows.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--participants", default=30, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--blocks", default=6, show_default=True)
@click.option("--block-len-s", default=60.0, show_default=True)
def simulate(
    out_path: str, participants: int, seed: int, blocks: int, block_len_s: float
) -> None:
    streams = generate_synthetic_elicitation(
        participants, seed=seed, n_blocks=blocks, block_len_s=block_len_s
    )
    samples = extract_features(streams, window_len_s=block_len_s)
    n = write_dataset_jsonl(out_path, samples)
    click.echo(f"wrote {n} samples to {out_path}")


@cli.command(help="Window a raw PPG recording into HRV features and reactivity.")
@click.option("--in", "in_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--window-len-s", default=60.0, show_default=True)
@click.option("--rate-hz", default=100.0, show_default=True)
def features(
    in_path: str, out_path: str, window_len_s: float, rate_hz: float
) -> None:
    ingester = ingest_ppg_stream(
        read_ppg(in_path), window_len_s=window_len_s, sample_rate_hz=rate_hz
    )
    n = 0
    with open(out_path, "w", encoding="utf-8") as fh:
        for window, hrv, reactivity in ingester:
            fh.write(json.dumps(
                {
                    "start_ms": window.start_ms,
                    "end_ms": window.end_ms,
                    "hrv": hrv.to_dict(),
                    "reactivity": reactivity.to_dict(),
                },
                sort_keys=True,
            ) + "\n")
            n += 1
    click.echo(f"wrote {n} windows to {out_path}")


@cli.command(help="Train one classifier kind on a labeled feature dataset.")
@click.option("--data", "data_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--kind", type=click.Choice(MODEL_KINDS), default="random_forest",
              show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--seed", default=0, show_default=True)
@click.option("--hyperparams", "hyperparams_json", default=None,
              help="JSON object of kind-specific settings.")
def train(
    data_path: str, kind: str, out_path: str, seed: int, hyperparams_json: str | None
) -> None:
    samples = read_dataset_jsonl(data_path)
    hyperparams = json.loads(hyperparams_json) if hyperparams_json else None
    model = train_model(kind, samples, hyperparams=hyperparams, seed=seed)
    save_model(model, out_path)
    click.echo(f"saved {kind} model trained on {len(samples)} samples to {out_path}")


@cli.command(help="Benchmark every classifier kind on validation and test splits.")
@click.option("--data", "data_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Labeled dataset; omitted means a synthetic one is generated.")
@click.option("--participants", default=30, show_default=True,
              help="Synthetic corpus size when --data is omitted.")
@click.option("--seed", default=0, show_default=True)
@click.option("--csv", "csv_path", default=None, type=click.Path(dir_okay=False))
@click.option("--json", "json_path", default=None, type=click.Path(dir_okay=False))
def bench(
    data_path: str | None, participants: int, seed: int,
    csv_path: str | None, json_path: str | None,
) -> None:
    if data_path:
        samples = read_dataset_jsonl(data_path)
    else:
        streams = generate_synthetic_elicitation(participants, seed=seed)
        samples = extract_features(streams)
    report = run_benchmark(samples, seed=seed)
    if csv_path:
        Path(csv_path).write_text(report.to_csv_text(), encoding="utf-8")
    if json_path:
        Path(json_path).write_text(report.to_json_text(), encoding="utf-8")
    click.echo(report.to_csv_text().rstrip("\n"))


# -- offline sessions ----------------------------------------------------------


def _read_jsonl(path: str) -> list[dict]:
    docs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                docs.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path} line {lineno}: {exc}") from exc
    return docs


def _dist_from_model(model, hrv: HrvFeatures) -> EmotionDistribution:
    posterior = predict_distribution(model, hrv.to_vector())
    # The elicitation models score sad vs relax; a relaxed reading is the
    # calm baseline, so its mass lands on neutral.
    return as_emotion_distribution(
        {
            "sad": posterior.get("sad", 0.0),
            "neutral": posterior.get("relax", 0.0) + posterior.get("neutral", 0.0),
            "positive": posterior.get("positive", 0.0),
        }
    )


def _optional_dist(value) -> EmotionDistribution | None:
    return EmotionDistribution.from_sequence(value) if value is not None else None


@cli.command("run-session",
             help="Drive a full session from recorded inputs and write its log.")
@click.option("--store", "store_root", required=True,
              type=click.Path(file_okay=False))
@click.option("--session-id", required=True)
@click.option("--modality", type=click.Choice(MODALITIES), default="multimodal",
              show_default=True)
@click.option("--consent-speech/--no-consent-speech", default=True,
              show_default=True)
@click.option("--consent-ppg/--no-consent-ppg", default=True, show_default=True)
@click.option("--counselor", default="counselor", show_default=True)
@click.option("--client", "client_pseudonym", default="client", show_default=True)
@click.option("--ppg-raw", "ppg_raw_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Raw PPG recording run through the windowing pipeline.")
@click.option("--ppg-features", "ppg_features_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Precomputed per-window features, one JSON object per line.")
@click.option("--speech", "speech_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Speech emotion events, one JSON object per line.")
@click.option("--model", "model_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Classifier used to score windows that carry no posterior.")
@click.option("--interval-ms", default=None, type=int,
              help="Emotion update interval override.")
@click.option("--window-len-s", default=60.0, show_default=True)
@click.option("--rate-hz", default=100.0, show_default=True)
@click.option("--start-t-ms", default=0, show_default=True)
@click.option("--end-t-ms", default=None, type=int)
def run_session(
    store_root: str, session_id: str, modality: str,
    consent_speech: bool, consent_ppg: bool,
    counselor: str, client_pseudonym: str,
    ppg_raw_path: str | None, ppg_features_path: str | None,
    speech_path: str | None, model_path: str | None,
    interval_ms: int | None, window_len_s: float, rate_hz: float,
    start_t_ms: int, end_t_ms: int | None,
) -> None:
    if ppg_raw_path and ppg_features_path:
        raise click.UsageError("use --ppg-raw or --ppg-features, not both")

    fusion = FusionConfig() if interval_ms is None else FusionConfig(
        interval_ms=interval_ms
    )
    config = SessionConfig(
        session_id=session_id,
        modality=modality,
        consent=ClientConsent(speech=consent_speech, ppg=consent_ppg),
        counselor_id=counselor,
        client_pseudonym=client_pseudonym,
        fusion=fusion,
    )
    model = load_model(model_path) if model_path else None

    ppg_inputs: list[tuple[int, dict]] = []
    if ppg_raw_path:
        ingester = ingest_ppg_stream(
            read_ppg(ppg_raw_path), window_len_s=window_len_s, sample_rate_hz=rate_hz
        )
        for window, hrv, reactivity in ingester:
            ppg_inputs.append((
                window.end_ms,
                {"hrv": hrv, "reactivity": reactivity, "dist": None},
            ))
    elif ppg_features_path:
        for doc in _read_jsonl(ppg_features_path):
            t_ms = int(doc["t_ms"] if "t_ms" in doc else doc["end_ms"])
            hrv = (
                HrvFeatures.from_dict(doc["hrv"])
                if doc.get("hrv") is not None else None
            )
            reactivity = (
                ReactivitySample.from_dict(doc["reactivity"])
                if doc.get("reactivity") is not None else None
            )
            ppg_inputs.append((
                t_ms,
                {
                    "hrv": hrv,
                    "reactivity": reactivity,
                    "dist": _optional_dist(doc.get("dist")),
                },
            ))
    if model is not None:
        for _, fields in ppg_inputs:
            if fields["dist"] is None and fields["hrv"] is not None:
                fields["dist"] = _dist_from_model(model, fields["hrv"])

    speech_inputs: list[tuple[int, dict]] = []
    if speech_path:
        for doc in _read_jsonl(speech_path):
            speech_inputs.append((
                int(doc["t_ms"]),
                {
                    "dist": EmotionDistribution.from_sequence(doc["dist"]),
                    "quality": str(doc.get("quality", "low")),
                },
            ))

    merged = sorted(
        [("ppg", t, fields) for t, fields in ppg_inputs]
        + [("speech", t, fields) for t, fields in speech_inputs],
        key=lambda item: item[1],
    )

    runtime = create_session(config, SessionStore(store_root), start_t_ms=start_t_ms)
    for kind, t_ms, fields in merged:
        if kind == "ppg":
            runtime.ingest_ppg(t_ms, **fields)
        else:
            runtime.ingest_speech(t_ms, fields["dist"], fields["quality"])
    summary = runtime.end_session(end_t_ms=end_t_ms)
    click.echo(json.dumps(summary, sort_keys=True, indent=2))


# -- reports and follow-ups ------------------------------------------------------


@cli.command(help="Produce the structured report for a finished session.")
@click.option("--store", "store_root", required=True,
              type=click.Path(exists=True, file_okay=False))
@click.option("--session-id", required=True)
@click.option("--transcript", "transcript_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--prior-summary", "prior_summary_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Summary JSON of this client's previous session.")
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False),
              help="Where to write the report JSON.")
@click.option("--out-md", "out_md_path", default=None,
              type=click.Path(dir_okay=False),
              help="Where to write the rendered markdown.")
def report(
    store_root: str, session_id: str, transcript_path: str,
    prior_summary_path: str | None, out_path: str | None, out_md_path: str | None,
) -> None:
    store = SessionStore(store_root)
    summary = store.read_summary(session_id)
    events = read_log(store.events_path(session_id))
    transcript = read_transcript_jsonl(transcript_path)
    prior_summary = (
        json.loads(Path(prior_summary_path).read_text(encoding="utf-8"))
        if prior_summary_path else None
    )
    result = generate_report(
        transcript,
        summary,
        prior_summary=prior_summary,
        updates=updates_from_log(events),
    )
    if out_path:
        Path(out_path).write_text(
            json.dumps(result.to_dict(), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
    if out_md_path:
        Path(out_md_path).write_text(result.to_markdown(), encoding="utf-8")
    click.echo(result.to_markdown().rstrip("\n"))


@cli.command(help="Run one follow-up trigger sweep for a client and queue messages.")
@click.option("--goals", "goals_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--report", "report_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Latest report JSON for this client.")
@click.option("--updates", "updates_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Recent emotion updates, one JSON object per line.")
@click.option("--now-ms", required=True, type=int)
@click.option("--outbox", "outbox_path", default=None,
              type=click.Path(dir_okay=False),
              help="Outbox file to load and save; kept in memory when omitted.")
@click.option("--capacity", default=1000, show_default=True)
def followup(
    goals_path: str, report_path: str | None, updates_path: str | None,
    now_ms: int, outbox_path: str | None, capacity: int,
) -> None:
    goals = read_goals_json(goals_path)
    latest_report = None
    if report_path:
        latest_report = StructuredReport.from_dict(
            json.loads(Path(report_path).read_text(encoding="utf-8"))
        )
    updates: tuple[EmotionUpdate, ...] = ()
    if updates_path:
        updates = tuple(
            EmotionUpdate.from_wire(doc) for doc in _read_jsonl(updates_path)
        )
    state = ClientState(
        goals=goals,
        latest_report=latest_report,
        recent_updates=updates,
        trend=compute_trend(list(updates)),
    )
    if outbox_path and Path(outbox_path).exists():
        outbox = Outbox.load(outbox_path, capacity=capacity)
    else:
        outbox = Outbox(capacity=capacity)
    engine = FollowupEngine(outbox=outbox)
    messages = engine.sweep([state], now_ms)
    if outbox_path:
        outbox.save(outbox_path)
    click.echo(json.dumps(
        [m.to_dict() for m in messages], sort_keys=True, indent=2
    ))


@cli.command(help="Serve the HTTP gateway (loopback-only unless overridden).")
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--store", "store_root", default=None,
              type=click.Path(file_okay=False))
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.option("--allow-non-loopback", is_flag=True, default=False)
@click.option("--dashboard-dir", default=None,
              type=click.Path(exists=True, file_okay=False))
def serve(
    config_path: str | None, store_root: str | None, host: str | None,
    port: int | None, allow_non_loopback: bool, dashboard_dir: str | None,
) -> None:
    overrides = {
        "store_root": store_root,
        "host": host,
        "port": port,
        "dashboard_dir": dashboard_dir,
    }
    if allow_non_loopback:
        overrides["allow_non_loopback"] = True
    gateway_config = load_config(path=config_path, overrides=overrides)
    from .app import serve as run_server

    run_server(gateway_config)


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 1
    except (CounselkitError, OSError, ValueError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
