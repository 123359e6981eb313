"""File formats for the speech pipeline: frames, profiles."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

import numpy as np

from .types import AudioFrameFeatures, CounselorProfile


def read_frames_jsonl(path: str | Path) -> list[AudioFrameFeatures]:
    """Frames as JSONL {"t_ms", "energy", "emb"}; all embeddings share D."""
    frames: list[AudioFrameFeatures] = []
    dim: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            emb = np.asarray(obj["emb"], dtype=float)
            if dim is None:
                dim = emb.shape[0]
            elif emb.shape[0] != dim:
                raise ValueError(
                    f"embedding dimension changed from {dim} to {emb.shape[0]}"
                )
            frames.append(
                AudioFrameFeatures(
                    t_ms=int(obj["t_ms"]), energy=float(obj["energy"]), embedding=emb
                )
            )
    return frames


def write_frames_jsonl(path: str | Path, frames: Iterable[AudioFrameFeatures]) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for f in frames:
            fh.write(
                json.dumps(
                    {"t_ms": f.t_ms, "energy": f.energy, "emb": f.embedding.tolist()}
                )
                + "\n"
            )
            n += 1
    return n


def load_profiles(path: str | Path) -> list[CounselorProfile]:
    """Profile store: JSON list of {counselor_id, embedding, threshold}."""
    with open(path, "r", encoding="utf-8") as fh:
        rows = json.load(fh)
    return [
        CounselorProfile(
            counselor_id=str(r["counselor_id"]),
            reference_embedding=np.asarray(r["embedding"], dtype=float),
            match_threshold=float(r.get("threshold", 0.3)),
        )
        for r in rows
    ]


def save_profiles(path: str | Path, profiles: Iterable[CounselorProfile]) -> None:
    rows = [
        {
            "counselor_id": p.counselor_id,
            "embedding": p.reference_embedding.tolist(),
            "threshold": p.match_threshold,
        }
        for p in profiles
    ]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rows, fh, indent=2)
