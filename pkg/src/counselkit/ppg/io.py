"""Readers and writers for raw PPG sample files.

Two formats: JSON Lines with objects {"t_ms": int, "v": float}, and CSV
with header ``t_ms,v``. Format is picked by file suffix.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Iterator

from .types import PpgSample


def read_ppg_jsonl(path: str | Path) -> Iterator[PpgSample]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            yield PpgSample(t_ms=int(obj["t_ms"]), value=float(obj["v"]))


def read_ppg_csv(path: str | Path) -> Iterator[PpgSample]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            yield PpgSample(t_ms=int(row["t_ms"]), value=float(row["v"]))


def read_ppg(path: str | Path) -> Iterator[PpgSample]:
    path = Path(path)
    if path.suffix == ".csv":
        return read_ppg_csv(path)
    return read_ppg_jsonl(path)


def write_ppg_jsonl(path: str | Path, samples: Iterable[PpgSample]) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            fh.write(json.dumps({"t_ms": s.t_ms, "v": s.value}) + "\n")
            n += 1
    return n


def write_ppg_csv(path: str | Path, samples: Iterable[PpgSample]) -> int:
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_ms", "v"])
        for s in samples:
            writer.writerow([s.t_ms, repr(s.value)])
            n += 1
    return n
