"""Counselor/client attribution of speaker clusters."""

from __future__ import annotations

import logging
from dataclasses import replace

import numpy as np

from .types import ROLE_CLIENT, ROLE_COUNSELOR, CounselorProfile, SpeechSegment

log = logging.getLogger(__name__)


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 2.0  # maximal distance: a zero signature matches nobody
    return 1.0 - float(np.dot(a, b)) / (na * nb)


def attribute_speakers(
    segments: list[SpeechSegment], profiles: list[CounselorProfile]
) -> list[SpeechSegment]:
    """Assign counselor/client roles per cluster.

    A cluster is the counselor iff the cosine distance from its centroid
    to the nearest enrolled profile is within that profile's threshold.
    Without profiles every cluster is treated as client.
    """
    if not segments:
        return []
    if any(s.cluster_id is None for s in segments):
        raise ValueError("attribution requires clustered segments")

    if not profiles:
        log.warning("no counselor profiles enrolled; treating every cluster as client")
        return [replace(s, role=ROLE_CLIENT) for s in segments]

    cluster_ids = sorted({s.cluster_id for s in segments})
    roles: dict[int, str] = {}
    for cid in cluster_ids:
        members = [s.centroid_embedding for s in segments if s.cluster_id == cid]
        centroid = np.mean(members, axis=0)
        distances = [cosine_distance(centroid, p.reference_embedding) for p in profiles]
        nearest = int(np.argmin(distances))
        is_counselor = distances[nearest] <= profiles[nearest].match_threshold
        roles[cid] = ROLE_COUNSELOR if is_counselor else ROLE_CLIENT

    return [replace(s, role=roles[s.cluster_id]) for s in segments]
