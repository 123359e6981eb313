"""Time-domain HR/HRV features over an inter-beat-interval series."""

from __future__ import annotations

import numpy as np

from ..errors import InsufficientBeatsError
from .types import HrvFeatures, IbiSeries

PNN_THRESHOLD_MS = 50.0


def compute_hrv_features(ibis: IbiSeries) -> HrvFeatures:
    """SDNN / RMSSD / pNN50 / mean HR over a gated IBI series.

    SDNN is the population standard deviation; pNN50 counts successive
    differences strictly greater than 50 ms.
    """
    x = np.asarray(ibis.ibis_ms, dtype=float)
    if len(x) < 2:
        raise InsufficientBeatsError(f"need >= 2 IBIs after gating, got {len(x)}")

    mean_ibi = float(np.mean(x))
    sdnn = float(np.std(x))
    diffs = np.diff(x)
    rmssd = float(np.sqrt(np.mean(diffs**2)))
    pnn50 = float(np.mean(np.abs(diffs) > PNN_THRESHOLD_MS))

    total_beats = len(x) + ibis.n_rejected
    artifact_ratio = ibis.n_rejected / total_beats if total_beats else 0.0

    return HrvFeatures(
        mean_hr_bpm=60000.0 / mean_ibi,
        mean_ibi_ms=mean_ibi,
        sdnn_ms=sdnn,
        rmssd_ms=rmssd,
        pnn50=pnn50,
        n_beats=len(x) + 1,
        artifact_ratio=artifact_ratio,
    )
