"""Shared fixtures: the synthetic elicitation corpus is expensive, build once."""

from __future__ import annotations

import pytest

from counselkit.models import extract_features, generate_synthetic_elicitation

CORPUS_SEED = 1234


@pytest.fixture(scope="session")
def elicitation_streams():
    return generate_synthetic_elicitation(n_participants=30, seed=CORPUS_SEED)


@pytest.fixture(scope="session")
def elicitation_dataset(elicitation_streams):
    return extract_features(elicitation_streams)
