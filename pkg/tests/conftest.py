from __future__ import annotations

import time
from pathlib import Path

import pytest

from solred.construction import build_s2a_from_solovay
from solred.scenario import load_scenario

CORPUS = Path(__file__).resolve().parent.parent / "src" / "solred" / "corpus"

VALID_WITNESS_NAMES = [
    "linear_basic",
    "identity_c2",
    "staged_delay",
    "oscillating",
    "table_tail",
    "scaled_alpha",
]
INVALID_WITNESS_NAMES = ["invalid_small_c", "invalid_g_above"]
MIRROR_NAMES = ["mirror_geometric", "mirror_staircase"]
LEFTCE_WITNESS_NAMES = ["linear_basic", "identity_c2", "staged_delay"]
ALL_NAMES = VALID_WITNESS_NAMES + INVALID_WITNESS_NAMES + MIRROR_NAMES


def corpus_path(name: str) -> Path:
    return CORPUS / f"{name}.json"


@pytest.fixture(scope="session")
def scenarios():
    return {name: load_scenario(corpus_path(name)) for name in ALL_NAMES}


@pytest.fixture(scope="session")
def built(scenarios):
    """Full-depth construction for every valid witness scenario, built once.

    Maps name -> (witness, trace, wall_seconds).
    """
    out = {}
    for name in VALID_WITNESS_NAMES:
        sc = scenarios[name]
        t0 = time.monotonic()
        wit, trace = build_s2a_from_solovay(
            sc.solovay_witness, sc.beta_approx, sc.alpha, sc.beta,
            depth=sc.depth, stage_budget=sc.stage_budget)
        out[name] = (wit, trace, time.monotonic() - t0)
    return out
