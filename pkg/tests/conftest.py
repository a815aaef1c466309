"""Shared fixtures: reference parameter sets and random draw helpers."""

import math
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

import quadsense as q

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

TWO_PI = 2.0 * math.pi


def reference_system(eta_c=1.0, **overrides):
    """The membrane-in-the-middle reference parameter set used throughout."""
    raw = {
        "Omega_m": TWO_PI * 1.0e6,
        "Q_m": 5.0e8,
        "m_eff": 1.0e-12,
        "kappa": TWO_PI * 2.75e6,
        "eta_c": eta_c,
        "g0": TWO_PI * 2.9e-7,
        "n_c": 1.08e13,
        "lambda_s": 1.56e-6,
        "coop": 0.016,
    }
    raw.update(overrides)
    return q.derive_params({k: v for k, v in raw.items() if v is not None})


def random_stable_draw(rng):
    """One stable (system, squeezer) pair in kappa = 1 units."""
    while True:
        s = q.derive_params({
            "Omega_m": 10 ** rng.uniform(-2, 2),
            "Gamma_m": 10 ** rng.uniform(-7, -1),
            "m_eff": 1e-12,
            "kappa": 1.0,
            "eta_c": rng.uniform(0.05, 1.0),
            "g0": 1e-3,
            "q_bar_m": 0.0,
        })
        s = replace(s, g=10 ** rng.uniform(-4, 1), Delta=rng.uniform(-2.0, 0.0))
        sq = q.SqueezerParams(G=rng.uniform(0.0, 0.3), theta=rng.uniform(-np.pi, 0.0))
        if q.is_stable(s, sq):
            return s, sq


@pytest.fixture(scope="session")
def table2():
    return reference_system()


@pytest.fixture(scope="session")
def star097():
    return q.load_scenario(SCENARIO_DIR / "star_eta097.json")


@pytest.fixture(scope="session")
def star1():
    return q.load_scenario(SCENARIO_DIR / "star_eta1.json")


@pytest.fixture(scope="session")
def opo_scenario():
    return q.load_scenario(SCENARIO_DIR / "opo_shg.json")


@pytest.fixture(scope="session")
def scenario_dir():
    return SCENARIO_DIR
