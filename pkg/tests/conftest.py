"""Shared oracles and fixtures."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from vekua import config
from vekua.pseudoanalytic import build_sequence_condition_s

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def helmholtz_closed_forms(x, y, c=1.0):
    """Independent closed forms of the Helmholtz formal powers ``f = exp(c y)``, ``z0 = 0``.

    Returns ``{(n, seed): (sc, vec)}`` for ``n <= 2`` and seeds ``"1"``, ``"k"``.
    """
    e, em, sh = np.exp(c * y), np.exp(-c * y), np.sinh(c * y)
    return {
        (0, "1"): (e, 0 * x),
        (0, "k"): (0 * x, em),
        (1, "1"): (x * e, sh / c),
        (1, "k"): (-sh / c, x * em),
        (2, "1"): ((x ** 2 - y / c) * e + sh / c ** 2, 2 * x * sh / c),
        (2, "k"): (-2 * x * sh / c, (x ** 2 + y / c) * em - sh / c ** 2),
    }


def grid_100(lo=-0.9, hi=0.9):
    X, Y = np.meshgrid(np.linspace(lo, hi, 10), np.linspace(lo, hi, 10))
    return X.ravel(), Y.ravel()


def sequence_from_preset(name):
    doc = config.load_preset(name)
    coeffs = config.build_coefficients(doc) if "coefficients" in doc else None
    grid = config.grid_points(doc["powers"]["grid"])
    cs = config.build_condition_s(doc, coeffs, grid)
    return doc, build_sequence_condition_s(cs, grid)


@pytest.fixture(scope="session")
def helmholtz_seq():
    return sequence_from_preset("helmholtz_powers")[1]


@pytest.fixture(scope="session")
def classical_seq():
    return sequence_from_preset("classical_powers")[1]


@pytest.fixture(scope="session")
def radial_seq():
    return sequence_from_preset("radial_powers")
