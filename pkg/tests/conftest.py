"""Shared fixtures and independent oracle implementations.

The oracles here deliberately re-derive every quantity from scratch
(naive recursion loops, numpy formula evaluation, finite differences,
exhaustive grids) so the tests never exercise the same code path they
are checking.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from amplink import LinkConfig, max_gain

LN2 = math.log(2.0)


# --- naive recursion oracle --------------------------------------------------

def naive_coefficients(eta: float, gains) -> tuple[list[float], list[float]]:
    """Literal loop evaluation of the attenuation/noise recursion."""
    taus = [1.0]
    nus = [0.0]
    for g in gains:
        taus.append(g * eta * taus[-1])
        nus.append(g * eta * nus[-1] + g - 1.0)
    return taus, nus


def naive_future(eta: float, gains) -> tuple[list[float], list[float]]:
    """Direct product/sum evaluation of the future coefficients."""
    K = len(gains)
    tau_future = []
    for i in range(K + 1):
        prod = 1.0
        for j in range(i, K):
            prod *= gains[j]
        tau_future.append(eta ** (K - i) * prod)
    nu_future = []
    for i in range(K + 1):
        total = 0.0
        for j in range(i + 1, K + 1):
            total += (gains[j - 1] - 1.0) * tau_future[j]
        nu_future.append(total)
    return tau_future, nu_future


# --- numpy spectral-efficiency formulas (vectorized, independent) ------------

def np_thermal_entropy(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = (np.log1p(x[pos]) + x[pos] * np.log1p(1.0 / x[pos])) / LN2
    return out


def np_holevo(tau, nu, n):
    return np_thermal_entropy(tau * n + nu) - np_thermal_entropy(nu)


def np_shannon(tau, nu, n):
    return np.log1p(tau * n / (1.0 + nu)) / LN2


def np_homodyne(tau, nu, n):
    return np.log1p(4.0 * tau * n / (1.0 + 2.0 * nu)) / LN2


# --- finite differences -------------------------------------------------------

def central_difference(f, x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)


# --- random feasible configurations -------------------------------------------

def random_config(rng: np.random.Generator, segments: int | None = None) -> LinkConfig:
    K = segments if segments is not None else int(rng.integers(2, 9))
    alpha = rng.uniform(0.03, 0.07)
    length = rng.uniform(40.0, 400.0)
    n = 10.0 ** rng.uniform(3.0, 8.0)
    return LinkConfig(alpha, length, K, n)


def random_free_gains(rng: np.random.Generator, config: LinkConfig) -> list[float]:
    cap = max_gain(config)
    return list(1.0 + rng.uniform(0.02, 0.98, config.segments - 1) * (cap - 1.0))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
