"""Shared builders for the test-suite."""

from __future__ import annotations

import math

import numpy as np

from ristr import Position3, SystemConfig, build_topology
from ristr.channel import PathSet
from ristr.geometry import near_field_bound

PAPER_TX = Position3(2, 2, 0)
PAPER_RX = Position3(2, -2, 0)


def paper_config(bandwidth_hz: float = 2e9, **kw) -> SystemConfig:
    return SystemConfig(10e9, bandwidth_hz, 1.0, 1.0, PAPER_TX, PAPER_RX, **kw)


def _random_endpoint(rng: np.random.Generator, bound: float) -> Position3:
    r = rng.uniform(0.3, min(bound, 20.0))
    while True:
        v = rng.normal(size=3)
        v /= np.linalg.norm(v)
        v[0] = abs(v[0])
        if v[0] > 0.05:
            return Position3(*(r * v))


def random_case(rng: np.random.Generator, max_q: int = 2025):
    """Random odd grid, bandwidth in [0.5, 8] GHz and endpoints inside the near-field bound."""
    while True:
        rows = int(rng.choice(np.arange(1, 46, 2)))
        max_cols = max_q // rows
        cols = int(rng.choice(np.arange(1, max_cols + 1, 2)))
        topo = build_topology(rows, cols, 0.015)
        if near_field_bound(topo) >= 0.5:
            break
    bound = near_field_bound(topo)
    w = rng.uniform(0.5e9, 8e9)
    cfg = SystemConfig(10e9, w, 1.0, 1.0, _random_endpoint(rng, bound), _random_endpoint(rng, bound),
                       near_field_policy="strict")
    return cfg, topo


def rel_err(a, b) -> float:
    a, b = complex(a), complex(b)
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(a), abs(b))


def db(x: float) -> float:
    return 10 * math.log10(x)


def synthetic(delays, coeffs=None):
    delays = np.asarray(delays, dtype=float)
    q = len(delays)
    coeffs = np.ones(q, dtype=complex) if coeffs is None else np.asarray(coeffs, dtype=complex)
    idx = np.stack([np.zeros(q, int), np.arange(q) - (q - 1) // 2], axis=1)
    return PathSet(idx, np.ones(q), np.ones(q), coeffs, delays)
