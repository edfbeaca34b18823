"""Near-field cascaded Tx -> RIS element -> Rx paths under the uniform spherical wave model.

Magnitudes use the endpoint-to-centre distance (uniform gain across the
surface); phases use the exact per-element distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import EmptyPathSet, EndpointAtOrigin
from .geometry import (
    NearFieldReport,
    Position3,
    RisTopology,
    SystemConfig,
    distance,
    distances_to,
    validate_near_field,
)

_TWO_PI = 2.0 * math.pi


def propagation_phase(r, wavelength: float):
    """``2*pi*r/lambda`` reduced to ``[0, 2*pi)``.

    The distance is reduced modulo the wavelength before scaling, which keeps
    the fractional part exact when ``r/lambda`` is in the hundreds.
    """
    return _TWO_PI * (np.mod(r, wavelength) / wavelength)


def link_coefficient(endpoint: Position3, element: Position3, wavelength: float) -> complex:
    """Single-hop coefficient between an endpoint and one element."""
    centre = endpoint.norm()
    if centre == 0:
        raise EndpointAtOrigin("endpoint coincides with the surface centre")
    r = distance(endpoint, element)
    return complex(np.exp(-1j * propagation_phase(r, wavelength)) / (centre * math.sqrt(4 * math.pi)))


def _check_endpoints(config: SystemConfig) -> tuple[float, float]:
    nt, nr = config.tx.norm(), config.rx.norm()
    if nt == 0 or nr == 0:
        raise EndpointAtOrigin("endpoint coincides with the surface centre")
    return nt, nr


def path_coefficient(config: SystemConfig, topology: RisTopology, m: int, n: int) -> complex:
    """End-to-end coefficient of the path reflected by element ``(m, n)``."""
    nt, nr = _check_endpoints(config)
    p = topology.position(m, n)
    i, j = m + (topology.rows - 1) // 2, n + (topology.cols - 1) // 2
    a, phi = topology.amplitude[i, j], topology.phase[i, j]
    r = distance(config.tx, p) + distance(config.rx, p)
    mag = a / (4 * math.pi * nt * nr)
    return complex(mag * np.exp(1j * (phi - propagation_phase(r, config.wavelength))))


def path_delay(config: SystemConfig, topology: RisTopology, m: int, n: int) -> float:
    p = topology.position(m, n)
    r = distance(config.tx, p) + distance(config.rx, p)
    if config.delay_model == "exact":
        i, j = m + (topology.rows - 1) // 2, n + (topology.cols - 1) // 2
        r = r + config.wavelength * topology.phase[i, j] / _TWO_PI
    return r / config.speed_of_light


@dataclass(frozen=True)
class Path:
    index: tuple[int, int]
    r_tx: float
    r_rx: float
    coefficient: complex
    delay: float


@dataclass(frozen=True)
class PathSet:
    """All ``Q`` propagation paths, stored column-wise in row-major element order."""

    indices: np.ndarray
    r_tx: np.ndarray
    r_rx: np.ndarray
    coefficients: np.ndarray
    delays: np.ndarray
    near_field: NearFieldReport | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        q = len(self.delays)
        if q == 0:
            raise EmptyPathSet("a path set needs at least one path")
        for name in ("indices", "r_tx", "r_rx", "coefficients", "delays"):
            arr = np.array(getattr(self, name), copy=True)
            if arr.shape[0] != q:
                raise ValueError(f"{name} has {arr.shape[0]} entries, expected {q}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.delays)

    def __iter__(self) -> Iterator[Path]:
        for k in range(len(self)):
            yield self[k]

    def __getitem__(self, k: int) -> Path:
        m, n = self.indices[k]
        return Path((int(m), int(n)), float(self.r_tx[k]), float(self.r_rx[k]),
                    complex(self.coefficients[k]), float(self.delays[k]))

    @property
    def tau_min(self) -> float:
        return float(self.delays.min())

    @property
    def tau_max(self) -> float:
        return float(self.delays.max())

    def position_of(self, index: tuple[int, int]) -> int:
        """Row in the column arrays holding element ``index``."""
        hits = np.flatnonzero((self.indices[:, 0] == index[0]) & (self.indices[:, 1] == index[1]))
        if hits.size == 0:
            raise KeyError(index)
        return int(hits[0])


def build_path_set(config: SystemConfig, topology: RisTopology) -> PathSet:
    """Evaluate every element's path coefficient and delay.

    Runs the near-field check first, so a ``strict`` config raises before any
    channel is produced.
    """
    report = validate_near_field(config, topology)
    nt, nr = _check_endpoints(config)
    pos = topology.positions()
    r_tx = distances_to(config.tx, pos)
    r_rx = distances_to(config.rx, pos)
    total = r_tx + r_rx
    amp = topology.flat_amplitude()
    phi = topology.flat_phase()
    lam = config.wavelength
    coeffs = amp / (4 * math.pi * nt * nr) * np.exp(1j * (phi - propagation_phase(total, lam)))
    if config.delay_model == "exact":
        total = total + lam * phi / _TWO_PI
    delays = total / config.speed_of_light
    return PathSet(topology.indices(), r_tx, r_rx, coeffs, delays, report)


def cophasing_phases(config: SystemConfig, topology: RisTopology) -> np.ndarray:
    """Per-element phase (flat, row-major) that cancels each path's propagation phase."""
    pos = topology.positions()
    total = distances_to(config.tx, pos) + distances_to(config.rx, pos)
    phi = propagation_phase(total, config.wavelength)
    return np.where(phi >= _TWO_PI, 0.0, phi)
