"""RIS grid layout, Euclidean distances and the near-field validity bound.

The surface lies in the yz-plane with its centre element at the origin.
Element ``(m, n)`` sits at ``(0, n*d, m*d)`` with ``m`` running over
``0, ±1, ..., ±(M-1)/2`` and ``n`` over ``0, ±1, ..., ±(N-1)/2``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterator, Literal

import numpy as np

from .errors import (
    EvenDimension,
    GeometryError,
    NearFieldWarning,
    NonPositiveSpacing,
    OutsideNearField,
)

SPEED_OF_LIGHT = 299_792_458.0  # m/s

DelayModel = Literal["approximate", "exact"]
NearFieldPolicy = Literal["warn", "strict"]


@dataclass(frozen=True)
class Position3:
    """Cartesian point in meters."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise GeometryError(f"position component {name}={value} is not finite")
            object.__setattr__(self, name, value)

    def __iter__(self) -> Iterator[float]:
        return iter((self.x, self.y, self.z))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    @classmethod
    def coerce(cls, value) -> "Position3":
        if isinstance(value, Position3):
            return value
        x, y, z = value
        return cls(x, y, z)


def distance(p: Position3, q: Position3) -> float:
    """Euclidean distance between two points."""
    dx, dy, dz = p.x - q.x, p.y - q.y, p.z - q.z
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def distances_to(point: Position3, positions: np.ndarray) -> np.ndarray:
    """Vectorised :func:`distance` from ``point`` to each row of ``positions``."""
    diff = np.asarray(positions, dtype=float) - point.as_array()
    return np.sqrt(np.sum(diff * diff, axis=-1))


@dataclass(frozen=True)
class SystemConfig:
    """Physical link parameters; every quantity is stored in SI linear units."""

    carrier_hz: float
    bandwidth_hz: float
    power_w: float
    noise_var: float
    tx: Position3
    rx: Position3
    delay_model: DelayModel = "approximate"
    near_field_policy: NearFieldPolicy = "warn"
    speed_of_light: float = SPEED_OF_LIGHT

    def __post_init__(self) -> None:
        object.__setattr__(self, "tx", Position3.coerce(self.tx))
        object.__setattr__(self, "rx", Position3.coerce(self.rx))
        for name in ("carrier_hz", "bandwidth_hz", "power_w", "noise_var", "speed_of_light"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0):
                raise GeometryError(f"{name} must be positive and finite, got {value}")
            object.__setattr__(self, name, value)
        for label, p in (("tx", self.tx), ("rx", self.rx)):
            if p.x <= 0:
                raise GeometryError(f"{label} must lie on the positive-x side of the surface, got x={p.x}")
        if self.delay_model not in ("approximate", "exact"):
            raise GeometryError(f"unknown delay model {self.delay_model!r}")
        if self.near_field_policy not in ("warn", "strict"):
            raise GeometryError(f"unknown near-field policy {self.near_field_policy!r}")

    @classmethod
    def from_dbm(cls, carrier_hz: float, bandwidth_hz: float, power_dbm: float, noise_var: float,
                 tx, rx, **kwargs) -> "SystemConfig":
        return cls(carrier_hz, bandwidth_hz, dbm_to_watts(power_dbm), noise_var, tx, rx, **kwargs)

    @property
    def wavelength(self) -> float:
        return self.speed_of_light / self.carrier_hz

    def replace(self, **changes) -> "SystemConfig":
        from dataclasses import replace

        return replace(self, **changes)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((float(dbm) - 30.0) / 10.0)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class RisTopology:
    """M x N reflecting surface with per-element amplitude and phase.

    ``amplitude`` and ``phase`` are ``(M, N)`` arrays indexed by
    ``(m + (M-1)/2, n + (N-1)/2)``. Elements are enumerated row-major in
    ``(m, n)`` everywhere else in the package.
    """

    rows: int
    cols: int
    spacing: float
    amplitude: np.ndarray = field(repr=False)
    phase: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        amp = _readonly(np.array(self.amplitude, dtype=float, copy=True))
        ph = _readonly(np.array(self.phase, dtype=float, copy=True))
        shape = (self.rows, self.cols)
        if amp.shape != shape or ph.shape != shape:
            raise GeometryError(f"reflection arrays must have shape {shape}")
        if np.any((amp < 0) | (amp > 1)) or not np.all(np.isfinite(amp)):
            raise GeometryError("reflection amplitudes must lie in [0, 1]")
        if np.any((ph < 0) | (ph >= 2 * np.pi)) or not np.all(np.isfinite(ph)):
            raise GeometryError("phase shifts must lie in [0, 2*pi)")
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "phase", ph)

    @property
    def size(self) -> int:
        return self.rows * self.cols

    @property
    def row_indices(self) -> np.ndarray:
        return np.arange(self.rows) - (self.rows - 1) // 2

    @property
    def col_indices(self) -> np.ndarray:
        return np.arange(self.cols) - (self.cols - 1) // 2

    def indices(self) -> np.ndarray:
        """``(Q, 2)`` integer array of ``(m, n)`` pairs in row-major order."""
        mm, nn = np.meshgrid(self.row_indices, self.col_indices, indexing="ij")
        return np.stack([mm.ravel(), nn.ravel()], axis=1)

    def positions(self) -> np.ndarray:
        """``(Q, 3)`` element coordinates in row-major order."""
        idx = self.indices()
        out = np.zeros((idx.shape[0], 3))
        out[:, 1] = idx[:, 1] * self.spacing
        out[:, 2] = idx[:, 0] * self.spacing
        return out

    def _offset(self, m: int, n: int) -> tuple[int, int]:
        i, j = m + (self.rows - 1) // 2, n + (self.cols - 1) // 2
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise KeyError((m, n))
        return i, j

    def position(self, m: int, n: int) -> Position3:
        self._offset(m, n)
        return Position3(0.0, n * self.spacing, m * self.spacing)

    def reflection(self, m: int, n: int) -> complex:
        i, j = self._offset(m, n)
        return complex(self.amplitude[i, j] * np.exp(1j * self.phase[i, j]))

    def flat_amplitude(self) -> np.ndarray:
        return self.amplitude.ravel()

    def flat_phase(self) -> np.ndarray:
        return self.phase.ravel()

    def with_reflection(self, amplitude=None, phase=None) -> "RisTopology":
        """Copy with replaced reflection coefficients (scalars broadcast; flat row-major arrays accepted)."""
        shape = (self.rows, self.cols)
        amp = self.amplitude if amplitude is None else np.broadcast_to(
            np.reshape(amplitude, shape) if np.size(amplitude) == self.size else amplitude, shape)
        ph = self.phase if phase is None else np.broadcast_to(
            np.reshape(phase, shape) if np.size(phase) == self.size else phase, shape)
        return RisTopology(self.rows, self.cols, self.spacing, amp, ph)

    @property
    def aperture(self) -> float:
        """Largest distance between two elements."""
        return self.spacing * math.hypot(self.rows - 1, self.cols - 1)


def build_topology(rows: int, cols: int, spacing: float, amplitude=1.0, phase=0.0) -> RisTopology:
    """Lay out an odd-by-odd grid of elements, all reflecting with ``amplitude`` and ``phase``."""
    if int(rows) != rows or int(cols) != cols or rows < 1 or cols < 1:
        raise GeometryError(f"grid dimensions must be positive integers, got {rows}x{cols}")
    rows, cols = int(rows), int(cols)
    if rows % 2 == 0 or cols % 2 == 0:
        raise EvenDimension(f"grid dimensions must be odd for a centred layout, got {rows}x{cols}")
    if not spacing > 0:
        raise NonPositiveSpacing(f"element spacing must be positive, got {spacing}")
    shape = (rows, cols)
    return RisTopology(rows, cols, float(spacing),
                       np.broadcast_to(np.asarray(amplitude, dtype=float), shape),
                       np.broadcast_to(np.asarray(phase, dtype=float), shape))


def topology_for(config: SystemConfig, rows: int, cols: int) -> RisTopology:
    """Half-wavelength grid for the configured carrier."""
    return build_topology(rows, cols, config.wavelength / 2)


def rayleigh_distance(topology: RisTopology, wavelength: float) -> float:
    return 2.0 * topology.aperture ** 2 / wavelength


def near_field_bound(topology: RisTopology) -> float:
    """``d[(M-1)^2 + (N-1)^2]``; equals the Rayleigh distance when ``d = lambda/2``."""
    return topology.spacing * ((topology.rows - 1) ** 2 + (topology.cols - 1) ** 2)


@dataclass(frozen=True)
class NearFieldReport:
    bound: float
    rayleigh: float
    tx_distance: float
    rx_distance: float
    tx_ok: bool
    rx_ok: bool

    @property
    def ok(self) -> bool:
        return self.tx_ok and self.rx_ok

    def failures(self) -> list[str]:
        out = []
        if not self.tx_ok:
            out.append(f"tx at {self.tx_distance:.6g} m")
        if not self.rx_ok:
            out.append(f"rx at {self.rx_distance:.6g} m")
        return out


def validate_near_field(config: SystemConfig, topology: RisTopology,
                        policy: NearFieldPolicy | None = None) -> NearFieldReport:
    """Check both endpoints against the near-field bound.

    Under the ``strict`` policy a violation raises :class:`OutsideNearField`;
    under ``warn`` a :class:`NearFieldWarning` is emitted and the report is
    returned with the failing endpoint flagged.
    """
    policy = policy or config.near_field_policy
    bound = near_field_bound(topology)
    rayleigh = rayleigh_distance(topology, config.wavelength)
    if math.isclose(topology.spacing, config.wavelength / 2, rel_tol=1e-12):
        assert math.isclose(bound, rayleigh, rel_tol=1e-9, abs_tol=1e-300), (bound, rayleigh)
    dt, dr = config.tx.norm(), config.rx.norm()
    report = NearFieldReport(bound, rayleigh, dt, dr, dt <= bound, dr <= bound)
    if not report.ok:
        msg = (f"{', '.join(report.failures())} beyond near-field bound {bound:.6g} m "
               f"for {topology.rows}x{topology.cols} surface")
        if policy == "strict":
            raise OutsideNearField(msg)
        warnings.warn(msg, NearFieldWarning, stacklevel=2)
    return report
