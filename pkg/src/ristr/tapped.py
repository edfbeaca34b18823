"""Bandwidth-limited tapped delay line built from a set of propagation paths.

Paths whose delays fall in the same ``1/W`` interval are unresolvable and are
merged into one tap by summing their coefficients. Taps are numbered from 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .channel import PathSet
from .errors import EmptyPathSet, TapOutOfRange, UnknownIndex


@dataclass(frozen=True)
class TappedChannel:
    """Equivalent discrete CIR.

    ``tap_of_path[k]`` is the 1-based tap holding path ``k`` of ``paths``;
    ``coefficients[l-1]`` is the merged coefficient of tap ``l``. Interior taps
    with no paths stay in the sequence with a zero coefficient.
    """

    paths: PathSet
    bandwidth_hz: float
    tap_origin: float
    tap_of_path: np.ndarray
    coefficients: np.ndarray

    @property
    def num_taps(self) -> int:
        return len(self.coefficients)

    def members(self, tap: int) -> list[tuple[int, int]]:
        """Element indices belonging to tap ``tap`` (1-based)."""
        self.check_tap(tap)
        rows = np.flatnonzero(self.tap_of_path == tap)
        return [(int(m), int(n)) for m, n in self.paths.indices[rows]]

    def cardinalities(self) -> np.ndarray:
        """``|T_l|`` for ``l = 1..L`` as an int array."""
        return np.bincount(self.tap_of_path - 1, minlength=self.num_taps)

    def coefficient(self, tap: int) -> complex:
        self.check_tap(tap)
        return complex(self.coefficients[tap - 1])

    def energy(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def check_tap(self, tap: int) -> None:
        if not 1 <= tap <= self.num_taps:
            raise TapOutOfRange(f"tap {tap} outside 1..{self.num_taps}")


def _tap_numbers(offsets: np.ndarray, bandwidth_hz: float) -> np.ndarray:
    """1-based tap of each delay offset under ``(l-1)/W <= offset < l/W``.

    The floor is only a first guess; the half-open comparison is then applied
    literally on the doubles so boundary ties always go to the higher tap.
    """
    taps = np.floor(offsets * bandwidth_hz).astype(np.int64) + 1
    for _ in range(4):
        low = (taps - 1) / bandwidth_hz
        high = taps / bandwidth_hz
        down = offsets < low
        up = offsets >= high
        if not (down.any() or up.any()):
            break
        taps = taps - down + up
    return taps


def bin_paths(paths: PathSet, bandwidth_hz: float) -> TappedChannel:
    if len(paths) == 0:
        raise EmptyPathSet("cannot bin an empty path set")
    if not bandwidth_hz > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    w = float(bandwidth_hz)
    tau_o = math.floor(paths.tau_min * w) / w
    taps = _tap_numbers(paths.delays - tau_o, w)
    # L from the ceiling rule; widened only if a path sits exactly on the last boundary.
    num_taps = max(math.ceil((paths.tau_max - tau_o) * w), int(taps.max()), 1)
    coeffs = np.zeros(num_taps, dtype=complex)
    np.add.at(coeffs, taps - 1, paths.coefficients)
    coeffs.setflags(write=False)
    taps.setflags(write=False)
    return TappedChannel(paths, w, tau_o, taps, coeffs)


def tap_coefficient(paths: PathSet, members: Iterable[tuple[int, int]]) -> complex:
    """Coherent sum of the coefficients of ``members``."""
    total = 0j
    for index in members:
        try:
            k = paths.position_of(tuple(index))
        except KeyError:
            raise UnknownIndex(f"element {tuple(index)} is not in the path set") from None
        total += paths.coefficients[k]
    return complex(total)
