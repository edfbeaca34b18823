"""CSI-based passive beamforming baseline.

For tap ``l`` the elements in that tap are co-phased so their contributions
add coherently; elements outside the tap contribute nothing to it. ISI is
assumed fully suppressed, so only an SNR is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import build_path_set, cophasing_phases
from .geometry import Position3, RisTopology, SystemConfig
from .tapped import TappedChannel, bin_paths


def _gain(tx: Position3, rx: Position3, power_w: float, noise_var: float) -> float:
    """SNR of a single coherent unit-amplitude path."""
    return power_w / (16 * math.pi ** 2 * tx.norm() ** 2 * rx.norm() ** 2 * noise_var)


def pbf_tap_snr(power_w: float, channel: TappedChannel, tap: int,
                tx: Position3, rx: Position3, noise_var: float) -> float:
    channel.check_tap(tap)
    count = int(np.count_nonzero(channel.tap_of_path == tap))
    return count ** 2 * _gain(tx, rx, power_w, noise_var)


@dataclass(frozen=True)
class PbfResult:
    per_tap_snr: np.ndarray
    best_tap: int
    best_snr: float


def pbf_best_snr(power_w: float, channel: TappedChannel,
                 tx: Position3, rx: Position3, noise_var: float) -> PbfResult:
    """Evaluate every tap and keep the strongest; ties go to the lowest tap."""
    counts = channel.cardinalities().astype(float)
    snrs = counts ** 2 * _gain(tx, rx, power_w, noise_var)
    snrs.setflags(write=False)
    best = int(np.argmax(snrs))
    return PbfResult(snrs, best + 1, float(snrs[best]))


def cophased_tap_channel(config: SystemConfig, topology: RisTopology,
                         channel: TappedChannel, tap: int) -> TappedChannel:
    """Channel with tap ``tap``'s elements co-phased at full amplitude and all others off.

    Used to cross-check :func:`pbf_tap_snr` against the TR SNR bound.
    Only the approximate delay model keeps the binning unchanged.
    """
    channel.check_tap(tap)
    on = channel.tap_of_path == tap
    phase = np.where(on, cophasing_phases(config, topology), 0.0)
    switched = topology.with_reflection(amplitude=on.astype(float), phase=phase)
    return bin_paths(build_path_set(config, switched), channel.bandwidth_hz)
