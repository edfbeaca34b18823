"""Time-reversal prefilter and the resulting useful/ISI power split.

Sequences are held 0-based internally; lag ``L`` in the reported 1-based
convention is ``response[L - 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, ZeroChannel
from .tapped import TappedChannel


def _taps(channel) -> np.ndarray:
    if isinstance(channel, TappedChannel):
        return np.asarray(channel.coefficients)
    return np.asarray(channel, dtype=complex)


@dataclass(frozen=True)
class TrPrefilter:
    taps: np.ndarray

    def energy(self) -> float:
        return float(np.sum(np.abs(self.taps) ** 2))

    def __len__(self) -> int:
        return len(self.taps)


def tr_prefilter(channel) -> TrPrefilter:
    """Normalised, reversed, conjugated channel: ``g[k] = conj(h[L+1-k]) / ||h||``."""
    h = _taps(channel)
    norm = np.sqrt(np.sum(np.abs(h) ** 2))
    if norm == 0:
        raise ZeroChannel("cannot time-reverse an all-zero channel")
    g = np.conj(h[::-1]) / norm
    g.setflags(write=False)
    return TrPrefilter(g)


def effective_response(prefilter: TrPrefilter, channel) -> np.ndarray:
    """Full linear convolution of prefilter and channel, length ``2L-1``.

    The peak sits at 1-based lag ``L`` and equals the channel's l2 norm.
    """
    h = _taps(channel)
    if len(prefilter) != len(h):
        raise LengthMismatch(f"prefilter has {len(prefilter)} taps, channel has {len(h)}")
    return np.convolve(prefilter.taps, h)


def useful_power(power_w: float, channel) -> float:
    h = _taps(channel)
    return float(power_w * np.sum(np.abs(h) ** 2))


def isi_power(power_w: float, prefilter: TrPrefilter, channel) -> float:
    resp = effective_response(prefilter, channel)
    off_peak = np.delete(resp, len(prefilter) - 1)
    return float(power_w * np.sum(np.abs(off_peak) ** 2))


def sinr(power_w: float, channel, noise_var: float) -> float:
    h = _taps(channel)
    if not np.any(h):
        return 0.0
    p_isi = isi_power(power_w, tr_prefilter(h), h)
    return useful_power(power_w, h) / (p_isi + noise_var)


def snr_bound(power_w: float, channel, noise_var: float) -> float:
    """ISI-free SNR, an upper bound on :func:`sinr`."""
    return useful_power(power_w, channel) / noise_var


@dataclass(frozen=True)
class LinkResult:
    useful_power: float
    isi_power: float
    sinr: float
    snr_bound: float
    response: np.ndarray

    @property
    def peak(self) -> complex:
        return complex(self.response[(len(self.response) - 1) // 2])


def evaluate_link(power_w: float, channel, noise_var: float) -> LinkResult:
    """All time-reversal metrics for one channel in a single pass."""
    h = _taps(channel)
    p_u = useful_power(power_w, h)
    if p_u == 0:
        resp = np.zeros(2 * len(h) - 1, dtype=complex)
        return LinkResult(0.0, 0.0, 0.0, 0.0, resp)
    g = tr_prefilter(h)
    resp = effective_response(g, h)
    off_peak = np.delete(resp, len(h) - 1)
    p_isi = float(power_w * np.sum(np.abs(off_peak) ** 2))
    return LinkResult(p_u, p_isi, p_u / (p_isi + noise_var), p_u / noise_var, resp)
