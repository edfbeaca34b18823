"""Exception hierarchy for the simulator."""

from __future__ import annotations


class RisTrError(Exception):
    """Base class for every error raised by :mod:`ristr`."""


class GeometryError(RisTrError, ValueError):
    pass


class EvenDimension(GeometryError):
    """Grid rows/cols must be odd so the centre element sits at the origin."""


class NonPositiveSpacing(GeometryError):
    pass


class OutsideNearField(GeometryError):
    pass


class EndpointAtOrigin(GeometryError):
    pass


class EmptyPathSet(RisTrError, ValueError):
    pass


class UnknownIndex(RisTrError, KeyError):
    pass


class ZeroChannel(RisTrError, ValueError):
    pass


class LengthMismatch(RisTrError, ValueError):
    pass


class TapOutOfRange(RisTrError, IndexError):
    pass


class ConfigError(RisTrError, ValueError):
    """Base for problems with a configuration file."""


class ParseError(ConfigError):
    pass


class SchemaError(ConfigError):
    pass


class UnitError(ConfigError):
    pass


class ReplicationMismatch(RisTrError):
    """Raised when computed tap counts disagree with the reference table."""

    def __init__(self, cells):
        self.cells = list(cells)
        desc = ", ".join(
            f"{c.rows}x{c.cols}@{c.bandwidth_hz / 1e9:g}GHz: got {c.computed}, expected {c.expected}"
            for c in self.cells
        )
        super().__init__(f"tap-count mismatch in {len(self.cells)} cell(s): {desc}")


class NearFieldWarning(UserWarning):
    """An endpoint lies beyond the near-field bound of the surface."""
