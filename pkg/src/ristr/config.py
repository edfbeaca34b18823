"""YAML configuration files.

Schema version 1. Every key is optional; unknown keys are rejected.

.. code-block:: yaml

    schema_version: 1
    carrier_frequency_hz: 10.0e+9
    bandwidth_hz: 2.0e+9
    transmit_power_dbm: 30
    noise_variance: 1.0
    tx_position: [2, 2, 0]
    rx_position: [2, -2, 0]
    rows: 1
    cols: 1225
    element_spacing_m: 0.015          # or "half_wavelength"
    reflection_amplitude: 1.0
    phase_shift_rad: 0.0
    delay_model: approximate          # or exact
    near_field_policy: warn           # or strict
    output_format: csv                # or table
    output_units: both                # db, linear or both
    sweep:
      kind: element_count             # element_count, bandwidth or topology
      values: [1, 9, 25]              # "1:1225:2" ranges are accepted too
      topology_rule: linear
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Literal, NamedTuple, Sequence

import yaml

from .errors import ParseError, SchemaError, UnitError
from .geometry import GeometryError, RisTopology, SystemConfig, build_topology, dbm_to_watts

SCHEMA_VERSION = 1

DEFAULTS: dict[str, Any] = {
    "schema_version": SCHEMA_VERSION,
    "carrier_frequency_hz": 10e9,
    "bandwidth_hz": 2e9,
    "transmit_power_dbm": 30.0,
    "noise_variance": 1.0,
    "tx_position": [2.0, 2.0, 0.0],
    "rx_position": [2.0, -2.0, 0.0],
    "rows": 1,
    "cols": 1225,
    "element_spacing_m": 0.015,
    "reflection_amplitude": 1.0,
    "phase_shift_rad": 0.0,
    "delay_model": "approximate",
    "near_field_policy": "warn",
    "output_format": "csv",
    "output_units": "both",
    "sweep": None,
}

SweepKind = Literal["element_count", "bandwidth", "topology"]
SWEEP_KEYS = {"kind", "values", "topology_rule"}
TOPOLOGY_RULES = ("linear",)


@dataclass(frozen=True)
class SweepSpec:
    """One swept dimension over a base configuration."""

    base: SystemConfig
    topology: RisTopology
    kind: SweepKind
    values: tuple
    topology_rule: str = "linear"
    output_format: Literal["csv", "table"] = "csv"
    output_units: Literal["db", "linear", "both"] = "both"

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _check_sweep_values(self.kind, self.values))
        if self.topology_rule not in TOPOLOGY_RULES:
            raise SchemaError(f"topology_rule must be one of {TOPOLOGY_RULES}, got {self.topology_rule!r}")

    def points(self) -> list[tuple[SystemConfig, RisTopology]]:
        """Concrete (config, topology) pairs in sweep order."""
        amp = float(self.topology.amplitude.flat[0])
        phase = float(self.topology.phase.flat[0])
        spacing = self.topology.spacing
        if self.kind == "element_count":
            return [(self.base, build_topology(1, q, spacing, amp, phase)) for q in self.values]
        if self.kind == "bandwidth":
            return [(replace(self.base, bandwidth_hz=w), self.topology) for w in self.values]
        return [(self.base, build_topology(m, n, spacing, amp, phase)) for m, n in self.values]


class LoadedConfig(NamedTuple):
    system: SystemConfig
    topology: RisTopology
    sweep: SweepSpec | None
    output_format: str
    output_units: str


def _check_sweep_values(kind: str, values) -> tuple:
    if not values:
        raise SchemaError("sweep values must be nonempty")
    if kind == "element_count":
        vals = tuple(_as_int(v, "sweep value") for v in values)
        for q in vals:
            if q < 1 or q % 2 == 0:
                raise SchemaError(f"element counts must be odd and positive (centred grid), got {q}")
    elif kind == "bandwidth":
        vals = tuple(_as_float(v, "sweep value") for v in values)
        if any(v <= 0 for v in vals):
            raise UnitError("swept bandwidths must be positive")
    elif kind == "topology":
        try:
            vals = tuple((_as_int(m, "rows"), _as_int(n, "cols")) for m, n in values)
        except (TypeError, ValueError):
            raise SchemaError("topology sweep values must be [rows, cols] pairs") from None
        for m, n in vals:
            if m < 1 or n < 1 or m % 2 == 0 or n % 2 == 0:
                raise SchemaError(f"topology {m}x{n}: rows and cols must be odd and positive (centred grid)")
        return vals
    else:
        raise SchemaError(f"sweep kind must be element_count, bandwidth or topology, got {kind!r}")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise SchemaError(f"{kind} sweep values must be strictly increasing")
    return vals


def _as_float(value, key: str) -> float:
    if isinstance(value, bool):
        raise SchemaError(f"{key} must be a number, got {value!r}")
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise SchemaError(f"{key} must be a number, got {value!r}") from None
    if not math.isfinite(out):
        raise SchemaError(f"{key} must be finite, got {value!r}")
    return out


def _as_int(value, key: str) -> int:
    f = _as_float(value, key)
    if f != int(f):
        raise SchemaError(f"{key} must be an integer, got {value!r}")
    return int(f)


def parse_values(text: str) -> list:
    """Parse ``"1,9,25"`` or an inclusive ``"start:stop:step"`` range."""
    text = text.strip()
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) not in (2, 3):
            raise SchemaError(f"range must be start:stop[:step], got {text!r}")
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) == 3 else 1.0
        if step <= 0:
            raise SchemaError("range step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + k * step for k in range(count)]
    return [float(p) for p in text.split(",") if p.strip()]


def _position(value, key: str) -> list[float]:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise SchemaError(f"{key} must be a list of three coordinates")
    return [_as_float(v, key) for v in value]


def resolve(raw: dict | None) -> LoadedConfig:
    """Apply defaults to a parsed mapping and validate it."""
    raw = {} if raw is None else raw
    if not isinstance(raw, dict):
        raise SchemaError("configuration must be a mapping at top level")
    extra = sorted(set(raw) - set(DEFAULTS))
    if extra:
        raise SchemaError(f"unknown configuration keys: {', '.join(extra)}")
    cfg = {**DEFAULTS, **raw}
    if _as_int(cfg["schema_version"], "schema_version") != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {cfg['schema_version']!r}; expected {SCHEMA_VERSION}")

    fc = _as_float(cfg["carrier_frequency_hz"], "carrier_frequency_hz")
    w = _as_float(cfg["bandwidth_hz"], "bandwidth_hz")
    p_dbm = _as_float(cfg["transmit_power_dbm"], "transmit_power_dbm")
    noise = _as_float(cfg["noise_variance"], "noise_variance")
    for key, value in (("carrier_frequency_hz", fc), ("bandwidth_hz", w), ("noise_variance", noise)):
        if value <= 0:
            raise UnitError(f"{key} must be positive, got {value}")
    rows = _as_int(cfg["rows"], "rows")
    cols = _as_int(cfg["cols"], "cols")
    for key, value in (("rows", rows), ("cols", cols)):
        if value < 1 or value % 2 == 0:
            raise SchemaError(f"{key} must be an odd positive integer (centred grid rule), got {value}")
    amp = _as_float(cfg["reflection_amplitude"], "reflection_amplitude")
    if not 0 <= amp <= 1:
        raise UnitError(f"reflection_amplitude must lie in [0, 1], got {amp}")
    phase = _as_float(cfg["phase_shift_rad"], "phase_shift_rad")
    if not 0 <= phase < 2 * math.pi:
        raise UnitError(f"phase_shift_rad must lie in [0, 2*pi), got {phase}")
    for key, allowed in (("delay_model", ("approximate", "exact")),
                         ("near_field_policy", ("warn", "strict")),
                         ("output_format", ("csv", "table")),
                         ("output_units", ("db", "linear", "both"))):
        if cfg[key] not in allowed:
            raise SchemaError(f"{key} must be one of {allowed}, got {cfg[key]!r}")

    try:
        system = SystemConfig(fc, w, dbm_to_watts(p_dbm), noise,
                              _position(cfg["tx_position"], "tx_position"),
                              _position(cfg["rx_position"], "rx_position"),
                              delay_model=cfg["delay_model"],
                              near_field_policy=cfg["near_field_policy"])
    except GeometryError as exc:
        raise UnitError(str(exc)) from None

    spacing_raw = cfg["element_spacing_m"]
    spacing = system.wavelength / 2 if spacing_raw == "half_wavelength" else _as_float(
        spacing_raw, "element_spacing_m")
    if spacing <= 0:
        raise UnitError(f"element_spacing_m must be positive, got {spacing}")
    topology = build_topology(rows, cols, spacing, amp, phase)

    sweep = None
    if cfg["sweep"] is not None:
        s = cfg["sweep"]
        if not isinstance(s, dict):
            raise SchemaError("sweep must be a mapping")
        extra = sorted(set(s) - SWEEP_KEYS)
        missing = sorted({"kind", "values"} - set(s))
        if extra or missing:
            raise SchemaError(f"sweep section: unknown keys {extra}, missing keys {missing}")
        values = parse_values(s["values"]) if isinstance(s["values"], str) else s["values"]
        if not isinstance(values, (list, tuple)):
            raise SchemaError("sweep values must be a list or range string")
        sweep = SweepSpec(system, topology, s["kind"], tuple(values),
                          s.get("topology_rule", "linear"),
                          cfg["output_format"], cfg["output_units"])
    return LoadedConfig(system, topology, sweep, cfg["output_format"], cfg["output_units"])


def load_config(path: str | Path | None) -> LoadedConfig:
    """Read and resolve a YAML config; ``None`` yields the defaults."""
    if path is None:
        return resolve({})
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"{path}: {exc}") from None
    return resolve(raw)


def make_sweep(loaded: LoadedConfig, kind: str, values: Sequence, topology_rule: str = "linear") -> SweepSpec:
    return SweepSpec(loaded.system, loaded.topology, kind, tuple(values), topology_rule,
                     loaded.output_format, loaded.output_units)
