import math

import pytest

from ristr import load_config
from ristr.config import SweepSpec, parse_values, resolve
from ristr.errors import ParseError, SchemaError, UnitError


def write(tmp_path, text, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_empty_file_gives_defaults(tmp_path):
    loaded = load_config(write(tmp_path, ""))
    s, t = loaded.system, loaded.topology
    assert s.carrier_hz == 10e9 and s.bandwidth_hz == 2e9
    assert s.power_w == pytest.approx(1.0, rel=1e-15)
    assert s.noise_var == 1.0
    assert tuple(s.tx) == (2, 2, 0) and tuple(s.rx) == (2, -2, 0)
    assert t.spacing == 0.015 and (t.rows, t.cols) == (1, 1225)
    assert (t.amplitude == 1).all() and (t.phase == 0).all()
    assert s.delay_model == "approximate" and s.near_field_policy == "warn"
    assert loaded.sweep is None


def test_single_override(tmp_path):
    loaded = load_config(write(tmp_path, "bandwidth_hz: 4.0e+9\n"))
    assert loaded.system.bandwidth_hz == 4e9
    assert loaded.system.carrier_hz == 10e9


def test_plain_exponent_string_is_accepted(tmp_path):
    # YAML 1.1 reads "4e9" as a string; numeric strings are coerced
    assert load_config(write(tmp_path, "bandwidth_hz: 4e9\n")).system.bandwidth_hz == 4e9


def test_even_rows_rejected(tmp_path):
    with pytest.raises(SchemaError, match="odd"):
        load_config(write(tmp_path, "rows: 2\n"))


def test_unknown_key(tmp_path):
    with pytest.raises(SchemaError, match="bandwith_hz"):
        load_config(write(tmp_path, "bandwith_hz: 1\n"))


def test_bad_yaml(tmp_path):
    with pytest.raises(ParseError):
        load_config(write(tmp_path, "rows: [1, 2\n"))


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_config(tmp_path / "nope.yaml")


@pytest.mark.parametrize("text", ["noise_variance: -1\n", "bandwidth_hz: 0\n", "reflection_amplitude: 2\n",
                                  "tx_position: [-1, 0, 0]\n"])
def test_unit_errors(tmp_path, text):
    with pytest.raises(UnitError):
        load_config(write(tmp_path, text))


def test_schema_version(tmp_path):
    with pytest.raises(SchemaError):
        load_config(write(tmp_path, "schema_version: 2\n"))


def test_half_wavelength_spacing():
    loaded = resolve({"element_spacing_m": "half_wavelength"})
    assert loaded.topology.spacing == pytest.approx(loaded.system.wavelength / 2, rel=1e-15)


def test_sweep_section(tmp_path):
    loaded = load_config(write(tmp_path, "sweep:\n  kind: element_count\n  values: [1, 9, 25]\n"))
    assert isinstance(loaded.sweep, SweepSpec)
    pts = loaded.sweep.points()
    assert [t.size for _, t in pts] == [1, 9, 25]
    assert all(t.rows == 1 for _, t in pts)


def test_sweep_range_string():
    loaded = resolve({"sweep": {"kind": "element_count", "values": "1:9:2"}})
    assert loaded.sweep.values == (1, 3, 5, 7, 9)


@pytest.mark.parametrize("sweep", [
    {"kind": "element_count", "values": [9, 3]},
    {"kind": "element_count", "values": [2]},
    {"kind": "element_count", "values": []},
    {"kind": "bandwidth", "values": [4e9, 2e9]},
    {"kind": "topology", "values": [[2, 3]]},
    {"kind": "voltage", "values": [1]},
    {"kind": "bandwidth"},
    {"kind": "bandwidth", "values": [1e9], "extra": 1},
])
def test_bad_sweeps(sweep):
    with pytest.raises((SchemaError, UnitError)):
        resolve({"sweep": sweep})


def test_topology_sweep_points():
    loaded = resolve({"sweep": {"kind": "topology", "values": [[35, 35], [1, 1225]]}})
    assert [(t.rows, t.cols) for _, t in loaded.sweep.points()] == [(35, 35), (1, 1225)]


def test_bandwidth_sweep_points():
    loaded = resolve({"sweep": {"kind": "bandwidth", "values": [2e9, 4e9]}})
    assert [c.bandwidth_hz for c, _ in loaded.sweep.points()] == [2e9, 4e9]


def test_parse_values():
    assert parse_values("1,9, 25") == [1.0, 9.0, 25.0]
    assert parse_values("1:5:2") == [1.0, 3.0, 5.0]
    assert parse_values("2e9:4e9:1e9") == [2e9, 3e9, 4e9]
    assert math.isclose(parse_values("0:1:0.1")[-1], 1.0)
