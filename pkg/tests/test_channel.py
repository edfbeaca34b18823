import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ristr import (
    Position3,
    SystemConfig,
    build_path_set,
    build_topology,
    link_coefficient,
    path_coefficient,
    path_delay,
)
from ristr.channel import cophasing_phases, propagation_phase
from ristr.errors import EndpointAtOrigin, OutsideNearField
from ristr.geometry import SPEED_OF_LIGHT

from helpers import paper_config, random_case, rel_err
from oracles import brute_paths

LAM = 0.03


class TestLinkCoefficient:
    def test_centre_element(self):
        h = link_coefficient(Position3(2, 2, 0), Position3(0, 0, 0), LAM)
        assert abs(h) == pytest.approx(0.09973557010035816, rel=1e-14)
        expected_phase = (-2 * math.pi * math.sqrt(8) / LAM) % (2 * math.pi)
        got = cmath.phase(h) % (2 * math.pi)
        assert got == pytest.approx(expected_phase, abs=1e-9)

    def test_whole_wavelengths_have_zero_phase(self):
        h = link_coefficient(Position3(3 * LAM * 100, 0, 0), Position3(0, 0, 0), LAM)
        assert abs(cmath.phase(h)) < 1e-9

    def test_equidistant_elements(self):
        p = Position3(2, 0, 0)
        assert link_coefficient(p, Position3(0, 0.015, 0), LAM) == link_coefficient(p, Position3(0, -0.015, 0), LAM)

    def test_origin_rejected(self):
        with pytest.raises(EndpointAtOrigin):
            link_coefficient(Position3(0, 0, 0), Position3(0, 0.015, 0), LAM)

    def test_reduced_phase_matches_naive(self):
        r = np.linspace(0.5, 30.0, 2001)
        reduced = np.exp(-1j * propagation_phase(r, LAM))
        naive = np.exp(-1j * 2 * np.pi * r / LAM)
        np.testing.assert_allclose(reduced, naive, rtol=0, atol=1e-11)


class TestPathCoefficient:
    def test_single_element_magnitude(self):
        h = path_coefficient(paper_config(), build_topology(1, 1, 0.015), 0, 0)
        assert abs(h) == pytest.approx(1 / (32 * math.pi), rel=1e-14)

    def test_zero_amplitude(self):
        t = build_topology(1, 3, 0.015).with_reflection(amplitude=[0.0, 1.0, 1.0])
        assert path_coefficient(paper_config(), t, 0, -1) == 0

    def test_cophasing_gives_real_positive(self):
        cfg = paper_config()
        t = build_topology(3, 9, 0.015)
        t = t.with_reflection(phase=cophasing_phases(cfg, t))
        for m, n in t.indices():
            h = path_coefficient(cfg, t, int(m), int(n))
            assert h.real > 0 and abs(h.imag) < 1e-15

    @given(st.integers(0, 3), st.integers(0, 10), st.just(0.0) | st.floats(1e-6, 1), st.floats(0, 6.28))
    @settings(max_examples=40)
    def test_cascade_consistency(self, mi, ni, a, phi):
        cfg = paper_config()
        t = build_topology(7, 21, 0.015).with_reflection(amplitude=a, phase=phi)
        m, n = mi, ni - 5
        h = path_coefficient(cfg, t, m, n)
        p = t.position(m, n)
        cascade = link_coefficient(cfg.tx, p, cfg.wavelength) * link_coefficient(cfg.rx, p, cfg.wavelength) * t.reflection(m, n)
        assert rel_err(h, cascade) < 1e-12


class TestPathDelay:
    def test_centre_delay(self):
        cfg = SystemConfig(10e9, 2e9, 1, 1, (2, 2, 0), (2, -2, 0))
        tau = path_delay(cfg, build_topology(1, 1, 0.015), 0, 0)
        assert tau == pytest.approx(2 * math.sqrt(8) / SPEED_OF_LIGHT, rel=1e-15)
        assert tau == pytest.approx(18.8693e-9, abs=1e-13)

    def test_models_agree_at_zero_phase(self):
        t = build_topology(1, 5, 0.015)
        approx = path_delay(paper_config(), t, 0, 2)
        exact = path_delay(paper_config(delay_model="exact"), t, 0, 2)
        assert approx == exact

    def test_exact_adds_phase_delay(self):
        t = build_topology(1, 5, 0.015, phase=math.pi)
        cfg = paper_config(delay_model="exact")
        extra = path_delay(cfg, t, 0, 1) - path_delay(paper_config(), t, 0, 1)
        assert extra == pytest.approx(cfg.wavelength / 2 / SPEED_OF_LIGHT, rel=1e-6)

    @pytest.mark.parametrize("k", [1, 7, 30])
    def test_mirror_elements(self, k):
        t = build_topology(1, 61, 0.015)
        assert path_delay(paper_config(), t, 0, k) == path_delay(paper_config(), t, 0, -k)


class TestPathSet:
    def test_singleton(self):
        ps = build_path_set(paper_config(), build_topology(1, 1, 0.015))
        assert len(ps) == 1 and ps.tau_min == ps.tau_max

    def test_three_in_a_row(self):
        ps = build_path_set(paper_config(), build_topology(1, 3, 0.015))
        assert [p.index for p in ps] == [(0, -1), (0, 0), (0, 1)]
        assert ps.delays[0] == ps.delays[2] >= ps.delays[1]
        assert ps.delays[0] == pytest.approx(1.8869367369703203e-08, rel=1e-14)
        assert ps.delays[1] == pytest.approx(1.8869234693997473e-08, rel=1e-14)

    def test_uniform_gain(self):
        ps = build_path_set(paper_config(), build_topology(5, 9, 0.015))
        np.testing.assert_allclose(np.abs(ps.coefficients), 1 / (4 * math.pi * 8), rtol=1e-14)

    def test_matches_loop_oracle(self, rng):
        cfg = paper_config()
        amp = rng.uniform(0, 1, (3, 11))
        phase = rng.uniform(0, 2 * math.pi, (3, 11))
        t = build_topology(3, 11, 0.015).with_reflection(amplitude=amp, phase=phase)
        ps = build_path_set(cfg, t)
        ref = brute_paths(tuple(cfg.tx), tuple(cfg.rx), 3, 11, 0.015, cfg.wavelength, SPEED_OF_LIGHT,
                          amp.tolist(), phase.tolist())
        for path, (m, n, h, tau) in zip(ps, ref):
            assert path.index == (m, n)
            assert rel_err(path.coefficient, h) < 1e-9
            assert path.delay == pytest.approx(tau, rel=1e-15)

    def test_strict_policy_propagates(self):
        with pytest.raises(OutsideNearField):
            build_path_set(paper_config(near_field_policy="strict"), build_topology(1, 3, 0.015))

    def test_reciprocity(self, rng):
        for _ in range(20):
            cfg, topo = random_case(rng, max_q=400)
            swapped = SystemConfig(cfg.carrier_hz, cfg.bandwidth_hz, 1, 1, cfg.rx, cfg.tx)
            a, b = build_path_set(cfg, topo), build_path_set(swapped, topo)
            np.testing.assert_allclose(a.coefficients, b.coefficients, rtol=1e-12, atol=0)
            np.testing.assert_allclose(a.delays, b.delays, rtol=1e-15)

    def test_delay_bounds(self, rng):
        for _ in range(20):
            cfg, topo = random_case(rng, max_q=400)
            ps = build_path_set(cfg, topo)
            lo = (ps.r_tx.min() + ps.r_rx.min()) / SPEED_OF_LIGHT
            hi = (ps.r_tx.max() + ps.r_rx.max()) / SPEED_OF_LIGHT
            assert np.all(ps.delays >= lo * (1 - 1e-15)) and np.all(ps.delays <= hi * (1 + 1e-15))
            assert np.all(ps.delays > 0)
