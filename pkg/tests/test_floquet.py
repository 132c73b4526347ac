import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsosim.analytic import analytic_amplitudes, pi_half_time
from bsosim.dynamics import Frame, integrate_full, to_lab_frame
from bsosim.errors import DomainError
from bsosim.field import eta, rabi_angle
from bsosim.floquet import (
    FloquetState,
    adiabatic_modes,
    integrate_floquet,
    resum_modes,
)

from conftest import make_params

A_M1, A_0, A_P1, B_M1, B_0, B_P1 = range(6)


@pytest.fixture(scope="module")
def pulse():
    p = make_params(g0M=0.2, tau_sw=100.0, phi=0.3)
    tau = pi_half_time(p)
    return p, tau, integrate_floquet(p, tau)


def test_state_vector_roundtrip():
    v = np.arange(6) + 1j * np.arange(6, 12)
    f = FloquetState.from_vector(v)
    assert f.a == tuple(v[:3]) and f.b == tuple(v[3:])
    assert np.array_equal(f.to_vector(), v)
    assert np.array_equal(f.magnitudes, np.abs(v))


def test_no_coupling_frozen():
    tr = integrate_floquet(make_params(g0M=0.0), 20.0)
    expect = np.zeros(6, complex)
    expect[A_0] = 1.0
    assert np.allclose(tr.modes, expect, atol=0, rtol=0)


def test_vanishing_sidebands(pulse):
    p, _, tr = pulse
    bound = 5 * p.eta0**2
    assert np.max(np.abs(tr.modes[:, A_M1])) <= bound
    assert np.max(np.abs(tr.modes[:, B_P1])) <= bound


def test_resummed_norm(pulse):
    p, _, tr = pulse
    assert np.max(np.abs(tr.resummed().norms - 1)) <= 5 * p.eta0**2


@pytest.mark.parametrize("e0", [0.01, 0.05, 0.1])
def test_truncation_matches_full(e0):
    p = make_params(g0M=4 * e0, tau_sw=100.0, phi=0.3)
    tau = pi_half_time(p)
    full = integrate_full(p, tau)
    flo = integrate_floquet(p, tau).resummed()
    assert np.array_equal(full.times, flo.times)
    assert np.max(np.abs(full.populations - flo.populations)) <= 5 * e0**2


class TestResum:
    p = make_params(g0M=0.2, tau_sw=100.0, phi=0.3)

    def test_carrier_only(self):
        f = FloquetState((0, 1, 0), (0, 0, 0))
        s = resum_modes(f, 7.7, self.p)
        assert (s.c0, s.c1, s.frame) == (1, 0, Frame.ROTATING)

    @given(st.floats(0, 1e3), st.lists(st.complex_numbers(max_magnitude=1), min_size=6, max_size=6))
    def test_period(self, t, v):
        f = FloquetState.from_vector(v)
        a = resum_modes(f, t, self.p)
        b = resum_modes(f, t + math.pi / self.p.omega, self.p)
        assert a.c0 == pytest.approx(b.c0, abs=1e-9)
        assert a.c1 == pytest.approx(b.c1, abs=1e-9)


class TestAdiabaticModes:
    p = make_params(g0M=0.2, tau_sw=100.0, phi=0.3)

    def test_initial_limit(self):
        f = adiabatic_modes(self.p, 1e-9)
        assert f.a[1] == pytest.approx(1, abs=1e-15)
        assert np.max(np.abs(np.delete(f.to_vector(), A_0))) <= 1e-12

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_domain(self, t):
        with pytest.raises(DomainError):
            adiabatic_modes(self.p, t)

    @given(st.floats(1e-3, 2000.0))
    def test_identities(self, t):
        f = adiabatic_modes(self.p, t)
        e = eta(self.p, t)
        x = 0.5 * rabi_angle(self.p, t)
        a_m1, a0, a1 = f.a
        b_m1, b0, b1 = f.b
        assert abs(a0) == pytest.approx(abs(math.cos(x)), abs=1e-15)
        assert abs(b0) == pytest.approx(abs(math.sin(x)), abs=1e-15)
        assert abs(a1) == pytest.approx(e * abs(b0), abs=1e-15)
        assert abs(b_m1) == pytest.approx(e * abs(a0), abs=1e-15)
        # symmetric and antisymmetric sideband combinations
        assert abs((a_m1 - b_m1) + e * a0) <= 1e-12
        assert abs((a_m1 + b_m1) - e * a0) <= 1e-12

    def test_reproduces_closed_form(self):
        tau = pi_half_time(self.p)
        s = to_lab_frame(resum_modes(adiabatic_modes(self.p, tau), tau, self.p), tau, self.p)
        ref = analytic_amplitudes(self.p, tau)
        e = self.p.eta0
        assert abs(s.c0 - ref.c0) <= e**2
        assert abs(s.c1 - ref.c1) <= e**2

    def test_against_integration(self, pulse):
        p, _, tr = pulse
        dev = max(
            np.max(np.abs(tr.modes[k] - adiabatic_modes(p, t).to_vector()))
            for k, t in enumerate(tr.times) if t > 0
        )
        assert dev <= 5 * p.eta0**2

    def test_compensation_removes_mode_phase_drift(self):
        # without the counter-term the carrier modes pick up the shift as a
        # relative phase and drift away from the adiabatic solution
        def worst(p):
            tau = pi_half_time(p)
            tr = integrate_floquet(p, tau, stride=200)
            return max(
                np.max(np.abs(tr.modes[k] - adiabatic_modes(p, t).to_vector()))
                for k, t in enumerate(tr.times) if t > 0
            )

        on = worst(self.p)
        off = worst(make_params(g0M=0.2, tau_sw=100.0, phi=0.3, compensate_bs_shift=False))
        assert on <= self.p.eta0**2 < off
