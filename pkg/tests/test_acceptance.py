"""Acceptance criteria, one test each.

Every test records a one-line PASS/FAIL verdict (printed during the run and
collected in the "acceptance criteria" section of the terminal summary)
before asserting, so the verdict is visible whatever the outcome.
"""
import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

from bsosim import _rk4
from bsosim.analytic import analytic_trajectory, pi_half_time, saturated_pi_half_time
from bsosim.beam import BeamParams, beam_coefficients, beam_signal, lock_in_dc
from bsosim.dynamics import _full_coefficients, final_populations, integrate_full
from bsosim.field import eta, rabi_angle, switching_profile
from bsosim.floquet import integrate_floquet
from bsosim.signal import (
    bso_residual,
    bso_spectral_peak,
    estimate_absolute_phase,
    fit_phase_sweep,
    fit_sinusoid,
)
from scipy.optimize import brentq

from conftest import make_params

ETA0 = 0.05
TAU_SW = 100.0


def paper(phi=0.0, e0=ETA0):
    return make_params(g0M=4 * e0, omega=1.0, phi=phi, tau_sw=TAU_SW)


def verdict(record_property, n, name, ok, detail):
    line = f"criterion {n} [{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    record_property("criterion", line)
    print(line)
    return ok


def angle_diff(a, b, period):
    d = (a - b) % period
    return min(d, period - d)


def sweep(p, tau, n=32):
    phis = np.arange(n) * math.pi / n
    return phis, final_populations(p, phis, tau)


@pytest.mark.xfail(strict=True, reason=(
    "with the offset pinned at 1/2 no pi/2 time satisfies both bounds: the "
    "amplitude needs a saturated envelope (late pulse) while the exact Rabi "
    "frequency g0(1 - eta^2) drags the readout below 1/2 by about "
    "(1/2) int g0 eta^2 dt, which reaches 10 eta0^2 at the saturated pi/2 time"))
def test_criterion_1_phase_sweep(record_property):
    p = paper()
    tau = saturated_pi_half_time(p)
    t0 = time.perf_counter()
    phis, pops = sweep(p, tau)
    elapsed = time.perf_counter() - t0
    # literal model: 1/2 + B sin(2(w tau + phi)), B the only free parameter
    s = np.sin(2 * (p.omega * tau + phis))
    b = float(np.dot(pops - 0.5, s) / np.dot(s, s))
    rms = float(np.sqrt(np.mean((pops - 0.5 - b * s) ** 2)))
    ok = abs(b / ETA0 - 1) <= 0.2 and rms <= ETA0**2 and elapsed <= 60
    verdict(record_property, 1, "phi-sweep readout", ok,
            f"tau={tau:.2f} B/eta0={b / ETA0:.3f} (1 +- 0.2) rms/eta0^2={rms / ETA0**2:.2f} "
            f"(<= 1) runtime={elapsed:.1f}s (<= 60)")
    assert ok


def test_criterion_1_offset_drift_is_second_order():
    # companion to criterion 1: once the offset is fitted, the sweep has the
    # predicted shape and the offset matches the eta^2 Rabi slowdown
    p = paper()
    tau = saturated_pi_half_time(p)
    phis, pops = sweep(p, tau)
    fit = fit_phase_sweep(np.column_stack([phis, pops]))
    assert abs(fit.amplitude / ETA0 - 1) <= 0.2
    assert fit.residual_rms <= ETA0**2
    assert angle_diff(fit.phase, 2 * p.omega * tau, 2 * math.pi) <= 0.02
    slowdown = quad(lambda t: switching_profile(p, t) * eta(p, t) ** 2, 0, tau)[0]
    assert fit.offset == pytest.approx(0.5 - 0.5 * slowdown, abs=0.1 * ETA0**2)


def test_criterion_2_triple_oracle(record_property):
    t0 = time.perf_counter()
    worst = {}
    for e0 in (0.01, 0.05, 0.1):
        p = paper(phi=0.3, e0=e0)
        tau = pi_half_time(p)
        full = integrate_full(p, tau)
        flo = integrate_floquet(p, tau).resummed()
        ana = analytic_trajectory(p, full.times)
        d = max(np.max(np.abs(full.populations - flo.populations)),
                np.max(np.abs(full.populations - ana.populations)),
                np.max(np.abs(flo.populations - ana.populations)))
        worst[e0] = d / e0**2
    elapsed = time.perf_counter() - t0
    ok = all(v <= 5 for v in worst.values()) and elapsed <= 120
    detail = " ".join(f"eta0={k}: {v:.3f}" for k, v in worst.items())
    verdict(record_property, 2, "triple-oracle agreement", ok,
            f"max deviation / eta0^2 {detail} (<= 5) runtime={elapsed:.1f}s (<= 120)")
    assert ok


def test_criterion_3_bso_frequency(record_property):
    p = paper(phi=0.3)
    t_min, t_end = 300.0, 700.0
    tr = integrate_full(p, t_end)
    w, width = bso_spectral_peak(tr, t_min=t_min)
    periods = (t_end - t_min) * p.omega / (2 * math.pi)
    rel = abs(w - 2 * p.omega) / (2 * p.omega)
    ok = abs(w - 2 * p.omega) <= width and rel <= 1e-3 and periods >= 50
    verdict(record_property, 3, "BSO at twice the drive frequency", ok,
            f"peak={w:.6f} bin={width:.5f} rel.err={rel:.2e} (<= 1e-3) periods={periods:.0f} (>= 50)")
    assert ok


def test_criterion_4_envelope_nulls(record_property):
    p = paper(phi=0.3)
    ratios = []
    for k in range(1, 8):
        t_null = brentq(lambda t: rabi_angle(p, t) - k * math.pi, 1.0, 1e3, xtol=1e-13)
        tr = integrate_full(p, t_null, stride=10**9)
        ratios.append(abs(bso_residual(tr)[-1]) / ETA0**2)
    ok = max(ratios) <= 2
    verdict(record_property, 4, "envelope nulls", ok,
            f"|residual|/eta0^2 at areas pi..7pi: " + " ".join(f"{r:.2f}" for r in ratios) + " (<= 2)")
    assert ok


def test_criterion_5_beam_phase(record_property):
    p = paper(phi=0.3)
    ref = BeamParams.matched(p, u=1.0, z_sw=TAU_SW)
    length = ref.u * ref.tau_bar  # fixed field-to-detector distance
    t = np.arange(16 * 32) * math.pi / 32
    errors, amps = [], []
    for u in (0.5, 0.75, 1.0, 1.5, 2.0):
        b = BeamParams(u=u, z0=0.0, z_sw=TAU_SW, tau_bar=length / u)
        fit = fit_sinusoid(t, beam_signal(b, p, t), 2 * p.omega)
        errors.append(angle_diff(fit.phase, 2 * p.phi, 2 * math.pi))
        amps.append(fit.amplitude)
    ok = max(errors) <= 1e-5 and all(0 < a < ETA0 for a in amps)
    verdict(record_property, 5, "beam-average phase invariance", ok,
            f"u in [0.5, 2]: max phase error={max(errors):.1e} rad (<= 1e-5) "
            f"B/eta0 in [{min(amps) / ETA0:.3f}, {max(amps) / ETA0:.3f}] (< 1)")
    assert ok


def test_criterion_6_lock_in_law(record_property):
    p = paper(phi=0.3)
    b = BeamParams.matched(p, u=2.0, z_sw=200.0)
    thetas = np.arange(16) * 2 * math.pi / 16
    dc = np.array([lock_in_dc(b, p, th) for th in thetas])
    err = float(np.max(np.abs(dc / dc[0] - np.cos(thetas))))
    ok = err <= 1e-5
    verdict(record_property, 6, "lock-in cosine law", ok,
            f"max |dc/dc(0) - cos theta| = {err:.1e} on 16 points (<= 1e-5)")
    assert ok


def test_criterion_7_unitarity_and_convergence(record_property):
    drift = 0.0
    for e0 in (0.01, 0.05, 0.1):
        p = paper(phi=0.3, e0=e0)
        tr = integrate_full(p, saturated_pi_half_time(p))
        drift = max(drift, float(np.max(np.abs(tr.norms - 1))))
    # reference configuration for the order test; the step sizes are above
    # the public dt guard so that truncation error dominates round-off
    p = make_params(g0M=0.2, tau_sw=10.0, phi=0.3)
    coeff, _ = _full_coefficients(p)
    y0 = np.array([[1.0, 0.0]], dtype=complex)

    def end(h):
        return _rk4.propagate(coeff, y0, 20.0, h, stride=10**9)[1][-1, 0]

    h = 0.1
    ref = end(h / 8)
    ratio = float(np.max(np.abs(end(h) - ref)) / np.max(np.abs(end(h / 2) - ref)))
    ok = drift <= 1e-9 and 14 <= ratio <= 18
    verdict(record_property, 7, "unitarity and convergence", ok,
            f"norm drift={drift:.1e} (<= 1e-9) step-halving error ratio={ratio:.2f} (16 expected)")
    assert ok


def test_criterion_8_phase_estimation(record_property):
    p = paper()
    errors = {}
    for label, tau in (("first", pi_half_time(p)), ("saturated", saturated_pi_half_time(p))):
        phis, pops = sweep(p, tau)
        est = estimate_absolute_phase(np.column_stack([phis, pops]), p, tau)
        errors[label] = angle_diff(est, p.omega * tau, math.pi)
    ok = max(errors.values()) <= 0.02
    verdict(record_property, 8, "absolute phase round trip", ok,
            " ".join(f"{k} pi/2 time: {v:.4f} rad" for k, v in errors.items()) + " (<= 0.02)")
    assert ok
