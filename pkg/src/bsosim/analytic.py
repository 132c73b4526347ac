"""Closed-form first-order solution beyond the rotating-wave approximation.

Lab-frame amplitudes, with x = g0'(t) t / 2 and S = (i/2) e^{-i(2wt + 2phi)}:

    C0 = cos x - 2 eta S sin x
    C1 = i e^{-i(wt+phi)} [sin x + 2 eta S* cos x]

so that |C1|^2 = sin^2 x + eta sin(2x) sin(2wt + 2phi) + O(eta^2).  The
second term is the Bloch-Siegert oscillation; after a pi/2 pulse it
leaves the readout 1/2 [1 + 2 eta sin(2(w tau + phi))].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .dynamics import Frame, StateAmplitudes, Trajectory
from .errors import DomainError, PreconditionError, SearchError
from .field import FieldParams, eta, rabi_angle

__all__ = [
    "SigmaFactor",
    "sigma",
    "analytic_amplitudes",
    "analytic_trajectory",
    "analytic_population",
    "pi_half_time",
    "saturated_pi_half_time",
    "pi_half_residual",
    "readout_population",
]

PI_HALF_TOL = 1e-10
READOUT_TOL = 1e-6


@dataclass(frozen=True)
class SigmaFactor:
    value: complex

    def __post_init__(self):
        if not math.isclose(abs(self.value), 0.5, rel_tol=1e-12):
            raise ValueError("|Sigma| must be 1/2")

    def conjugate(self) -> "SigmaFactor":
        return SigmaFactor(self.value.conjugate())


def sigma(p: FieldParams, t: float) -> SigmaFactor:
    """(i/2) exp(-i(2wt + 2phi))."""
    return SigmaFactor(0.5j * complex(np.exp(-2j * (p.omega * t + p.phi))))


def _amplitudes(p, t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise DomainError("analytic amplitudes require t > 0")
    x = 0.5 * np.asarray(rabi_angle(p, t))
    e = np.asarray(eta(p, t))
    s = 0.5j * np.exp(-2j * (p.omega * t + p.phi))
    c0 = np.cos(x) - 2 * e * s * np.sin(x)
    c1 = 1j * np.exp(-1j * (p.omega * t + p.phi)) * (np.sin(x) + 2 * e * np.conj(s) * np.cos(x))
    return c0, c1


def analytic_amplitudes(p: FieldParams, t: float) -> StateAmplitudes:
    """Lab-frame amplitudes of the first-order solution at time t > 0."""
    c0, c1 = _amplitudes(p, t)
    return StateAmplitudes(complex(c0), complex(c1), Frame.LAB)


def analytic_trajectory(p: FieldParams, times) -> Trajectory:
    """The first-order solution sampled on ``times``; t = 0 maps to (1, 0)."""
    times = np.asarray(times, dtype=float)
    amps = np.zeros((len(times), 2), dtype=complex)
    amps[:, 0] = 1.0
    pos = times > 0
    amps[pos, 0], amps[pos, 1] = _amplitudes(p, times[pos])
    return Trajectory(times, amps, p, Frame.LAB)


def analytic_population(p: FieldParams, t):
    """First-order |C1|^2 = sin^2 x + eta sin 2x sin(2wt + 2phi), no eta^2 term."""
    t = np.asarray(t, dtype=float)
    area = np.asarray(rabi_angle(p, t))
    out = np.sin(0.5 * area) ** 2 + np.asarray(eta(p, t)) * np.sin(area) * np.sin(
        2 * (p.omega * t + p.phi)
    )
    return out.item() if out.ndim == 0 else out


def pi_half_time(p: FieldParams, cycles: int = 0) -> float:
    """Interaction time tau with pulse area g0'(tau) tau = pi/2 + 2 pi cycles.

    ``cycles = 0`` is the first pi/2 pulse.  Later roots also leave half the
    population excited with the Bloch-Siegert envelope at its positive peak,
    and are needed when tau must be long enough for g0(tau) ~ g0M.
    """
    if not p.g0M > 0:
        raise DomainError("pi/2 time requires g0M > 0")
    if cycles < 0 or int(cycles) != cycles:
        raise DomainError(f"cycles must be a non-negative integer, got {cycles}")
    target = 0.5 * math.pi + 2 * math.pi * cycles
    lo = target / p.g0M  # area <= g0M t
    if p.instantaneous:
        return lo
    t_max = 10.0 * (target / p.g0M + p.tau_sw)
    f = lambda t: rabi_angle(p, t) - target
    if f(t_max) < 0:
        raise SearchError(f"no pi/2 time below t_max = {t_max:.6g}")
    tau = brentq(f, lo, t_max, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500)
    if abs(f(tau)) > PI_HALF_TOL:
        raise SearchError(f"root search residual {abs(f(tau)):.3g} above {PI_HALF_TOL}")
    return tau


def saturated_pi_half_time(p: FieldParams, fraction: float = 0.9) -> float:
    """First pi/2 time at which g0(tau) >= fraction * g0M."""
    if not 0 < fraction < 1:
        raise DomainError("fraction must lie in (0, 1)")
    t_sat = 0.0 if p.instantaneous else -p.tau_sw * math.log1p(-fraction)
    area = rabi_angle(p, t_sat)
    cycles = max(0, math.ceil((area - 0.5 * math.pi) / (2 * math.pi)))
    return pi_half_time(p, cycles)


def pi_half_residual(p: FieldParams, tau: float) -> float:
    """Distance of the pulse area from the nearest pi/2 + 2 pi k."""
    area = rabi_angle(p, tau) - 0.5 * math.pi
    return abs(area - 2 * math.pi * round(area / (2 * math.pi)))


def readout_population(p: FieldParams, tau: float, tol: float = READOUT_TOL) -> float:
    """Excited population after a pi/2 pulse: 1/2 [1 + 2 eta(tau) sin(2(w tau + phi))]."""
    if not tau > 0:
        raise DomainError("tau must be positive")
    r = pi_half_residual(p, tau)
    if r > tol:
        raise PreconditionError(f"tau = {tau:.10g} is not a pi/2 time (area off by {r:.3g})")
    return 0.5 * (1 + 2 * eta(p, tau) * math.sin(2 * (p.omega * tau + p.phi)))
