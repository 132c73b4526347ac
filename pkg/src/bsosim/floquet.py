"""Six-mode Floquet truncation of the rotating-frame equations.

The rotating-frame amplitudes are expanded as

    C~0(t) = sum_n a_n(t) e^{-2in(wt+phi)},   C~1(t) = sum_n b_n(t) e^{-2in(wt+phi)}

and only n in {-1, 0, 1} is kept.  The mode equations are

    da_n/dt = 2inw a_n + i g0/2 (b_n + b_{n-1})
    db_n/dt = 2inw b_n + i g0/2 (a_n + a_{n+1})

with couplings leaving the truncated set dropped.  The Bloch-Siegert
counter-term of the direct solver is a frame rotation, so it is applied to
every mode alike: -i D/2 on each a_n and +i D/2 on each b_n.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _rk4
from .dynamics import DEFAULT_STRIDE, Frame, StateAmplitudes, Trajectory, _check
from .errors import DomainError
from .field import (
    FieldParams,
    compensation_shift,
    eta,
    rabi_angle,
    switching_profile,
)

__all__ = [
    "FloquetState",
    "FloquetTrajectory",
    "integrate_floquet",
    "resum_modes",
    "adiabatic_modes",
]

# column order of the packed mode vector
A_M1, A_0, A_P1, B_M1, B_0, B_P1 = range(6)
ORDERS = np.array([-1, 0, 1, -1, 0, 1])


@dataclass(frozen=True)
class FloquetState:
    """Mode amplitudes ``a = (a_-1, a_0, a_1)`` and ``b = (b_-1, b_0, b_1)``."""

    a: tuple[complex, complex, complex]
    b: tuple[complex, complex, complex]

    @classmethod
    def from_vector(cls, v) -> "FloquetState":
        v = [complex(x) for x in v]
        return cls(tuple(v[:3]), tuple(v[3:]))

    def to_vector(self) -> np.ndarray:
        return np.array(self.a + self.b, dtype=complex)

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.to_vector())


@dataclass(frozen=True, eq=False)
class FloquetTrajectory:
    times: np.ndarray
    modes: np.ndarray  # (len(times), 6) in FloquetState vector order
    params: FieldParams

    def __len__(self):
        return len(self.times)

    def __getitem__(self, k) -> FloquetState:
        return FloquetState.from_vector(self.modes[k])

    def resummed(self) -> Trajectory:
        """Rotating-frame trajectory reconstructed from the modes."""
        w = _weights(self.times, self.params)
        c0 = np.sum(self.modes[:, :3] * w, axis=1)
        c1 = np.sum(self.modes[:, 3:] * w, axis=1)
        return Trajectory(self.times, np.column_stack([c0, c1]), self.params, Frame.ROTATING)


def _weights(t, p):
    # e^{n(-2iwt - 2i phi)} for n = -1, 0, 1
    theta = p.omega * np.asarray(t, dtype=float)[..., None] + p.phi
    return np.exp(-2j * np.array([-1, 0, 1]) * theta)


def _mode_coefficients(p: FieldParams):
    det = 2j * p.omega * ORDERS

    def coeff(t):
        n = len(t)
        half = 0.5j * np.asarray(switching_profile(p, t))
        shift = 0.5j * np.asarray(compensation_shift(p, t))
        a = np.zeros((n, 6, 6), dtype=complex)
        idx = np.arange(6)
        a[:, idx, idx] = det
        a[:, idx[:3], idx[:3]] -= shift[:, None]
        a[:, idx[3:], idx[3:]] += shift[:, None]
        # a_n <- b_n, b_{n-1}
        for row, cols in ((A_M1, (B_M1,)), (A_0, (B_0, B_M1)), (A_P1, (B_P1, B_0)),
                          # b_n <- a_n, a_{n+1}
                          (B_M1, (A_M1, A_0)), (B_0, (A_0, A_P1)), (B_P1, (A_P1,))):
            for col in cols:
                a[:, row, col] = half
        return a

    return coeff


def integrate_floquet(p: FieldParams, t_end: float, dt: float | None = None,
                      stride: int = DEFAULT_STRIDE) -> FloquetTrajectory:
    """Integrate the truncated mode equations from a_0 = 1 at t = 0."""
    dt = _check(p, t_end, dt)
    y0 = np.zeros(6, dtype=complex)
    y0[A_0] = 1.0
    times, modes = _rk4.propagate(_mode_coefficients(p), y0, t_end, dt, stride)
    return FloquetTrajectory(times, modes, p)


def resum_modes(f: FloquetState, t: float, p: FieldParams) -> StateAmplitudes:
    """Rotating-frame amplitudes at time t from the mode amplitudes."""
    w = _weights(t, p)
    return StateAmplitudes(
        complex(np.dot(f.a, w)), complex(np.dot(f.b, w)), Frame.ROTATING
    )


def adiabatic_modes(p: FieldParams, t: float) -> FloquetState:
    """Mode amplitudes from adiabatic elimination of the sidebands.

    a_0 = cos(x), b_0 = i sin(x) with x = g0'(t) t / 2, and to first order
    in eta(t): b_-1 = eta a_0, a_1 = -eta b_0, a_-1 = b_1 = 0.
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    x = 0.5 * rabi_angle(p, t)
    e = eta(p, t)
    a0 = complex(np.cos(x))
    b0 = 1j * np.sin(x)
    return FloquetState((0j, a0, -e * b0), (e * a0, b0, 0j))
