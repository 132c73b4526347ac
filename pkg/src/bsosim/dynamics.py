"""Direct integration of the two-level Schroedinger equation in the rotating frame.

With the rotating-frame state (C~0, C~1) = Q (C0, C1), Q = diag(1, e^{i(wt+phi)}),
the resonant problem without the rotating-wave approximation reads

    dC~0/dt = i g0(t)/2 [1 + e^{-2i(wt+phi)}] C~1
    dC~1/dt = i g0(t)/2 [1 + e^{+2i(wt+phi)}] C~0

``integrate_full`` solves this system; ``integrate_rwa`` drops the
counter-rotating exponentials.  Optionally a diagonal counter-term
diag(-i D/2, +i D/2) with D the Bloch-Siegert shift is added to the full
equations, which is what retuning the drive to the shifted resonance does.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _rk4
from .errors import DomainError, FrameError, StepSizeError
from .field import FieldParams, compensation_shift, switching_profile

__all__ = [
    "Frame",
    "StateAmplitudes",
    "Trajectory",
    "default_step",
    "integrate_full",
    "integrate_rwa",
    "final_populations",
    "to_lab_frame",
]

STEPS_PER_UNIT = 500
MIN_STEPS_PER_PERIOD = 200
DEFAULT_STRIDE = 10


class Frame(enum.Enum):
    LAB = "lab"
    ROTATING = "rotating"


@dataclass(frozen=True)
class StateAmplitudes:
    c0: complex
    c1: complex
    frame: Frame = Frame.ROTATING

    @property
    def norm(self) -> float:
        return abs(self.c0) ** 2 + abs(self.c1) ** 2

    @property
    def population(self) -> float:
        """Excited-state population |c1|^2."""
        return abs(self.c1) ** 2


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled amplitudes; ``amplitudes[k] = (c0, c1)`` at ``times[k]``."""

    times: np.ndarray
    amplitudes: np.ndarray
    params: FieldParams
    frame: Frame = Frame.ROTATING

    def __post_init__(self):
        if self.amplitudes.shape != (len(self.times), 2):
            raise ValueError("amplitudes must have shape (len(times), 2)")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self):
        return len(self.times)

    def __getitem__(self, k) -> StateAmplitudes:
        c0, c1 = self.amplitudes[k]
        return StateAmplitudes(complex(c0), complex(c1), self.frame)

    @property
    def states(self) -> list[StateAmplitudes]:
        return [self[k] for k in range(len(self))]

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes[:, 1]) ** 2

    @property
    def norms(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    @property
    def final(self) -> StateAmplitudes:
        return self[len(self) - 1]

    def to_lab(self) -> "Trajectory":
        if self.frame is Frame.LAB:
            return self
        p = self.params
        lab = self.amplitudes.copy()
        lab[:, 1] *= np.exp(-1j * (p.omega * self.times + p.phi))
        return Trajectory(self.times, lab, p, Frame.LAB)


def default_step(p: FieldParams) -> float:
    """min(1/w, 1/g0M) / 500."""
    scale = 1.0 / p.omega
    if p.g0M > 0:
        scale = min(scale, 1.0 / p.g0M)
    return scale / STEPS_PER_UNIT


def _check(p, t_end, dt):
    if not t_end > 0:
        raise DomainError(f"t_end must be positive, got {t_end}")
    if dt is None:
        dt = default_step(p)
    if not dt > 0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    limit = 1.0 / (p.omega * MIN_STEPS_PER_PERIOD)
    if dt > limit:
        raise StepSizeError(
            f"dt = {dt:.4g} exceeds (1/omega)/{MIN_STEPS_PER_PERIOD} = {limit:.4g}"
        )
    return dt


def _full_coefficients(p: FieldParams, phis=None, rwa=False):
    phis = np.atleast_1d(p.phi if phis is None else phis).astype(float)

    def coeff(t):
        g = 0.5j * np.asarray(switching_profile(p, t))[:, None]
        if rwa:
            counter = np.zeros((len(t), phis.size), dtype=complex)
            shift = np.zeros((len(t), 1))
        else:
            counter = np.exp(-2j * (p.omega * t[:, None] + phis[None, :]))
            shift = 0.5 * np.asarray(compensation_shift(p, t))[:, None]
        a = np.empty((len(t), phis.size, 2, 2), dtype=complex)
        a[..., 0, 0] = -1j * shift
        a[..., 0, 1] = g * (1.0 + counter)
        a[..., 1, 0] = g * (1.0 + np.conj(counter))
        a[..., 1, 1] = 1j * shift
        return a

    return coeff, phis


def _integrate(p, t_end, dt, stride, rwa):
    dt = _check(p, t_end, dt)
    coeff, _ = _full_coefficients(p, rwa=rwa)
    y0 = np.array([[1.0, 0.0]], dtype=complex)
    times, states = _rk4.propagate(coeff, y0, t_end, dt, stride)
    return Trajectory(times, states[:, 0, :], p, Frame.ROTATING)


def integrate_full(p: FieldParams, t_end: float, dt: float | None = None,
                   stride: int = DEFAULT_STRIDE) -> Trajectory:
    """Integrate the rotating-frame equations with the counter-rotating term.

    Starts in the ground state at t = 0.  The step is shrunk so that an
    integer number of steps ends exactly at ``t_end``; every ``stride``-th
    step is stored.
    """
    return _integrate(p, t_end, dt, stride, rwa=False)


def integrate_rwa(p: FieldParams, t_end: float, dt: float | None = None,
                  stride: int = DEFAULT_STRIDE) -> Trajectory:
    """Same as ``integrate_full`` with the counter-rotating term dropped.

    No Bloch-Siegert compensation is applied, since there is no shift.
    """
    return _integrate(p, t_end, dt, stride, rwa=True)


def final_populations(p: FieldParams, phis, t_end: float, dt: float | None = None,
                      rwa: bool = False) -> np.ndarray:
    """Excited-state population at ``t_end`` for each initial phase in ``phis``.

    The whole phase sweep is propagated as one batch, which is far cheaper
    than separate ``integrate_full`` calls.
    """
    dt = _check(p, t_end, dt)
    coeff, phis = _full_coefficients(p, phis, rwa=rwa)
    y0 = np.zeros((phis.size, 2), dtype=complex)
    y0[:, 0] = 1.0
    n = _rk4.step_count(t_end, dt)
    _, states = _rk4.propagate(coeff, y0, t_end, dt, stride=n)
    return np.abs(states[-1, :, 1]) ** 2


def to_lab_frame(s: StateAmplitudes, t: float, p: FieldParams) -> StateAmplitudes:
    """Undo the rotating-wave transformation: C1 = e^{-i(wt+phi)} C~1."""
    if s.frame is not Frame.ROTATING:
        raise FrameError(f"expected rotating-frame amplitudes, got {s.frame.value}")
    phase = np.exp(-1j * (p.omega * t + p.phi))
    return StateAmplitudes(s.c0, complex(phase * s.c1), Frame.LAB)
