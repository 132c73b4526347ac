"""Fixed-step classical Runge-Kutta for linear systems dy/dt = A(t) y.

For a linear right-hand side the four RK4 stages collapse into a single
step matrix M_n with y_{n+1} = M_n y_n.  The step matrices are built with
vectorized numpy over chunks of steps; only the matrix-vector products are
sequential.  The result is the classical RK4 solution, fourth order in h.
"""
from __future__ import annotations

import math

import numpy as np

_CHUNK_ELEMENTS = 2_000_000


def step_count(t_end: float, dt: float) -> int:
    """Number of equal steps of size <= dt covering [0, t_end]."""
    return max(1, math.ceil(t_end / dt * (1 - 1e-12)))


def step_matrices(coeff, t0, h):
    """RK4 step matrices for steps starting at times ``t0``."""
    a0 = coeff(t0)
    ah = coeff(t0 + 0.5 * h)
    a1 = coeff(t0 + h)
    eye = np.eye(a0.shape[-1], dtype=a0.dtype)
    k2 = ah @ (eye + 0.5 * h * a0)
    k3 = ah @ (eye + 0.5 * h * k2)
    k4 = a1 @ (eye + h * k3)
    return eye + (h / 6.0) * (a0 + 2.0 * k2 + 2.0 * k3 + k4)


def propagate(coeff, y0, t_end: float, dt: float, stride: int = 1):
    """Integrate from t = 0 to ``t_end`` and return sampled times and states.

    ``coeff(t)`` maps a 1-d array of times to coefficient matrices of shape
    ``(len(t), *batch, d, d)``; ``y0`` has shape ``(*batch, d)``.  Samples
    are taken every ``stride`` steps; t = 0 and t_end are always included.
    """
    n = step_count(t_end, dt)
    h = t_end / n
    y = np.array(y0, dtype=complex)
    per_step = y.size * y.shape[-1]
    chunk = max(1, _CHUNK_ELEMENTS // max(per_step, 1))

    sample_steps = set(range(0, n + 1, stride))
    sample_steps.add(n)
    times = [0.0]
    states = [y.copy()]
    col = y[..., None]
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        t0 = np.arange(start, stop) * h
        mats = step_matrices(coeff, t0, h)
        for i in range(stop - start):
            col = mats[i] @ col
            k = start + i + 1
            if k in sample_steps:
                times.append(k * h)
                states.append(col[..., 0].copy())
    return np.array(times), np.array(states)
