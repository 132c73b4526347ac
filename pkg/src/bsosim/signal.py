"""Extraction of the Bloch-Siegert oscillation and of the field phase.

The residual left after subtracting the Rabi curve sin^2(g0' t / 2) from a
population record is eta(t) sin(g0' t) sin(2wt + 2phi) to first order: a
2w carrier whose phase is twice the field phase, under a slow envelope
that vanishes whenever the population sits in a single state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .analytic import pi_half_residual
from .dynamics import Trajectory
from .errors import FitError, PreconditionError
from .field import FieldParams, eta, rabi_angle

__all__ = [
    "SinusoidFit",
    "bso_residual",
    "bso_envelope",
    "spectral_peak",
    "fit_sinusoid",
    "envelope_windows",
    "fit_bso",
    "bso_spectral_peak",
    "fit_phase_sweep",
    "estimate_absolute_phase",
]

TWO_PI = 2 * math.pi
MAX_FIT_EVALS = 2000
FLAT_TOL = 1e-12  # amplitude below this (relative to the data scale) means no phase


def _wrap(phase: float) -> float:
    # x % 2pi can round up to exactly 2pi for tiny negative x
    out = phase % TWO_PI
    return 0.0 if out >= TWO_PI else out


@dataclass(frozen=True)
class SinusoidFit:
    """Least-squares fit of offset + amplitude * env(t) * sin(frequency t + phase)."""

    offset: float
    amplitude: float
    frequency: float
    phase: float
    residual_rms: float
    phase_defined: bool = True

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("amplitude must be non-negative")
        if not 0 <= self.phase < TWO_PI:
            raise ValueError("phase must lie in [0, 2 pi)")

    def __call__(self, t, envelope=None):
        env = 1.0 if envelope is None else envelope
        return self.offset + self.amplitude * env * np.sin(self.frequency * np.asarray(t) + self.phase)


def bso_residual(traj: Trajectory, p: FieldParams | None = None) -> np.ndarray:
    """Population minus the Rabi curve sin^2(g0'(t) t / 2), per sample."""
    p = traj.params if p is None else p
    return traj.populations - np.sin(0.5 * np.asarray(rabi_angle(p, traj.times))) ** 2


def bso_envelope(p: FieldParams, t):
    """First-order envelope eta(t) sin(g0'(t) t) of the oscillation."""
    return np.asarray(eta(p, t)) * np.sin(np.asarray(rabi_angle(p, t)))


def _uniform_step(t):
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size < 5:
        raise FitError("need a 1-d series of at least 5 samples")
    d = np.diff(t)
    if not np.allclose(d, d[0], rtol=1e-6, atol=0):
        raise FitError("series must be uniformly sampled")
    return t, d[0]


def spectral_peak(t, y, band: tuple[float, float] | None = None) -> tuple[float, float]:
    """Angular frequency of the strongest spectral line and the bin width.

    Hann-windowed DFT of the mean-removed series; the peak bin is refined by
    a parabola through the log-magnitudes of its neighbours.  ``band``
    restricts the search to (lo, hi) in angular frequency.
    """
    t, dt = _uniform_step(t)
    y = np.asarray(y, dtype=float)
    n = len(y)
    spec = np.abs(np.fft.rfft((y - y.mean()) * np.hanning(n)))
    freqs = TWO_PI * np.fft.rfftfreq(n, dt)
    bin_width = freqs[1]
    mask = np.ones_like(spec, dtype=bool)
    mask[0] = False
    if band is not None:
        mask &= (freqs >= band[0]) & (freqs <= band[1])
    if not np.any(mask) or not np.any(spec[mask] > 0):
        raise FitError("no spectral content in the requested band")
    k = int(np.flatnonzero(mask)[np.argmax(spec[mask])])
    if 0 < k < len(spec) - 1 and min(spec[k - 1], spec[k + 1]) > 0:
        lm, l0, lp = np.log(spec[k - 1 : k + 2])
        denom = lm - 2 * l0 + lp
        shift = 0.5 * (lm - lp) / denom if denom != 0 else 0.0
        return float(freqs[k] + shift * bin_width), float(bin_width)
    return float(freqs[k]), float(bin_width)


def _linear_fit(t, y, omega, env):
    basis = np.column_stack([np.ones_like(t), env * np.sin(omega * t), env * np.cos(omega * t)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    a, c, s = coef
    return a, math.hypot(c, s), math.atan2(s, c)


def fit_sinusoid(t, y, freq_hint: float, envelope=None,
                 refine_frequency: bool = True) -> SinusoidFit:
    """Fit y ~ A + B env(t) sin(W t + psi), W seeded by ``freq_hint``.

    The series must be uniformly sampled and span at least four periods of
    ``freq_hint``.  The seed frequency is taken from the spectral peak near
    the hint, the linear parameters from a linear least-squares solve, and
    all four are then refined together by Levenberg-Marquardt.  A constant
    series gives B = 0 with ``phase_defined`` False.
    """
    t, _ = _uniform_step(t)
    y = np.asarray(y, dtype=float)
    if y.shape != t.shape:
        raise FitError("times and values differ in length")
    if not freq_hint > 0:
        raise FitError("freq_hint must be positive")
    if (t[-1] - t[0]) * freq_hint < 4 * TWO_PI:
        raise FitError("series spans fewer than 4 periods of freq_hint")
    env = np.ones_like(t) if envelope is None else np.asarray(envelope, dtype=float)

    scale = max(1.0, float(np.max(np.abs(y))))
    if np.ptp(y) <= 1e-14 * scale:
        return SinusoidFit(float(y.mean()), 0.0, float(freq_hint), 0.0, float(np.std(y)), False)

    omega = freq_hint
    if refine_frequency:
        try:
            omega, _ = spectral_peak(t, y * env, band=(0.5 * freq_hint, 1.5 * freq_hint))
        except FitError:
            omega = freq_hint
    a, b, psi = _linear_fit(t, y, omega, env)

    if refine_frequency:
        t0 = t[0]
        tc = t - t0

        def resid(x):
            return x[0] + x[1] * env * np.sin(x[2] * tc + x[3]) - y

        def jac(x):
            arg = x[2] * tc + x[3]
            s, c = np.sin(arg), np.cos(arg)
            return np.column_stack([np.ones_like(tc), env * s, x[1] * env * c * tc, x[1] * env * c])

        sol = least_squares(resid, [a, b, omega, psi + omega * t0], jac=jac, method="lm",
                            xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=MAX_FIT_EVALS)
        if sol.status <= 0 or not np.all(np.isfinite(sol.x)):
            raise FitError(f"sinusoid fit did not converge: {sol.message}")
        a, b, omega, psi = sol.x
        psi -= omega * t0
    if b < 0:
        b, psi = -b, psi + math.pi
    rms = float(np.sqrt(np.mean((a + b * env * np.sin(omega * t + psi) - y) ** 2)))
    return SinusoidFit(float(a), float(b), float(omega), _wrap(float(psi)), rms)


def envelope_windows(envelope, max_variation: float = 0.1, min_points: int = 2) -> list[slice]:
    """Contiguous runs over which |envelope| varies by less than ``max_variation``.

    Variation is (max - min) / max of |envelope| within the run.  Runs are
    grown greedily from left to right; runs shorter than ``min_points`` are
    dropped.
    """
    env = np.abs(np.asarray(envelope, dtype=float))
    out = []
    start = 0
    lo = hi = env[0] if env.size else 0.0
    for k in range(1, env.size + 1):
        if k < env.size:
            nlo, nhi = min(lo, env[k]), max(hi, env[k])
            if nhi > 0 and (nhi - nlo) / nhi < max_variation:
                lo, hi = nlo, nhi
                continue
        if k - start >= min_points and hi > 0:
            out.append(slice(start, k))
        if k < env.size:
            start, lo, hi = k, env[k], env[k]
    return out


def fit_bso(traj: Trajectory, p: FieldParams | None = None, mode: str = "product",
            t_min: float = 0.0, max_variation: float = 0.1) -> SinusoidFit:
    """Fit the 2w carrier of the Bloch-Siegert residual.

    ``mode="product"`` fits residual = A + B e(t) sin(W t + psi) with the known
    envelope shape e(t) = eta(t)/eta0 sin(g0' t), so B estimates eta0.
    ``mode="window"`` fits a plain sinusoid on the longest run of samples
    where the envelope varies by less than ``max_variation``; B is then the
    local envelope value.  Only samples with t >= ``t_min`` are used.
    """
    p = traj.params if p is None else p
    keep = traj.times >= t_min
    t = traj.times[keep]
    r = bso_residual(traj, p)[keep]
    env = bso_envelope(p, t) / p.eta0
    hint = 2 * p.omega
    if mode == "product":
        return fit_sinusoid(t, r, hint, envelope=env)
    if mode == "window":
        runs = envelope_windows(env, max_variation, min_points=5)
        if not runs:
            raise FitError("no window with a slowly varying envelope")
        best = max(runs, key=lambda s: s.stop - s.start)
        return fit_sinusoid(t[best], r[best], hint)
    raise ValueError(f"unknown mode {mode!r}")


def bso_spectral_peak(traj: Trajectory, p: FieldParams | None = None,
                      t_min: float = 0.0) -> tuple[float, float]:
    """Carrier frequency of the Bloch-Siegert residual and the DFT bin width.

    The residual is multiplied by the Rabi factor sin(g0' t) before the
    transform.  Without it the carrier is split into sidebands at
    2w +- g0', and the slow walk-off of the Rabi phase dominates at low
    frequency; with it the central line sits at 2w.  The search is limited
    to (w, 3w).
    """
    p = traj.params if p is None else p
    keep = traj.times >= t_min
    t = traj.times[keep]
    weighted = bso_residual(traj, p)[keep] * np.sin(np.asarray(rabi_angle(p, t)))
    return spectral_peak(t, weighted, band=(p.omega, 3 * p.omega))


def _sweep_arrays(pop_vs_phi):
    data = np.asarray(pop_vs_phi, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise FitError("expected a sequence of (phi, population) pairs")
    phi, pop = data[:, 0], data[:, 1]
    if len(phi) < 8:
        raise FitError(f"need at least 8 phase samples, got {len(phi)}")
    distinct = np.unique(np.round(np.mod(phi, math.pi), 12))
    if distinct.size < 3:
        raise FitError("phase samples are degenerate (fewer than 3 distinct values mod pi)")
    return phi, pop


def fit_phase_sweep(pop_vs_phi) -> SinusoidFit:
    """Linear least-squares fit of population = A + B sin(2 phi + psi)."""
    phi, pop = _sweep_arrays(pop_vs_phi)
    a, b, psi = _linear_fit(phi, pop, 2.0, np.ones_like(phi))
    rms = float(np.sqrt(np.mean((a + b * np.sin(2 * phi + psi) - pop) ** 2)))
    defined = b > FLAT_TOL * max(1.0, float(np.max(np.abs(pop))))
    return SinusoidFit(float(a), float(b), 2.0, _wrap(float(psi)), rms, defined)


def estimate_absolute_phase(pop_vs_phi, p: FieldParams, tau: float,
                            tol: float = 1e-6) -> float:
    """Recover w tau (mod pi) from readout populations taken at several phi.

    The readout after a pi/2 pulse of length ``tau`` depends on phi only
    through sin(2(w tau + phi)), so half the fitted phase is the field phase
    accumulated during the pulse, known modulo pi.
    """
    if pi_half_residual(p, tau) > tol:
        raise PreconditionError("tau is not a pi/2 time for these field parameters")
    fit = fit_phase_sweep(pop_vs_phi)
    if not fit.phase_defined:
        raise FitError("no phase dependence in the data")
    return (0.5 * fit.phase) % math.pi
