"""Effusive atomic beam: velocity averaging of the Bloch-Siegert signal.

Atoms enter the field at z0, see g0(z) = g0M [1 - exp(-(z - z0)/z_sw)] and
are read out at a fixed position.  A group of speed v therefore has
interaction time tau_v = tau_bar u / v and switching constant z_sw / v.
All of them arrive at the readout point at the same instant t, so the
population signal is

    S(t) = int dv f(v) [sin^2(A_v / 2) + eta0 sin(A_v) sin(2wt + 2phi)]

with pulse area A_v = g0'(tau_v) tau_v and f(v) = 2 v^3 u^-4 exp(-v^2/u^2).
Only the amplitude of the 2w oscillation depends on the velocity spread;
its phase is that of the field at the readout point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .analytic import pi_half_time
from .errors import AccuracyError, DomainError, WindowError
from .field import FieldParams

__all__ = [
    "BeamParams",
    "velocity_pdf",
    "spatial_profile",
    "group_field",
    "beam_coefficients",
    "beam_signal",
    "lock_in_reference",
    "lock_in_dc",
    "lock_in_phase",
]

QUAD_TOL = 1e-8
TAIL_MASS = 1e-12


@dataclass(frozen=True)
class BeamParams:
    """Beam geometry and velocity quadrature.

    Attributes
    ----------
    u : float
        Most probable speed sqrt(2kT/m).
    z0 : float
        Position where the field turns on.
    z_sw : float
        Switching length; a group of speed v sees tau_sw = z_sw / v.
    tau_bar : float
        Interaction time of the speed-u group.
    nodes : int
        Gauss-Legendre nodes per quadrature panel.
    v_max : float
        Upper speed cut-off as a multiple of u.
    spread : float or None
        ``None`` averages over the full distribution.  A number w keeps only
        speeds in [u(1 - w), u(1 + w)] (renormalized), so w -> 0 is the
        monovelocity beam.
    """

    u: float
    z0: float
    z_sw: float
    tau_bar: float
    nodes: int = 8
    v_max: float = 5.0
    spread: float | None = None

    def __post_init__(self):
        for name in ("u", "z_sw", "tau_bar", "v_max"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.nodes < 2:
            raise DomainError("nodes must be at least 2")
        if self.spread is not None and not self.spread > 0:
            raise DomainError("spread must be positive")

    @classmethod
    def matched(cls, p: FieldParams, u: float, z_sw: float, z0: float = 0.0,
                cycles: int = 0, **kw) -> "BeamParams":
        """Beam whose speed-u group receives a pi/2 pulse."""
        pu = replace(p, tau_sw=z_sw / u)
        return cls(u=u, z0=z0, z_sw=z_sw, tau_bar=pi_half_time(pu, cycles), **kw)

    @property
    def observation_position(self) -> float:
        return self.z0 + self.u * self.tau_bar

    def with_spread(self, spread: float | None) -> "BeamParams":
        return replace(self, spread=spread)


def velocity_pdf(b: BeamParams, v):
    """Normalized effusive-beam speed density 2 v^3 u^-4 exp(-v^2/u^2)."""
    v = np.asarray(v, dtype=float)
    if np.any(v < 0):
        raise DomainError("speed must be non-negative")
    out = 2.0 * v**3 / b.u**4 * np.exp(-((v / b.u) ** 2))
    return out.item() if out.ndim == 0 else out


def spatial_profile(b: BeamParams, p: FieldParams, z):
    """Rabi frequency along the beam; zero upstream of z0."""
    d = np.asarray(z, dtype=float) - b.z0
    out = np.where(d < 0, 0.0, -p.g0M * np.expm1(-np.maximum(d, 0.0) / b.z_sw))
    return out.item() if out.ndim == 0 else out


def group_field(b: BeamParams, p: FieldParams, v: float) -> FieldParams:
    """Time-domain field seen by the speed-v group (tau_sw = z_sw / v)."""
    if not v > 0:
        raise DomainError("speed must be positive")
    return replace(p, tau_sw=b.z_sw / v)


def _lag_fraction(x):
    return 1.0 + np.expm1(-x) / x


FINE_WIDTH = 0.05
FINE_END = 4.0


@lru_cache(maxsize=64)
def _panels(s_lo, s_hi, width, nodes):
    # fine panels where the density 2 s^-5 exp(-1/s^2) has structure,
    # oscillation-resolving panels over the algebraic tail
    split = min(max(FINE_END, s_lo), s_hi)
    fine = np.linspace(s_lo, split, max(1, math.ceil((split - s_lo) / FINE_WIDTH)) + 1)
    coarse = np.linspace(split, s_hi, max(1, math.ceil((s_hi - split) / width)) + 1)
    edges = np.concatenate([fine, coarse[1:]]) if s_hi > split else fine
    x, w = np.polynomial.legendre.leggauss(nodes)
    half = 0.5 * np.diff(edges)[:, None]
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    s = (mid + half * x).ravel()
    ws = (half * w).ravel()
    s.setflags(write=False)
    ws.setflags(write=False)
    return s, ws


def _moments(b: BeamParams, p: FieldParams, nodes: int):
    # integrate over s = u/v, where the pulse area is linear in s
    ratio = b.tau_bar * b.u / b.z_sw  # tau_v / tau_sw,v, the same for every group
    area_u = p.g0M * b.tau_bar * _lag_fraction(ratio)
    if b.spread is None:
        s_lo = 1.0 / b.v_max
        s_hi = (0.5 / TAIL_MASS) ** 0.25
    else:
        s_lo = 1.0 / (1.0 + b.spread)
        s_hi = 1.0 / (1.0 - b.spread) if b.spread < 1 else (0.5 / TAIL_MASS) ** 0.25
        s_lo = max(s_lo, 1.0 / b.v_max)
    width = min(0.5, 0.5 * math.pi / max(area_u, 1e-300))
    s, w = _panels(s_lo, s_hi, width, nodes)
    # f(v) dv = 2 s^-5 exp(-1/s^2) ds
    weight = w * 2.0 * s**-5 * np.exp(-1.0 / s**2)
    area = area_u * s
    mass = weight.sum()
    dc = np.dot(weight, np.sin(0.5 * area) ** 2)
    osc = p.eta0 * np.dot(weight, np.sin(area))
    return mass, dc, osc


def beam_coefficients(b: BeamParams, p: FieldParams) -> tuple[float, float]:
    """(A, B) with S(t) = A + B sin(2wt + 2phi).

    Raises AccuracyError when doubling the quadrature nodes moves either
    coefficient by more than 1e-8.
    """
    m1, a1, b1 = _moments(b, p, b.nodes)
    m2, a2, b2 = _moments(b, p, 2 * b.nodes)
    if b.spread is None:
        if abs(m1 - 1.0) > 1e-6:
            raise AccuracyError(f"velocity density integrates to {m1:.9f} on the grid")
        m1 = m2 = 1.0
    a1, b1, a2, b2 = a1 / m1, b1 / m1, a2 / m2, b2 / m2
    err = max(abs(a2 - a1), abs(b2 - b1))
    if err > QUAD_TOL:
        raise AccuracyError(f"velocity quadrature not converged (node doubling changed S by {err:.3g})")
    return a2, b2


def beam_signal(b: BeamParams, p: FieldParams, t):
    """Beam-averaged excited population at the readout point at time(s) t."""
    a, bb = beam_coefficients(b, p)
    out = a + bb * np.sin(2 * (p.omega * np.asarray(t, dtype=float) + p.phi))
    return out.item() if out.ndim == 0 else out


def lock_in_reference(p: FieldParams, t, theta: float, f0: float = 1.0,
                      reference_phase: float | None = None):
    """Second-harmonic reference F0 cos(2(wt + phi_ref) - pi/2 - theta)."""
    ref = p.phi if reference_phase is None else reference_phase
    t = np.asarray(t, dtype=float)
    return f0 * np.cos(2 * (p.omega * t + ref) - 0.5 * math.pi - theta)


def lock_in_dc(b: BeamParams, p: FieldParams, theta: float, periods=64,
               f0: float = 1.0, samples_per_period: int = 64,
               reference_phase: float | None = None) -> float:
    """Time average of S(t) F(t) over ``periods`` periods of the signal (pi/w).

    Equals (B F0 / 2) cos(theta) when the reference is locked to the field
    phase.  The window must hold an integer number of periods.
    """
    n_per = float(periods)
    if not n_per >= 1 or abs(n_per - round(n_per)) > 1e-9:
        raise WindowError(f"averaging window must be a whole number of periods, got {periods}")
    n = int(round(n_per)) * samples_per_period
    t = np.arange(n) * (math.pi / p.omega) / samples_per_period
    s = beam_signal(b, p, t)
    f = lock_in_reference(p, t, theta, f0, reference_phase)
    return float(np.mean(s * f))


def lock_in_phase(dc_in_phase: float, dc_quadrature: float) -> float:
    """Signal phase relative to the reference from the theta = 0 and pi/2 outputs.

    For S = A + B sin(2wt + 2phi) and reference phase phi_ref the outputs
    are proportional to cos(d) and -sin(d) with d = 2(phi - phi_ref); d is
    returned in [0, 2 pi).
    """
    if dc_in_phase == 0 and dc_quadrature == 0:
        raise DomainError("both lock-in outputs vanish; phase undefined")
    d = math.atan2(-dc_quadrature, dc_in_phase) % (2 * math.pi)
    return 0.0 if d >= 2 * math.pi else d
