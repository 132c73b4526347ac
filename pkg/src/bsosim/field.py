"""Driving field B = B0 cos(wt + phi) with an exponential turn-on.

All scalar quantities derived from the field live here: the switching
envelope g0(t), its running time average (the effective Rabi frequency),
the small parameter eta = g0/(4w) and the Bloch-Siegert shift g0^2/(4w).

Every function accepts scalar or array times and returns the same shape.
Units are arbitrary but must be consistent; ``FieldParams.normalized``
rescales to the conventional choice w = 1.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

__all__ = [
    "AdiabaticityWarning",
    "FieldParams",
    "switching_profile",
    "rabi_angle",
    "effective_rabi",
    "eta",
    "eta0",
    "bloch_siegert_shift",
    "compensation_shift",
]

ETA0_MAX = 0.25
# soft thresholds for the slow-switching premise
MIN_TAU_OMEGA = 50.0
MIN_TAU_G0M = 10.0

COMPENSATION_MODES = ("continuous", "static")


class AdiabaticityWarning(UserWarning):
    """Switching is not slow compared with 1/w or 1/g0M."""


@dataclass(frozen=True)
class FieldParams:
    """Drive parameters.

    Attributes
    ----------
    g0M : float
        Peak Rabi frequency (angular). Zero switches the coupling off.
    omega : float
        Transition frequency, equal to the drive frequency (resonance).
    phi : float
        Field phase at t = 0.
    tau_sw : float
        Switching time constant. ``0`` selects an instantaneous turn-on.
    compensate_bs_shift : bool
        Cancel the Bloch-Siegert detuning in the rotating frame, as if the
        drive frequency tracked the shifted resonance.
    compensation : str
        ``"continuous"`` tracks g0(t)^2/(4w); ``"static"`` uses the
        saturated value g0M^2/(4w) throughout.
    """

    g0M: float
    omega: float = 1.0
    phi: float = 0.0
    tau_sw: float = 100.0
    compensate_bs_shift: bool = True
    compensation: str = "continuous"

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")
        if self.g0M < 0 or not math.isfinite(self.g0M):
            raise DomainError(f"g0M must be finite and non-negative, got {self.g0M}")
        if self.tau_sw < 0 or not math.isfinite(self.tau_sw):
            raise DomainError(f"tau_sw must be finite and non-negative, got {self.tau_sw}")
        if not math.isfinite(self.phi):
            raise DomainError(f"phi must be finite, got {self.phi}")
        if self.compensation not in COMPENSATION_MODES:
            raise DomainError(
                f"compensation must be one of {COMPENSATION_MODES}, got {self.compensation!r}"
            )
        if self.eta0 >= ETA0_MAX:
            raise DomainError(
                f"eta0 = g0M/(4 omega) = {self.eta0:.4g} is outside the perturbative "
                f"domain (< {ETA0_MAX})"
            )
        for msg in self.adiabatic_warnings():
            warnings.warn(msg, AdiabaticityWarning, stacklevel=3)

    @property
    def eta0(self) -> float:
        return self.g0M / (4.0 * self.omega)

    @property
    def instantaneous(self) -> bool:
        return self.tau_sw == 0

    @property
    def time_unit(self) -> float:
        """Physical duration of one dimensionless time unit (1/w)."""
        return 1.0 / self.omega

    def adiabatic_warnings(self) -> list[str]:
        if self.g0M == 0:
            return []
        out = []
        if self.tau_sw * self.omega < MIN_TAU_OMEGA:
            out.append(
                f"tau_sw*omega = {self.tau_sw * self.omega:.3g} < {MIN_TAU_OMEGA:g}: "
                "switching is not adiabatic with respect to the drive period"
            )
        if self.tau_sw * self.g0M < MIN_TAU_G0M:
            out.append(
                f"tau_sw*g0M = {self.tau_sw * self.g0M:.3g} < {MIN_TAU_G0M:g}: "
                "switching is not adiabatic with respect to the Rabi period"
            )
        return out

    def normalized(self) -> "FieldParams":
        """Same physics in units where omega = 1."""
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AdiabaticityWarning)
            return replace(
                self, g0M=self.g0M / self.omega, tau_sw=self.tau_sw * self.omega, omega=1.0
            )

    def with_phase(self, phi: float) -> "FieldParams":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", AdiabaticityWarning)
            return replace(self, phi=phi)

    def as_dict(self) -> dict:
        return {
            "g0M": self.g0M,
            "omega": self.omega,
            "phi": self.phi,
            "tau_sw": self.tau_sw,
            "compensate_bs_shift": self.compensate_bs_shift,
            "compensation": self.compensation,
            "eta0": self.eta0,
        }


def _times(t, strict=False):
    t = np.asarray(t, dtype=float)
    bad = t <= 0 if strict else t < 0
    if np.any(bad) or np.any(np.isnan(t)):
        bound = "positive" if strict else "non-negative"
        raise DomainError(f"time must be {bound}")
    return t


def _ret(x):
    return x.item() if np.ndim(x) == 0 else x


def switching_profile(p: FieldParams, t):
    """Instantaneous Rabi frequency g0(t) = g0M (1 - exp(-t/tau_sw))."""
    t = _times(t)
    if p.instantaneous:
        return _ret(np.full_like(t, p.g0M))
    return _ret(-p.g0M * np.expm1(-t / p.tau_sw))


def _lag_fraction(x):
    # 1 - (1 - exp(-x))/x, stable for small x and finite at x = inf
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < 1e-3
    xs = x[small]
    out[small] = xs * (1 / 2 - xs * (1 / 6 - xs * (1 / 24 - xs * (1 / 120 - xs / 720))))
    xl = x[~small]
    with np.errstate(invalid="ignore"):
        out[~small] = 1.0 + np.expm1(-xl) / xl
    return out


def rabi_angle(p: FieldParams, t):
    """Pulse area, the integral of g0 from 0 to t (equals g0'(t) * t)."""
    t = _times(t)
    if p.instantaneous:
        return _ret(p.g0M * t)
    x = t / p.tau_sw
    # t - tau (1 - e^{-x}) = t * lag_fraction(x)
    return _ret(p.g0M * t * _lag_fraction(x))


def effective_rabi(p: FieldParams, t):
    """Time-averaged Rabi frequency (1/t) * integral of g0 over [0, t].

    For the exponential envelope this is g0M [1 - (tau/t)(1 - exp(-t/tau))].
    Requires t > 0; ``t = inf`` returns g0M.
    """
    t = _times(t, strict=True)
    if p.instantaneous:
        return _ret(np.full_like(t, p.g0M))
    return _ret(p.g0M * _lag_fraction(t / p.tau_sw))


def eta0(p: FieldParams) -> float:
    return p.eta0


def eta(p: FieldParams, t):
    """Small parameter eta(t) = g0(t) / (4 w)."""
    return _ret(np.asarray(switching_profile(p, t)) / (4.0 * p.omega))


def bloch_siegert_shift(p: FieldParams, t):
    """Bloch-Siegert shift g0(t)^2 / (4 w)."""
    g = np.asarray(switching_profile(p, t))
    return _ret(g * g / (4.0 * p.omega))


def compensation_shift(p: FieldParams, t):
    """Detuning cancelled by the drive-frequency correction at time t.

    Zero when compensation is disabled.
    """
    t = _times(t)
    if not p.compensate_bs_shift:
        return _ret(np.zeros_like(t))
    if p.compensation == "static":
        return _ret(np.full_like(t, p.g0M**2 / (4.0 * p.omega)))
    return bloch_siegert_shift(p, t)
