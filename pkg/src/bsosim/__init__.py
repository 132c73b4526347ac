"""Two-level dynamics beyond the rotating-wave approximation.

Simulates a resonantly driven two-level system, the Bloch-Siegert
oscillation at twice the drive frequency that carries the absolute phase
of the field, and its detection with an effusive atomic beam.
"""
from .analytic import (
    SigmaFactor,
    analytic_amplitudes,
    analytic_population,
    analytic_trajectory,
    pi_half_time,
    readout_population,
    saturated_pi_half_time,
    sigma,
)
from .beam import (
    BeamParams,
    beam_coefficients,
    beam_signal,
    lock_in_dc,
    lock_in_phase,
    spatial_profile,
    velocity_pdf,
)
from .dynamics import (
    Frame,
    StateAmplitudes,
    Trajectory,
    final_populations,
    integrate_full,
    integrate_rwa,
    to_lab_frame,
)
from .field import (
    AdiabaticityWarning,
    FieldParams,
    bloch_siegert_shift,
    effective_rabi,
    eta,
    rabi_angle,
    switching_profile,
)
from .floquet import FloquetState, adiabatic_modes, integrate_floquet, resum_modes
from .signal import (
    SinusoidFit,
    bso_residual,
    bso_spectral_peak,
    estimate_absolute_phase,
    fit_bso,
    fit_sinusoid,
)

__version__ = "0.1.0"
