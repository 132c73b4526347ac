"""
Reading the absolute phase of the drive off a single population
measurement: sweep the field phase, record the readout after a pi/2 pulse
and fit the 2phi dependence.
"""
#%%
import math

import numpy as np

from bsosim import FieldParams, estimate_absolute_phase, final_populations, saturated_pi_half_time
from bsosim._svg import line_plot
from bsosim.signal import fit_phase_sweep

p = FieldParams(g0M=0.2, omega=1.0, phi=0.0, tau_sw=100.0)
# a pi/2 pulse long enough for g0 to sit near its peak
tau = saturated_pi_half_time(p)
print(f"pi/2 time {tau:.3f}, field phase at readout w tau mod pi = {(p.omega * tau) % math.pi:.4f}")

#%%
phis = np.arange(32) * math.pi / 32
pops = final_populations(p, phis, tau)
fit = fit_phase_sweep(np.column_stack([phis, pops]))
print(f"readout = {fit.offset:.4f} + {fit.amplitude:.4f} sin(2 phi + {fit.phase:.4f})")
print(f"amplitude / eta0 = {fit.amplitude / p.eta0:.3f}")

#%%
est = estimate_absolute_phase(np.column_stack([phis, pops]), p, tau)
print(f"recovered w tau mod pi = {est:.4f}")

#%%
# the offset sits below 1/2: the slightly slower true Rabi frequency leaves
# the pulse a little short of a full pi/2 rotation
print(f"offset - 1/2 = {fit.offset - 0.5:.4f} (eta0^2 = {p.eta0**2:.4f})")
svg = line_plot(phis, [("readout", pops), ("fit", fit(phis))],
                "phi (rad)", "excited population", "Readout vs field phase")
open("phase_sweep.svg", "w").write(svg)
