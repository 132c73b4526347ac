"""
Three independent routes to the same populations: direct integration,
the truncated Floquet ladder, and the first-order closed form.
"""
#%%
import numpy as np

from bsosim import FieldParams, analytic_trajectory, integrate_floquet, integrate_full, pi_half_time

for eta0 in (0.01, 0.05, 0.1):
    p = FieldParams(g0M=4 * eta0, omega=1.0, phi=0.3, tau_sw=100.0)
    tau = pi_half_time(p)
    full = integrate_full(p, tau)
    flo = integrate_floquet(p, tau).resummed()
    ana = analytic_trajectory(p, full.times)
    d_flo = np.max(np.abs(full.populations - flo.populations)) / eta0**2
    d_ana = np.max(np.abs(full.populations - ana.populations)) / eta0**2
    print(f"eta0={eta0:<5} tau={tau:7.2f}  full-floquet {d_flo:.3f} eta0^2  full-analytic {d_ana:.3f} eta0^2")

#%%
# the sideband amplitudes stay at the eta level, the ones two steps away at eta^2
p = FieldParams(g0M=0.2, omega=1.0, phi=0.3, tau_sw=100.0)
modes = integrate_floquet(p, pi_half_time(p)).modes
print("max |mode| (a-1 a0 a1 b-1 b0 b1):", np.round(np.max(np.abs(modes), axis=0), 5))
