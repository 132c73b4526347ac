"""
An effusive atomic beam crossing the field: averaging over the velocity
distribution shrinks the 2w signal but keeps its phase, and a lock-in
locked to the field's second harmonic reads it out as a dc level.
"""
#%%
import math

import numpy as np

from bsosim import BeamParams, FieldParams, beam_coefficients, lock_in_dc, lock_in_phase

p = FieldParams(g0M=0.2, omega=1.0, phi=0.3, tau_sw=100.0)
# speed-u atoms get a pi/2 pulse; slower and faster ones do not
beam = BeamParams.matched(p, u=2.0, z_sw=200.0)

#%%
for spread in (1e-6, 0.1, 0.3, 0.6, 1.0, None):
    a, b = beam_coefficients(beam.with_spread(spread), p)
    label = "full" if spread is None else f"+-{spread:g} u"
    print(f"speeds {label:>10}: S = {a:.4f} + {b:.5f} sin(2wt + 2phi)   B/eta0 = {b / p.eta0:.3f}")

#%%
thetas = np.arange(8) * math.pi / 4
for th in thetas:
    print(f"theta = {th:.3f}  dc = {lock_in_dc(beam, p, th):+.6f}  cos = {math.cos(th):+.3f}")

#%%
# two reference phases give the signal phase relative to the reference
i = lock_in_dc(beam, p, 0.0, reference_phase=0.0)
q = lock_in_dc(beam, p, math.pi / 2, reference_phase=0.0)
print(f"2 phi from the lock-in: {lock_in_phase(i, q):.6f} (true {2 * p.phi})")
