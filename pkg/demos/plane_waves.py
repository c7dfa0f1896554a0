"""
Why the Galilei boost breaks the Schrodinger equation
=====================================================

A plane wave pushed through t' = t, r' = r - vt keeps its momentum but its
energy moves by p.v, so it falls off the dispersion relation. A mass
dependent phase factor puts it back on.
"""

from boostcov.covariance import check_mass_dependence
from boostcov.states import (
    PlaneWave,
    energy_momentum,
    galilei_boost_wave,
    phase_shift_boost,
    schrodinger_residual,
)

w = PlaneWave(1.0, (1.0, 0.0, 0.0))
v = (0.3, 0.0, 0.0)
print("rest frame:", energy_momentum(w))

# %%
# Coordinates only: momentum unchanged, residual exactly |p.v|.
g = galilei_boost_wave(w, v)
print("galilei:   ", energy_momentum(g), " residual", schrodinger_residual(g, w.m))

# %%
# Coordinates plus exp(i(m v^2/2 t + m v.r)): back on shell, p' = p + m v.
s = phase_shift_boost(w, v, rule_mass=w.m)
print("phase shift:", energy_momentum(s), " residual", schrodinger_residual(s, w.m))

# %%
# The factor knows the mass. Built for m=1 and applied to an m=2 particle it
# gives the wrong momentum, so it is not a property of the frame change.
vd = check_mass_dependence(1.0, 2.0, (0.2, 0.0, 0.0))
print("momentum gap:", vd.details["momentum_gap"], " off-shell by", vd.details["offshell_residual"])
