"""
Rest energy turns 1/c^2 terms into O(1) effects
===============================================

Adding mc^2 to the phase makes the tiny time-line corrections of the extended
boost matter: multiplied by the rest energy they supply the m v shift in the
momentum and the m v^2 / 2 shift in the energy.
"""

from boostcov.covariance import (
    extended_momentum_error,
    extended_truncation_gap,
    lorentz_reference_gap,
    order_scan,
)
from boostcov.spacetime import BoostSpec, Event
from boostcov.states import (
    PlaneWave,
    energy_momentum,
    extended_boost_wave,
    probe_energy_momentum,
    safe_steps,
)

m, p, v, c = 1.0, (1.0, 0.0, 0.0), (0.2, 0.0, 0.0), 10.0
w = PlaneWave(m, p, include_rest=True, c=c)
out = extended_boost_wave(w, BoostSpec(v, c))
print("truncated:", energy_momentum(out.truncated))  # (100.32, (0.8, 0, 0))

# %%
# Probe the boosted field itself by finite differences. With the 1/c^2
# entries the momentum comes out near p - m v; without them the boost is plain
# Galilei and the momentum stays at p.
probe = Event(0.5, (0.5, 0.0, 0.0))
for drop in (False, True):
    field = extended_boost_wave(w, BoostSpec(v, c), drop_c2_terms=drop).field
    seen = probe_energy_momentum(field, probe, *safe_steps(out.truncated.E, out.truncated.p))
    print(f"probed (drop_c2_terms={drop}):", seen)

# %%
# What the truncation leaves out shrinks like 1/c^2, and so does the distance
# to an exact Lorentz boost of the relativistic wave.
C = [10, 20, 40, 80]
e = probe
scans = {
    "truncation gap": lambda cc: extended_truncation_gap(PlaneWave(m, p, True, cc), BoostSpec(v, cc)),
    "momentum error": lambda cc: extended_momentum_error(PlaneWave(m, p, True, cc), BoostSpec(v, cc), e),
    "lorentz gap": lambda cc: lorentz_reference_gap(PlaneWave(m, p, True, cc), (0.1, 0, 0), cc),
}
for name, fn in scans.items():
    scan = order_scan(fn, C)
    print(f"{name:>15}: exponent {scan.fitted_exponent:.3f}, R^2 {scan.fit_quality:.6f}")
