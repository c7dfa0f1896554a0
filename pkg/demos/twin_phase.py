"""
Phase carried by an accelerated history
=======================================

An observer who moves away and comes back picks up the phase
int m |xi_dot|^2 / 2 dt relative to one who stayed home. Two different
histories give different phases, which is in principle observable.
"""

import numpy as np

from boostcov.noninertial import (
    PiecewiseLinear,
    QuadraticRamp,
    Rest,
    SmoothBump,
    Tabulated,
    noninertial_transform,
    phase_difference,
    twin_phase,
)
from boostcov.spacetime import Event

# xi = t^2 / 2 on [0, 1]: the phase is exactly 1/6.
r = twin_phase(QuadraticRamp(1.0, 1.0), 1.0)
print(f"quadratic ramp: {r.phi:.15f}  (est. error {r.estimated_error:.1e})")
print("a=2 vs a=1:", phase_difference(QuadraticRamp(2.0, 1.0), QuadraticRamp(1.0, 1.0), 1.0))
print("rest:", twin_phase(Rest(), 1.0).phi)

# %%
# A round trip that ends where it started still leaves a phase behind.
bump = SmoothBump(0.5, 2.0)
print("bump:", twin_phase(bump, 1.0).phi, " closed form", 0.5**2 * np.pi**2 / (4 * 2.0))

# %%
# Sampled histories: accuracy is second order in the sample spacing.
for n in (51, 101, 201):
    t = np.linspace(0.0, 1.0, n)
    res = twin_phase(Tabulated(t, 0.5 * t**2), 1.0)
    print(f"{n:4d} samples: {res.phi:.10f}  (est. error {res.estimated_error:.1e})")

# %%
# Piecewise-constant velocity: the integral is a finite sum.
zigzag = PiecewiseLinear([0.0, 0.5, 1.0, 1.5], [0.0, 0.4, -0.2, 0.0])
print("zigzag:", twin_phase(zigzag, 1.0).phi, " exact", zigzag.exact_phase(1.0))

# %%
# The observer's coordinates at one event along the ramp.
print(noninertial_transform(Event(0.5, (1.0, 0.0, 0.0)), QuadraticRamp(1.0, 1.0), c=10.0))
