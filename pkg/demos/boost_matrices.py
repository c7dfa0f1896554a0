"""
Three boosts side by side
=========================

Galilei, extended and Lorentz boosts acting on the same event, and how far
the extended boost is from being a group.
"""

import numpy as np

from boostcov.covariance import order_scan
from boostcov.spacetime import BoostSpec, Event, boost_event, boost_matrix, compose, inverse_residual

np.set_printoptions(precision=6, suppress=True)

# One event, one velocity, c = 10 so the 1/c^2 entries are visible.
e = Event(2.0, (3.0, 0.0, 0.0))
v, c = (1.0, 0.0, 0.0), 10.0

for kind in ("galilei", "extended", "lorentz"):
    b = BoostSpec(v, c, kind)
    print(f"{kind:>9}: {boost_event(e, b)}")
    print(boost_matrix(b).m)

# %%
# Galilei boosts compose exactly: T(-v) T(v) = I.
g = BoostSpec(v, c, "galilei")
print(compose(boost_matrix(g.reversed()), boost_matrix(g)).m)

# %%
# The extended boost does not. Its inverse residual is small but nonzero,
# with the time-time entry at (v^2 / 2c^2)^2.
b = BoostSpec(v, c)
print(inverse_residual(b).m)
print("closed form (0,0):", 0.25 * 1.0**4 / c**4)

# %%
# How fast each entry dies off with c, fitted on a log-log scale.
for i, j in [(0, 0), (1, 0)]:
    scan = order_scan(lambda cc: inverse_residual(BoostSpec(v, cc))[i, j], [10, 20, 40, 80])
    print(f"entry ({i},{j}) ~ c^{scan.fitted_exponent:.3f}")
