#!/usr/bin/env python3
"""Per-level error curves of the swap-test purifier.

Starting from a very noisy stream (delta_0 = 0.99), each protocol level
applies the map Delta(delta, d) = (delta + delta^2/d) / (2 P(delta, d)).
The curves show the three phases: a slow high-noise crawl, a rapid
drop through the middle, and clean exponential decay once delta < 1/2.
"""

import numpy as np

from purestream import INFINITE, Dimension, iterate
from purestream.recurrence import i_star

DELTA0 = 0.99
LEVELS = 60
DIMS = [Dimension.finite(20), Dimension.finite(50), Dimension.finite(100), INFINITE]

traces = {str(dm): iterate(DELTA0, dm, LEVELS) for dm in DIMS}

print(f"delta_i for delta_0 = {DELTA0}")
header = "  i  " + "".join(f"{name:>12}" for name in traces)
print(header)
for i in range(0, LEVELS + 1, 4):
    row = f"{i:>4} " + "".join(f"{traces[name].deltas[i]:>12.6f}" for name in traces)
    print(row)

print()
for dm in DIMS:
    star = i_star(DELTA0, dm)
    print(f"d={str(dm):>4}: first level with delta below 2/3 is i* + 1 = {star + 1}")

# Lower dimension purifies faster: the d = 20 curve sits below d = 50,
# which sits below d = 100, which sits below the infinite-d limit.
curves = np.array([traces[str(dm)].deltas for dm in DIMS])
assert (np.diff(curves, axis=0) >= 0).all()
print("\nmonotone in d at every level: confirmed")

# Near delta = 1 the iteration runs in kappa = 1 - delta form internally;
# the reported kappas keep full relative precision even when delta ~ 1.
tr = traces["inf"]
print(f"kappa_0 = {tr.kappas[0]:.3e}, kappa_10 = {tr.kappas[10]:.6e} (exact small values)")
