#!/usr/bin/env python3
"""Mixedness testing by attempted purification.

Promise: the stream is either exactly maximally mixed, or a depolarized
pure state at least eta-far from I/d in trace distance.  Run the
purifier deep enough that the far case comes out almost pure; then the
top-level swap test passes with probability ~1 in the far case but only
(1 + 1/d)/2 against the maximally mixed stream.  The pass rate over a
few repetitions separates the classes, independent of dimension.
"""

import numpy as np

from purestream.core import Seed
from purestream.applications import (
    FAR_FROM_MIXED,
    MAXIMALLY_MIXED,
    mixedness_levels,
    mixedness_test,
    mixedness_top_pass_prob,
)

ETA = 0.5
print(f"eta = {ETA}: purifier depth n = {mixedness_levels(ETA)} levels")
print("\ntop-level pass probabilities:")
for d in (2, 8, 64):
    p_mixed = mixedness_top_pass_prob(1.0, d, ETA)
    p_far = mixedness_top_pass_prob(1.0 - ETA / 2, d, ETA)
    print(f"  d = {d:>3}: maximally mixed {p_mixed:.4f}   far case {p_far:.8f}")

print("\nsingle decisions (20 repetitions each, threshold 0.875):")
for d in (2, 64):
    mixed = mixedness_test(1.0, d, ETA, reps=20, seed=Seed(31, d))
    far = mixedness_test(1.0 - ETA / 2, d, ETA, reps=20, seed=Seed(32, d))
    print(f"  d = {d:>3}: delta=1 -> {mixed.verdict} (rate {mixed.pass_rate:.2f}),  "
          f"delta=0.75 -> {far.verdict} (rate {far.pass_rate:.2f})")

print("\nerror rates over 300 trials per class:")
for d in (2, 64):
    errs = {"mixed": 0, "far": 0}
    for t in range(300):
        out = mixedness_test(1.0, d, ETA, 20, Seed(33, t))
        errs["mixed"] += out.verdict != MAXIMALLY_MIXED
        out = mixedness_test(0.75, d, ETA, 20, Seed(34, t))
        errs["far"] += out.verdict != FAR_FROM_MIXED
    print(f"  d = {d:>3}: mixed-class error {errs['mixed']/300:.3f}, "
          f"far-class error {errs['far']/300:.3f}")
print("\n(d = 2 is the hard case: the mixed stream still passes 3/4 of its tests)")
