#!/usr/bin/env python3
"""Iteration counts and sample-complexity bounds, end to end.

For a target output error eps the protocol needs n levels with
delta_n <= eps; the expected raw-copy cost is 2^n / prod p_i.  This
script compares that exact cost against the closed-form upper bound,
the embedding lower bound, the optimal collective protocol, and the
tomography-based alternative.
"""

from purestream import Seed, expected_sample_complexity, iterations_to, iterate
from purestream.recurrence import (
    lower_bound_samples,
    n_upper_finite_d,
    n_upper_inf,
    optimal_fidelity_asymptotic,
    sc_theorem_bound,
    tomography_sample_estimate,
)

print("iteration bounds for the high-noise phase (delta > 2/3):")
print("delta   direct-to-2/3   inf-bound+1   finite-d bound (d=2,3,10,100)")
for delta in (0.7, 0.8, 0.9, 0.99):
    direct = iterations_to(delta, "inf", 2 / 3)
    fd = [n_upper_finite_d(delta, d) for d in (2, 3, 10, 100)]
    print(f" {delta:.2f}    {direct:>8}        {n_upper_inf(delta) + 1:>6}        {fd}")

print()
print("bridge from 2/3 down to 1/3 (5 iterations always suffice; fewer at small d):")
bridge = {str(d): iterations_to(2 / 3, d, 1 / 3) for d in (2, 3, 10, 100, "inf")}
print("  " + "   ".join(f"d={k}: {v}" for k, v in bridge.items()))

print()
print("sample complexity at d = 2 (lower bound <= exact <= theorem bound):")
print("delta0    eps      n     lower       exact SC    theorem bound")
for delta0, eps in ((0.25, 1e-3), (0.5, 1e-3), (0.9, 1e-2)):
    n = iterations_to(delta0, 2, eps)
    actual_eps = iterate(delta0, 2, n).final_delta
    exact = expected_sample_complexity(delta0, 2, n)
    lo = lower_bound_samples(delta0, 2, actual_eps)
    hi = sc_theorem_bound(delta0, 2, actual_eps)
    assert lo <= exact <= hi
    print(f"  {delta0:.2f}  {eps:.0e}  {n:>4}  {lo:>10.1f}  {exact:>12.1f}  {hi:>13.3e}")

print()
print("per-copy cost comparison at d = 16, delta = 0.5, eps = 0.05:")
n = iterations_to(0.5, 16, 0.05)
swap_cost = expected_sample_complexity(0.5, 16, n)
print(f"  recursive swap test : {swap_cost:9.0f} copies ({n} levels)")
print(f"  tomography (collective) : {tomography_sample_estimate(16, 0.5, 0.05, True):.3e}")
print(f"  tomography (single-copy): {tomography_sample_estimate(16, 0.5, 0.05, False):.3e}")
n_opt = ((16 - 1) / 16) * 0.5 / (0.05 * 0.25)
print(f"  optimal collective protocol needs ~{n_opt:.0f} copies "
      f"(fidelity {optimal_fidelity_asymptotic(0.5, 16, round(n_opt)):.4f})")
