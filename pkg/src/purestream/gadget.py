"""Closed-form algebra of one swap test on a pair of depolarized states.

The recurrence module covers the equal-noise case used by the protocol;
here the inputs may carry different error parameters delta_1, delta_2,
which is what determines when a merge actually helps.  The protocol
itself never mixes unequal inputs; this module characterizes why.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import as_dimension

__all__ = [
    "GadgetOutcome",
    "swap_success_prob",
    "swap_output_delta",
    "improves_both",
    "region_boundary",
    "gadget_outcome",
]


def swap_success_prob(delta1: float, delta2: float, dim) -> float:
    """Probability of the keep outcome on inputs rho(delta_1), rho(delta_2).

    Equals ((1 + 1/d) + (1 - 1/d)(1 - delta_1)(1 - delta_2)) / 2, which is
    always at least 1/2 and reduces to the equal-noise P(delta, d) on the
    diagonal.
    """
    _check(delta1, delta2)
    r = as_dimension(dim).inv
    # group the symmetric factors so the result is exactly order-independent
    overlap = (1.0 - delta1) * (1.0 - delta2)
    return ((1.0 + r) + (1.0 - r) * overlap) / 2.0


def swap_output_delta(delta1: float, delta2: float, dim) -> float:
    """Error parameter of the kept register after a successful swap test.

    The output is again of the form rho(delta'), with

        delta' = ((delta_1 + delta_2)/2 + delta_1 delta_2 / d)
                 / ((1 + 1/d) + (1 - 1/d)(1 - delta_1)(1 - delta_2)).
    """
    _check(delta1, delta2)
    dm = as_dimension(dim)
    d = dm.require_finite("swap_output_delta")
    overlap = (1.0 - delta1) * (1.0 - delta2)
    num = (delta1 + delta2) / 2.0 + delta1 * delta2 / d
    den = (1.0 + 1.0 / d) + (1.0 - 1.0 / d) * overlap
    return num / den


def improves_both(delta1: float, delta2: float, dim) -> bool:
    """Whether the output is strictly purer than both inputs.

    With (lo, hi) the sorted pair, this holds iff

        hi - lo < (1 - lo) * 2 lo (d - (d-1) lo) / (d + 2 lo (d - (d-1) lo)),

    a strict inequality: boundary pairs classify as non-improving.  The
    endpoints delta = 0 and delta = 1 are excluded since a pure state
    cannot improve and a maximally mixed pair carries no signal.
    """
    dm = as_dimension(dim)
    d = dm.require_finite("improves_both")
    if not (0.0 < delta1 < 1.0 and 0.0 < delta2 < 1.0):
        raise ValueError("improves_both requires delta values in the open (0, 1)")
    lo, hi = (delta1, delta2) if delta1 <= delta2 else (delta2, delta1)
    return hi - lo < _improvement_margin(lo, d)


def region_boundary(delta1: float, dim) -> float:
    """Largest delta_2 >= delta_1 for which the merge still improves both.

    The supremum itself is excluded (the defining inequality is strict).
    Non-increasing in d at fixed delta_1; tends to delta_1 at both ends
    of the interval.
    """
    dm = as_dimension(dim)
    d = dm.require_finite("region_boundary")
    if not (0.0 < delta1 < 1.0):
        raise ValueError("region_boundary requires delta1 in the open (0, 1)")
    return min(1.0, delta1 + _improvement_margin(delta1, d))


def _improvement_margin(lo: float, d: int) -> float:
    w = 2.0 * lo * (d - (d - 1) * lo)
    return (1.0 - lo) * w / (d + w)


@dataclass(frozen=True)
class GadgetOutcome:
    """Success probability, output error, and expected per-input cost."""

    success_prob: float
    output_delta: float
    expected_copies_each: float


def gadget_outcome(delta1: float, delta2: float, dim) -> GadgetOutcome:
    """Full repeat-until-success characterization of one merge."""
    p = swap_success_prob(delta1, delta2, dim)
    return GadgetOutcome(
        success_prob=p,
        output_delta=swap_output_delta(delta1, delta2, dim),
        expected_copies_each=2.0 / p,
    )


def _check(delta1: float, delta2: float):
    for name, v in (("delta1", delta1), ("delta2", delta2)):
        if not (0.0 <= v <= 1.0):
            raise ValueError(f"{name} must lie in [0, 1], got {v}")
