"""Exact engine for the purification recurrences and their bounds.

One swap test on two copies of rho(delta) succeeds (ancilla outcome 0)
with probability

    P(delta, d) = 1 - (1 - 1/d) delta + (1/2)(1 - 1/d) delta^2,

and conditioned on success the kept register is rho(delta') with

    Delta(delta, d) = (delta + delta^2/d) / (2 P(delta, d)).

Iterating Delta from delta_0 gives the per-level error parameters
delta_i of the recursive protocol and the per-level success
probabilities p_i = P(delta_{i-1}, d).  This module provides that
iteration (with a kappa = 1 - delta native path so that values near
delta = 1 keep full relative precision), closed-form bounds on how many
iterations are needed, the expected-sample-complexity formulas, the
matching lower bound, and reference formulas for the optimal-fidelity
and tomography-based alternatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Dimension, as_dimension

__all__ = [
    "ITERATION_CAP",
    "RecurrenceTrace",
    "FiniteDCoefficients",
    "success_prob",
    "delta_map",
    "kappa_map",
    "iterate",
    "iterations_to",
    "i_star",
    "eta_bound",
    "h_inf",
    "mu_inf_sequence",
    "mu_inf_bound",
    "n_upper_inf",
    "finite_d_coeffs",
    "n_upper_finite_d",
    "expected_sample_complexity",
    "sc_theorem_bound",
    "gate_count_estimate",
    "lower_bound_samples",
    "optimal_fidelity_asymptotic",
    "tomography_sample_estimate",
]

ITERATION_CAP = 10**6


def success_prob(delta: float, dim) -> float:
    """Swap-test success probability P(delta, d) on two copies of rho(delta).

    In the infinite-dimensional limit this reduces to 1 - delta + delta^2/2.
    Strictly decreasing in both delta and d.
    """
    _check_unit_interval(delta, "delta")
    r = as_dimension(dim).inv
    return 1.0 - (1.0 - r) * delta + 0.5 * (1.0 - r) * delta * delta


def delta_map(delta: float, dim) -> float:
    """Error parameter Delta(delta, d) of the kept state after a successful test.

    Fixed points at 0 and 1; strictly below delta for delta in (0, 1);
    strictly increasing in both arguments.
    """
    _check_unit_interval(delta, "delta")
    if delta == 0.0 or delta == 1.0:
        return delta  # exact fixed points, immune to rounding
    r = as_dimension(dim).inv
    return (delta + r * delta * delta) / (2.0 * success_prob(delta, dim))


def kappa_map(kappa: float, dim) -> float:
    """The same update expressed in kappa = 1 - delta.

    Mathematically equal to 1 - delta_map(1 - kappa, dim) but computed as

        ((1 + 2/d) kappa + (1 - 2/d) kappa^2) / ((1 + 1/d) + (1 - 1/d) kappa^2)

    which involves no cancelling subtractions, so tiny kappa (delta very
    close to 1) keeps full relative precision.
    """
    _check_unit_interval(kappa, "kappa")
    r = as_dimension(dim).inv
    num = (1.0 + 2.0 * r) * kappa + (1.0 - 2.0 * r) * kappa * kappa
    den = (1.0 + r) + (1.0 - r) * kappa * kappa
    return num / den


@dataclass(frozen=True)
class RecurrenceTrace:
    """The orbit (delta_0 .. delta_n) of Delta, with p_i attached.

    ``ps[i]`` holds p_{i+1} = P(delta_i, d), the success probability of
    the swap test that merges two level-i states; there is no p_0.
    ``kappas[i]`` tracks 1 - delta_i through the kappa-native path, so it
    is meaningful even when delta_i rounds to 1.0.
    """

    dim: Dimension
    deltas: tuple[float, ...]
    ps: tuple[float, ...]
    kappas: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.deltas)

    @property
    def delta0(self) -> float:
        return self.deltas[0]

    @property
    def final_delta(self) -> float:
        return self.deltas[-1]

    def entries(self):
        """Rows (i, delta_i, p_i), with p_0 = None."""
        yield 0, self.deltas[0], None
        for i in range(1, len(self.deltas)):
            yield i, self.deltas[i], self.ps[i - 1]


def _advance(delta: float, kappa: float, dim: Dimension) -> tuple[float, float]:
    # kappa-native step whenever the current delta exceeds 1/2; the
    # delta-form 1 - delta would lose digits exactly there.
    if delta > 0.5:
        kappa = kappa_map(kappa, dim)
        delta = 1.0 - kappa
    else:
        delta = delta_map(delta, dim)
        kappa = 1.0 - delta
    return delta, kappa


def iterate(delta0: float, dim, n: int) -> RecurrenceTrace:
    """Iterate the recurrence n times from delta_0 in (0, 1)."""
    dim = as_dimension(dim)
    if not (0.0 < delta0 < 1.0):
        raise ValueError(f"delta0 must lie in (0, 1), got {delta0}")
    if n < 0:
        raise ValueError("n must be non-negative")
    delta, kappa = delta0, 1.0 - delta0
    deltas = [delta]
    kappas = [kappa]
    ps = []
    for _ in range(n):
        ps.append(success_prob(delta, dim))
        delta, kappa = _advance(delta, kappa, dim)
        deltas.append(delta)
        kappas.append(kappa)
    return RecurrenceTrace(dim, tuple(deltas), tuple(ps), tuple(kappas))


def iterations_to(delta0: float, dim, eps: float, cap: int = ITERATION_CAP) -> int:
    """Smallest n with delta_n <= eps (0 if delta_0 already qualifies)."""
    dim = as_dimension(dim)
    if not (0.0 < eps < delta0 < 1.0):
        if 0.0 < delta0 < 1.0 and eps >= delta0:
            return 0
        raise ValueError(f"need 0 < eps < delta0 < 1, got eps={eps} delta0={delta0}")
    delta, kappa = delta0, 1.0 - delta0
    for n in range(1, cap + 1):
        delta, kappa = _advance(delta, kappa, dim)
        if delta <= eps:
            return n
    raise RuntimeError(
        f"no convergence to eps={eps} from delta0={delta0} within {cap} iterations"
    )


def i_star(delta0: float, dim, cap: int = ITERATION_CAP) -> int:
    """Smallest i such that delta_{i+1} < 2/3, for delta_0 in (2/3, 1).

    Marks the end of the slow high-noise phase of the recurrence.
    """
    dim = as_dimension(dim)
    if not (2.0 / 3.0 < delta0 < 1.0):
        raise ValueError(f"delta0 must lie in (2/3, 1), got {delta0}")
    delta, kappa = delta0, 1.0 - delta0
    for i in range(cap):
        delta, kappa = _advance(delta, kappa, dim)
        if delta < 2.0 / 3.0:
            return i
    raise RuntimeError(f"delta did not drop below 2/3 within {cap} iterations")


def eta_bound(delta: float, i: int) -> float:
    """Closed-form exponential-decay envelope for the low-noise phase.

    For delta_0 = delta <= 1/2 every iterate satisfies
    delta_i <= delta / (2^i (1 - 2 delta) + 2 delta), for any d.
    """
    if not (0.0 <= delta <= 0.5):
        raise ValueError(f"eta_bound requires delta <= 1/2, got {delta}")
    if i < 0:
        raise ValueError("i must be non-negative")
    return delta / (2.0**i * (1.0 - 2.0 * delta) + 2.0 * delta)


def _h_inf_raw(y: float) -> float:
    # Inverse of g(x) = (x + x^2)/(1 + x^2) on the branch 0 < x < 1/3.
    # Algebraically (-1 + sqrt(1 + 4y(1-y))) / (2(1-y)); rearranged so the
    # small-y case does not cancel.
    z = 4.0 * y * (1.0 - y)
    return 2.0 * y / (1.0 + math.sqrt(1.0 + z))


def h_inf(y: float) -> float:
    """Inverse update of the infinite-d kappa recurrence, on 0 < y < 1/3.

    Satisfies g(h_inf(y)) = y where g(x) = (x + x^2)/(1 + x^2) is one
    kappa step at d = infinity.
    """
    if not (0.0 < y < 1.0 / 3.0):
        raise ValueError(f"h_inf domain is 0 < y < 1/3, got {y}")
    return _h_inf_raw(y)


def mu_inf_sequence(mu0: float, n: int) -> list[float]:
    """Time-reversed kappa sequence mu_0 .. mu_n at d = infinity.

    mu_0 is the kappa value at the end of the high-noise phase (at most
    1/3, and that boundary value is admitted), and each further term
    rewinds one recurrence step.
    """
    if not (0.0 < mu0 <= 1.0 / 3.0):
        raise ValueError(f"mu0 must lie in (0, 1/3], got {mu0}")
    if n < 0:
        raise ValueError("n must be non-negative")
    out = [mu0]
    mu = mu0
    for _ in range(n):
        mu = _h_inf_raw(mu)
        out.append(mu)
    return out


def mu_inf_bound(i: int) -> float:
    """Strict upper bound 1/i + 2 ln(i)/i^2 on mu_i when mu_0 <= 1/3."""
    if i < 1:
        raise ValueError("i must be >= 1")
    return 1.0 / i + 2.0 * math.log(i) / (i * i)


def n_upper_inf(delta: float) -> int:
    """Iteration bound for the high-noise phase at d = infinity.

    Returns N = ceil(1/(1-delta) + 2 ln(1/(1-delta))); after N
    iterations mu_N <= 1 - delta, hence delta_{N+1} < 2/3.
    """
    if not (2.0 / 3.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (2/3, 1), got {delta}")
    k = 1.0 - delta
    return math.ceil(1.0 / k + 2.0 * math.log(1.0 / k))


@dataclass(frozen=True)
class FiniteDCoefficients:
    """Constants of the finite-d high-noise analysis.

    a controls the geometric part of the inverse recurrence, b and c the
    linear corrections; alpha = b a / (1 - a) and beta collect them into
    the iteration bound.  c has a special value at d = 2 where b = 0.
    """

    d: int
    a: float
    b: float
    c: float
    alpha: float
    beta: float


def finite_d_coeffs(d: int, delta: float) -> FiniteDCoefficients:
    """Coefficients (a, b, c, alpha, beta) for the finite-d iteration bound."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if not (2.0 / 3.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (2/3, 1), got {delta}")
    a = (d + 1) / (d + 2)
    b = (d - 2) / (d + 2)
    c = d**3 / (d + 2) ** 3 if d >= 3 else 1.0 / 7.0
    alpha = (d - 2) * (d + 1) / (d + 2)
    k = 1.0 - delta
    n_star_inf = 1.0 / k + 2.0 * math.log(1.0 / k)
    beta = alpha - 2.0 * c * a * math.log(min(d, n_star_inf)) + 3.0 - 7.2 * c * a
    return FiniteDCoefficients(d=d, a=a, b=b, c=c, alpha=alpha, beta=beta)


def n_upper_finite_d(delta: float, d: int) -> int:
    """Finite-d iteration bound: the returned n guarantees delta_n < 2/3.

    Sharper than n_upper_inf when d (1 - delta) is small, and approaches
    it for large d (1 - delta).  The underlying inequality is strict
    (n > bound), so an exact-integer bound still rounds up.
    """
    co = finite_d_coeffs(d, delta)
    k = 1.0 - delta
    if d == 2:
        x = math.log(1.0 / (k * co.beta)) / math.log(4.0 / 3.0)
    else:
        x = (math.log(1.0 + 1.0 / (co.alpha * k)) + math.log(co.alpha / co.beta)) / (
            math.log(1.0 + 1.0 / (d + 1))
        )
    return math.floor(x) + 1


def expected_sample_complexity(delta0: float, dim, n: int) -> float:
    """Expected raw copies consumed by an n-level run: 2^n / prod_i p_i."""
    dim = as_dimension(dim)
    dim.require_finite("expected_sample_complexity")
    if not (0.0 < delta0 < 1.0):
        raise ValueError(f"delta0 must lie in (0, 1), got {delta0}")
    if n == 0:
        return 1.0
    trace = iterate(delta0, dim, n)
    prod = 1.0
    for p in trace.ps:
        prod *= p
    return 2.0**n / prod


def sc_theorem_bound(delta: float, d: int, eps: float) -> float:
    """Closed-form upper bound on the expected sample complexity.

    Three noise regimes:
      delta < 1/3          -> 2 delta / (eps (1 - 2 delta)^2)
      1/3 <= delta <= 2/3  -> 3630 / eps
      delta > 2/3          -> 4^min{1/(1-d') + 2 ln(1/(1-d')),
                                    (d+2) ln(1/(1-d'))} * 3630 / eps

    The low-noise formula degenerates as delta -> 1/2, so the middle
    regime takes over already at delta = 1/3.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if delta < 1.0 / 3.0:
        return 2.0 * delta / (eps * (1.0 - 2.0 * delta) ** 2)
    if delta <= 2.0 / 3.0:
        return 3630.0 / eps
    k = 1.0 - delta
    exponent = min(1.0 / k + 2.0 * math.log(1.0 / k), (d + 2) * math.log(1.0 / k))
    return 4.0**exponent * 3630.0 / eps


def gate_count_estimate(stats, d: int) -> int:
    """Elementary gates implied by a run's swap-test count.

    Each swap test costs two Hadamards, ceil(log2 d) controlled
    qubit-swaps, and one measurement.  Accepts a StreamStats or a bare
    attempt count.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    attempts = getattr(stats, "swap_attempts", stats)
    if attempts < 0:
        raise ValueError("swap attempt count must be non-negative")
    return attempts * ((d - 1).bit_length() + 3)


def lower_bound_samples(delta: float, d: int, eps: float) -> float:
    """Sample-complexity lower bound by embedding a qubit into d dimensions.

    No procedure can purify rho(delta) to output fidelity 1 - eps with
    fewer than delta (d - (d-2) delta) / (d^2 (1-delta)^2 eps) copies.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return delta * (d - (d - 2) * delta) / (d * d * (1.0 - delta) ** 2 * eps)


def optimal_fidelity_asymptotic(delta: float, d: int, n_samples: int) -> float:
    """First-order large-N fidelity of the optimal collective protocol.

    1 - ((d-1)/d) * delta / ((1-delta)^2 (N+1)); the O(1/N^2) remainder
    is dropped, so treat this as an asymptotic reference value only.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return 1.0 - ((d - 1) / d) * delta / ((1.0 - delta) ** 2 * (n_samples + 1))


def tomography_sample_estimate(
    d: int, delta: float, eps: float, collective: bool, constant: float = 1.0
) -> float:
    """Samples for purification via full state tomography (order of magnitude).

    Estimating rho(delta) to trace-distance eta = (1-delta) eps^2 / 2 and
    outputting the principal eigenvector yields a state eps-close to the
    target.  Tomography needs ~ d^2/eta^2 copies with collective
    measurements, ~ d^3/eta^2 with single-copy ones.  The big-O constant
    is not determined by the analysis; ``constant`` = 1 by convention.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    eta = (1.0 - delta) * eps * eps / 2.0
    dpow = d**2 if collective else d**3
    return constant * dpow / (eta * eta)


def _check_unit_interval(x: float, name: str):
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {x}")
