"""End-to-end applications of the streaming purifier.

Simon's problem with a depolarizing oracle: each faulty query yields one
copy of rho' = (1-delta)|Psi><Psi| + delta I/2^(2m), which is exactly a
depolarized pure state in dimension 2^(2m).  Purifying batches of
queries down to a small residual error makes the measured strings y
almost always satisfy y . s = 0, so plain GF(2) reconstruction works and
the hard "learning with errors" decoding never arises.

Mixedness testing: under the promise that the stream is either
maximally mixed or a depolarized pure state at least eta-far from I/d,
running the purifier and watching whether the top-level swap test
passes separates the two cases: the maximally mixed stream passes at
rate (1+1/d)/2 while the far stream passes with near certainty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Dimension, Seed
from .recurrence import iterate, iterations_to, success_prob
from .streaming import SeededOutcomes, StackMachine

__all__ = [
    "SimonInstance",
    "SimonResult",
    "gf2_rank_and_nullspace",
    "sample_purified_y",
    "solve_simon",
    "MAXIMALLY_MIXED",
    "FAR_FROM_MIXED",
    "MixednessOutcome",
    "mixedness_levels",
    "mixedness_test",
]


# ---------------------------------------------------------------------------
# Simon's problem with a depolarizing oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimonInstance:
    """Hidden-shift instance: f(x) = f(y) iff x = y or x xor y = s."""

    m: int
    s: str
    oracle_delta: float

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("m must be >= 2")
        if len(self.s) != self.m or any(c not in "01" for c in self.s):
            raise ValueError(f"s must be a length-{self.m} bit-string")
        if self.s == "0" * self.m:
            raise ValueError("hidden string must be nonzero")
        if not (0.0 < self.oracle_delta < 1.0):
            raise ValueError("oracle_delta must lie in (0, 1)")

    @property
    def oracle_dim(self) -> int:
        """Dimension of the oracle's output register pair: 2^(2m)."""
        return 2 ** (2 * self.m)

    @property
    def s_mask(self) -> int:
        return int(self.s, 2)


@dataclass(frozen=True)
class SimonResult:
    s_hat: str | None
    total_oracle_queries: int
    samples_collected: int
    success: bool


def _mask_to_bits(mask: int, m: int) -> str:
    return format(mask, f"0{m}b")


def _parity(x: int) -> int:
    return x.bit_count() & 1


def gf2_rank_and_nullspace(rows, m: int | None = None):
    """Row-reduce bit-string rows over GF(2); return (rank, nullspace basis).

    The nullspace is the orthogonal complement of the row space under the
    GF(2) dot product.  `m` may be omitted when `rows` is nonempty.
    """
    rows = list(rows)
    if m is None:
        if not rows:
            raise ValueError("m is required when rows is empty")
        m = len(rows[0])
    masks = []
    for r in rows:
        bits = r if isinstance(r, str) else "".join(str(int(b)) for b in r)
        if len(bits) != m or any(c not in "01" for c in bits):
            raise ValueError(f"row {r!r} is not a length-{m} bit-string")
        masks.append(int(bits, 2))

    # Reduced echelon basis keyed by pivot position (msb-first).
    pivots: dict[int, int] = {}
    for v in masks:
        v = _reduce(v, pivots)
        if v:
            pivots[v.bit_length() - 1] = v
    rank = len(pivots)

    # Back-substitute so each pivot column appears in exactly one row.
    for pos in sorted(pivots):
        row = pivots[pos]
        for other_pos, other in list(pivots.items()):
            if other_pos != pos and (other >> pos) & 1:
                pivots[other_pos] = other ^ row

    free_cols = [c for c in range(m - 1, -1, -1) if c not in pivots]
    basis = []
    for f in free_cols:
        v = 1 << f
        for pos, row in pivots.items():
            if (row >> f) & 1:
                v |= 1 << pos
        basis.append(_mask_to_bits(v, m))
    return rank, basis


def _reduce(v: int, pivots: dict[int, int]) -> int:
    while v:
        pos = v.bit_length() - 1
        if pos not in pivots:
            return v
        v ^= pivots[pos]
    return 0


class _PurifiedSampler:
    """Draws purified measurement outcomes y for one Simon instance.

    Builds the recurrence tables once; each sample runs the stack
    machine (one oracle query per raw copy) and then measures the
    purified state's first register: the surviving ideal branch gives y
    uniform on the subspace s-perp, the depolarized branch gives y
    uniform over all of {0,1}^m.
    """

    def __init__(self, instance: SimonInstance, eps_target: float, checked: bool = True):
        if not (0.0 < eps_target < instance.oracle_delta):
            raise ValueError("eps_target must lie in (0, oracle_delta)")
        self.instance = instance
        self.d = instance.oracle_dim
        self.n = iterations_to(instance.oracle_delta, Dimension.finite(self.d), eps_target)
        trace = iterate(instance.oracle_delta, Dimension.finite(self.d), self.n)
        self.deltas = trace.deltas
        self.ps = trace.ps
        self.final_delta = trace.final_delta
        self.checked = checked
        # Lowest set bit of s: flipping it maps y with y.s = 1 onto s-perp.
        self.fix_bit = instance.s_mask & -instance.s_mask

    def sample_ideal_y(self, rng: np.random.Generator) -> int:
        y = int(rng.integers(0, 1 << self.instance.m))
        if _parity(y & self.instance.s_mask):
            y ^= self.fix_bit
        return y

    def sample(self, rng: np.random.Generator) -> tuple[int, int]:
        machine = StackMachine(
            self.d, self.deltas, self.ps, SeededOutcomes(rng), checked=self.checked
        )
        stats = machine.run()
        if stats.max_stack_depth > self.n + 1:
            raise RuntimeError("stack machine exceeded its memory bound")
        if rng.random() < self.final_delta:
            y = int(rng.integers(0, 1 << self.instance.m))  # depolarized branch
        else:
            y = self.sample_ideal_y(rng)
        return y, stats.copies_consumed


def sample_purified_y(instance: SimonInstance, eps_target: float, rng) -> tuple[str, int]:
    """One purified Simon sample: (y bit-string, oracle queries used)."""
    rng = _as_generator(rng)
    sampler = _PurifiedSampler(instance, eps_target)
    y, queries = sampler.sample(rng)
    return _mask_to_bits(y, instance.m), queries


def solve_simon(
    instance: SimonInstance,
    eps_target: float,
    budget: int,
    rng,
    checked: bool = True,
) -> SimonResult:
    """Recover the hidden string from purified samples.

    Collects samples into a GF(2) row basis until it has rank m-1, reads
    off the unique nonzero nullspace vector as the candidate, and
    confirms it against two fresh samples; a failed confirmation (the
    signature of a residually corrupted sample in the basis) restarts
    the collection from scratch.  `budget` caps the total number of
    samples drawn; exhausting it yields a failure marker with the query
    accounting intact.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    rng = _as_generator(rng)
    sampler = _PurifiedSampler(instance, eps_target, checked=checked)
    m = instance.m

    queries = 0
    samples = 0
    pivots: dict[int, int] = {}

    def draw():
        nonlocal queries, samples
        y, q = sampler.sample(rng)
        queries += q
        samples += 1
        return y

    while samples < budget:
        y = _reduce(draw(), pivots)
        if y:
            pivots[y.bit_length() - 1] = y
        # a single insert raises the rank by at most one, and rank m-1
        # is always resolved below before the next draw
        if len(pivots) < m - 1:
            continue

        rank, basis = gf2_rank_and_nullspace(
            [_mask_to_bits(v, m) for v in pivots.values()], m
        )
        s_hat_mask = int(basis[0], 2)
        confirmed = True
        for _ in range(2):
            if samples >= budget:
                confirmed = False
                break
            if _parity(draw() & s_hat_mask):
                confirmed = False
                break
        if confirmed:
            return SimonResult(
                s_hat=_mask_to_bits(s_hat_mask, m),
                total_oracle_queries=queries,
                samples_collected=samples,
                success=_mask_to_bits(s_hat_mask, m) == instance.s,
            )
        pivots = {}

    return SimonResult(
        s_hat=None,
        total_oracle_queries=queries,
        samples_collected=samples,
        success=False,
    )


# ---------------------------------------------------------------------------
# Mixedness testing
# ---------------------------------------------------------------------------

MAXIMALLY_MIXED = "MaximallyMixed"
FAR_FROM_MIXED = "FarFromMixed"

DEFAULT_THRESHOLD = 0.875


@dataclass(frozen=True)
class MixednessOutcome:
    verdict: str
    pass_rate: float
    passes: int
    reps: int
    n_levels: int
    top_pass_prob: float
    threshold: float


def mixedness_levels(eta: float) -> int:
    """Purifier depth that drives a far-from-mixed stream below 2^-10."""
    if not (0.0 < eta < 1.0):
        raise ValueError("eta must lie in (0, 1)")
    return math.ceil(15.0 + 2.0 / eta + 2.0 * math.log(2.0 / eta))


def mixedness_top_pass_prob(case_delta: float, d: int, eta: float) -> float:
    """Success probability of the first top-level swap test of a run.

    Per-level swap outcomes are independent Bernoulli draws whose
    probability depends only on the level, so the first attempt at the
    top level is distributed Bernoulli(P(delta_{n-1}, d)) regardless of
    how many restarts precede it.  delta = 1 is a fixed point of the
    recurrence, giving (1 + 1/d)/2 there.
    """
    n = mixedness_levels(eta)
    dim = Dimension.finite(d)
    if case_delta == 1.0:
        return success_prob(1.0, dim)
    trace = iterate(case_delta, dim, n)
    return trace.ps[-1]


def mixedness_test(
    case_delta: float,
    d: int,
    eta: float,
    reps: int,
    seed,
    threshold: float = DEFAULT_THRESHOLD,
) -> MixednessOutcome:
    """Decide MaximallyMixed vs FarFromMixed from top-level pass rate.

    Runs `reps` independent purifier executions and records whether the
    first top-level swap test of each passes (sampled from its exact
    Bernoulli distribution; simulating the ~2^n copies consumed per
    execution event-by-event would add nothing statistically).  Declares
    MaximallyMixed when the pass rate falls below `threshold`.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    n = mixedness_levels(eta)  # validates eta
    if case_delta != 1.0 and not (0.0 < case_delta <= 1.0 - eta / 2.0):
        raise ValueError(
            f"case_delta must be 1 or at most 1 - eta/2 = {1.0 - eta / 2.0}, "
            f"got {case_delta}"
        )
    p_top = mixedness_top_pass_prob(case_delta, d, eta)
    rng = _as_generator(seed)
    passes = int((rng.random(reps) < p_top).sum())
    rate = passes / reps
    verdict = MAXIMALLY_MIXED if rate < threshold else FAR_FROM_MIXED
    return MixednessOutcome(
        verdict=verdict,
        pass_rate=rate,
        passes=passes,
        reps=reps,
        n_levels=n,
        top_pass_prob=p_top,
        threshold=threshold,
    )


def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, Seed):
        return seed.generator()
    return Seed(int(seed)).generator()
