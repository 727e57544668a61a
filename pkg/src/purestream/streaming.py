"""Stochastic simulation of the streaming purification protocol.

Every partially purified state on the stack is exactly rho(delta_i) for
its level i, and the protocol only ever swap-tests two states of equal
level, so the simulation never touches amplitudes: a cell is just an
integer level, a swap test is a Bernoulli draw with the precomputed
per-level success probability, and one run reduces to integer stack
updates.  That makes 10^5..10^6 full protocol runs cheap while staying
faithful to the real control flow, including restarts after failures.
The dense oracle module independently certifies the state-form claim
this reduction rests on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import Dimension, Seed
from .recurrence import expected_sample_complexity, gate_count_estimate, iterate

__all__ = [
    "StreamStats",
    "StackMachine",
    "InvariantViolation",
    "SeededOutcomes",
    "ForcedOutcomes",
    "always_succeed",
    "as_outcomes",
    "purify_streaming",
    "purify_recursive",
    "monte_carlo",
    "MonteCarloSummary",
]


class InvariantViolation(RuntimeError):
    """A checked structural invariant of the stack machine was broken."""


@dataclass(frozen=True)
class StreamStats:
    """Resource accounting for one protocol run.

    copies_consumed counts stream fetches (pairs for n >= 1, one raw
    copy for n = 0); gate_count is derived from the swap-test count.
    """

    copies_consumed: int
    swap_attempts: int
    max_stack_depth: int
    final_delta: float
    gate_count: int


class SeededOutcomes:
    """Bernoulli outcome stream backed by a seeded PRNG.

    Uniform draws are buffered in geometrically growing blocks, so short
    runs stay cheap and long runs amortize the generator calls.  Draws
    are consumed in stream order, so a fixed seed reproduces runs
    bit-for-bit regardless of the buffering.
    """

    __slots__ = ("_rng", "_buf", "_pos", "_block", "_max_block")

    def __init__(self, rng: np.random.Generator, block: int = 128, max_block: int = 8192):
        self._rng = rng
        self._block = block
        self._max_block = max_block
        self._buf = rng.random(block).tolist()
        self._pos = 0

    def bernoulli(self, p: float) -> bool:
        pos = self._pos
        buf = self._buf
        if pos >= len(buf):
            self._block = min(2 * self._block, self._max_block)
            buf = self._buf = self._rng.random(self._block).tolist()
            pos = 0
        self._pos = pos + 1
        return buf[pos] < p


class ForcedOutcomes:
    """Rigged outcome stream for deterministic control-flow tests."""

    def __init__(self, outcomes):
        self._it = iter(outcomes)

    def bernoulli(self, p: float) -> bool:
        try:
            return bool(next(self._it))
        except StopIteration:
            raise RuntimeError("forced outcome sequence exhausted") from None


def always_succeed() -> ForcedOutcomes:
    return ForcedOutcomes(itertools.repeat(True))


def as_outcomes(seed) -> "SeededOutcomes | ForcedOutcomes":
    """Normalize a Seed, int, Generator, or outcome source."""
    if hasattr(seed, "bernoulli"):
        return seed
    if isinstance(seed, np.random.Generator):
        return SeededOutcomes(seed)
    if isinstance(seed, Seed):
        return SeededOutcomes(seed.generator())
    return SeededOutcomes(Seed(int(seed)).generator())


class StackMachine:
    """Non-recursive implementation of the n-level purification protocol.

    State is an array of purity levels plus a stack pointer k, with
    purity[0] = -1 as sentinel.  The main loop fetches two fresh copies,
    then keeps merging the two topmost cells while they have equal
    levels: a successful swap test replaces the pair by one cell of the
    next level, a failed one discards both.  The run ends when the
    bottom cell reaches level n.

    Structural invariants (enforced whenever ``checked`` is true):
    levels on the stack are non-increasing with at most one equality,
    a swap test only ever sees two cells of equal level, and the stack
    pointer never exceeds n + 1.
    """

    def __init__(
        self,
        d: int,
        delta_table,
        p_of_level,
        outcomes,
        checked: bool = True,
        trace_hook=None,
    ):
        if d < 2:
            raise ValueError("d must be >= 2")
        self.d = d
        self.delta_table = [float(x) for x in delta_table]
        self.p_of_level = [float(p) for p in p_of_level]
        self.n = len(self.delta_table) - 1
        if len(self.p_of_level) != self.n:
            raise ValueError("need one success probability per level transition")
        self.outcomes = as_outcomes(outcomes)
        self.checked = checked
        self.trace_hook = trace_hook
        # run artifacts
        self.level_attempts = [0] * max(self.n, 1)
        self.level_successes = [0] * max(self.n, 1)
        self.first_top_success: bool | None = None

    @classmethod
    def for_protocol(cls, delta0: float, d: int, n: int, outcomes, **kwargs):
        trace = iterate(delta0, Dimension.finite(d), n) if n > 0 else None
        if trace is None:
            return cls(d, [delta0], [], outcomes, **kwargs)
        return cls(d, trace.deltas, trace.ps, outcomes, **kwargs)

    def run(self) -> StreamStats:
        n = self.n
        if n == 0:
            # Degenerate protocol: hand back one raw copy untouched.
            return StreamStats(1, 0, 1, self.delta_table[0], 0)

        # fresh run artifacts (a machine may be run more than once)
        self.level_attempts = [0] * n
        self.level_successes = [0] * n
        self.first_top_success = None

        p_of_level = self.p_of_level
        bern = self.outcomes.bernoulli
        checked = self.checked
        hook = self.trace_hook
        level_attempts = self.level_attempts
        level_successes = self.level_successes
        top_level = n - 1
        first_top = None

        purity = [-1] * (n + 3)
        k = 0
        copies = 0
        attempts = 0
        max_k = 0

        while True:
            # Fetch two fresh copies onto the stack.
            k += 1
            purity[k] = 0
            k += 1
            purity[k] = 0
            copies += 2
            if k > max_k:
                max_k = k
            if checked:
                if k > n + 1:
                    raise InvariantViolation(f"stack depth {k} exceeds n+1 = {n + 1}")
                if k >= 3 and purity[k - 2] <= 0:
                    raise InvariantViolation("cell below a fresh pair must outrank it")
            if hook is not None:
                hook(purity, k)

            while True:
                lev = purity[k]
                if checked and purity[k - 1] != lev:
                    raise InvariantViolation("swap test on cells of unequal level")
                attempts += 1
                level_attempts[lev] += 1
                if bern(p_of_level[lev]):
                    level_successes[lev] += 1
                    if lev == top_level and first_top is None:
                        first_top = True
                    k -= 1
                    purity[k] = lev + 1
                    if checked and k >= 2:
                        below = purity[k - 1]
                        if below < lev + 1:
                            raise InvariantViolation("stack levels must not increase")
                        if below == lev + 1 and k >= 3 and purity[k - 2] <= below:
                            raise InvariantViolation("more than one equality on stack")
                    if hook is not None:
                        hook(purity, k)
                    if purity[k - 1] != purity[k]:
                        break
                else:
                    if lev == top_level and first_top is None:
                        first_top = False
                    k -= 2
                    if hook is not None:
                        hook(purity, k)
                    break

            if k == 1 and purity[1] == n:
                break

        self.first_top_success = first_top
        return StreamStats(
            copies_consumed=copies,
            swap_attempts=attempts,
            max_stack_depth=max_k,
            final_delta=self.delta_table[n],
            gate_count=gate_count_estimate(attempts, self.d),
        )


def purify_streaming(
    delta0: float, d: int, n: int, seed, checked: bool = True
) -> StreamStats:
    """One stack-machine run of the n-level protocol; see StackMachine."""
    _check_protocol_args(delta0, d, n)
    machine = StackMachine.for_protocol(delta0, d, n, seed, checked=checked)
    return machine.run()


_RECURSION_CAP = 400


def purify_recursive(delta0: float, d: int, n: int, seed, checked: bool = True) -> StreamStats:
    """Recursive formulation of the same protocol.

    Level i is built by repeatedly constructing two level-(i-1) states
    and swap-testing them until the test succeeds.  Realizes the same
    copies/attempts distribution as the stack machine; kept as an
    independent implementation for cross-validation.
    """
    _check_protocol_args(delta0, d, n)
    if n > _RECURSION_CAP:
        raise ValueError(f"recursive variant is guarded to n <= {_RECURSION_CAP}")
    if n == 0:
        return StreamStats(1, 0, 1, delta0, 0)

    trace = iterate(delta0, Dimension.finite(d), n)
    p_of_level = trace.ps
    bern = as_outcomes(seed).bernoulli

    copies = 0
    attempts = 0
    held = 0
    max_held = 0

    def build(level: int):
        nonlocal copies, attempts, held, max_held
        if level == 0:
            copies += 1
            held += 1
            if held > max_held:
                max_held = held
            return
        while True:
            build(level - 1)
            build(level - 1)
            attempts += 1
            held -= 2
            if bern(p_of_level[level - 1]):
                held += 1
                return

    build(n)
    if checked and max_held > n + 1:
        raise InvariantViolation(f"held {max_held} states, bound is n+1 = {n + 1}")
    return StreamStats(
        copies_consumed=copies,
        swap_attempts=attempts,
        max_stack_depth=max_held,
        final_delta=trace.final_delta,
        gate_count=gate_count_estimate(attempts, d),
    )


@dataclass(frozen=True)
class MonteCarloSummary:
    """Aggregate of independent streaming runs at one parameter point."""

    delta0: float
    d: int
    n: int
    runs: int
    mean_copies: float
    var_copies: float  # sample variance (ddof=1)
    min_copies: int
    max_copies: int
    mean_swap_attempts: float
    max_stack_depth: int
    theoretical_sc: float
    level_attempts: tuple[int, ...]
    level_successes: tuple[int, ...]

    @property
    def stderr_copies(self) -> float:
        return math.sqrt(self.var_copies / self.runs)

    @property
    def z_score(self) -> float:
        """Standardized gap between the empirical mean and 2^n / prod p_i."""
        se = self.stderr_copies
        if se == 0.0:
            return 0.0
        return (self.mean_copies - self.theoretical_sc) / se


def _mc_run_range(delta0, d, n, seed: Seed, lo, hi, checked):
    trace = iterate(delta0, Dimension.finite(d), n)
    copies = np.empty(hi - lo, dtype=np.int64)
    attempts = np.empty(hi - lo, dtype=np.int64)
    depth = 0
    lev_att = [0] * n
    lev_suc = [0] * n
    for i in range(lo, hi):
        machine = StackMachine(
            d,
            trace.deltas,
            trace.ps,
            SeededOutcomes(seed.child_generator(i)),
            checked=checked,
        )
        st = machine.run()
        copies[i - lo] = st.copies_consumed
        attempts[i - lo] = st.swap_attempts
        if st.max_stack_depth > depth:
            depth = st.max_stack_depth
        for lv in range(n):
            lev_att[lv] += machine.level_attempts[lv]
            lev_suc[lv] += machine.level_successes[lv]
    return copies, attempts, depth, lev_att, lev_suc


def _mc_worker(args):
    return _mc_run_range(*args)


def monte_carlo(
    delta0: float,
    d: int,
    n: int,
    runs: int,
    seed,
    jobs: int = 1,
    checked: bool = True,
    keep_samples: bool = False,
):
    """Aggregate `runs` independent streaming runs with per-run seed streams.

    Deterministic for a fixed (seed, runs), independent of `jobs`: run i
    always draws from sub-stream i of the given seed.
    """
    _check_protocol_args(delta0, d, n)
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if n < 1:
        raise ValueError("monte_carlo requires n >= 1")
    root = seed if isinstance(seed, Seed) else Seed(int(seed))

    if jobs > 1:
        import multiprocessing

        bounds = np.linspace(0, runs, jobs + 1).astype(int)
        chunks = [
            (delta0, d, n, root, int(lo), int(hi), checked)
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        with multiprocessing.Pool(min(jobs, len(chunks))) as pool:
            parts = pool.map(_mc_worker, chunks)
    else:
        parts = [_mc_run_range(delta0, d, n, root, 0, runs, checked)]

    copies = np.concatenate([p[0] for p in parts])
    attempts = np.concatenate([p[1] for p in parts])
    depth = max(p[2] for p in parts)
    lev_att = tuple(int(sum(p[3][lv] for p in parts)) for lv in range(n))
    lev_suc = tuple(int(sum(p[4][lv] for p in parts)) for lv in range(n))

    summary = MonteCarloSummary(
        delta0=delta0,
        d=d,
        n=n,
        runs=runs,
        mean_copies=float(copies.mean()),
        var_copies=float(copies.var(ddof=1)) if runs > 1 else 0.0,
        min_copies=int(copies.min()),
        max_copies=int(copies.max()),
        mean_swap_attempts=float(attempts.mean()),
        max_stack_depth=depth,
        theoretical_sc=expected_sample_complexity(delta0, Dimension.finite(d), n),
        level_attempts=lev_att,
        level_successes=lev_suc,
    )
    if keep_samples:
        return summary, copies
    return summary


def _check_protocol_args(delta0: float, d: int, n: int):
    if not (0.0 < delta0 < 1.0):
        raise ValueError(f"delta0 must lie in (0, 1), got {delta0}")
    if d < 2:
        raise ValueError("d must be >= 2")
    if n < 0:
        raise ValueError("n must be non-negative")
