import numpy as np
import pytest

from purestream.core import Dimension, Seed
from purestream.recurrence import iterate
from purestream.streaming import (
    ForcedOutcomes,
    InvariantViolation,
    SeededOutcomes,
    StackMachine,
    StreamStats,
    always_succeed,
    monte_carlo,
    purify_recursive,
    purify_streaming,
)


def full_order_scan(purity, k):
    """Reference check of the stack invariant: non-increasing, <= 1 equality."""
    cells = purity[1 : k + 1]
    equalities = 0
    for a, b in zip(cells, cells[1:]):
        assert a >= b, f"increasing levels on stack: {cells}"
        equalities += a == b
    assert equalities <= 1, f"multiple equalities on stack: {cells}"
    assert purity[0] == -1


class TestDegenerateAndRigged:
    def test_zero_levels_returns_one_raw_copy(self):
        st = purify_streaming(0.37, 2, 0, Seed(0))
        assert st == StreamStats(1, 0, 1, 0.37, 0)
        assert purify_recursive(0.37, 2, 0, Seed(0)) == st

    def test_one_level_always_success(self):
        machine = StackMachine.for_protocol(0.3, 2, 1, always_succeed())
        st = machine.run()
        assert st.copies_consumed == 2
        assert st.swap_attempts == 1
        assert st.max_stack_depth == 2
        assert machine.first_top_success is True

    def test_two_levels_always_success_consumes_full_tree(self):
        st = purify_streaming(0.3, 2, 2, always_succeed())
        assert st.copies_consumed == 4
        assert st.swap_attempts == 3
        assert st.max_stack_depth == 3

    def test_forced_failure_path(self):
        # level-0 failure discards the pair and fetches a fresh one
        st = purify_streaming(0.3, 2, 1, ForcedOutcomes([False, False, True]))
        assert st.copies_consumed == 6
        assert st.swap_attempts == 3

    def test_forced_mixed_path(self):
        # n=2: build 1, build another 1, fail the top merge, rebuild everything
        outcomes = ForcedOutcomes([True, True, False, True, True, True])
        st = purify_streaming(0.3, 2, 2, outcomes)
        # the 1+1 merge failure discards both partially purified cells,
        # so the rebuild fetches 4 more copies and needs 3 more successes
        assert st.copies_consumed == 8
        assert st.swap_attempts == 6

    def test_forced_sequence_exhaustion_raises(self):
        with pytest.raises(RuntimeError):
            purify_streaming(0.3, 2, 3, ForcedOutcomes([True]))

    def test_gate_count_derived(self):
        st = purify_streaming(0.4, 16, 1, always_succeed())
        assert st.gate_count == st.swap_attempts * 7  # ceil(log2 16) + 3


class TestDeterminism:
    def test_identical_seed_identical_stats(self):
        a = purify_streaming(0.55, 3, 4, Seed(99, 3))
        b = purify_streaming(0.55, 3, 4, Seed(99, 3))
        assert a == b

    def test_distinct_streams_differ(self):
        runs = {purify_streaming(0.55, 3, 6, Seed(99, i)).copies_consumed for i in range(8)}
        assert len(runs) > 1

    def test_buffer_block_size_does_not_change_results(self):
        a = StackMachine.for_protocol(
            0.55, 3, 5, SeededOutcomes(Seed(5).generator(), block=2)
        ).run()
        b = StackMachine.for_protocol(
            0.55, 3, 5, SeededOutcomes(Seed(5).generator(), block=4096)
        ).run()
        assert a == b


class TestStructuralInvariants:
    def test_copies_even_and_at_least_full_tree(self):
        for i in range(30):
            st = purify_streaming(0.6, 2, 3, Seed(1, i))
            assert st.copies_consumed % 2 == 0
            assert st.copies_consumed >= 2**3  # the success tree alone has 2^n leaves

    def test_stack_order_full_scan(self):
        for i in range(200):
            machine = StackMachine.for_protocol(
                0.7, 2, 5, Seed(2, i), trace_hook=full_order_scan
            )
            st = machine.run()
            assert st.max_stack_depth <= 6

    def test_memory_bound_over_many_runs(self):
        worst = 0
        for i in range(500):
            st = purify_streaming(0.8, 4, 4, Seed(3, i))
            worst = max(worst, st.max_stack_depth)
        assert worst <= 5

    def test_pairing_violation_detected(self):
        # a corrupted probability table cannot break the pairing, but a
        # hand-built machine with a bad sentinel can; simulate by driving
        # the machine and corrupting its stack mid-run via the hook
        machine = StackMachine.for_protocol(0.5, 2, 3, Seed(4))

        def corrupt(purity, k):
            if k >= 2:
                purity[k - 1] = 99

        machine.trace_hook = corrupt
        with pytest.raises(InvariantViolation):
            machine.run()

    def test_level_success_frequency_unbiased(self):
        # empirical per-level pass rate matches P(delta_i, d) within 4 SE
        delta0, d, n = 0.5, 2, 4
        trace = iterate(delta0, Dimension.finite(d), n)
        att = np.zeros(n, dtype=int)
        suc = np.zeros(n, dtype=int)
        for i in range(4000):
            machine = StackMachine.for_protocol(delta0, d, n, Seed(6, i))
            machine.run()
            att += machine.level_attempts
            suc += machine.level_successes
        assert att[0] >= 10**4  # level 0 dominates the attempt counts
        for lev in range(n):
            p = trace.ps[lev]
            se = (p * (1 - p) / att[lev]) ** 0.5
            assert abs(suc[lev] / att[lev] - p) <= 4 * se


class TestRecursiveEquivalence:
    def test_recursive_rigged_tree(self):
        st = purify_recursive(0.3, 2, 2, always_succeed())
        assert st.copies_consumed == 4
        assert st.swap_attempts == 3

    def test_recursion_depth_guard(self):
        with pytest.raises(ValueError):
            purify_recursive(0.3, 2, 401, Seed(0))

    def test_same_distribution_as_streaming(self):
        # two-sample KS on copies_consumed at alpha = 0.01
        from scipy.stats import ks_2samp

        n_runs = 10**4
        a = np.array(
            [purify_streaming(0.3, 2, 5, Seed(11, i)).copies_consumed for i in range(n_runs)]
        )
        b = np.array(
            [purify_recursive(0.3, 2, 5, Seed(12, i)).copies_consumed for i in range(n_runs)]
        )
        assert ks_2samp(a, b).pvalue > 0.01

    def test_recursive_mean_matches_formula(self):
        runs = 4000
        copies = [purify_recursive(0.4, 3, 4, Seed(13, i)).copies_consumed for i in range(runs)]
        mean = np.mean(copies)
        se = np.std(copies, ddof=1) / runs**0.5
        from purestream.recurrence import expected_sample_complexity

        assert abs(mean - expected_sample_complexity(0.4, 3, 4)) <= 4 * se


class TestMonteCarlo:
    def test_single_run_equals_summary(self):
        st = purify_streaming(0.5, 2, 3, Seed(20, 0).child_generator(0))
        summary = monte_carlo(0.5, 2, 3, 1, Seed(20, 0))
        assert summary.mean_copies == st.copies_consumed
        assert summary.min_copies == summary.max_copies == st.copies_consumed
        assert summary.var_copies == 0.0

    def test_mean_within_three_sigma(self):
        summary = monte_carlo(0.3, 2, 5, 20000, Seed(21))
        assert abs(summary.z_score) <= 3.0

    def test_depth_bound(self):
        summary = monte_carlo(0.7, 3, 6, 2000, Seed(22))
        assert summary.max_stack_depth <= 7

    def test_jobs_do_not_change_results(self):
        a = monte_carlo(0.5, 2, 4, 400, Seed(23))
        b = monte_carlo(0.5, 2, 4, 400, Seed(23), jobs=2)
        assert a == b

    def test_keep_samples(self):
        summary, samples = monte_carlo(0.5, 2, 3, 50, Seed(24), keep_samples=True)
        assert len(samples) == 50
        assert samples.mean() == summary.mean_copies

    def test_level_aggregates_consistent(self):
        summary = monte_carlo(0.5, 2, 3, 300, Seed(25))
        assert len(summary.level_attempts) == 3
        # every attempt at the top level belongs to a run that reached it
        assert summary.level_attempts[0] >= summary.level_attempts[1]

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            monte_carlo(0.5, 2, 0, 10, Seed(0))
        with pytest.raises(ValueError):
            monte_carlo(0.5, 2, 3, 0, Seed(0))
        with pytest.raises(ValueError):
            purify_streaming(1.5, 2, 3, Seed(0))
