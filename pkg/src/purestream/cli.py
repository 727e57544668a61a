"""Command-line front end: seeded experiments and machine-readable outputs.

Curve and grid data go to CSV (with `# key: value` metadata comments),
run summaries to JSON (with a `meta` block echoing the full
configuration and root seed).  Identical invocations produce identical
bytes, so outputs can be diffed in CI.

Exit codes: 0 success, 1 usage error, 2 validation/tolerance failure,
3 budget exhausted.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import __version__
from .core import Dimension, Seed, as_dimension
from . import applications, dense_oracle, gadget, recurrence, streaming

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3

_REGION_INF_APPROX = 10**6  # stands in for d = infinity on finite-d-only ops


class _UsageExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageExit(message)


def _meta(schema: str, command: str, params: dict, seed: int | None) -> dict:
    return {
        "tool": "purestream",
        "version": __version__,
        "schema": schema,
        "command": command,
        "params": params,
        "seed": seed,
    }


def _write_text(out_path: str | None, text: str):
    if out_path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _csv(meta: dict, header: list[str], rows) -> str:
    buf = io.StringIO()
    for key, value in meta.items():
        if key == "params":
            value = json.dumps(value, sort_keys=True)
        buf.write(f"# {key}: {value}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_cell(x) for x in row) + "\n")
    return buf.getvalue()


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _json_doc(meta: dict, payload: dict) -> str:
    return json.dumps({"meta": meta, **payload}, sort_keys=True, indent=2) + "\n"


def _parse_dims(tokens: str) -> list[Dimension]:
    return [as_dimension(tok) for tok in tokens.split(",") if tok.strip()]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_recurrence(args) -> int:
    dims = _parse_dims(args.d)
    params = {
        "d": [str(dm) for dm in dims],
        "delta0": args.delta0,
        "iters": args.iters,
    }
    rows = []
    for dm in dims:
        trace = recurrence.iterate(args.delta0, dm, args.iters)
        for i, delta_i, p_i in trace.entries():
            rows.append((str(dm), i, delta_i, p_i))
    meta = _meta("recurrence-v1", "recurrence", params, args.seed)
    _write_text(args.out, _csv(meta, ["d", "i", "delta_i", "p_i"], rows))
    return EXIT_OK


def cmd_bounds(args) -> int:
    dm = as_dimension(args.d)
    d = dm.require_finite("bounds")
    delta0, eps = args.delta0, args.eps
    n_direct = recurrence.iterations_to(delta0, dm, eps)
    sc_exact = recurrence.expected_sample_complexity(delta0, dm, n_direct)
    high_noise = delta0 > 2.0 / 3.0
    table = {
        "n_direct": n_direct,
        "final_delta": recurrence.iterate(delta0, dm, n_direct).final_delta,
        "n_upper_inf": recurrence.n_upper_inf(delta0) if high_noise else None,
        "n_upper_finite_d": recurrence.n_upper_finite_d(delta0, d) if high_noise else None,
        "sc_exact": sc_exact,
        "sc_theorem_bound": recurrence.sc_theorem_bound(delta0, d, eps),
        "lower_bound_samples": recurrence.lower_bound_samples(delta0, d, eps),
        "optimal_protocol_samples": ((d - 1) / d) * delta0 / (eps * (1.0 - delta0) ** 2),
        "tomography_collective": recurrence.tomography_sample_estimate(d, delta0, eps, True),
        "tomography_single_copy": recurrence.tomography_sample_estimate(d, delta0, eps, False),
    }
    params = {"d": d, "delta0": delta0, "eps": eps}
    meta = _meta("bounds-v1", "bounds", params, args.seed)
    if args.format == "json":
        _write_text(args.out, _json_doc(meta, {"bounds": table}))
    else:
        lines = [f"# {k}: {v}" for k, v in meta.items() if k != "params"]
        lines.append(f"# params: {json.dumps(params, sort_keys=True)}")
        width = max(len(k) for k in table)
        for key, value in table.items():
            lines.append(f"{key:<{width}}  {'N/A' if value is None else value}")
        _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_region(args) -> int:
    dims = []
    for tok in args.d_list.split(","):
        tok = tok.strip()
        if not tok:
            continue
        dm = as_dimension(tok)
        # region formulas need a finite d; a huge one stands in for inf
        dims.append(Dimension.finite(_REGION_INF_APPROX) if not dm.is_finite else dm)
    params = {"d_list": [str(dm) for dm in dims], "resolution": args.resolution}
    rows = []
    grid = np.linspace(0.0, 1.0, args.resolution + 2)[1:-1]
    for dm in dims:
        for delta1 in grid:
            rows.append((dm.d, float(delta1), gadget.region_boundary(float(delta1), dm)))
    meta = _meta("region-v1", "region", params, args.seed)
    _write_text(args.out, _csv(meta, ["d", "delta1", "delta2_boundary"], rows))
    return EXIT_OK


def cmd_simulate(args) -> int:
    summary, samples = streaming.monte_carlo(
        args.delta0,
        args.d,
        args.levels,
        args.runs,
        Seed(args.seed),
        jobs=args.jobs,
        keep_samples=True,
    )
    params = {
        "d": args.d,
        "delta0": args.delta0,
        "levels": args.levels,
        "runs": args.runs,
        "jobs": args.jobs,
    }
    meta = _meta("simulate-v1", "simulate", params, args.seed)
    payload = {
        "summary": {
            "mean_copies": summary.mean_copies,
            "var_copies": summary.var_copies,
            "stderr_copies": summary.stderr_copies,
            "min_copies": summary.min_copies,
            "max_copies": summary.max_copies,
            "mean_swap_attempts": summary.mean_swap_attempts,
            "max_stack_depth": summary.max_stack_depth,
            "theoretical_sc": summary.theoretical_sc,
            "z_score": summary.z_score,
        }
    }
    _write_text(args.out, _json_doc(meta, payload))
    if args.per_run:
        rows = [(i, int(c)) for i, c in enumerate(samples)]
        _write_text(args.per_run, _csv(meta, ["run", "copies_consumed"], rows))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.d > dense_oracle.MAX_DIM:
        raise _UsageExit(f"dense oracle is capped at d <= {dense_oracle.MAX_DIM}")
    tol = args.tol
    rng = Seed(args.seed).generator()
    worst_prob = 0.0
    worst_state = 0.0
    for _ in range(args.trials):
        psi = dense_oracle.random_pure_state(args.d, rng)
        d1, d2 = rng.random(2)
        rho = dense_oracle.make_depolarized(psi, d1)
        sigma = dense_oracle.make_depolarized(psi, d2)
        result = dense_oracle.swap_test_apply(rho, sigma)
        p_formula = gadget.swap_success_prob(d1, d2, args.d)
        dp = abs(result.p0 - p_formula)
        expected = dense_oracle.make_depolarized(
            psi, gadget.swap_output_delta(d1, d2, args.d)
        )
        ds = dense_oracle.trace_distance(result.omega0, expected)
        worst_prob = max(worst_prob, float(dp))
        worst_state = max(worst_state, float(ds))
    ok = bool(worst_prob <= tol and worst_state <= tol)
    params = {"d": args.d, "trials": args.trials, "tol": tol}
    meta = _meta("verify-v1", "verify", params, args.seed)
    payload = {
        "report": {
            "max_prob_deviation": worst_prob,
            "max_trace_distance": worst_state,
            "tolerance": tol,
            "pass": ok,
        }
    }
    _write_text(args.out, _json_doc(meta, payload))
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_simon(args) -> int:
    ms = [int(tok) for tok in str(args.m).split(",") if tok.strip()]
    per_m = {}
    any_success = False
    all_budget_exhausted = True
    rng_root = Seed(args.seed)
    for idx, m in enumerate(ms):
        eps = args.eps if args.eps is not None else 1.0 / (10.0 * m)
        budget = args.budget if args.budget is not None else 10 * m
        successes = 0
        exhausted = 0
        queries = []
        samples = []
        for trial in range(args.trials):
            rng = rng_root.child_generator(idx * args.trials + trial)
            s_mask = int(rng.integers(1, 1 << m))
            inst = applications.SimonInstance(m, format(s_mask, f"0{m}b"), args.delta)
            result = applications.solve_simon(inst, eps, budget, rng)
            successes += result.success
            exhausted += result.s_hat is None
            queries.append(result.total_oracle_queries)
            samples.append(result.samples_collected)
        per_m[str(m)] = {
            "eps_target": eps,
            "budget": budget,
            "trials": args.trials,
            "success_rate": successes / args.trials,
            "budget_exhausted": exhausted,
            "mean_queries": float(np.mean(queries)),
            "mean_samples": float(np.mean(samples)),
        }
        any_success = any_success or successes > 0
        all_budget_exhausted = all_budget_exhausted and exhausted == args.trials
    params = {
        "m": ms,
        "delta": args.delta,
        "eps": args.eps,
        "trials": args.trials,
        "budget": args.budget,
    }
    meta = _meta("simon-v1", "simon", params, args.seed)
    _write_text(args.out, _json_doc(meta, {"per_m": per_m}))
    if all_budget_exhausted and not any_success:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_mixedness(args) -> int:
    cases = {"mixed": 1.0, "far": 1.0 - args.eta / 2.0}
    if args.case != "both":
        cases = {args.case: cases[args.case]}
    classes = {}
    offset = 0
    for name, case_delta in cases.items():
        errors = 0
        hist = {}
        for trial in range(args.trials):
            outcome = applications.mixedness_test(
                case_delta,
                args.d,
                args.eta,
                args.reps,
                Seed(args.seed, offset + trial),
                threshold=args.tau,
            )
            expected = (
                applications.MAXIMALLY_MIXED if name == "mixed" else applications.FAR_FROM_MIXED
            )
            errors += outcome.verdict != expected
            hist[outcome.passes] = hist.get(outcome.passes, 0) + 1
        offset += args.trials
        classes[name] = {
            "case_delta": case_delta,
            "trials": args.trials,
            "error_rate": errors / args.trials,
            "pass_count_histogram": {str(k): v for k, v in sorted(hist.items())},
        }
    params = {
        "d": args.d,
        "eta": args.eta,
        "case": args.case,
        "trials": args.trials,
        "reps": args.reps,
        "tau": args.tau,
    }
    meta = _meta("mixedness-v1", "mixedness", params, args.seed)
    _write_text(args.out, _json_doc(meta, {"classes": classes}))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="purestream", description=__doc__)
    parser.add_argument(
        "--version", action="version", version=f"purestream {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0, help="root PRNG seed")
        p.add_argument("--out", default="-", help="output path ('-' for stdout)")
        p.add_argument(
            "--jobs",
            type=int,
            default=1,
            help="parallel workers for heavy trial loops (simulate); "
            "results are independent of the split",
        )

    p = sub.add_parser("recurrence", help="error/success-probability curves")
    p.add_argument("--d", default="20,50,100,inf", help="comma list of dimensions")
    p.add_argument("--delta0", type=float, default=0.99)
    p.add_argument("--iters", type=int, default=60)
    common(p)
    p.set_defaults(func=cmd_recurrence)

    p = sub.add_parser("bounds", help="iteration/sample-complexity bound table")
    p.add_argument("--d", required=True)
    p.add_argument("--delta0", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("region", help="improvement-region boundary grid")
    p.add_argument("--d-list", default=f"2,3,6,{_REGION_INF_APPROX}")
    p.add_argument("--resolution", type=int, default=200)
    common(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("simulate", help="Monte Carlo streaming runs")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--delta0", type=float, required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--runs", type=int, default=10000)
    p.add_argument("--per-run", default=None, help="optional per-run CSV path")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="dense-oracle equivalence sweep")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-10)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simon", help="Simon's problem with a depolarizing oracle")
    p.add_argument("--m", default="4", help="problem size, or comma list for a table")
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--eps", type=float, default=None, help="default 1/(10m)")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--budget", type=int, default=None, help="default 10m samples")
    common(p)
    p.set_defaults(func=cmd_simon)

    p = sub.add_parser("mixedness", help="mixedness-testing error rates")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--case", choices=("mixed", "far", "both"), default="both")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--reps", type=int, default=20)
    p.add_argument("--tau", type=float, default=applications.DEFAULT_THRESHOLD)
    common(p)
    p.set_defaults(func=cmd_mixedness)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
