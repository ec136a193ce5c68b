"""Command-line entry point: ``resque generate|run|bench|exact|plot``.

Exit codes: 0 success, 1 usage error, 2 runtime failure (including a bench
sweep with failed instances), 3 bound violation found during certification.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algorithms import ALGORITHMS, RESQUE_MODES, solve
from .bench import BenchConfig, report_from_trace, run_bench, timed_solve, write_results
from .coverage import GeneratorConfig, generate_instance, load_instance_json, save_instance_json
from .errors import InvalidConfigError, ResqueError
from .exact import DEFAULT_MAX_KAPPA, DEFAULT_MAX_N, brute_force_opt, certify_bounds, compare_runs
from .plot import save_svg
from .trace import SolutionTrace

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _unit_float(text):
    v = _nonneg_float(text)
    if v > 1:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="resque", description="Curvature-aware greedy coverage maximization.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a seeded random coverage instance")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--sites", type=_positive_int, default=20)
    g.add_argument("--points", type=_positive_int, default=2000)
    g.add_argument("--components", type=_positive_int, default=4)
    g.add_argument("--radius", type=_nonneg_float, default=None, help="homogeneous sensing radius")
    g.add_argument("--overlap", type=_unit_float, default=None, help="disk overlap level when no radius is given")
    g.add_argument("--kappa", type=_positive_int, default=None)
    g.add_argument("--diversify", action=argparse.BooleanOptionalAction, default=True,
                   help="spread candidate sites with greedy log-det selection")
    g.add_argument("--out", required=True)

    r = sub.add_parser("run", help="run one solver on an instance file")
    r.add_argument("--instance", required=True)
    r.add_argument("--algo", choices=ALGORITHMS, required=True)
    r.add_argument("--kappa", type=_positive_int, default=None, help="defaults to the instance's kappa")
    r.add_argument("--mode", choices=RESQUE_MODES, default="heuristic-ledger")
    r.add_argument("--p-rewire", type=_unit_float, default=0.5)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--trace", default=None, help="write the full solution trace here")
    r.add_argument("--no-timing", action="store_true", help="report wall_ms as 0 for byte-stable output")

    b = sub.add_parser("bench", help="seeded Monte-Carlo sweep")
    b.add_argument("--config", default=None, help="JSON BenchConfig; defaults apply when omitted")
    b.add_argument("--out", default=None, help="output directory (overrides the config)")
    b.add_argument("--workers", type=_positive_int, default=None)
    b.add_argument("--instances", type=_positive_int, default=None, help="override n_instances")
    b.add_argument("--no-timing", action="store_true")

    e = sub.add_parser("exact", help="brute-force optimum and bound certification")
    e.add_argument("--instance", required=True)
    e.add_argument("--kappa", type=_positive_int, default=None)
    e.add_argument("--algo", choices=ALGORITHMS, action="append", default=None,
                   help="repeatable; defaults to all algorithms")
    e.add_argument("--mode", choices=RESQUE_MODES, default="heuristic-ledger")
    e.add_argument("--p-rewire", type=_unit_float, default=0.5)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--max-n", type=_positive_int, default=DEFAULT_MAX_N)
    e.add_argument("--max-kappa", type=_positive_int, default=DEFAULT_MAX_KAPPA)
    e.add_argument("--json", action="store_true", help="print machine-readable output")

    pl = sub.add_parser("plot", help="render an instance and traces to SVG")
    pl.add_argument("--instance", required=True)
    pl.add_argument("--trace", action="append", required=True, help="repeatable")
    pl.add_argument("--out", required=True)
    pl.add_argument("--width", type=_positive_int, default=800)
    return p


def _kappa(args, instance):
    kappa = args.kappa if args.kappa is not None else instance.kappa
    if not 1 <= kappa <= instance.n_sites:
        raise UsageError(f"--kappa must lie in [1, {instance.n_sites}], got {kappa}")
    return kappa


def cmd_generate(args):
    cfg = GeneratorConfig(
        seed=args.seed, n_sites=args.sites, n_points=args.points, n_components=args.components,
        radius=args.radius, overlap=args.overlap, diversify_sites=args.diversify, kappa=args.kappa,
    )
    try:
        cfg.validate()
    except InvalidConfigError as exc:
        raise UsageError(str(exc)) from exc
    inst = generate_instance(cfg)
    save_instance_json(inst, args.out)
    print(inst.fingerprint)
    return EXIT_OK


def cmd_run(args):
    inst = load_instance_json(args.instance)
    kappa = _kappa(args, inst)
    trace, wall = timed_solve(
        args.algo, inst, kappa, mode=args.mode, p_rewire=args.p_rewire, seed=args.seed,
        timing=not args.no_timing,
    )
    if args.trace:
        trace.save(args.trace)
    report = report_from_trace(trace, inst, wall)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK


def cmd_bench(args):
    try:
        cfg = BenchConfig.load(args.config) if args.config else BenchConfig()
        overrides = {}
        if args.instances is not None:
            overrides["n_instances"] = args.instances
        if args.no_timing:
            overrides["timing"] = False
        if args.out is not None:
            overrides["output_dir"] = args.out
        if overrides:
            cfg = BenchConfig.from_dict({**cfg.to_dict(), **overrides})
    except InvalidConfigError as exc:
        raise UsageError(str(exc)) from exc
    result = run_bench(cfg, workers=args.workers)
    csv_path, summary_path = write_results(result)
    s = result.summary
    for algo, entry in s["algorithms"].items():
        print(f"{algo:14s} coverage {entry['normalized_coverage_mean']:.4f}  queries {entry['queries_mean']:.2f}")
    print(f"certified {s['certified_instances']}  violations {s['bound_violations']}")
    print(f"wrote {csv_path} and {summary_path}")
    if s["failed_instances"]:
        print(f"failed instances: {s['failed_instances']}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_VIOLATION if s["bound_violations"] else EXIT_OK


def cmd_exact(args):
    inst = load_instance_json(args.instance)
    kappa = _kappa(args, inst)
    cert = brute_force_opt(inst.oracle(), kappa, args.max_n, args.max_kappa)
    algos = args.algo or list(ALGORITHMS)
    traces, reports = {}, {}
    for algo in algos:
        t = solve(algo, inst.oracle(), kappa, mode=args.mode, p_rewire=args.p_rewire, seed=args.seed)
        traces[algo] = t
        reports[algo] = certify_bounds(t, cert)
    comparison = None
    if "sg" in traces and "resque" in traces:
        comparison = compare_runs(inst.oracle(), traces["sg"], traces["resque"])
    violations = sum(r.violations for r in reports.values())

    if args.json:
        doc = {
            "certificate": cert.to_dict(),
            "reports": {a: r.to_dict() for a, r in reports.items()},
            "comparison": None if comparison is None else comparison.to_dict(),
            "violations": violations,
        }
        print(json.dumps(doc, indent=2))
    else:
        print(f"opt {list(cert.opt_set)} = {cert.opt_value:g}  "
              f"({cert.subsets_enumerated} subsets, total curvature {cert.total_curvature:.4f})")
        print(f"{'algorithm':14s} {'value':>8s} {'ratio':>7s} {'curv.bd':>7s} {'stages ok':>9s}")
        for algo, r in reports.items():
            ok = sum(s.satisfied for s in r.per_stage)
            print(f"{algo:14s} {traces[algo].value:8g} {r.final_ratio:7.4f} "
                  f"{r.curvature_bound_ratio:7.4f} {ok:>4d}/{len(r.per_stage):<4d}")
        if comparison is not None:
            print(f"resque - sg = {comparison.final_delta:g}; implication "
                  f"{'holds' if comparison.consistent else 'FAILS'}")
        print(f"violations: {violations}")
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_plot(args):
    inst = load_instance_json(args.instance)
    traces = [SolutionTrace.load(p) for p in args.trace]
    save_svg(inst, traces, args.out, width=args.width)
    print(args.out)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "run": cmd_run, "bench": cmd_bench, "exact": cmd_exact, "plot": cmd_plot}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # usage errors and --help end here; report the code instead of exiting
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"resque {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResqueError, OSError) as exc:
        print(f"resque {args.command}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
