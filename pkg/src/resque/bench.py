"""Seeded Monte-Carlo benchmark over random coverage instances.

Instance ``i`` is generated from seed ``base_seed + i``; its generator
parameters are sampled from the configured ranges with a stream derived from
the same seed, so a sweep is a pure function of its configuration no matter
how many worker processes execute it.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .algorithms import ALGORITHMS, RESQUE_MODES, solve
from .coverage import GeneratorConfig, Instance, generate_instance
from .errors import InvalidConfigError
from .exact import DEFAULT_MAX_KAPPA, DEFAULT_MAX_N, brute_force_opt, certify_bounds
from .trace import SolutionTrace

CSV_COLUMNS = (
    "instance_index", "fingerprint", "algorithm", "n_sites", "n_points", "kappa",
    "coverage", "normalized_coverage", "queries", "rewires", "wall_ms",
)
_ROLE_SAMPLING = 3


@dataclass(frozen=True)
class RunReport:
    instance_index: int
    fingerprint: str
    algorithm: str
    n_sites: int
    n_points: int
    kappa: int
    coverage: int
    normalized_coverage: float
    queries: int
    rewires: int
    wall_ms: float

    def to_dict(self):
        return asdict(self)


def report_from_trace(trace: SolutionTrace, instance: Instance, wall_ms: float, index: int = 0) -> RunReport:
    coverage = int(trace.value)
    return RunReport(
        index, instance.fingerprint, trace.algorithm, instance.n_sites, instance.n_points, trace.kappa,
        coverage, coverage / instance.n_points, trace.stats.queries, trace.rewire_count, float(wall_ms),
    )


def timed_solve(algorithm, instance, kappa, *, mode="heuristic-ledger", p_rewire=0.5, seed=0, timing=True):
    """Run one solver on a fresh oracle; wall time excludes oracle construction."""
    oracle = instance.oracle()
    t0 = time.perf_counter()
    trace = solve(algorithm, oracle, kappa, mode=mode, p_rewire=p_rewire, seed=seed)
    wall = (time.perf_counter() - t0) * 1e3 if timing else 0.0
    return trace, wall


def _range(spec, name):
    if isinstance(spec, (int, float)):
        return (spec, spec)
    try:
        lo, hi = spec
    except (TypeError, ValueError):
        raise InvalidConfigError(f"{name} must be a number or a [min, max] pair") from None
    if lo > hi:
        raise InvalidConfigError(f"{name}: min exceeds max")
    return (lo, hi)


@dataclass
class BenchConfig:
    """Sweep definition, usually read from JSON.

    ``kappa_rule`` accepts ``{"fixed": k}``, ``{"fraction": f, "min": a,
    "max": b}`` (kappa = floor(f * n_sites) clipped to [a, b]) or
    ``{"uniform": [a, f]}`` (integer uniform between a and floor(f * n_sites)).
    Every rule is finally clipped to [1, n_sites].
    """

    base_seed: int = 0
    n_instances: int = 100
    n_sites: tuple = (10, 30)
    n_points: tuple = (1000, 5000)
    n_components: tuple = (2, 6)
    overlap: tuple = (0.0, 1.0)
    diversify_sites: bool = True
    kappa_rule: dict = field(default_factory=lambda: {"fraction": 0.5, "max": 5})
    algorithms: tuple = ALGORITHMS
    resque_mode: str = "heuristic-ledger"
    p_rewire: float = 0.5
    exact_max_n: int = DEFAULT_MAX_N
    exact_max_kappa: int = DEFAULT_MAX_KAPPA
    workers: int = 1
    timing: bool = True
    output_dir: str = "bench_out"

    def __post_init__(self):
        self.n_sites = _range(self.n_sites, "n_sites")
        self.n_points = _range(self.n_points, "n_points")
        self.n_components = _range(self.n_components, "n_components")
        self.overlap = _range(self.overlap, "overlap")
        self.algorithms = tuple(self.algorithms)
        self.validate()

    def validate(self):
        if self.n_instances < 1:
            raise InvalidConfigError("n_instances must be at least 1")
        for name in ("n_sites", "n_points", "n_components"):
            if getattr(self, name)[0] < 1:
                raise InvalidConfigError(f"{name} must be positive")
        if not 0.0 <= self.overlap[0] <= self.overlap[1] <= 1.0:
            raise InvalidConfigError("overlap range must lie in [0, 1]")
        if not self.algorithms or any(a not in ALGORITHMS for a in self.algorithms):
            raise InvalidConfigError(f"algorithms must be a non-empty subset of {ALGORITHMS}")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise InvalidConfigError("algorithms must not repeat")
        if self.resque_mode not in RESQUE_MODES:
            raise InvalidConfigError(f"resque_mode must be one of {RESQUE_MODES}")
        if not 0.0 <= self.p_rewire <= 1.0:
            raise InvalidConfigError("p_rewire must lie in [0, 1]")
        if self.workers < 1:
            raise InvalidConfigError("workers must be at least 1")
        rule = self.kappa_rule
        if not isinstance(rule, dict) or not ({"fixed", "fraction", "uniform"} & set(rule)):
            raise InvalidConfigError("kappa_rule needs one of 'fixed', 'fraction', 'uniform'")

    @classmethod
    def from_dict(cls, data: dict) -> "BenchConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise InvalidConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path) -> "BenchConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise InvalidConfigError(f"line {exc.lineno}: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise InvalidConfigError("config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self):
        d = asdict(self)
        for k in ("n_sites", "n_points", "n_components", "overlap", "algorithms"):
            d[k] = list(d[k])
        return d

    def kappa_for(self, n_sites: int, rng: np.random.Generator) -> int:
        rule = self.kappa_rule
        if "fixed" in rule:
            k = int(rule["fixed"])
        elif "fraction" in rule:
            k = int(math.floor(rule["fraction"] * n_sites))
            k = max(k, int(rule.get("min", 1)))
            if "max" in rule:
                k = min(k, int(rule["max"]))
        else:
            lo, frac = rule["uniform"]
            hi = max(int(lo), int(math.floor(frac * n_sites)))
            k = int(rng.integers(int(lo), hi + 1))
        return max(1, min(k, n_sites))

    def instance_config(self, index: int) -> GeneratorConfig:
        seed = self.base_seed + index
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(_ROLE_SAMPLING,)))
        n_sites = int(rng.integers(self.n_sites[0], self.n_sites[1] + 1))
        n_points = int(rng.integers(self.n_points[0], self.n_points[1] + 1))
        n_comp = int(rng.integers(self.n_components[0], self.n_components[1] + 1))
        overlap = float(rng.uniform(self.overlap[0], self.overlap[1]))
        kappa = self.kappa_for(n_sites, rng)
        return GeneratorConfig(
            seed=seed, n_sites=n_sites, n_points=n_points, n_components=n_comp,
            overlap=overlap, diversify_sites=self.diversify_sites, kappa=kappa,
        )


@dataclass
class InstanceOutcome:
    index: int
    reports: list = field(default_factory=list)
    certified: bool = False
    violations: int = 0
    error: str | None = None


def run_instance(config: BenchConfig, index: int) -> InstanceOutcome:
    out = InstanceOutcome(index)
    try:
        gen = config.instance_config(index)
        instance = generate_instance(gen)
        traces = []
        for algo in config.algorithms:
            trace, wall = timed_solve(
                algo, instance, instance.kappa, mode=config.resque_mode,
                p_rewire=config.p_rewire, seed=gen.seed, timing=config.timing,
            )
            traces.append(trace)
            out.reports.append(report_from_trace(trace, instance, wall, index))
        if instance.n_sites <= config.exact_max_n and instance.kappa <= config.exact_max_kappa:
            cert = brute_force_opt(instance.oracle(), instance.kappa, config.exact_max_n, config.exact_max_kappa)
            out.certified = True
            out.violations = sum(certify_bounds(t, cert).violations for t in traces)
    except Exception as exc:  # noqa: BLE001 - one failed instance must not abort the sweep
        out.error = f"{type(exc).__name__}: {exc}"
        out.reports = []
    return out


def _job(args):
    config, index = args
    return run_instance(config, index)


@dataclass
class BenchResult:
    config: BenchConfig
    reports: list
    summary: dict


def _mean_std(values):
    a = np.asarray(values, dtype=np.float64)
    if a.size == 0:
        return math.nan, math.nan
    std = float(a.std(ddof=1)) if a.size > 1 else 0.0
    return float(a.mean()), std


def summarize(reports, algorithms, certified=0, violations=0, failed=()) -> dict:
    """Aggregate run reports into the benchmark summary."""
    per_algo = {}
    for algo in algorithms:
        rows = [r for r in reports if r.algorithm == algo]
        entry = {"runs": len(rows)}
        for key in ("normalized_coverage", "queries", "wall_ms", "rewires"):
            m, s = _mean_std([getattr(r, key) for r in rows])
            entry[f"{key}_mean"] = m
            entry[f"{key}_std"] = s
        per_algo[algo] = entry

    summary = {
        "n_runs": len(reports),
        "algorithms": per_algo,
        "certified_instances": certified,
        "bound_violations": violations,
        "failed_instances": sorted(failed),
    }
    if "sg" in algorithms and "resque" in algorithms:
        sg = {r.instance_index: r for r in reports if r.algorithm == "sg"}
        rs = {r.instance_index: r for r in reports if r.algorithm == "resque"}
        common = sorted(set(sg) & set(rs))
        gaps = [rs[i].normalized_coverage - sg[i].normalized_coverage for i in common]
        m, s = _mean_std(gaps)
        summary["resque_vs_sg"] = {
            "instances": len(common),
            "fraction_resque_ge_sg": (sum(g >= 0 for g in gaps) / len(gaps)) if gaps else math.nan,
            "fraction_resque_gt_sg": (sum(g > 0 for g in gaps) / len(gaps)) if gaps else math.nan,
            "mean_gap": m,
            "gap_stderr": s / math.sqrt(len(gaps)) if len(gaps) > 1 else 0.0,
        }
    return summary


def run_bench(config: BenchConfig, workers: int | None = None) -> BenchResult:
    workers = config.workers if workers is None else workers
    jobs = [(config, i) for i in range(config.n_instances)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        outcomes = [_job(j) for j in jobs]
    order = {a: k for k, a in enumerate(config.algorithms)}
    reports = sorted(
        (r for o in outcomes for r in o.reports), key=lambda r: (r.instance_index, order[r.algorithm])
    )
    summary = summarize(
        reports, config.algorithms,
        certified=sum(o.certified for o in outcomes),
        violations=sum(o.violations for o in outcomes),
        failed=[o.index for o in outcomes if o.error is not None],
    )
    summary["errors"] = {str(o.index): o.error for o in outcomes if o.error is not None}
    return BenchResult(config, reports, summary)


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow([repr(v) if isinstance(v, float) else v for v in (getattr(r, c) for c in CSV_COLUMNS)])
    return buf.getvalue()


def reports_from_csv(text: str) -> list:
    casts = {f.name: f.type for f in fields(RunReport)}
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        vals = {}
        for k, v in row.items():
            t = casts[k]
            vals[k] = int(v) if t == "int" else float(v) if t == "float" else v
        out.append(RunReport(**vals))
    return out


def write_results(result: BenchResult, output_dir=None) -> tuple:
    out = Path(output_dir or result.config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "results.csv"
    summary_path = out / "summary.json"
    csv_path.write_text(reports_to_csv(result.reports), encoding="utf-8")
    summary_path.write_text(json.dumps(result.summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return csv_path, summary_path
