"""Exact optimum for small instances and certification of greedy bounds."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations

from .curvature import TOL, curvature_term, set_curvature, total_curvature
from .errors import InstanceMismatchError, InstanceTooLargeError, KappaRangeError
from .oracle import ValueOracle
from .trace import SolutionTrace

DEFAULT_MAX_N = 20
DEFAULT_MAX_KAPPA = 6
THEOREM_FLOOR = 1.0 - math.exp(-1.0)


@dataclass(frozen=True)
class OptimalCertificate:
    opt_set: tuple
    opt_value: float
    subsets_enumerated: int
    kappa: int
    n: int
    total_curvature: float
    fingerprint: str | None = None

    def to_dict(self):
        d = asdict(self)
        d["opt_set"] = list(self.opt_set)
        return d


def brute_force_opt(
    oracle: ValueOracle,
    kappa: int,
    max_n: int = DEFAULT_MAX_N,
    max_kappa: int = DEFAULT_MAX_KAPPA,
    exhaustive: bool = False,
) -> OptimalCertificate:
    """Maximize f over all sets of size ``kappa`` by enumeration.

    Monotonicity makes smaller sets dominated, so only size-``kappa`` subsets
    are visited unless ``exhaustive`` is set.  Ties go to the
    lexicographically smallest member list.  Evaluation goes straight to the
    underlying function and leaves the caller's query counters untouched.
    """
    n = oracle.n
    if not 1 <= kappa <= n:
        raise KappaRangeError(f"kappa must lie in [1, {n}], got {kappa}")
    if n > max_n or kappa > max_kappa:
        raise InstanceTooLargeError(f"n={n}, kappa={kappa} exceeds the exact limit (n<={max_n}, kappa<={max_kappa})")
    value = oracle.function.value
    sizes = range(0, kappa + 1) if exhaustive else (kappa,)
    best_key, best_val, count = None, -math.inf, 0
    for size in sizes:
        for combo in combinations(range(n), size):
            count += 1
            v = value(combo) if combo else 0.0
            if v > best_val or (v == best_val and combo < best_key):
                best_key, best_val = combo, v
    c = total_curvature(oracle.fresh())
    return OptimalCertificate(best_key, best_val, count, kappa, n, c, oracle.fingerprint)


def curvature_bound(c: float) -> float:
    """(1/c)(1 - e^-c), continuously extended to 1 at c = 0."""
    if c <= 0:
        return 1.0
    return (1.0 - math.exp(-c)) / c


def stage_bound(i: int, kappa: int) -> float:
    return 1.0 - (1.0 - 1.0 / kappa) ** i


@dataclass(frozen=True)
class StageBound:
    i: int
    f_value: float
    bound_value: float
    satisfied: bool


@dataclass
class BoundReport:
    algorithm: str
    per_stage: list
    final_ratio: float
    curvature_bound_ratio: float
    total_curvature: float
    monotone: bool
    violations: int = 0
    fingerprint: str | None = None

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self):
        d = asdict(self)
        d["ok"] = self.ok
        return d


def _check_same(trace, cert):
    if trace.fingerprint != cert.fingerprint:
        raise InstanceMismatchError(
            f"trace fingerprint {trace.fingerprint!r} does not match certificate {cert.fingerprint!r}"
        )
    if trace.n != cert.n:
        raise InstanceMismatchError("trace and certificate disagree on the ground set size")


def certify_bounds(trace: SolutionTrace, cert: OptimalCertificate, kappa: int | None = None) -> BoundReport:
    """Check f(S_i) >= (1 - (1 - 1/kappa)^i) f(opt) at every stage.

    A violation is any stage below its bound (tolerance 1e-9) or any decrease
    of f along the trace.
    """
    _check_same(trace, cert)
    kappa = trace.kappa if kappa is None else kappa
    if kappa != trace.kappa or kappa != cert.kappa:
        raise InstanceMismatchError(f"kappa mismatch: trace {trace.kappa}, certificate {cert.kappa}, requested {kappa}")
    per_stage = []
    for st in trace.stages:
        bound = stage_bound(st.stage, kappa) * cert.opt_value
        per_stage.append(StageBound(st.stage, st.f_after, bound, st.f_after >= bound - TOL))
    monotone = all(b.f_value >= a.f_value for a, b in zip(per_stage, per_stage[1:]))
    violations = sum(not s.satisfied for s in per_stage) + (0 if monotone else 1)
    ratio = trace.value / cert.opt_value if cert.opt_value > 0 else 1.0
    return BoundReport(
        trace.algorithm, per_stage, ratio, curvature_bound(cert.total_curvature), cert.total_curvature,
        monotone, violations, trace.fingerprint,
    )


# --------------------------------------------------------------------------
# paired comparison


@dataclass(frozen=True)
class StageComparison:
    m: int
    delta: float
    sg_path_term: float
    rsg_path_term: float
    value_gap_term: float
    rhs: float | None
    condition: float | None
    sign_matches: bool | None
    implication_ok: bool | None


@dataclass
class ComparisonReport:
    rows: list = field(default_factory=list)

    @property
    def final_delta(self) -> float:
        return self.rows[-1].delta if self.rows else 0.0

    @property
    def consistent(self) -> bool:
        return all(r.implication_ok is not False for r in self.rows)

    @property
    def sign_match_fraction(self) -> float:
        known = [r.sign_matches for r in self.rows if r.sign_matches is not None]
        return sum(known) / len(known) if known else 1.0

    def to_dict(self):
        return {
            "rows": [asdict(r) for r in self.rows],
            "final_delta": self.final_delta,
            "consistent": self.consistent,
            "sign_match_fraction": self.sign_match_fraction,
        }


def compare_runs(oracle: ValueOracle, sg: SolutionTrace, rsg: SolutionTrace) -> ComparisonReport:
    """Stage-by-stage diagnostic of a sequential-greedy / ResQue pair.

    For each stage m the sufficient condition for f(RSG_m) >= f(SG_m) is
    evaluated as

        cond = g(SG_{m-1} | s_m) + [f(RSG_{m-1}) - f(SG_{m-1})] / f(s_m)
               - g(RSG_{m-1} | A),      A = P - SG_{m-1} - RSG_{m-1},

    with s_m the sequential-greedy pick and g the set curvature.  When
    s_m lies in A and f(s_m) > 0, cond >= 0 implies delta_m >= 0; the
    report records whether that implication held and whether the signs agree.
    """
    for t in (sg, rsg):
        if t.fingerprint != oracle.fingerprint or t.n != oracle.n:
            raise InstanceMismatchError("trace does not belong to this oracle's instance")
    if sg.kappa != rsg.kappa:
        raise InstanceMismatchError("traces use different kappa")
    singles = sg.singletons
    report = ComparisonReport()
    sg_prev, rsg_prev = (), ()
    f_sg_prev = f_rsg_prev = 0.0
    for a, b in zip(sg.stages, rsg.stages):
        s = a.chosen
        delta = b.f_after - a.f_after
        sg_term = curvature_term(a.gain, singles[s])
        rsg_term = curvature_term(b.gain, singles[b.chosen])
        rhs = cond = match = impl = None
        gap = (f_rsg_prev - f_sg_prev) / singles[s] if singles[s] > 0 else 0.0
        expansion = set(range(oracle.n)) - set(sg_prev) - set(rsg_prev)
        if expansion:
            rhs = set_curvature(oracle, list(rsg_prev), expansion, singletons=dict(enumerate(singles)))
            cond = sg_term + gap - rhs
            match = (cond >= -TOL) == (delta >= -TOL)
            if s in expansion and singles[s] > 0:
                impl = delta >= -TOL if cond >= -TOL else True
        report.rows.append(StageComparison(a.stage, delta, sg_term, rsg_term, gap, rhs, cond, match, impl))
        sg_prev, rsg_prev = a.members_after, b.members_after
        f_sg_prev, f_rsg_prev = a.f_after, b.f_after
    return report
