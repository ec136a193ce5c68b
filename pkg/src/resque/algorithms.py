"""Sequential greedy, ResQue Greedy and the random-rewiring baseline.

All three share one outer loop of ``kappa`` stages.  At every stage the
greedy scan over the remaining elements yields both the next pick and, at
no additional query cost, the set curvature of the current base set.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .curvature import TOL, CurvatureLedger, curvature_from_gains, expansion_curvature
from .errors import (
    InvalidProbabilityError,
    KappaRangeError,
    NoRemovableStageError,
    StageRangeError,
)
from .oracle import ValueOracle, scan_marginals, singleton_values
from .trace import RewireEvent, SolutionTrace, StageRecord

ALGORITHMS = ("sg", "resque", "random-rewire")
RESQUE_MODES = ("heuristic-ledger", "exact-recompute")


def _check_kappa(kappa, n):
    if not isinstance(kappa, (int, np.integer)) or not 1 <= kappa <= n:
        raise KappaRangeError(f"kappa must lie in [1, {n}], got {kappa!r}")


def _scan(oracle, base, singletons):
    taken = set(base)
    scan = scan_marginals(oracle, base, [e for e in range(oracle.n) if e not in taken])
    return scan, curvature_from_gains(scan.gains, singletons)


# --------------------------------------------------------------------------
# trigger law, step-back policy and ledger update


def trigger_law(ledger: CurvatureLedger, current: float, tol: float = TOL) -> bool:
    """Fire when the current set curvature drops strictly below the running max.

    The running max must also be positive, so a modular objective (all
    curvatures zero) never triggers and stage 1 and 2 never trigger.
    """
    if len(ledger) == 0:
        return False
    peak = expansion_curvature(ledger)
    return peak > tol and current < peak - tol


def step_back(ledger: CurvatureLedger, current_set: Sequence[int], tol: float = TOL):
    """Return ``(element, stage)`` of the ledger entry with maximal curvature.

    Ties go to the earliest stage.  ``ledger`` is expected to already hold the
    just-computed curvature of the current stage.
    """
    if len(ledger) == 0:
        raise NoRemovableStageError("ledger is empty")
    peak = expansion_curvature(ledger)
    stage = next(e.stage for e in ledger.entries if e.value >= peak - tol)
    entry = ledger[stage]
    if stage == 0 or entry.source is None:
        raise NoRemovableStageError(f"maximal curvature sits at stage {stage}, which has no source element")
    if entry.source not in current_set:
        raise NoRemovableStageError(f"element {entry.source} is not in the current set")
    return entry.source, stage


def ledger_update_after_removal(ledger: CurvatureLedger, removed_stage: int) -> CurvatureLedger:
    """Drop ``removed_stage`` and re-estimate the later entries without queries.

    A surviving entry at old stage ``u`` becomes the midpoint of its old value
    and the old value of its predecessor in the surviving sequence, i.e. stage
    ``u - 1``, or ``removed_stage - 1`` when ``u - 1`` is the removed stage.
    All midpoints use pre-removal values.
    """
    if not 1 <= removed_stage < len(ledger):
        raise StageRangeError(f"removed stage {removed_stage} outside [1, {len(ledger) - 1}]")
    old = ledger.values()
    out = CurvatureLedger()
    for e in ledger.entries:
        u = e.stage
        if u < removed_stage:
            out.append(e.value, e.source)
        elif u > removed_stage:
            prev = u - 1 if u - 1 != removed_stage else removed_stage - 1
            out.append(old[prev] + (old[u] - old[prev]) / 2, e.source)
    return out


# --------------------------------------------------------------------------
# solvers


def _finish(algorithm, oracle, kappa, stages, working, ledger, singletons, start, params):
    end = oracle.stats()
    stats = type(end)(end.queries - start.queries, end.cache_hits - start.cache_hits, end.clamped - start.clamped)
    trace = SolutionTrace(
        algorithm=algorithm,
        n=oracle.n,
        kappa=kappa,
        stages=stages,
        final_set=tuple(working),
        ledger=ledger,
        singletons=tuple(singletons[e] for e in range(oracle.n)),
        stats=stats,
        fingerprint=oracle.fingerprint,
        params=params,
    )
    trace.validate()
    return trace


def sequential_greedy(oracle: ValueOracle, kappa: int) -> SolutionTrace:
    """Plain greedy: ``kappa`` argmax-marginal picks, ledger filled for free."""
    _check_kappa(kappa, oracle.n)
    start = oracle.stats()
    singletons = singleton_values(oracle)
    working, stages, ledger = [], [], CurvatureLedger()
    for i in range(kappa):
        scan, current = _scan(oracle, working, singletons)
        ledger.append(current, working[-1] if working else None)
        base = tuple(working)
        working.append(scan.best)
        f_after = oracle.evaluate(working)
        stages.append(StageRecord(i + 1, scan.best, base, scan.max_gain, f_after, current, f_provisional=f_after))
    return _finish("sg", oracle, kappa, stages, working, ledger, singletons, start, {})


def _rewire(oracle, singletons, working, pick, full, removed, removed_stage, mode):
    """Remove ``removed`` from working + [pick], update the ledger, reselect.

    ``full`` is the ledger including the provisional current-stage entry.
    Returns (new_base, rescan, ledger_after_update, ledger_final).
    """
    extended = working + [pick]
    new_base = [x for x in extended if x != removed]
    if removed_stage < len(full):
        updated = ledger_update_after_removal(full, removed_stage)
        if mode == "exact-recompute":
            exact = CurvatureLedger()
            for e in updated.entries:
                if e.stage < removed_stage:
                    exact.append(e.value, e.source)
                else:
                    _, value = _scan(oracle, new_base[: e.stage], singletons)
                    exact.append(value, e.source)
            updated = exact
    else:
        # the just-picked element was removed; earlier stages are untouched
        updated = CurvatureLedger(full.entries[:-1])
    rescan, current = _scan(oracle, new_base, singletons)
    final = updated.copy()
    final.append(current, new_base[-1] if new_base else None)
    return new_base, rescan, updated, final


def resque_greedy(oracle: ValueOracle, kappa: int, mode: str = "heuristic-ledger") -> SolutionTrace:
    """Greedy with curvature-triggered rewiring.

    At each stage the plain greedy pick is made first.  If the trigger law
    fires, the element owning the largest recorded set curvature is dropped,
    the ledger is re-estimated (midpoint rule, or re-queried in
    ``exact-recompute`` mode) and one fresh greedy scan picks the stage's
    element; that scan may pick the dropped element again.  At most one
    trigger check happens per stage.
    """
    if mode not in RESQUE_MODES:
        raise ValueError(f"mode must be one of {RESQUE_MODES}, got {mode!r}")
    _check_kappa(kappa, oracle.n)
    start = oracle.stats()
    singletons = singleton_values(oracle)
    working, stages, ledger = [], [], CurvatureLedger()
    for i in range(kappa):
        scan, current = _scan(oracle, working, singletons)
        base = tuple(working)
        pick = scan.best
        f_prov = oracle.evaluate(working + [pick])
        if not trigger_law(ledger, current):
            ledger.append(current, working[-1] if working else None)
            working.append(pick)
            stages.append(StageRecord(i + 1, pick, base, scan.max_gain, f_prov, current, f_provisional=f_prov))
            continue

        full = ledger.copy()
        full.append(current, working[-1])
        removed, rstage = step_back(full, working + [pick])
        new_base, rescan, updated, ledger = _rewire(oracle, singletons, working, pick, full, removed, rstage, mode)
        working = new_base + [rescan.best]
        f_after = oracle.evaluate(working)
        event = RewireEvent(i + 1, removed, rstage, tuple(full.values()), tuple(updated.values()), rescan.best)
        stages.append(
            StageRecord(
                i + 1, rescan.best, tuple(new_base), rescan.max_gain, f_after, current,
                trigger_fired=True, removed=removed, removed_stage=rstage, f_provisional=f_prov, rewire=event,
            )
        )
    return _finish("resque", oracle, kappa, stages, working, ledger, singletons, start, {"mode": mode})


def random_rewiring_greedy(oracle: ValueOracle, kappa: int, p_rewire: float = 0.5, seed: int = 0) -> SolutionTrace:
    """Baseline that rewires at random instead of by curvature.

    From stage 2 on, each stage rewires with probability ``p_rewire``; the
    dropped element is uniform over the provisional set (which includes the
    element just picked).  Fully determined by ``seed``.
    """
    if not 0.0 <= p_rewire <= 1.0:
        raise InvalidProbabilityError(f"p_rewire must lie in [0, 1], got {p_rewire!r}")
    _check_kappa(kappa, oracle.n)
    rng = np.random.default_rng(seed)
    start = oracle.stats()
    singletons = singleton_values(oracle)
    working, stages, ledger = [], [], CurvatureLedger()
    for i in range(kappa):
        scan, current = _scan(oracle, working, singletons)
        base = tuple(working)
        pick = scan.best
        f_prov = oracle.evaluate(working + [pick])
        fire = i >= 1 and rng.random() < p_rewire
        if not fire:
            ledger.append(current, working[-1] if working else None)
            working.append(pick)
            stages.append(StageRecord(i + 1, pick, base, scan.max_gain, f_prov, current, f_provisional=f_prov))
            continue

        full = ledger.copy()
        full.append(current, working[-1])
        extended = working + [pick]
        k = int(rng.integers(len(extended)))
        removed = extended[k]
        # element at position k formed base set S_{k+1}
        rstage = k + 1
        new_base, rescan, updated, ledger = _rewire(
            oracle, singletons, working, pick, full, removed, rstage, "heuristic-ledger"
        )
        working = new_base + [rescan.best]
        f_after = oracle.evaluate(working)
        event = RewireEvent(i + 1, removed, rstage, tuple(full.values()), tuple(updated.values()), rescan.best)
        stages.append(
            StageRecord(
                i + 1, rescan.best, tuple(new_base), rescan.max_gain, f_after, current,
                trigger_fired=True, removed=removed, removed_stage=rstage, f_provisional=f_prov, rewire=event,
            )
        )
    params = {"p_rewire": float(p_rewire), "seed": int(seed)}
    return _finish("random-rewire", oracle, kappa, stages, working, ledger, singletons, start, params)


def solve(algorithm: str, oracle: ValueOracle, kappa: int, *, mode: str = "heuristic-ledger",
          p_rewire: float = 0.5, seed: int = 0) -> SolutionTrace:
    """Dispatch by algorithm name (one of :data:`ALGORITHMS`)."""
    if algorithm == "sg":
        return sequential_greedy(oracle, kappa)
    if algorithm == "resque":
        return resque_greedy(oracle, kappa, mode=mode)
    if algorithm == "random-rewire":
        return random_rewiring_greedy(oracle, kappa, p_rewire=p_rewire, seed=seed)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
