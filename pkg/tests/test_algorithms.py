import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from resque.algorithms import (
    ledger_update_after_removal,
    random_rewiring_greedy,
    resque_greedy,
    sequential_greedy,
    solve,
    step_back,
    trigger_law,
)
from resque.coverage import modular_instance
from resque.curvature import CurvatureLedger, set_curvature
from resque.errors import InvalidProbabilityError, KappaRangeError, NoRemovableStageError, StageRangeError
from resque.trace import SolutionTrace

from conftest import random_instance


def ledger(values, sources=None):
    if sources is None:
        sources = [None] + [100 + i for i in range(1, len(values))]
    return CurvatureLedger.from_values(values, sources)


def same_path(a, b):
    return [(s.chosen, s.base, s.f_after) for s in a.stages] == [(s.chosen, s.base, s.f_after) for s in b.stages]


# ---------------------------------------------------------------------------
# trigger law / step-back / ledger update


def test_trigger_fires_on_drop():
    assert trigger_law(ledger([0, 0.2, 0.5]), 0.4)


def test_trigger_quiet_cases():
    assert not trigger_law(ledger([0]), 0.0)
    assert not trigger_law(ledger([0, 0.2]), 0.5)
    assert not trigger_law(ledger([0, 0.5]), 0.5)
    assert not trigger_law(CurvatureLedger(), 0.3)
    assert not trigger_law(ledger([0, 0.0, 0.0]), 0.0)


def test_trigger_respects_tolerance():
    assert not trigger_law(ledger([0, 0.5]), 0.5 - 1e-12)
    assert trigger_law(ledger([0, 0.5]), 0.5 - 1e-6)


def test_step_back_picks_peak_source():
    lg = ledger([0, 0.2, 0.5, 0.4], [None, 11, 12, 13])
    assert step_back(lg, [11, 12, 13]) == (12, 2)


def test_step_back_tie_goes_to_earliest():
    lg = ledger([0, 0.3, 0.3], [None, 11, 12])
    assert step_back(lg, [11, 12]) == (11, 1)


def test_step_back_errors():
    with pytest.raises(NoRemovableStageError):
        step_back(ledger([0]), [])
    with pytest.raises(NoRemovableStageError):
        step_back(CurvatureLedger(), [])
    with pytest.raises(NoRemovableStageError):
        step_back(ledger([0, 0.4], [None, 7]), [8])


def test_ledger_update_worked_example():
    out = ledger_update_after_removal(ledger([0, 0.2, 0.5, 0.4]), 2)
    vals = out.values()
    assert vals[:2] == [0, 0.2]
    assert math.isclose(vals[2], 0.3, rel_tol=0, abs_tol=math.ulp(0.3))
    exact = ledger_update_after_removal(ledger([Fraction(0), Fraction(1, 5), Fraction(1, 2), Fraction(2, 5)]), 2)
    assert exact.values() == [0, Fraction(1, 5), Fraction(3, 10)]


def test_ledger_update_more_cases():
    assert ledger_update_after_removal(ledger([0, 0.6]), 1).values() == [0]
    vals = ledger_update_after_removal(ledger([0, 0.1, 0.5, 0.3, 0.4]), 2).values()
    assert vals[:2] == [0, 0.1]
    assert vals[2:] == pytest.approx([0.2, 0.35], abs=1e-15)
    frac = [Fraction(x, 10) for x in (0, 1, 5, 3, 4)]
    assert ledger_update_after_removal(ledger(frac), 2).values() == [0, Fraction(1, 10), Fraction(1, 5), Fraction(7, 20)]


def test_ledger_update_keeps_sources():
    out = ledger_update_after_removal(ledger([0, 0.1, 0.5, 0.3], [None, 1, 2, 3]), 2)
    assert out.sources() == [None, 1, 3]
    assert [e.stage for e in out] == [0, 1, 2]


def test_ledger_update_range():
    with pytest.raises(StageRangeError):
        ledger_update_after_removal(ledger([0, 0.1]), 0)
    with pytest.raises(StageRangeError):
        ledger_update_after_removal(ledger([0, 0.1]), 2)


@settings(max_examples=100, deadline=None)
@given(vals=st.lists(st.floats(0, 1), min_size=2, max_size=10), data=st.data())
def test_ledger_update_shape_and_bounds(vals, data):
    lg = ledger(vals)
    stage = data.draw(st.integers(1, len(vals) - 1))
    out = ledger_update_after_removal(lg, stage)
    assert len(out) == len(lg) - 1
    assert out.values()[:stage] == vals[:stage]
    for k, v in enumerate(out.values()[stage:], start=stage + 1):
        prev = vals[k - 1] if k - 1 != stage else vals[stage - 1]
        assert min(prev, vals[k]) - 1e-15 <= v <= max(prev, vals[k]) + 1e-15


# ---------------------------------------------------------------------------
# sequential greedy


def test_sequential_greedy_unit_square(unit_square):
    t = sequential_greedy(unit_square.oracle(), 2)
    assert t.final_set == (0, 1)
    assert t.value == 4.0
    assert t.stats.queries == 3
    assert t.ledger.values()[0] == 0.0
    assert t.ledger.values()[1] == pytest.approx(2 / 3, abs=1e-9)


def test_single_stage_is_best_singleton():
    for seed in range(8):
        inst = random_instance(seed)
        t = sequential_greedy(inst.oracle(), 1)
        singles = [inst.coverage.value((e,)) for e in range(inst.n_sites)]
        assert t.final_set == (int(np.argmax(singles)),)


def test_modular_full_budget():
    inst = modular_instance(4, 6, kappa=6)
    t = sequential_greedy(inst.oracle(), 6)
    assert sorted(t.final_set) == list(range(6))
    assert t.value == sum(inst.coverage.value((e,)) for e in range(6))


def test_kappa_guard(unit_square):
    for k in (0, 3, 1.5):
        with pytest.raises(KappaRangeError):
            sequential_greedy(unit_square.oracle(), k)


def test_ledger_matches_direct_set_curvature():
    for seed in range(5):
        inst = random_instance(seed, n_sites=9, kappa=4)
        t = sequential_greedy(inst.oracle(), 4)
        for i, s in enumerate(t.stages):
            rest = set(range(inst.n_sites)) - set(s.base)
            assert t.ledger.values()[i] == set_curvature(inst.oracle(), list(s.base), rest)


# ---------------------------------------------------------------------------
# ResQue Greedy


def test_resque_equals_greedy_on_modular():
    for seed in range(10):
        inst = modular_instance(seed, 8)
        a = sequential_greedy(inst.oracle(), inst.kappa)
        b = resque_greedy(inst.oracle(), inst.kappa)
        assert b.rewire_count == 0
        assert same_path(a, b) and a.final_set == b.final_set
        assert a.stats.queries == b.stats.queries


def test_resque_equals_greedy_without_trigger():
    checked = 0
    for seed in range(60):
        inst = random_instance(seed)
        a = sequential_greedy(inst.oracle(), inst.kappa)
        b = resque_greedy(inst.oracle(), inst.kappa)
        if b.rewire_count == 0:
            checked += 1
            assert same_path(a, b)
            assert a.ledger.values() == b.ledger.values()
    assert checked > 10


def test_stage3_rewire_instance(rewire_case):
    sg = sequential_greedy(rewire_case.oracle(), 4)
    rs = resque_greedy(rewire_case.oracle(), 4)
    assert sg.final_set == (0, 1, 2, 3) and sg.value == 50
    assert rs.value == 51 and sorted(rs.final_set) == [1, 2, 3, 4]
    (ev,) = rs.rewire_events
    assert ev.stage == 3 and ev.removed_element == 0 and ev.removed_ledger_stage == 1
    assert rs.stats.queries <= sg.stats.queries + rs.rewire_count * rewire_case.n_sites


def test_exact_recompute_mode_matches_direct(rewire_case):
    rs = resque_greedy(rewire_case.oracle(), 4, mode="exact-recompute")
    ev = rs.rewire_events[0]
    stage = rs.stages[ev.stage - 1]
    # re-queried entries must equal set curvatures of the surviving prefixes
    survivors = list(stage.base)
    for t, v in enumerate(ev.ledger_after):
        if t >= ev.removed_ledger_stage:
            rest = set(range(rewire_case.n_sites)) - set(survivors[:t])
            assert v == set_curvature(rewire_case.oracle(), survivors[:t], rest)
    with pytest.raises(ValueError):
        resque_greedy(rewire_case.oracle(), 4, mode="nope")


@pytest.mark.parametrize("mode", ["heuristic-ledger", "exact-recompute"])
def test_resque_invariants(mode):
    for seed in range(40):
        inst = random_instance(seed)
        n, k = inst.n_sites, inst.kappa
        sg = sequential_greedy(inst.oracle(), k)
        rs = resque_greedy(inst.oracle(), k, mode=mode)
        assert len(rs.stages) == k and len(set(rs.final_set)) == k
        assert rs.f_values == sorted(rs.f_values)
        assert len(rs.ledger) == k
        assert rs.rewire_count == len(rs.rewire_events)
        for s in rs.stages:
            if s.trigger_fired:
                assert s.f_after >= s.f_provisional
                ev = s.rewire
                assert len(ev.ledger_after) == len(ev.ledger_before) - 1
                peak = max(ev.ledger_before)
                assert ev.removed_ledger_stage == ev.ledger_before.index(peak)
        if mode == "heuristic-ledger":
            assert rs.stats.queries <= sg.stats.queries + rs.rewire_count * n


# ---------------------------------------------------------------------------
# random rewiring


def test_random_rewire_p0_is_greedy():
    for seed in range(10):
        inst = random_instance(seed)
        a = sequential_greedy(inst.oracle(), inst.kappa)
        b = random_rewiring_greedy(inst.oracle(), inst.kappa, p_rewire=0.0, seed=seed)
        assert same_path(a, b) and b.rewire_count == 0


def test_random_rewire_p1_two_stages():
    for seed in range(10):
        inst = random_instance(seed, kappa=2)
        t = random_rewiring_greedy(inst.oracle(), 2, p_rewire=1.0, seed=seed)
        assert t.rewire_count == 1 and t.stages[1].trigger_fired and not t.stages[0].trigger_fired


def test_random_rewire_deterministic():
    inst = random_instance(3, n_sites=12, kappa=5)
    a = random_rewiring_greedy(inst.oracle(), 5, p_rewire=0.5, seed=42)
    b = random_rewiring_greedy(inst.oracle(), 5, p_rewire=0.5, seed=42)
    assert a.to_dict() == b.to_dict()


def test_random_rewire_queries_not_below_greedy():
    for seed in range(30):
        inst = random_instance(seed)
        sg = sequential_greedy(inst.oracle(), inst.kappa)
        rr = random_rewiring_greedy(inst.oracle(), inst.kappa, p_rewire=0.7, seed=seed)
        assert rr.f_values == sorted(rr.f_values)
        if rr.rewire_count:
            assert rr.stats.queries >= sg.stats.queries


def test_random_rewire_probability_guard(unit_square):
    with pytest.raises(InvalidProbabilityError):
        random_rewiring_greedy(unit_square.oracle(), 2, p_rewire=1.2)


# ---------------------------------------------------------------------------
# dispatch and trace serialization


def test_solve_dispatch(unit_square):
    assert solve("sg", unit_square.oracle(), 2).algorithm == "sg"
    assert solve("resque", unit_square.oracle(), 2).algorithm == "resque"
    assert solve("random-rewire", unit_square.oracle(), 2, seed=1).algorithm == "random-rewire"
    with pytest.raises(ValueError):
        solve("lazy", unit_square.oracle(), 2)


def test_trace_round_trip(tmp_path, rewire_case):
    t = resque_greedy(rewire_case.oracle(), 4)
    p = tmp_path / "t.json"
    t.save(p)
    back = SolutionTrace.load(p)
    assert back.to_dict() == t.to_dict()
    assert back.rewire_events[0] == t.rewire_events[0]
