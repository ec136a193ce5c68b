import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from resque.algorithms import sequential_greedy
from resque.coverage import Instance
from resque.errors import ElementInSetError, EmptyCandidatesError, OverlapError
from resque.oracle import CallableSetFunction, ValueOracle, marginal_gain, scan_marginals, singleton_values

from conftest import random_instance


def test_marginal_gain_unit_square(unit_square):
    o = unit_square.oracle()
    assert marginal_gain(o, [], 0) == 3.0
    assert marginal_gain(o, [0], 1) == 1.0


def test_marginal_gain_rejects_member(unit_square):
    with pytest.raises(ElementInSetError):
        marginal_gain(unit_square.oracle(), [0], 0)


def test_scan_marginals_tie_goes_to_lowest_index(unit_square):
    o = unit_square.oracle()
    best, hi, lo, gains = scan_marginals(o, [], [1, 0])
    assert (best, hi, lo) == (0, 3.0, 3.0)
    assert gains == {0: 3.0, 1: 3.0}
    assert scan_marginals(o, [0], [1])[:3] == (1, 1.0, 1.0)


def test_scan_marginals_guards(unit_square):
    o = unit_square.oracle()
    with pytest.raises(EmptyCandidatesError):
        scan_marginals(o, [0], [])
    with pytest.raises(OverlapError):
        scan_marginals(o, [0], [0, 1])


def test_singleton_values():
    inst = Instance([(0.0, 0.0)], [(0.0, 0.0)], [1.0], 1)
    assert singleton_values(inst.oracle()) == {0: 1.0}
    dead = Instance([(0.0, 0.0)], [(0.0, 0.0), (5.0, 5.0)], [1.0, 0.0], 1)
    assert singleton_values(dead.oracle()) == {0: 1.0, 1: 0.0}


def test_singleton_values_unit_square(unit_square):
    assert singleton_values(unit_square.oracle()) == {0: 3.0, 1: 3.0}


def test_empty_set_is_free():
    o = ValueOracle(CallableSetFunction(3, lambda s: len(s)))
    assert o.evaluate([]) == 0.0
    assert o.stats().queries == 0


def test_cache_hits_do_not_count():
    calls = []
    o = ValueOracle(CallableSetFunction(3, lambda s: calls.append(s) or len(s)))
    o.evaluate([2, 0])
    o.evaluate([0, 2])
    o.evaluate((2, 0, 0))
    s = o.stats()
    assert (s.queries, s.cache_hits, len(calls)) == (1, 2, 1)


def test_no_memo_counts_every_call():
    o = ValueOracle(CallableSetFunction(2, lambda s: len(s)), memoize=False)
    for _ in range(4):
        o.evaluate([1])
    assert o.stats().queries == 4 and o.stats().cache_hits == 0


def test_negative_marginal_is_clamped():
    # non-monotone on purpose: adding 1 to {0} lowers the value
    table = {frozenset([0]): 2.0, frozenset([1]): 1.0, frozenset([0, 1]): 1.5}
    o = ValueOracle(CallableSetFunction(2, lambda s: table[s]))
    assert marginal_gain(o, [0], 1) == 0.0
    assert o.stats().clamped == 1


def test_out_of_range_element():
    o = ValueOracle(CallableSetFunction(2, lambda s: len(s)))
    with pytest.raises(IndexError):
        o.evaluate([2])


@pytest.mark.parametrize("seed", range(6))
def test_greedy_query_count_formula(seed):
    inst = random_instance(seed)
    n, k = inst.n_sites, inst.kappa
    t = sequential_greedy(inst.oracle(), k)
    assert t.stats.queries == sum(n - i for i in range(k))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), data=st.data())
def test_memo_transparency(seed, data):
    inst = random_instance(seed)
    n = inst.n_sites
    members = data.draw(st.lists(st.integers(0, n - 1), max_size=n))
    a = inst.oracle(memoize=True)
    b = inst.oracle(memoize=False)
    first = a.evaluate(members)
    assert first == a.evaluate(members) == b.evaluate(members)


def test_marginals_non_negative_and_diminishing():
    rng = np.random.default_rng(3)
    instances = [random_instance(s) for s in range(10)]
    for _ in range(1000):
        inst = instances[int(rng.integers(len(instances)))]
        o = inst.oracle()
        n = inst.n_sites
        perm = rng.permutation(n)
        e = int(perm[0])
        rest = perm[1:]
        k2 = int(rng.integers(0, n))
        k1 = int(rng.integers(0, k2 + 1))
        s2 = [int(x) for x in rest[:k2]]
        s1 = s2[:k1]
        g1 = marginal_gain(o, s1, e)
        g2 = marginal_gain(o, s2, e)
        assert g2 >= 0
        assert g2 <= g1
