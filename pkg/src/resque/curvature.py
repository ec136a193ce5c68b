"""Curvature quantities of a monotone submodular function.

Conventions shared by every function here:

* a ratio ``gain / f({e})`` with ``f({e}) == 0`` counts as 1, i.e. such an
  element is curvature-neutral (monotonicity pins its marginal at 0);
* results are clamped to ``[0, 1]``;
* a set curvature is computed as ``max(1 - ratio)`` over its terms, which is
  bit-identical to ``1 - min(ratio)`` because ``1 - x`` is monotone under
  rounding.  That keeps ledger values and per-pick path terms comparable
  with ``==``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import EmptyLedgerError, InvalidOptError, MalformedTraceError, OverlapError
from .oracle import ValueOracle, marginal_gain, singleton_values

# Absolute tolerance for curvature comparisons.
TOL = 1e-9


def _clamp(x):
    if x < 0:
        return 0.0
    if x > 1:
        return 1.0
    return x


def curvature_term(gain: float, singleton: float) -> float:
    """1 - gain / f({e}) for one element, with the 0/0 convention."""
    if singleton <= 0:
        return 0.0
    return _clamp(1.0 - gain / singleton)


def curvature_from_gains(gains: Mapping[int, float], singletons: Mapping[int, float]) -> float:
    """Set curvature from an already computed marginal table (no queries)."""
    if not gains:
        raise EmptyLedgerError("no marginals to derive a set curvature from")
    return max(curvature_term(g, singletons[e]) for e, g in gains.items())


def set_curvature(
    oracle: ValueOracle,
    base: Sequence[int],
    expansion: Iterable[int],
    singletons: Mapping[int, float] | None = None,
) -> float:
    """gamma(base | expansion) = 1 - min_e [f(base + e) - f(base)] / f({e})."""
    expansion = sorted(set(expansion))
    if not expansion:
        raise EmptyLedgerError("permissible expansion set is empty")
    if set(base).intersection(expansion):
        raise OverlapError("expansion set overlaps the base set")
    if singletons is None:
        singletons = singleton_values(oracle)
    base = list(base)
    return max(curvature_term(marginal_gain(oracle, base, e), singletons[e]) for e in expansion)


# --------------------------------------------------------------------------
# ledger


@dataclass(frozen=True)
class LedgerEntry:
    stage: int
    value: float
    source: int | None = None


@dataclass
class CurvatureLedger:
    """Per-stage set curvatures gamma(S_t | P - S_t) of a build sequence.

    Entry ``t`` belongs to the base set ``S_t``; ``source`` is the element whose
    addition produced ``S_t`` (``None`` for the empty stage 0).
    """

    entries: list = field(default_factory=list)

    @classmethod
    def from_values(cls, values: Sequence[float], sources: Sequence[int | None] | None = None) -> "CurvatureLedger":
        if sources is None:
            sources = [None] * len(values)
        if len(sources) != len(values):
            raise ValueError("values and sources differ in length")
        ledger = cls()
        for v, s in zip(values, sources):
            ledger.append(v, s)
        return ledger

    def append(self, value: float, source: int | None = None) -> None:
        if not (0 <= value <= 1):
            raise ValueError(f"set curvature {value!r} outside [0, 1]")
        self.entries.append(LedgerEntry(len(self.entries), value, source))

    def values(self) -> list:
        return [e.value for e in self.entries]

    def sources(self) -> list:
        return [e.source for e in self.entries]

    def copy(self) -> "CurvatureLedger":
        return CurvatureLedger(list(self.entries))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def to_list(self) -> list:
        return [{"stage": e.stage, "value": float(e.value), "source": e.source} for e in self.entries]

    @classmethod
    def from_list(cls, items) -> "CurvatureLedger":
        items = sorted(items, key=lambda d: d["stage"])
        if [d["stage"] for d in items] != list(range(len(items))):
            raise MalformedTraceError("ledger stages must be 0..len-1")
        return cls.from_values([d["value"] for d in items], [d["source"] for d in items])


def expansion_curvature(ledger: CurvatureLedger | Sequence[float]) -> float:
    """Running maximum of the recorded set curvatures."""
    values = ledger.values() if isinstance(ledger, CurvatureLedger) else list(ledger)
    if not values:
        raise EmptyLedgerError("ledger is empty")
    return max(values)


# --------------------------------------------------------------------------
# path curvature, total curvature, gamma*


@dataclass(frozen=True)
class PathCurvatureRecord:
    """Per-pick singleton curvatures and their running maximum."""

    terms: tuple
    running: tuple

    def __len__(self):
        return len(self.terms)


def path_curvature(trace) -> PathCurvatureRecord:
    """gamma_p(S_i) for every stage of ``trace``, from recorded data only.

    Each term is gamma(S_{l-1} | {s_l}) = 1 - gain_l / f({s_l}), where gain_l
    is the marginal the chosen element contributed to the base it joined.
    """
    stages = getattr(trace, "stages", None)
    singletons = getattr(trace, "singletons", None)
    if stages is None or singletons is None or len(singletons) != trace.n:
        raise MalformedTraceError("trace lacks stages or singleton values")
    terms, running, best = [], [], 0.0
    for k, st in enumerate(stages, start=1):
        if st.stage != k or not 0 <= st.chosen < trace.n:
            raise MalformedTraceError(f"bad stage record at position {k}")
        t = curvature_term(st.gain, singletons[st.chosen])
        best = max(best, t)
        terms.append(t)
        running.append(best)
    return PathCurvatureRecord(tuple(terms), tuple(running))


def total_curvature(oracle: ValueOracle) -> float:
    """c = 1 - min_e [f(P) - f(P - {e})] / f({e}).

    For a submodular f the minimum over all (S, e) in the textbook definition
    is attained at S = P - {e}, so n + 1 evaluations suffice.
    """
    n = oracle.n
    full = list(range(n))
    f_full = oracle.evaluate(full)
    singletons = singleton_values(oracle)
    worst = 0.0
    for e in full:
        gain = f_full - oracle.evaluate([x for x in full if x != e])
        worst = max(worst, curvature_term(max(gain, 0.0), singletons[e]))
    return worst


def gamma_star(oracle: ValueOracle, trace, opt: Sequence[int]) -> float:
    """Path curvature of ``trace`` measured against an optimal set.

    Max over stages of gamma(opt + S_{i-1} | {s_i}).  Stages whose pick is
    already in ``opt`` (or in the base) have zero marginal there and are
    skipped; an empty max is 0.
    """
    opt = set(int(o) for o in opt)
    if len(opt) > trace.kappa:
        raise InvalidOptError(f"|opt| = {len(opt)} exceeds kappa = {trace.kappa}")
    singletons = trace.singletons
    best = 0.0
    for st in trace.stages:
        base = set(st.base)
        if st.chosen in opt or st.chosen in base:
            continue
        union = sorted(opt | base)
        best = max(best, curvature_term(marginal_gain(oracle, union, st.chosen), singletons[st.chosen]))
    return best
