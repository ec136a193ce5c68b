"""Value-oracle access to normal monotone set functions.

A :class:`SetFunction` is the stateless object that knows how to compute
f(S).  A :class:`ValueOracle` wraps one for the duration of a single run and
owns the memo cache and the query counters, so many runs can share one
function concurrently without sharing accounting.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

from .errors import ElementInSetError, EmptyCandidatesError, OverlapError

logger = logging.getLogger(__name__)


class SetFunction:
    """A set function over the ground set ``{0, ..., n-1}``.

    Subclasses implement :meth:`value` for a canonical (sorted, duplicate
    free, non-empty) tuple of element indices.  ``fingerprint`` identifies the
    underlying problem instance so that traces and certificates from
    different instances are never compared by accident.
    """

    n: int
    fingerprint: str | None = None

    def value(self, members: tuple[int, ...]) -> float:  # pragma: no cover - abstract
        raise NotImplementedError


class CallableSetFunction(SetFunction):
    """Adapter turning ``fn(frozenset) -> float`` into a :class:`SetFunction`."""

    def __init__(self, n: int, fn: Callable[[frozenset], float], fingerprint: str | None = None):
        if n < 1:
            raise ValueError("ground set must contain at least one element")
        self.n = int(n)
        self._fn = fn
        self.fingerprint = fingerprint

    def value(self, members):
        return float(self._fn(frozenset(members)))


@dataclass
class OracleStats:
    queries: int = 0
    cache_hits: int = 0
    clamped: int = 0

    def copy(self) -> "OracleStats":
        return OracleStats(self.queries, self.cache_hits, self.clamped)

    def to_dict(self) -> dict:
        return {"queries": self.queries, "cache_hits": self.cache_hits, "clamped": self.clamped}


class ValueOracle:
    """Per-run evaluator of a :class:`SetFunction` with query accounting.

    One query is one evaluation of f on a set that is not already in the memo
    cache.  The empty set is never queried: normality gives f(empty) = 0.
    """

    def __init__(self, function: SetFunction, memoize: bool = True):
        self.function = function
        self.memoize = memoize
        self._cache: dict[tuple[int, ...], float] = {}
        self._stats = OracleStats()
        self._singletons: dict[int, float] | None = None

    @property
    def n(self) -> int:
        return self.function.n

    @property
    def fingerprint(self) -> str | None:
        return self.function.fingerprint

    def fresh(self, memoize: bool | None = None) -> "ValueOracle":
        """New oracle over the same function with empty cache and zeroed stats."""
        return ValueOracle(self.function, self.memoize if memoize is None else memoize)

    def stats(self) -> OracleStats:
        return self._stats.copy()

    def _key(self, members: Iterable[int]) -> tuple[int, ...]:
        key = tuple(sorted(set(int(m) for m in members)))
        if key and (key[0] < 0 or key[-1] >= self.n):
            raise IndexError(f"element index out of range for ground set of size {self.n}: {key}")
        return key

    def evaluate(self, members: Iterable[int]) -> float:
        key = self._key(members)
        if not key:
            return 0.0
        if self.memoize:
            hit = self._cache.get(key)
            if hit is not None:
                self._stats.cache_hits += 1
                return hit
        value = self.function.value(key)
        self._stats.queries += 1
        if self.memoize:
            self._cache[key] = value
        return value

    def _note_clamp(self, e, gain):
        self._stats.clamped += 1
        logger.debug("clamped negative marginal %r for element %d", gain, e)


def marginal_gain(oracle: ValueOracle, base: Sequence[int], e: int) -> float:
    """Return f(base + {e}) - f(base), clamped at zero."""
    if e in base:
        raise ElementInSetError(f"element {e} is already in the base set")
    gain = oracle.evaluate([*base, e]) - oracle.evaluate(base)
    if gain < 0.0:
        oracle._note_clamp(e, gain)
        gain = 0.0
    return gain


class ScanResult(NamedTuple):
    best: int
    max_gain: float
    min_gain: float
    gains: dict


def scan_marginals(oracle: ValueOracle, base: Sequence[int], candidates: Iterable[int]) -> ScanResult:
    """Evaluate every candidate's marginal gain over ``base`` in one pass.

    The argmax breaks ties toward the lowest element index.  ``gains`` keeps
    the full marginal table so callers can derive set curvatures without
    issuing further queries.
    """
    cands = sorted(set(candidates))
    if not cands:
        raise EmptyCandidatesError("candidate set is empty")
    base_set = set(base)
    if base_set.intersection(cands):
        raise OverlapError("candidates overlap the base set")
    gains = {}
    best, best_gain, min_gain = -1, -1.0, float("inf")
    for e in cands:
        g = marginal_gain(oracle, base, e)
        gains[e] = g
        if g > best_gain:
            best, best_gain = e, g
        if g < min_gain:
            min_gain = g
    return ScanResult(best, best_gain, min_gain, gains)


def singleton_values(oracle: ValueOracle) -> dict[int, float]:
    """f({e}) for every element, cached on the oracle for the rest of the run."""
    if oracle._singletons is None:
        oracle._singletons = {e: oracle.evaluate((e,)) for e in range(oracle.n)}
    return dict(oracle._singletons)
