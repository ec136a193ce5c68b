"""Run traces: per-stage history of a solver run and its JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .curvature import CurvatureLedger, path_curvature
from .errors import MalformedTraceError
from .oracle import OracleStats

TRACE_FORMAT = "resque-trace/1"


@dataclass(frozen=True)
class RewireEvent:
    stage: int
    removed_element: int
    removed_ledger_stage: int
    ledger_before: tuple
    ledger_after: tuple
    reselected: int

    def to_dict(self):
        return {
            "stage": self.stage,
            "removed_element": self.removed_element,
            "removed_ledger_stage": self.removed_ledger_stage,
            "ledger_before": [float(v) for v in self.ledger_before],
            "ledger_after": [float(v) for v in self.ledger_after],
            "reselected": self.reselected,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            d["stage"], d["removed_element"], d["removed_ledger_stage"],
            tuple(d["ledger_before"]), tuple(d["ledger_after"]), d["reselected"],
        )


@dataclass(frozen=True)
class StageRecord:
    """One outer iteration of a solver.

    ``base`` is the set the chosen element was added to (after any step-back),
    so the working set after the stage is ``base + (chosen,)``.
    ``f_provisional`` is the value of the plain greedy extension before any
    rewiring; it equals ``f_after`` when no trigger fired.
    """

    stage: int
    chosen: int
    base: tuple
    gain: float
    f_after: float
    set_curvature_recorded: float
    trigger_fired: bool = False
    removed: int | None = None
    removed_stage: int | None = None
    f_provisional: float | None = None
    rewire: RewireEvent | None = None

    @property
    def members_after(self) -> tuple:
        return self.base + (self.chosen,)

    def to_dict(self):
        return {
            "stage": self.stage,
            "chosen": self.chosen,
            "base": list(self.base),
            "gain": float(self.gain),
            "f_after": float(self.f_after),
            "f_provisional": None if self.f_provisional is None else float(self.f_provisional),
            "set_curvature_recorded": float(self.set_curvature_recorded),
            "trigger_fired": self.trigger_fired,
            "removed": self.removed,
            "removed_stage": self.removed_stage,
            "rewire": None if self.rewire is None else self.rewire.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            stage=d["stage"],
            chosen=d["chosen"],
            base=tuple(d["base"]),
            gain=d["gain"],
            f_after=d["f_after"],
            set_curvature_recorded=d["set_curvature_recorded"],
            trigger_fired=d["trigger_fired"],
            removed=d["removed"],
            removed_stage=d["removed_stage"],
            f_provisional=d.get("f_provisional"),
            rewire=None if d.get("rewire") is None else RewireEvent.from_dict(d["rewire"]),
        )


@dataclass
class SolutionTrace:
    algorithm: str
    n: int
    kappa: int
    stages: list
    final_set: tuple
    ledger: CurvatureLedger
    singletons: tuple
    stats: OracleStats = field(default_factory=OracleStats)
    fingerprint: str | None = None
    params: dict = field(default_factory=dict)

    @property
    def rewire_count(self) -> int:
        return sum(1 for s in self.stages if s.trigger_fired)

    @property
    def rewire_events(self) -> list:
        return [s.rewire for s in self.stages if s.rewire is not None]

    @property
    def value(self) -> float:
        return self.stages[-1].f_after if self.stages else 0.0

    @property
    def f_values(self) -> list:
        return [s.f_after for s in self.stages]

    def validate(self) -> None:
        if len(self.stages) != self.kappa:
            raise MalformedTraceError(f"expected {self.kappa} stages, found {len(self.stages)}")
        if len(set(self.final_set)) != len(self.final_set) or len(self.final_set) != self.kappa:
            raise MalformedTraceError("final set must hold kappa distinct elements")
        if self.stages and tuple(self.stages[-1].members_after) != tuple(self.final_set):
            raise MalformedTraceError("final set does not match the last stage")
        for a, b in zip(self.stages, self.stages[1:]):
            if b.f_after < a.f_after:
                raise MalformedTraceError(f"f_after decreases at stage {b.stage}")

    def to_dict(self) -> dict:
        pc = path_curvature(self)
        return {
            "format": TRACE_FORMAT,
            "algorithm": self.algorithm,
            "fingerprint": self.fingerprint,
            "n": self.n,
            "kappa": self.kappa,
            "params": self.params,
            "final_set": list(self.final_set),
            "value": float(self.value),
            "rewire_count": self.rewire_count,
            "stats": self.stats.to_dict(),
            "singletons": [float(v) for v in self.singletons],
            "ledger": self.ledger.to_list(),
            "path_curvature": {"terms": list(pc.terms), "running": list(pc.running)},
            "stages": [s.to_dict() for s in self.stages],
        }

    @classmethod
    def from_dict(cls, d) -> "SolutionTrace":
        try:
            if d.get("format") != TRACE_FORMAT:
                raise MalformedTraceError(f"unsupported trace format {d.get('format')!r}")
            st = d["stats"]
            return cls(
                algorithm=d["algorithm"],
                n=d["n"],
                kappa=d["kappa"],
                stages=[StageRecord.from_dict(s) for s in d["stages"]],
                final_set=tuple(d["final_set"]),
                ledger=CurvatureLedger.from_list(d["ledger"]),
                singletons=tuple(d["singletons"]),
                stats=OracleStats(st["queries"], st["cache_hits"], st.get("clamped", 0)),
                fingerprint=d.get("fingerprint"),
                params=d.get("params", {}),
            )
        except (KeyError, TypeError) as exc:
            raise MalformedTraceError(f"invalid trace document: {exc}") from exc

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "SolutionTrace":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise MalformedTraceError(f"line {exc.lineno}: {exc.msg}") from exc
        return cls.from_dict(data)
