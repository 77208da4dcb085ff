"""Simulated tripartite independent set (TIS) oracle with query accounting."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Collection

from .graph import Graph

THRESHOLD_ESTIMATE = "threshold-estimate"
EXACT_COUNT = "exact-count"
THRESHOLD_DECIDE = "threshold-decide"
COARSE = "coarse"
PIPELINE_MISC = "pipeline-misc"
PHASES = (THRESHOLD_ESTIMATE, EXACT_COUNT, THRESHOLD_DECIDE, COARSE, PIPELINE_MISC)


class ContractError(ValueError):
    """A caller broke a precondition (overlapping or empty vertex sets, bad parameters)."""


@dataclass
class QueryLedger:
    per_phase: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.per_phase.values())

    def charge(self, phase: str, count: int = 1) -> None:
        if phase not in PHASES:
            raise ContractError(f"unknown phase {phase!r}")
        self.per_phase[phase] += count

    def merge(self, other: "QueryLedger") -> None:
        for phase, count in other.per_phase.items():
            self.charge(phase, count)

    def copy(self) -> "QueryLedger":
        return QueryLedger(Counter(self.per_phase))

    def as_dict(self) -> dict:
        return {"total": self.total, "per_phase": {p: self.per_phase[p] for p in PHASES}}


class TisOracle:
    """Answers whether some triangle has one corner in each of three disjoint vertex sets.

    The wrapped graph is ground truth; estimators are expected to touch it only
    through :meth:`query` (and ``n``). Not thread-safe: use one oracle per worker.
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        self.ledger = QueryLedger()
        self._adj = graph.adj

    @property
    def n(self) -> int:
        return self.graph.n

    def query(self, a: Collection[int], b: Collection[int], c: Collection[int],
              phase: str = PIPELINE_MISC) -> bool:
        if not a or not b or not c:
            raise ContractError("TIS queries need three non-empty vertex sets")
        x, y, z = sorted((a, b, c), key=len)
        ys = y if isinstance(y, frozenset) else frozenset(y)
        zs = z if isinstance(z, frozenset) else frozenset(z)
        if len(ys) + len(zs) + len(x) != len(ys.union(zs, x)):
            raise ContractError("TIS query sets must be pairwise disjoint")
        self.ledger.charge(phase)
        return self._answer(x, ys, zs)

    def ask_trusted(self, a, b, c, phase: str) -> bool:
        """Charge and answer without the disjointness check.

        For recursions whose sets are sub-parts of an already validated triple.
        """
        self.ledger.per_phase[phase] += 1
        x, y, z = sorted((a, b, c), key=len)
        if len(z) > 8:
            return self._answer(x, frozenset(y), frozenset(z))
        return self._answer(x, y, z)

    def _answer(self, x, ys, zs) -> bool:
        # Scan from the smallest part; early exit on the first witness.
        adj = self._adj
        for u in x:
            nu = adj[u]
            ny = nu.intersection(ys)
            if not ny:
                continue
            nz = nu.intersection(zs)
            if not nz:
                continue
            for v in ny:
                if not adj[v].isdisjoint(nz):
                    return True
        return False

    def reset_ledger(self) -> None:
        self.ledger = QueryLedger()

    def snapshot_ledger(self) -> QueryLedger:
        return self.ledger.copy()


def tis_query(o: TisOracle, a, b, c, phase: str = PIPELINE_MISC) -> bool:
    return o.query(a, b, c, phase)
