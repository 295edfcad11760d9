"""The resolution driver: iterate candidate generation, direct merges,
verification, schema voting and merging until no merge happens.

One iteration = one candidate-generation pass.  Direct pairs (bounds
coincide) are merged without verification; candidates go through the
bipartite matching.  A direct pair whose endpoint was already touched by
a merge this iteration is deferred -- its cached bound no longer
describes the current record -- and is simply regenerated next round.
Candidates are re-rooted through the union-find before verification,
which is sound because every surviving value pair stays reachable under
the merged roots.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .matching import verify_pair
from .pair_index import RecordStore, ValuePairIndex, build_index
from .records import EntityForest, SuperRecord, merge_super_records
from .schema_vote import PromotedMatching, SchemaVoteLedger
from .similarity import DEFAULT_Q, FieldMatchingSet


@dataclass
class EngineConfig:
    delta: float = 0.5  # record similarity threshold
    xi: float = 0.5  # value similarity threshold
    q: int = DEFAULT_Q
    rho: float = 0.6  # vote error-probability threshold
    prior: float = 0.8  # per-prediction correctness prior
    max_iterations: int | None = None  # default: number of records

    def validate(self) -> None:
        if not (0.0 < self.delta <= 1.0):
            raise ValueError("delta must lie in (0, 1]")
        if not (0.0 < self.xi <= 1.0):
            raise ValueError("xi must lie in (0, 1]")
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if not (0.0 < self.rho < 1.0):
            raise ValueError("rho must lie in (0, 1)")
        if not (0.5 < self.prior <= 1.0):
            raise ValueError("prior must lie in (0.5, 1]")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class ResolutionResult:
    labels: dict[int, int]  # original record id -> entity id (union-find root)
    iterations: int
    merges: int
    converged: bool
    promoted: tuple[PromotedMatching, ...]
    merge_history: tuple[int, ...] = ()

    @property
    def entities(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {}
        for rid, eid in self.labels.items():
            out.setdefault(eid, set()).add(rid)
        return out


class ResolutionEngine:
    """Mutable resolution state: live record store, forest, index, ledger."""

    def __init__(self, records: RecordStore, config: EngineConfig | None = None) -> None:
        self.config = config or EngineConfig()
        self.config.validate()
        if not records:
            raise ValueError("no records to resolve")
        for rec in records.values():
            if not rec.fields:
                raise ValueError("records must have at least one field")
        self.store: RecordStore = dict(records)
        self.forest = EntityForest(self.store)
        self.ledger = SchemaVoteLedger(p=self.config.prior, rho=self.config.rho)
        self.index: ValuePairIndex = build_index(self.store, self.config.xi, self.config.q)
        self._original_ids = sorted(records)

    def merge_pair(
        self, i: int, j: int, matching: FieldMatchingSet
    ) -> int | None:
        """Merge live records ``i`` and ``j``; returns the surviving root,
        or None when their roots already coincide (stale pair)."""
        if self.forest.find(i) == self.forest.find(j):
            return None
        a, b = self.store[i], self.store[j]
        merged, label_map = merge_super_records(a, b, matching, self.forest)
        del self.store[i]
        del self.store[j]
        self.store[merged.rid] = merged
        self.index.apply_merge(i, j, merged.rid, label_map)
        return merged.rid

    def _run_iteration(self) -> int:
        cfg = self.config
        candidates, direct = self.index.generate_candidates(cfg.delta)
        merges = 0
        touched: set[int] = set()

        for (i, j), _score in direct:
            if i in touched or j in touched:
                continue  # bound computed before a merge changed this record
            bound = self.index.cal_bound(i, j)
            if bound.has_multiple or bound.up < cfg.delta:
                continue
            if self.merge_pair(i, j, FieldMatchingSet(bound.refined)) is not None:
                touched.update((i, j))
                merges += 1

        seen: set[tuple[int, int]] = set()
        for i, j in candidates:
            ri, rj = self.forest.find(i), self.forest.find(j)
            if ri == rj:
                continue
            if ri > rj:
                ri, rj = rj, ri
            if (ri, rj) in seen:
                continue
            seen.add((ri, rj))
            result = verify_pair(self.index, ri, rj, self.ledger.promoted_pairs())
            if result.sim < cfg.delta:
                continue
            for a, b in result.predictions:
                self.ledger.record_prediction(a, b)
                self.ledger.try_promote(a, b.source)
                self.ledger.try_promote(b, a.source)
            if self.merge_pair(ri, rj, result.matching) is not None:
                merges += 1
        return merges

    def run(self) -> ResolutionResult:
        cfg = self.config
        limit = cfg.max_iterations or len(self._original_ids)
        history: list[int] = []
        converged = False
        for _ in range(limit):
            merges = self._run_iteration()
            history.append(merges)
            if merges == 0:
                converged = True
                break
        labels = {rid: self.forest.find(rid) for rid in self._original_ids}
        return ResolutionResult(
            labels=labels,
            iterations=len(history),
            merges=sum(history),
            converged=converged,
            promoted=tuple(self.ledger.promoted()),
            merge_history=tuple(history),
        )


def run(records: RecordStore, config: EngineConfig | None = None) -> ResolutionResult:
    """Resolve ``records`` (basic records keyed by rid) to entity labels."""
    return ResolutionEngine(records, config).run()
