"""Schema-matching decisions by majority vote.

Every verified similar record pair predicts some attribute
correspondences.  Per source attribute and counterpart schema the
predictions are tallied; the most frequent candidate is promoted once a
Hoeffding-style upper bound on the error probability of the vote drops
below the configured threshold.  Promotions are frozen: later
contradicting votes are logged, never acted on.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Iterator

from .records import AttrOrigin


def error_bound(n: int, p: float) -> float:
    """Upper bound on the majority-vote error after ``n`` predictions with
    per-prediction correctness prior ``p``: exp(-(n / 2p) * (p - 1/2)^2).

    Strictly decreasing in ``n``.  ``p`` at or below 1/2 is rejected: the
    vote carries no information there.
    """
    if n < 1:
        raise ValueError("need at least one prediction")
    if not (0.5 < p <= 1.0):
        raise ValueError("prior must lie in (0.5, 1]")
    return math.exp(-(n / (2.0 * p)) * (p - 0.5) ** 2)


@dataclass(frozen=True)
class PromotedMatching:
    a: AttrOrigin
    b: AttrOrigin
    votes: int
    p_error_upper: float

    @property
    def confidence(self) -> float:
        return 1.0 - self.p_error_upper

    def as_pair(self) -> frozenset[AttrOrigin]:
        return frozenset((self.a, self.b))


class SchemaVoteLedger:
    """Vote tally and promotion state, keyed by (attribute, counterpart
    schema)."""

    def __init__(self, p: float = 0.8, rho: float = 0.6) -> None:
        if not (0.5 < p <= 1.0):
            raise ValueError("prior must lie in (0.5, 1]")
        if not (0.0 < rho < 1.0):
            raise ValueError("rho must lie in (0, 1)")
        self.p = p
        self.rho = rho
        self._votes: dict[tuple[AttrOrigin, str], dict[AttrOrigin, int]] = {}
        self._promoted: dict[tuple[AttrOrigin, str], PromotedMatching] = {}
        self.contradictions: list[tuple[AttrOrigin, AttrOrigin]] = []

    def record_prediction(self, a: AttrOrigin, b: AttrOrigin) -> None:
        """Count one predicted correspondence, symmetrically for both
        attributes."""
        if a.source == b.source:
            raise ValueError("a prediction must span two schemas")
        for key_attr, cand in ((a, b), (b, a)):
            tally = self._votes.setdefault((key_attr, cand.source), {})
            tally[cand] = tally.get(cand, 0) + 1
        decided = self._promoted.get((a, b.source))
        if decided is not None and decided.b != b and decided.a != b:
            self.contradictions.append((a, b))

    def votes_for(self, a: AttrOrigin, counterpart: str) -> dict[AttrOrigin, int]:
        return dict(self._votes.get((a, counterpart), {}))

    def try_promote(self, a: AttrOrigin, counterpart: str) -> PromotedMatching | None:
        """Promote the majority candidate when the error bound clears rho.

        A tie for the highest frequency defers promotion; an existing
        promotion for the same key is returned unchanged (no demotion).
        """
        key = (a, counterpart)
        if key in self._promoted:
            return self._promoted[key]
        tally = self._votes.get(key)
        if not tally:
            raise ValueError("no votes recorded for this attribute pair")
        n = sum(tally.values())
        top = max(tally.values())
        leaders = [cand for cand, c in tally.items() if c == top]
        if len(leaders) > 1:
            return None
        bound = error_bound(n, self.p)
        if bound >= self.rho:
            return None
        promo = PromotedMatching(a=a, b=leaders[0], votes=n, p_error_upper=bound)
        self._promoted[key] = promo
        return promo

    def promoted(self) -> list[PromotedMatching]:
        return list(self._promoted.values())

    def promoted_pairs(self) -> list[frozenset[AttrOrigin]]:
        """Distinct promoted attribute pairs (unordered)."""
        out: list[frozenset[AttrOrigin]] = []
        seen: set[frozenset[AttrOrigin]] = set()
        for promo in self._promoted.values():
            pair = promo.as_pair()
            if pair not in seen:
                seen.add(pair)
                out.append(pair)
        return out

    def iter_export(self) -> Iterator[dict]:
        seen: set[frozenset[AttrOrigin]] = set()
        for promo in self._promoted.values():
            pair = promo.as_pair()
            if pair in seen:
                continue
            seen.add(pair)
            yield {
                "source_a": promo.a.source,
                "attr_a": promo.a.attr,
                "source_b": promo.b.source,
                "attr_b": promo.b.attr,
                "votes": promo.votes,
                "p_error_upper": promo.p_error_upper,
            }

    def export_jsonl(self, fp: IO[str]) -> None:
        for row in self.iter_export():
            fp.write(json.dumps(row) + "\n")
