"""The sorted value-pair index: off-line construction by similarity join,
range lookup, record-similarity bounds, candidate generation, and
maintenance under record merges.

The index holds every cross-record value pair with similarity >= xi,
oriented so the smaller rid comes first and ordered by (rid_1 asc,
rid_2 asc, similarity desc).  Internally the sequence is kept as runs --
one sorted list per (rid_1, rid_2) -- behind a sorted key list, so range
lookup is a binary search over the keys and a merge touches only the runs
of the two records involved.
"""

from __future__ import annotations

import bisect
import json
from collections import defaultdict
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Mapping

from .records import SuperRecord, ValueLabel
from .similarity import DEFAULT_Q, gram_jaccard, qgrams

RecordStore = dict[int, SuperRecord]


@dataclass(frozen=True)
class IndexedPair:
    """One indexed value pair.  ``left.rid < right.rid`` always."""

    left: ValueLabel
    right: ValueLabel
    sim: float

    def run_order(self) -> tuple:
        # within a (rid_1, rid_2) run: similarity descending, then label
        return (-self.sim, self.left.fid, self.left.vid, self.right.fid, self.right.vid)


@dataclass(frozen=True)
class BoundResult:
    """Bounds on the similarity of one record pair, plus the refined field
    set (per field pair, only the best-scoring value pair)."""

    up: float
    low: float
    refined: tuple[tuple[int, int, float], ...]
    has_multiple: bool


def _oriented(left: ValueLabel, right: ValueLabel, sim: float) -> IndexedPair:
    if left.rid == right.rid:
        raise ValueError("indexed pairs must span two records")
    if left.rid > right.rid:
        left, right = right, left
    return IndexedPair(left=left, right=right, sim=sim)


class ValuePairIndex:
    """Catalogue of similar cross-record value pairs (see module docstring)."""

    def __init__(self, store: RecordStore, xi: float, q: int = DEFAULT_Q) -> None:
        if not (0.0 < xi <= 1.0):
            raise ValueError("xi must lie in (0, 1]")
        self.store = store
        self.xi = xi
        self.q = q
        self._runs: dict[tuple[int, int], list[IndexedPair]] = {}
        self._run_keys: list[tuple[int, int]] = []
        self._keys_by_rid: dict[int, set[tuple[int, int]]] = defaultdict(set)

    # -- construction -----------------------------------------------------

    @classmethod
    def from_pairs(
        cls,
        store: RecordStore,
        pairs: Iterable[tuple[ValueLabel, ValueLabel, float]],
        xi: float,
        q: int = DEFAULT_Q,
    ) -> "ValuePairIndex":
        """Assemble an index from explicit value pairs (no join performed)."""
        index = cls(store, xi, q)
        for left, right, sim in pairs:
            index._insert(_oriented(ValueLabel(*left), ValueLabel(*right), sim))
        for run in index._runs.values():
            run.sort(key=IndexedPair.run_order)
        return index

    def _insert(self, pair: IndexedPair) -> None:
        key = (pair.left.rid, pair.right.rid)
        run = self._runs.get(key)
        if run is None:
            self._runs[key] = [pair]
            bisect.insort(self._run_keys, key)
            self._keys_by_rid[key[0]].add(key)
            self._keys_by_rid[key[1]].add(key)
        else:
            run.append(pair)

    # -- read operations --------------------------------------------------

    def __len__(self) -> int:
        return sum(len(run) for run in self._runs.values())

    def lookup_range(self, i: int, j: int) -> tuple[IndexedPair, ...]:
        """All pairs between records ``i`` and ``j`` (``i < j``), best first.

        The run is located by binary search over the sorted key sequence
        (rid_1 first, rid_2 within the rid_1 run).
        """
        if i >= j:
            raise ValueError("lookup requires i < j")
        pos = bisect.bisect_left(self._run_keys, (i, j))
        if pos < len(self._run_keys) and self._run_keys[pos] == (i, j):
            return tuple(self._runs[(i, j)])
        return ()

    def cal_bound(self, i: int, j: int) -> BoundResult:
        """Upper/lower bound of the record similarity of (i, j).

        Keeps, per field pair, only the maximum-similarity value pair (the
        refined field set), then reduces per left-side field to the max
        (upper) and min (lower) covering pair.  A field on either side
        covered by more than one refined pair makes the pair "multiple";
        only when neither side has one are the bounds exact.
        """
        run = self.lookup_range(i, j)
        refined: list[tuple[int, int, float]] = []
        seen_fields: set[tuple[int, int]] = set()
        for pair in run:  # sim-descending: first hit per field pair is the max
            fkey = (pair.left.fid, pair.right.fid)
            if fkey not in seen_fields:
                seen_fields.add(fkey)
                refined.append((fkey[0], fkey[1], pair.sim))

        left_cover: dict[int, int] = defaultdict(int)
        right_cover: dict[int, int] = defaultdict(int)
        up_by_left: dict[int, float] = {}
        low_by_left: dict[int, float] = {}
        for lf, rf, s in refined:
            left_cover[lf] += 1
            right_cover[rf] += 1
            up_by_left[lf] = max(up_by_left.get(lf, 0.0), s)
            low_by_left[lf] = min(low_by_left.get(lf, 2.0), s)
        has_multiple = any(c > 1 for c in left_cover.values()) or any(
            c > 1 for c in right_cover.values()
        )
        if not refined:
            return BoundResult(up=0.0, low=0.0, refined=(), has_multiple=False)
        m = min(self.store[i].width, self.store[j].width)
        # field collisions can push the raw sums past m; the similarity
        # itself never exceeds 1, so clamp
        up = min(1.0, sum(up_by_left.values()) / m)
        low = min(up, sum(low_by_left.values()) / m)
        return BoundResult(
            up=up, low=low, refined=tuple(refined), has_multiple=has_multiple
        )

    def generate_candidates(
        self, delta: float
    ) -> tuple[list[tuple[int, int]], list[tuple[tuple[int, int], float]]]:
        """One linear pass over the index runs.

        Returns (candidates, direct): pairs whose upper bound reaches
        ``delta`` and need verification, and pairs whose bounds coincide
        (no multiple field on either side) so their similarity is already
        known.  Pairs with upper bound below ``delta`` are pruned.
        """
        if not (0.0 <= delta <= 1.0):
            raise ValueError("delta must lie in [0, 1]")
        candidates: list[tuple[int, int]] = []
        direct: list[tuple[tuple[int, int], float]] = []
        for key in self._run_keys:
            bound = self.cal_bound(*key)
            if bound.up < delta:
                continue
            if bound.has_multiple:
                candidates.append(key)
            else:
                direct.append((key, bound.up))
        return candidates, direct

    # -- maintenance ------------------------------------------------------

    def apply_merge(
        self,
        i: int,
        j: int,
        k: int,
        label_map: Mapping[ValueLabel, ValueLabel],
    ) -> None:
        """Rewrite the index after records ``i`` and ``j`` merged into ``k``.

        Pairs between the two records are deleted; every surviving pair
        touching either record is relabeled via ``label_map``, re-oriented
        and re-positioned.  Old pairs collapsing onto the same new label
        pair (their values were deduplicated by the merge) keep the larger
        similarity.
        """
        affected = sorted(self._keys_by_rid.get(i, set()) | self._keys_by_rid.get(j, set()))
        buckets: dict[tuple[int, int], list[IndexedPair]] = defaultdict(list)
        for key in affected:
            run = self._runs.pop(key)
            pos = bisect.bisect_left(self._run_keys, key)
            del self._run_keys[pos]
            self._keys_by_rid[key[0]].discard(key)
            self._keys_by_rid[key[1]].discard(key)
            if set(key) == {i, j}:
                continue  # deleted: both endpoints now live in the same record
            for pair in run:
                left = label_map.get(pair.left, pair.left)
                right = label_map.get(pair.right, pair.right)
                new = _oriented(left, right, pair.sim)
                buckets[(new.left.rid, new.right.rid)].append(new)
        for key, plist in sorted(buckets.items()):
            best: dict[tuple[ValueLabel, ValueLabel], IndexedPair] = {}
            for pair in plist:
                lkey = (pair.left, pair.right)
                kept = best.get(lkey)
                if kept is None or pair.sim > kept.sim:
                    best[lkey] = pair
            merged = sorted(best.values(), key=IndexedPair.run_order)
            self._runs[key] = merged
            bisect.insort(self._run_keys, key)
            self._keys_by_rid[key[0]].add(key)
            self._keys_by_rid[key[1]].add(key)

    # -- inspection -------------------------------------------------------

    def iter_pairs(self) -> Iterator[IndexedPair]:
        """All pairs in index order (rid_1 asc, rid_2 asc, sim desc)."""
        for key in self._run_keys:
            yield from self._runs[key]

    def rows(self) -> Iterator[tuple[int, ValueLabel, ValueLabel, float]]:
        """(pid, left label, right label, similarity), pid 1-based."""
        for pid, pair in enumerate(self.iter_pairs(), 1):
            yield pid, pair.left, pair.right, pair.sim

    def dump_jsonl(self, fp: IO[str]) -> None:
        for pid, left, right, sim in self.rows():
            fp.write(
                json.dumps(
                    {"pid": pid, "left": list(left), "right": list(right), "sim": sim}
                )
                + "\n"
            )

    def check_sorted(self) -> bool:
        """Full-scan assertion of the index sort invariant (test hook)."""
        prev_key = None
        for key in self._run_keys:
            if prev_key is not None and key <= prev_key:
                return False
            prev_key = key
            run = self._runs[key]
            for a, b in zip(run, run[1:]):
                if a.run_order() > b.run_order():
                    return False
            for pair in run:
                if (pair.left.rid, pair.right.rid) != key or pair.left.rid >= pair.right.rid:
                    return False
        return True


def build_index(store: RecordStore, xi: float, q: int = DEFAULT_Q) -> ValuePairIndex:
    """Similarity join over every value in ``store``: index all cross-record
    value pairs with simv >= xi.

    Uses a q-gram inverted list so only value pairs sharing at least one
    gram are verified (any pair with positive Jaccard shares a gram).
    """
    index = ValuePairIndex(store, xi, q)
    labels: list[ValueLabel] = []
    values: list[str] = []
    grams: list[frozenset[str]] = []
    for rid in sorted(store):
        rec = store[rid]
        for fid, fld in enumerate(rec.fields, 1):
            for vid, v in enumerate(fld.values, 1):
                labels.append(ValueLabel(rid, fid, vid))
                values.append(v)
                grams.append(qgrams(v, q))

    postings: dict[str, list[int]] = defaultdict(list)
    empties: list[int] = []
    for idx, g in enumerate(grams):
        if not g:
            empties.append(idx)
            continue
        for gram in g:
            postings[gram].append(idx)

    for idx, g in enumerate(grams):
        if not g:
            continue
        seen: set[int] = set()
        for gram in g:
            for jdx in postings[gram]:
                if jdx <= idx or jdx in seen:
                    continue
                seen.add(jdx)
                if labels[jdx].rid == labels[idx].rid:
                    continue
                sim = gram_jaccard(g, grams[jdx])
                if sim >= xi:
                    index._insert(_oriented(labels[idx], labels[jdx], sim))
    # empty strings all have empty gram sets and are pairwise identical
    for a_pos, idx in enumerate(empties):
        for jdx in empties[a_pos + 1 :]:
            if labels[jdx].rid != labels[idx].rid:
                index._insert(_oriented(labels[idx], labels[jdx], 1.0))

    for run in index._runs.values():
        run.sort(key=IndexedPair.run_order)
    return index
