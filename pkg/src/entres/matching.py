"""Instance-based verification of a candidate record pair.

The refined field set of a record pair forms a weighted bipartite graph
over field indices.  Degree-1/degree-1 edges are settled without search
(mapped edges); promoted schema matchings are honored as forced edges;
the residual conflict graph goes through a Kuhn-Munkres maximum-weight
assignment.  The union of the three edge sets is the field matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .pair_index import ValuePairIndex
from .records import AttrOrigin
from .similarity import FieldMatchingSet, record_sim, simf

_EPS = 1e-9


class ForcedPairConflictError(ValueError):
    """Two forced field pairs share a field: the promotion ledger is
    inconsistent with the one-to-one matching requirement."""


@dataclass(frozen=True)
class FieldMatchGraph:
    """Bipartite graph over field indices with similarity weights."""

    left: tuple[int, ...]
    right: tuple[int, ...]
    edges: tuple[tuple[int, int, float], ...]

    @property
    def is_empty(self) -> bool:
        return not self.edges


@dataclass(frozen=True)
class VerifyResult:
    sim: float
    matching: FieldMatchingSet
    predictions: tuple[tuple[AttrOrigin, AttrOrigin], ...]


def build_graph(
    refined: Iterable[tuple[int, int, float]],
    forced: Iterable[tuple[int, int]] = (),
) -> tuple[FieldMatchGraph, list[tuple[int, int, float]]]:
    """Build the field-pair graph and peel off decided edges.

    Forced pairs are extracted first (their fields leave the graph along
    with every edge touching them).  Then every edge whose two endpoints
    both have degree one becomes a mapped edge and its endpoints are
    deleted.  Returns the residual graph and the mapped edges.
    """
    forced = list(forced)
    f_left = [lf for lf, _ in forced]
    f_right = [rf for _, rf in forced]
    if len(set(f_left)) != len(f_left) or len(set(f_right)) != len(f_right):
        raise ForcedPairConflictError("forced field pairs share a field")
    blocked_left, blocked_right = set(f_left), set(f_right)

    edges = [
        (int(lf), int(rf), float(s))
        for lf, rf, s in refined
        if lf not in blocked_left and rf not in blocked_right
    ]
    ldeg: dict[int, int] = {}
    rdeg: dict[int, int] = {}
    for lf, rf, _ in edges:
        ldeg[lf] = ldeg.get(lf, 0) + 1
        rdeg[rf] = rdeg.get(rf, 0) + 1

    mapped = [e for e in edges if ldeg[e[0]] == 1 and rdeg[e[1]] == 1]
    residual = [e for e in edges if not (ldeg[e[0]] == 1 and rdeg[e[1]] == 1)]
    left = tuple(sorted({lf for lf, _, _ in residual}))
    right = tuple(sorted({rf for _, rf, _ in residual}))
    graph = FieldMatchGraph(left=left, right=right, edges=tuple(sorted(residual)))
    return graph, sorted(mapped)


def _km_square(weight: np.ndarray) -> list[int]:
    """Kuhn-Munkres on a square nonnegative matrix.

    Returns ``link`` with ``link[y] = x`` for the maximum-weight perfect
    assignment.  Vertices are scanned in ascending order, so ties resolve
    deterministically.
    """
    n = weight.shape[0]
    lx = weight.max(axis=1).astype(float)
    ly = np.zeros(n)
    link = [-1] * n

    for x in range(n):
        slack = [float("inf")] * n
        while True:
            visx = [False] * n
            visy = [False] * n

            def dfs(u: int) -> bool:
                visx[u] = True
                for y in range(n):
                    if visy[y]:
                        continue
                    gap = lx[u] + ly[y] - weight[u, y]
                    if gap < _EPS:
                        visy[y] = True
                        if link[y] == -1 or dfs(link[y]):
                            link[y] = u
                            return True
                    elif slack[y] > gap:
                        slack[y] = gap
                return False

            if dfs(x):
                break
            d = min(slack[y] for y in range(n) if not visy[y])
            for u in range(n):
                if visx[u]:
                    lx[u] -= d
            for y in range(n):
                if visy[y]:
                    ly[y] += d
                else:
                    slack[y] -= d
    return link

def km_max_weight(graph: FieldMatchGraph) -> tuple[list[tuple[int, int, float]], float]:
    """Maximum-weight matching of the (possibly unbalanced) graph.

    The smaller side is padded with dummy vertices joined by zero-weight
    edges; dummy and zero-weight assignments are stripped from the result.
    """
    if graph.is_empty:
        return [], 0.0
    n = max(len(graph.left), len(graph.right))
    weight = np.zeros((n, n))
    lpos = {lf: i for i, lf in enumerate(graph.left)}
    rpos = {rf: i for i, rf in enumerate(graph.right)}
    w_of = {}
    for lf, rf, s in graph.edges:
        weight[lpos[lf], rpos[rf]] = s
        w_of[(lf, rf)] = s
    link = _km_square(weight)
    matching = []
    for y, x in enumerate(link):
        if x < len(graph.left) and y < len(graph.right):
            pair = (graph.left[x], graph.right[y])
            if pair in w_of and w_of[pair] > 0.0:
                matching.append((pair[0], pair[1], w_of[pair]))
    matching.sort()
    return matching, sum(s for _, _, s in matching)


def resolve_forced_pairs(
    index: ValuePairIndex,
    i: int,
    j: int,
    promoted: Iterable[frozenset[AttrOrigin]],
) -> list[tuple[int, int, float]]:
    """Map promoted attribute matchings onto field pairs of (i, j).

    A field pair is forced when one field carries one attribute of a
    promoted pair and the other field carries its counterpart.  Should two
    forced pairs collide on a field (possible once merged fields hold
    several origins), the higher-similarity pair wins, lowest field
    indices first.
    """
    promoted = list(promoted)
    if not promoted:
        return []
    a, b = index.store[i], index.store[j]
    raw: list[tuple[float, int, int]] = []
    for lf, lfield in enumerate(a.fields, 1):
        for rf, rfield in enumerate(b.fields, 1):
            for pair in promoted:
                one, two = tuple(pair)
                if (one in lfield.origins and two in rfield.origins) or (
                    two in lfield.origins and one in rfield.origins
                ):
                    raw.append((simf(lfield, rfield, index.q), lf, rf))
                    break
    raw.sort(key=lambda t: (-t[0], t[1], t[2]))
    used_l: set[int] = set()
    used_r: set[int] = set()
    forced = []
    for s, lf, rf in raw:
        if lf in used_l or rf in used_r:
            continue
        used_l.add(lf)
        used_r.add(rf)
        forced.append((lf, rf, s))
    return sorted(forced)


def verify_pair(
    index: ValuePairIndex,
    i: int,
    j: int,
    promoted: Iterable[frozenset[AttrOrigin]] = (),
) -> VerifyResult:
    """Compute the similarity of candidate pair (i, j).

    The similar field pairs come straight from the index (the refined
    field set); the matching is forced edges + mapped edges + the KM
    solution on the residual graph.  Alongside the score, emits the
    attribute pairs underlying every matched edge as schema-matching
    predictions.
    """
    a, b = index.store[i], index.store[j]
    bound = index.cal_bound(i, j)
    forced = resolve_forced_pairs(index, i, j, promoted)
    graph, mapped = build_graph(bound.refined, [(lf, rf) for lf, rf, _ in forced])
    km_edges, _ = km_max_weight(graph)
    matching = FieldMatchingSet(forced + mapped + km_edges)
    sim = record_sim(a, b, matching)

    predictions: list[tuple[AttrOrigin, AttrOrigin]] = []
    seen: set[tuple[AttrOrigin, AttrOrigin]] = set()
    for lf, rf, _ in matching:
        for o1 in sorted(a.fields[lf - 1].origins, key=lambda o: (o.source, o.attr)):
            for o2 in sorted(b.fields[rf - 1].origins, key=lambda o: (o.source, o.attr)):
                if o1.source == o2.source:
                    continue
                key = (o1, o2) if (o1.source, o1.attr) <= (o2.source, o2.attr) else (o2, o1)
                if key not in seen:
                    seen.add(key)
                    predictions.append(key)
    return VerifyResult(sim=sim, matching=matching, predictions=tuple(predictions))
