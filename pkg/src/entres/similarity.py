"""Similarity kernels: value-level q-gram Jaccard, field-level max over
value pairs, and record-level similarity over a one-to-one field matching.

The value metric is an injection point; everything downstream only assumes
a symmetric score in [0, 1].  q-gram Jaccard is the shipped default.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .records import Field, SuperRecord

DEFAULT_Q = 2


def qgrams(value: str, q: int = DEFAULT_Q) -> frozenset[str]:
    """All length-q contiguous substrings of ``value`` as a set.

    Strings shorter than q yield themselves as a single gram; the empty
    string yields the empty set.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if not value:
        return frozenset()
    if len(value) < q:
        return frozenset([value])
    return frozenset(value[i : i + q] for i in range(len(value) - q + 1))


def gram_jaccard(g1: frozenset[str], g2: frozenset[str]) -> float:
    """Jaccard over two gram sets; two empty sets count as identical."""
    if not g1 and not g2:
        return 1.0
    inter = len(g1 & g2)
    if inter == 0:
        return 0.0
    return inter / (len(g1) + len(g2) - inter)


def simv(a: str, b: str, q: int = DEFAULT_Q) -> float:
    """q-gram Jaccard similarity of two normalized values."""
    return gram_jaccard(qgrams(a, q), qgrams(b, q))


def simf(f1: Field, f2: Field, q: int = DEFAULT_Q) -> float:
    """Field similarity: the score of the most similar value pair."""
    return max(simv(v, w, q) for v in f1.values for w in f2.values)


class FieldMatchingSet:
    """A one-to-one set of matched field pairs, each with its similarity.

    Pairs are (left field index, right field index, score); indices are
    1-based.  Stored sorted by left index for deterministic iteration.
    """

    __slots__ = ("pairs",)

    def __init__(self, pairs: Iterable[tuple[int, int, float]] = ()) -> None:
        norm = sorted((int(lf), int(rf), float(s)) for lf, rf, s in pairs)
        left = [p[0] for p in norm]
        right = [p[1] for p in norm]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise ValueError("field matching must be one-to-one")
        for _, _, s in norm:
            if not (0.0 <= s <= 1.0):
                raise ValueError("matching scores must lie in [0, 1]")
        self.pairs: tuple[tuple[int, int, float], ...] = tuple(norm)

    def __iter__(self) -> Iterator[tuple[int, int, float]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __bool__(self) -> bool:
        return bool(self.pairs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldMatchingSet) and self.pairs == other.pairs

    def __repr__(self) -> str:
        return f"FieldMatchingSet({list(self.pairs)!r})"

    @property
    def total_weight(self) -> float:
        return sum(s for _, _, s in self.pairs)


def record_sim(
    a: SuperRecord,
    b: SuperRecord,
    matching: FieldMatchingSet | Iterable[tuple[int, int, float]],
) -> float:
    """Accumulated matched-field similarity, normalized by the smaller
    record's field count."""
    if not isinstance(matching, FieldMatchingSet):
        matching = FieldMatchingSet(matching)
    return matching.total_weight / min(a.width, b.width)
