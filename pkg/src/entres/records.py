"""Core record model: heterogeneous records, merged super records, and the
union-find forest mapping record ids to entity labels.

A record is a sequence of fields; each field holds a set of string values
(stored as a duplicate-free list so that value positions stay stable) plus
the source attributes that fed it.  Merging two records fuses matched
fields and concatenates the rest.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, NamedTuple


class ValueLabel(NamedTuple):
    """Position of one value in the record store.  All components 1-based."""

    rid: int
    fid: int
    vid: int


@dataclass(frozen=True)
class AttrOrigin:
    """A source attribute: (schema name, attribute name)."""

    source: str
    attr: str


@dataclass
class Field:
    """One field of a record: a duplicate-free list of normalized values and
    the set of source attributes merged into it."""

    values: list[str]
    origins: frozenset[AttrOrigin] = dc_field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("a field must hold at least one value")
        if len(set(self.values)) != len(self.values):
            raise ValueError("duplicate values within a field")
        self.origins = frozenset(self.origins)


@dataclass
class SuperRecord:
    """A (possibly merged) record.  ``rid`` is the current union-find root;
    ``members`` lists every original record id folded into it."""

    rid: int
    fields: list[Field]
    members: frozenset[int]

    def __post_init__(self) -> None:
        if not self.fields:
            raise ValueError("a record must have at least one field")
        self.members = frozenset(self.members)
        if self.rid not in self.members:
            raise ValueError("members must contain the record's own id")

    @property
    def width(self) -> int:
        return len(self.fields)


def basic_record(rid: int, items: Iterable[tuple[AttrOrigin, str]]) -> SuperRecord:
    """Build an unmerged record: one value and one origin per field."""
    fields = [Field(values=[v], origins=frozenset([o])) for o, v in items]
    return SuperRecord(rid=rid, fields=fields, members=frozenset([rid]))


def normalize_value(raw: str) -> str:
    """Trim surrounding whitespace and case-fold.  Idempotent."""
    return raw.strip().casefold()


class EntityForest:
    """Union-find over record ids with path compression and union by size.

    The root returned by :meth:`union` is always one of the two prior
    roots; nothing downstream may depend on which one wins.
    """

    def __init__(self, ids: Iterable[int] = ()) -> None:
        self._parent: dict[int, int] = {}
        self._size: dict[int, int] = {}
        for i in ids:
            self.add(i)

    def add(self, i: int) -> None:
        if i not in self._parent:
            self._parent[i] = i
            self._size[i] = 1

    def __contains__(self, i: int) -> bool:
        return i in self._parent

    def find(self, i: int) -> int:
        root = i
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[i] != root:
            self._parent[i], i = root, self._parent[i]
        return root

    def union(self, i: int, j: int) -> int:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return ri
        if self._size[rj] > self._size[ri]:
            ri, rj = rj, ri
        self._parent[rj] = ri
        self._size[ri] += self._size[rj]
        return ri

    def roots(self) -> set[int]:
        return {self.find(i) for i in self._parent}

    def ids(self) -> list[int]:
        return list(self._parent)


def merge_super_records(
    a: SuperRecord,
    b: SuperRecord,
    matching: Iterable[tuple[int, int, float]],
    forest: EntityForest,
) -> tuple[SuperRecord, dict[ValueLabel, ValueLabel]]:
    """Fuse ``a`` and ``b`` under a one-to-one field matching.

    Performs ``union(a.rid, b.rid)`` and returns the merged record together
    with the label remapping for every value of ``a`` and ``b`` (old label
    -> new label), which the pair index needs for maintenance.

    Field order of the result: matched fields in ``a``'s field order, then
    ``a``'s unmatched fields, then ``b``'s unmatched fields.  Values equal
    after normalization are stored once.
    """
    if forest.find(a.rid) == forest.find(b.rid):
        raise ValueError("cannot merge a record with itself")
    pairs = sorted((int(lf), int(rf), float(s)) for lf, rf, s in matching)
    left_used: set[int] = set()
    right_used: set[int] = set()
    for lf, rf, _ in pairs:
        if not (1 <= lf <= a.width) or not (1 <= rf <= b.width):
            raise ValueError(f"matching references missing field ({lf}, {rf})")
        if lf in left_used or rf in right_used:
            raise ValueError("matching is not one-to-one")
        left_used.add(lf)
        right_used.add(rf)

    k = forest.union(a.rid, b.rid)
    label_map: dict[ValueLabel, ValueLabel] = {}
    new_fields: list[Field] = []

    def emit(af: Field | None, bf: Field | None, a_fid: int, b_fid: int) -> None:
        fid = len(new_fields) + 1
        values: list[str] = []
        pos: dict[str, int] = {}
        origins: frozenset[AttrOrigin] = frozenset()
        for fld, rid, old_fid in ((af, a.rid, a_fid), (bf, b.rid, b_fid)):
            if fld is None:
                continue
            origins |= fld.origins
            for vid, v in enumerate(fld.values, 1):
                if v not in pos:
                    values.append(v)
                    pos[v] = len(values)
                label_map[ValueLabel(rid, old_fid, vid)] = ValueLabel(k, fid, pos[v])
        new_fields.append(Field(values=values, origins=origins))

    for lf, rf, _ in pairs:
        emit(a.fields[lf - 1], b.fields[rf - 1], lf, rf)
    for fid, fld in enumerate(a.fields, 1):
        if fid not in left_used:
            emit(fld, None, fid, 0)
    for fid, fld in enumerate(b.fields, 1):
        if fid not in right_used:
            emit(None, fld, 0, fid)

    merged = SuperRecord(rid=k, fields=new_fields, members=a.members | b.members)
    return merged, label_map
