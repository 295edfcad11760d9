import random

import pytest
from hypothesis import given, strategies as st

from entres.records import (
    AttrOrigin,
    EntityForest,
    Field,
    ValueLabel,
    basic_record,
    merge_super_records,
    normalize_value,
)


def _origin(attr="a", source="s1"):
    return AttrOrigin(source=source, attr=attr)


class TestNormalize:
    def test_casefold(self):
        assert normalize_value("Electronic") == "electronic"

    def test_trim_and_casefold(self):
        assert normalize_value("  Bush ") == "bush"

    def test_identity_on_normalized(self):
        assert normalize_value("831-432") == "831-432"

    def test_empty_permitted(self):
        assert normalize_value("   ") == ""

    @given(st.text(max_size=30))
    def test_idempotent(self, s):
        assert normalize_value(normalize_value(s)) == normalize_value(s)


class TestForest:
    def test_singleton_is_own_root(self):
        f = EntityForest([1, 2, 3])
        assert f.find(3) == 3

    def test_union_then_find(self):
        f = EntityForest([1, 6])
        root = f.union(1, 6)
        assert root in (1, 6)
        assert f.find(6) == f.find(1) == root

    def test_transitivity(self):
        f = EntityForest([1, 2, 6])
        f.union(1, 6)
        f.union(1, 2)
        assert f.find(2) == f.find(6)

    def test_unknown_id_raises(self):
        f = EntityForest([1])
        with pytest.raises(KeyError):
            f.find(99)

    def test_find_idempotent_and_partition(self):
        rng = random.Random(3)
        ids = list(range(1, 101))
        f = EntityForest(ids)
        for _ in range(80):
            f.union(rng.choice(ids), rng.choice(ids))
        roots = f.roots()
        for i in ids:
            assert f.find(f.find(i)) == f.find(i)
            assert f.find(i) in roots
        # roots partition the ids: every id reaches exactly one root
        buckets = {}
        for i in ids:
            buckets.setdefault(f.find(i), set()).add(i)
        assert set(buckets) == roots
        assert sum(len(b) for b in buckets.values()) == len(ids)


class TestMerge:
    def _pair(self):
        a = basic_record(1, [(_origin("con", "CustomerI"), "electronics"),
                            (_origin("tel", "CustomerI"), "831-432")])
        b = basic_record(6, [(_origin("con", "CustomerIII"), "electronic"),
                             (_origin("mail", "CustomerIII"), "bush@gmail")])
        return a, b

    def test_matched_field_keeps_both_near_duplicates(self):
        a, b = self._pair()
        forest = EntityForest([1, 6])
        merged, _ = merge_super_records(a, b, [(1, 1, 0.9)], forest)
        assert merged.fields[0].values == ["electronics", "electronic"]
        assert merged.fields[0].origins == {_origin("con", "CustomerI"),
                                            _origin("con", "CustomerIII")}

    def test_exact_duplicates_stored_once(self):
        a = basic_record(1, [(_origin(), "bush")])
        b = basic_record(2, [(_origin(source="s2"), "bush")])
        merged, _ = merge_super_records(a, b, [(1, 1, 1.0)], EntityForest([1, 2]))
        assert merged.fields[0].values == ["bush"]

    def test_empty_matching_concatenates(self):
        a, b = self._pair()
        merged, _ = merge_super_records(a, b, [], EntityForest([1, 6]))
        assert merged.width == a.width + b.width

    def test_members_accumulate(self):
        forest = EntityForest([1, 2, 4, 6])
        r = {i: basic_record(i, [(_origin(source=f"s{i}"), f"v{i}")]) for i in (1, 2, 4, 6)}
        m16, _ = merge_super_records(r[1], r[6], [], forest)
        m24, _ = merge_super_records(r[2], r[4], [], forest)
        final, _ = merge_super_records(m16, m24, [], forest)
        assert final.members == {1, 2, 4, 6}
        assert len(final.members) == len(m16.members) + len(m24.members)

    def test_same_root_rejected(self):
        a, b = self._pair()
        forest = EntityForest([1, 6])
        forest.union(1, 6)
        with pytest.raises(ValueError):
            merge_super_records(a, b, [], forest)

    def test_label_map_covers_all_values(self):
        a, b = self._pair()
        merged, label_map = merge_super_records(a, b, [(1, 1, 0.9)], EntityForest([1, 6]))
        assert set(label_map) == {
            ValueLabel(1, 1, 1), ValueLabel(1, 2, 1),
            ValueLabel(6, 1, 1), ValueLabel(6, 2, 1),
        }
        for new in label_map.values():
            assert new.rid == merged.rid
            fld = merged.fields[new.fid - 1]
            assert 1 <= new.vid <= len(fld.values)

    def test_field_count_bound(self):
        rng = random.Random(9)
        for _ in range(50):
            na, nb = rng.randint(1, 5), rng.randint(1, 5)
            a = basic_record(1, [(_origin(f"a{i}"), f"av{i}") for i in range(na)])
            b = basic_record(2, [(_origin(f"b{i}", "s2"), f"bv{i}") for i in range(nb)])
            k = rng.randint(0, min(na, nb))
            lf = rng.sample(range(1, na + 1), k)
            rf = rng.sample(range(1, nb + 1), k)
            matching = [(l, r, 1.0) for l, r in zip(lf, rf)]
            merged, _ = merge_super_records(a, b, matching, EntityForest([1, 2]))
            assert merged.width == na + nb - k
            assert merged.width >= max(na, nb)


class TestFieldInvariants:
    def test_empty_field_rejected(self):
        with pytest.raises(ValueError):
            Field(values=[])

    def test_duplicate_values_rejected(self):
        with pytest.raises(ValueError):
            Field(values=["x", "x"])
