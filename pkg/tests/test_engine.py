import random

import pytest

from entres.engine import EngineConfig, ResolutionEngine, run
from entres.records import AttrOrigin, basic_record
from tests.conftest import random_store


def entity_sets(result):
    return {frozenset(m) for m in result.entities.values()}


class TestConfig:
    def test_defaults_valid(self):
        EngineConfig().validate()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"delta": 0.0}, {"delta": 1.2}, {"xi": 0.0}, {"q": 0},
            {"rho": 1.0}, {"prior": 0.5}, {"max_iterations": 0},
        ],
    )
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            EngineConfig(**kwargs).validate()


class TestCustomerScenario:
    def test_final_partition(self, customer_store):
        result = run(customer_store)
        assert entity_sets(result) == {frozenset({1, 2, 4, 6}), frozenset({3, 5})}

    def test_iteration_profile(self, customer_store):
        # three merges land in the first pass, the super-record pair in the
        # second, and the third pass proves the fixpoint
        result = run(customer_store)
        assert result.merge_history == (3, 1, 0)
        assert result.iterations == 3
        assert result.merges == 4
        assert result.converged

    def test_no_schema_promotions_from_single_pair(self, customer_store):
        # only one candidate pair is ever verified: one vote per attribute
        # pair is far below any promotion threshold
        result = run(customer_store)
        assert result.promoted == ()

    def test_deterministic(self, customer_store):
        first = run(dict(customer_store))
        second = run(dict(customer_store))
        assert first.labels == second.labels
        assert first.merge_history == second.merge_history

    def test_high_delta_keeps_singletons(self, customer_store):
        result = run(customer_store, EngineConfig(delta=0.95))
        assert result.merges == 0
        assert len(entity_sets(result)) == 6

    def test_iteration_cap_reports_non_convergence(self, customer_store):
        result = run(customer_store, EngineConfig(max_iterations=1))
        assert result.merge_history == (3,)
        assert not result.converged

    def test_input_store_not_mutated(self, customer_store):
        before = dict(customer_store)
        run(customer_store)
        assert customer_store == before


class TestEdgeCases:
    def test_empty_store_rejected(self):
        with pytest.raises(ValueError):
            ResolutionEngine({})

    def test_duplicate_records_collapse_to_one_entity(self):
        items = [
            (AttrOrigin("s1", "name"), "bush"),
            (AttrOrigin("s1", "tel"), "831-432"),
            (AttrOrigin("s1", "city"), "chicago"),
        ]
        store = {rid: basic_record(rid, items) for rid in range(1, 6)}
        result = run(store)
        assert entity_sets(result) == {frozenset(range(1, 6))}
        assert result.converged

    def test_fully_dissimilar_records_stay_apart(self):
        store = {
            1: basic_record(1, [(AttrOrigin("s1", "a"), "aaaa")]),
            2: basic_record(2, [(AttrOrigin("s2", "a"), "bbbb")]),
            3: basic_record(3, [(AttrOrigin("s3", "a"), "cccc")]),
        }
        result = run(store)
        assert len(entity_sets(result)) == 3
        assert result.iterations == 1

    def test_single_record(self):
        store = {7: basic_record(7, [(AttrOrigin("s1", "a"), "bush")])}
        result = run(store)
        assert result.labels == {7: 7}


class TestInvariants:
    def test_labels_cover_all_inputs_and_point_to_members(self):
        rng = random.Random(51)
        for trial in range(5):
            store = random_store(rng, rng.randint(2, 25))
            result = run(dict(store))
            assert set(result.labels) == set(store)
            for eid, members in result.entities.items():
                assert eid in members  # the entity id is a member's rid
            assert result.merges == len(store) - len(result.entities)

    def test_monotone_in_delta(self):
        # a stricter threshold can only split entities, never merge more
        rng = random.Random(63)
        for trial in range(5):
            store = random_store(rng, 15)
            loose = run(dict(store), EngineConfig(delta=0.4))
            strict = run(dict(store), EngineConfig(delta=0.8))
            assert len(strict.entities) >= len(loose.entities)
