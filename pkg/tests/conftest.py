import random
from pathlib import Path

import pytest

from entres.cli import parse_input
from entres.pair_index import RecordStore
from entres.records import AttrOrigin, basic_record

DATA_DIR = Path(__file__).resolve().parent.parent / "demos" / "data"
CUSTOMERS = DATA_DIR / "customers.jsonl"
CUSTOMERS_GOLD = DATA_DIR / "customers_gold.jsonl"


@pytest.fixture
def customer_store() -> RecordStore:
    """The six-record customer scenario: {r1, r2, r4, r6} and {r3, r5}
    are the true entities."""
    return parse_input(str(CUSTOMERS)).store


def random_store(
    rng: random.Random,
    n_records: int,
    max_fields: int = 5,
    max_values: int = 2,
    vocab: list[str] | None = None,
) -> RecordStore:
    """Small random stores over a tight vocabulary so that similar and
    identical cross-record values are common."""
    if vocab is None:
        base = ["bush", "bushel", "gmail", "chicago", "chicag", "manager",
                "831-432", "john", "jon", "la", "电子", "food", "foobar", "fooba"]
        vocab = base
    store: RecordStore = {}
    for rid in range(1, n_records + 1):
        n_fields = rng.randint(1, max_fields)
        items = []
        for fid in range(n_fields):
            origin = AttrOrigin(source=f"s{rid % 3}", attr=f"a{fid}")
            items.append((origin, rng.choice(vocab)))
        rec = basic_record(rid, items)
        # widen some fields to multiple values
        for fld in rec.fields:
            while len(fld.values) < max_values and rng.random() < 0.3:
                v = rng.choice(vocab)
                if v not in fld.values:
                    fld.values.append(v)
        store[rid] = rec
    return store
