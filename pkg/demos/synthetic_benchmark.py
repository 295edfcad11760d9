"""Synthetic corpora: throughput, and why iterating beats a single pass.

Part 1 times a full run over 2,000 near-duplicate records.  Part 2 builds
a corpus where each entity is split across disjoint attribute subsets
with a bridging record; a single pairwise pass tops out at F1 = 0.8
because the two disjoint records share nothing, while iterative merging
recovers the full cluster through the bridge.  Run with:

    python demos/synthetic_benchmark.py
"""

import itertools
import time

from entres import EngineConfig, build_index, evaluate, run, verify_pair
from entres.synth import clustered_corpus, split_attribute_corpus


def pairwise_f1(emitted: set, gold_pairs: set) -> float:
    tp = len(emitted & gold_pairs)
    if not emitted or not gold_pairs or not tp:
        return 0.0
    p, r = tp / len(emitted), tp / len(gold_pairs)
    return 2 * p * r / (p + r)


def main() -> None:
    print("== throughput: 250 entities x 8 near-duplicate records ==")
    store, gold = clustered_corpus(n_entities=250, records_per_entity=8)
    start = time.perf_counter()
    result = run(store, EngineConfig(delta=0.5, xi=0.5))
    elapsed = time.perf_counter() - start
    report = evaluate(result.labels, gold)
    print(f"  {len(store)} records -> {len(result.entities)} entities "
          f"in {elapsed:.2f} s ({result.iterations} iterations, {result.merges} merges)")
    print(f"  pairwise F1 = {report.f1:.3f}\n")

    print("== description difference: split attributes with a bridge record ==")
    store, gold = split_attribute_corpus()
    gold_pairs = {frozenset((a, b))
                  for a, b in itertools.combinations(sorted(gold), 2)
                  if gold[a] == gold[b]}

    # single pass: score every record pair once, no merging
    index = build_index(dict(store), xi=0.5)
    candidates, direct = index.generate_candidates(0.5)
    single = {frozenset(key) for key, _ in direct}
    single |= {frozenset(key) for key in candidates if verify_pair(index, *key).sim >= 0.5}

    result = run(store, EngineConfig(delta=0.5, xi=0.5))
    iterative = set()
    for members in result.entities.values():
        iterative |= {frozenset(p) for p in itertools.combinations(sorted(members), 2)}

    print(f"  {len(store)} records, {len(gold_pairs)} true pairs")
    print(f"  single pairwise pass: F1 = {pairwise_f1(single, gold_pairs):.3f} "
          "(the two disjoint records of each entity are never linked)")
    print(f"  iterative merging:    F1 = {pairwise_f1(iterative, gold_pairs):.3f} "
          "(the bridge record pulls the cluster together)")


if __name__ == "__main__":
    main()
