"""Inside the value-pair index: similarity join, bounds, and pruning.

Shows the indexed value pairs for the customer scenario, then how the
per-record-pair upper/lower bounds split all record pairs into pruned,
direct, and candidate sets -- only candidates ever reach the bipartite
matching.  Run with:

    python demos/index_and_bounds.py
"""

import itertools
from pathlib import Path

from entres import build_index, parse_input, simv

DATA = Path(__file__).resolve().parent / "data" / "customers.jsonl"


def main() -> None:
    parsed = parse_input(str(DATA))

    print("== value similarity (2-gram jaccard) ==")
    for a, b in [("electronics", "electronic"), ("bush@gmail", "bush"),
                 ("chicago", "chicag"), ("john", "bushel")]:
        print(f"  simv({a!r}, {b!r}) = {simv(a, b):.4f}")
    print()

    index = build_index(parsed.store, xi=0.5)
    print(f"== indexed value pairs (xi = 0.5): {len(index)} rows ==")
    for pid, left, right, sim in index.rows():
        lrec, rrec = parsed.store[left.rid], parsed.store[right.rid]
        lv = lrec.fields[left.fid - 1].values[left.vid - 1]
        rv = rrec.fields[right.fid - 1].values[right.vid - 1]
        print(f"  #{pid:>2}  ({parsed.ids[left.rid]}.f{left.fid} {lv!r}) ~ "
              f"({parsed.ids[right.rid]}.f{right.fid} {rv!r})  sim = {sim:.4f}")
    print()

    print("== bounds for every record pair (delta = 0.5) ==")
    rids = sorted(parsed.store)
    for i, j in itertools.combinations(rids, 2):
        bound = index.cal_bound(i, j)
        if bound.up < 0.5:
            verdict = "pruned"
        elif bound.has_multiple:
            verdict = "candidate (verify)"
        else:
            verdict = "direct (bounds coincide)"
        print(f"  ({parsed.ids[i]}, {parsed.ids[j]})  "
              f"up = {bound.up:.4f}, low = {bound.low:.4f}  -> {verdict}")


if __name__ == "__main__":
    main()
