"""Batch surface: JSON-lines ingestion, resolution, label emission and
pairwise evaluation.

Input format: one record document per line,
``{"id": ..., "source": ..., "fields": [{"attr": ..., "values": [...]}]}``.
Output: one ``{"id": ..., "entity": ...}`` line per input record, where
the entity is the id of the cluster's representative record.  Ground
truth files use the same shape, so outputs and gold files are
interchangeable.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import IO, Hashable, Mapping

from .engine import EngineConfig, run
from .pair_index import RecordStore, build_index
from .records import AttrOrigin, Field, SuperRecord, normalize_value


class InputError(ValueError):
    """Malformed input file; message carries the offending line number."""


@dataclass
class ParsedRecords:
    store: RecordStore  # internal integer rid -> record
    ids: dict[int, str]  # rid -> external id

    @property
    def rids(self) -> dict[str, int]:
        return {ext: rid for rid, ext in self.ids.items()}


@dataclass
class EvalReport:
    precision: float
    recall: float
    f1: float
    true_pairs: int
    emitted_pairs: int
    gold_pairs: int

    def as_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "true_pairs": self.true_pairs,
            "emitted_pairs": self.emitted_pairs,
            "gold_pairs": self.gold_pairs,
        }


def record_from_doc(doc: dict, rid: int, lineno: int = 0) -> tuple[str, SuperRecord]:
    where = f"line {lineno}: " if lineno else ""
    try:
        ext_id = str(doc["id"])
        source = str(doc["source"])
        raw_fields = doc["fields"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"{where}missing key {exc}") from exc
    if not isinstance(raw_fields, list) or not raw_fields:
        raise InputError(f"{where}record needs at least one field")
    items = []
    seen_attrs: set[str] = set()
    for fld in raw_fields:
        try:
            attr = str(fld["attr"])
            values = fld["values"]
        except (KeyError, TypeError) as exc:
            raise InputError(f"{where}malformed field entry: {exc}") from exc
        if attr in seen_attrs:
            raise InputError(
                f"{where}attribute {attr!r} repeated; one schema holds no redundant attributes"
            )
        seen_attrs.add(attr)
        if not isinstance(values, list) or not values:
            raise InputError(f"{where}field {attr!r} needs at least one value")
        origin = AttrOrigin(source=source, attr=attr)
        normalized: list[str] = []
        for v in values:
            nv = normalize_value(str(v))
            if nv not in normalized:
                normalized.append(nv)
        items.append((origin, normalized))
    rec = SuperRecord(
        rid=rid,
        fields=[Field(values=vals, origins=frozenset([origin])) for origin, vals in items],
        members=frozenset([rid]),
    )
    return ext_id, rec


def parse_input(path: str) -> ParsedRecords:
    """Read a JSON-lines record file into a store of basic records."""
    store: RecordStore = {}
    ids: dict[int, str] = {}
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as fp:
        rid = 0
        for lineno, line in enumerate(fp, 1):
            if not line.strip():
                continue
            rid += 1
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            ext_id, rec = record_from_doc(doc, rid, lineno)
            if ext_id in seen_ids:
                raise InputError(f"line {lineno}: duplicate record id {ext_id!r}")
            seen_ids.add(ext_id)
            store[rid] = rec
            ids[rid] = ext_id
    if not store:
        raise InputError("no records in input")
    return ParsedRecords(store=store, ids=ids)


def _pair_count(sizes: list[int]) -> int:
    return sum(s * (s - 1) // 2 for s in sizes)


def evaluate(
    labels: Mapping[Hashable, Hashable], gold: Mapping[Hashable, Hashable]
) -> EvalReport:
    """Pairwise precision/recall/F1 of ``labels`` against ``gold``.

    Pairs are unordered same-entity record pairs, counted over the gold
    records (which must all be labeled).
    """
    if not gold:
        raise ValueError("empty ground truth")
    missing = [k for k in gold if k not in labels]
    if missing:
        raise ValueError(f"gold records without labels: {missing[:5]}")
    by_emitted: dict[Hashable, int] = {}
    by_gold: dict[Hashable, int] = {}
    by_both: dict[tuple, int] = {}
    for k in gold:
        by_emitted[labels[k]] = by_emitted.get(labels[k], 0) + 1
        by_gold[gold[k]] = by_gold.get(gold[k], 0) + 1
        both = (labels[k], gold[k])
        by_both[both] = by_both.get(both, 0) + 1
    emitted = _pair_count(list(by_emitted.values()))
    gold_pairs = _pair_count(list(by_gold.values()))
    tp = _pair_count(list(by_both.values()))
    precision = tp / emitted if emitted else 0.0
    recall = tp / gold_pairs if gold_pairs else 0.0
    f1 = 0.0 if precision == 0.0 or recall == 0.0 else 2.0 / (1.0 / precision + 1.0 / recall)
    return EvalReport(
        precision=precision,
        recall=recall,
        f1=f1,
        true_pairs=tp,
        emitted_pairs=emitted,
        gold_pairs=gold_pairs,
    )


def load_labels(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fp:
        for lineno, line in enumerate(fp, 1):
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
                out[str(doc["id"])] = str(doc["entity"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise InputError(f"line {lineno}: bad label line ({exc})") from exc
    if not out:
        raise InputError("no labels in file")
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entres",
        description="Resolve heterogeneous records to entities and emit labels.",
    )
    parser.add_argument("--input", required=True, help="JSON-lines record file")
    parser.add_argument("--delta", type=float, default=0.5, help="record similarity threshold")
    parser.add_argument("--xi", type=float, default=0.5, help="value similarity threshold")
    parser.add_argument("--q", type=int, default=2, help="gram length")
    parser.add_argument("--rho", type=float, default=0.6, help="vote error-probability threshold")
    parser.add_argument("--prior", type=float, default=0.8, help="prediction correctness prior")
    parser.add_argument("--max-iters", type=int, default=None, help="iteration cap (default: record count)")
    parser.add_argument("--ground-truth", default=None, help="gold labels (same format as output)")
    parser.add_argument("--emit-matchings", default=None, help="write promoted schema matchings here")
    parser.add_argument("--dump-index", default=None, help="write the freshly built index here")
    parser.add_argument("--out", default=None, help="label output path (default stdout)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not (0.0 < args.delta <= 1.0):
        parser.error("--delta must lie in (0, 1]")
    if not (0.0 < args.xi <= 1.0):
        parser.error("--xi must lie in (0, 1]")
    if args.q < 1:
        parser.error("--q must be >= 1")
    if not (0.0 < args.rho < 1.0):
        parser.error("--rho must lie in (0, 1)")
    if not (0.5 < args.prior <= 1.0):
        parser.error("--prior must lie in (0.5, 1]")
    if args.max_iters is not None and args.max_iters < 1:
        parser.error("--max-iters must be >= 1")

    try:
        parsed = parse_input(args.input)
    except (OSError, InputError) as exc:
        print(f"entres: {exc}", file=sys.stderr)
        return 1

    config = EngineConfig(
        delta=args.delta,
        xi=args.xi,
        q=args.q,
        rho=args.rho,
        prior=args.prior,
        max_iterations=args.max_iters,
    )

    if args.dump_index:
        index = build_index(parsed.store, config.xi, config.q)
        with open(args.dump_index, "w", encoding="utf-8") as fp:
            index.dump_jsonl(fp)

    result = run(parsed.store, config)
    if not result.converged:
        print(
            f"entres: warning: no fixpoint within {result.iterations} iterations; "
            "emitting partial result",
            file=sys.stderr,
        )

    def write_labels(fp: IO[str]) -> None:
        for rid in sorted(parsed.ids):
            entity = parsed.ids[result.labels[rid]]
            fp.write(json.dumps({"id": parsed.ids[rid], "entity": entity}) + "\n")

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fp:
            write_labels(fp)
    else:
        write_labels(sys.stdout)

    if args.emit_matchings:
        with open(args.emit_matchings, "w", encoding="utf-8") as fp:
            seen_pairs = set()
            for promo in result.promoted:
                if promo.as_pair() in seen_pairs:
                    continue
                seen_pairs.add(promo.as_pair())
                fp.write(
                    json.dumps(
                        {
                            "source_a": promo.a.source,
                            "attr_a": promo.a.attr,
                            "source_b": promo.b.source,
                            "attr_b": promo.b.attr,
                            "votes": promo.votes,
                            "p_error_upper": promo.p_error_upper,
                        }
                    )
                    + "\n"
                )

    if args.ground_truth:
        try:
            gold = load_labels(args.ground_truth)
            labels = {parsed.ids[rid]: parsed.ids[root] for rid, root in result.labels.items()}
            report = evaluate(labels, gold)
        except (OSError, InputError, ValueError) as exc:
            print(f"entres: {exc}", file=sys.stderr)
            return 1
        report_fp = sys.stdout if args.out else sys.stderr
        json.dump(report.as_dict(), report_fp)
        report_fp.write("\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
