"""Publication-record ingestion and per-scholar attribute loading."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from itertools import combinations

from .errors import InputError
from .graph import Graph

PUBLICATION_KINDS = ("conference", "journal", "chapter", "book", "other")
CHARACTERISTICS = ("department", "affiliation", "origin", "position")


@dataclass(frozen=True)
class PublicationRecord:
    id: str
    year: int
    kind: str
    authors: tuple[str, ...]


def normalize_author(label: str) -> str:
    """Trim, collapse internal whitespace, case-fold."""
    return " ".join(str(label).split()).casefold()


def _parse_record(obj, lineno: int) -> PublicationRecord:
    if not isinstance(obj, dict):
        raise InputError(f"line {lineno}: record is not a JSON object")
    for key in ("id", "year", "kind", "authors"):
        if key not in obj:
            raise InputError(f"line {lineno}: missing field {key!r}")
    if not isinstance(obj["id"], str):
        raise InputError(f"line {lineno}: id must be a string")
    if not isinstance(obj["year"], int) or isinstance(obj["year"], bool):
        raise InputError(f"line {lineno}: year must be an integer")
    if obj["kind"] not in PUBLICATION_KINDS:
        raise InputError(f"line {lineno}: unknown kind {obj['kind']!r}")
    raw = obj["authors"]
    if not isinstance(raw, list) or not all(isinstance(a, str) for a in raw):
        raise InputError(f"line {lineno}: authors must be a list of strings")
    authors: list[str] = []
    for a in raw:
        norm = normalize_author(a)
        if not norm:
            raise InputError(f"line {lineno}: empty author label")
        if norm not in authors:
            authors.append(norm)
    if not authors:
        raise InputError(f"line {lineno}: empty author list")
    return PublicationRecord(id=obj["id"], year=obj["year"],
                             kind=obj["kind"], authors=tuple(authors))


def parse_publications(path) -> list[PublicationRecord]:
    """Read JSON-lines publication records, in file order.

    One record per line: {"id": str, "year": int, "kind": str,
    "authors": [str, ...]}.  Malformed lines are rejected with their
    1-based line number.
    """
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"line {lineno}: invalid JSON ({exc.msg})") from None
            records.append(_parse_record(obj, lineno))
    return records


def build_coauthorship(pubs) -> Graph:
    """One vertex per distinct normalized author; every unordered author
    pair within a record gains +1 edge weight.  Single-author records add
    the vertex only."""
    labels: list[str] = []
    index: dict[str, int] = {}
    acc: dict[tuple[int, int], int] = {}
    for rec in pubs:
        ids = []
        for a in rec.authors:
            i = index.get(a)
            if i is None:
                i = len(labels)
                index[a] = i
                labels.append(a)
            ids.append(i)
        for x, y in combinations(ids, 2):
            key = (x, y) if x < y else (y, x)
            acc[key] = acc.get(key, 0) + 1
    keys = sorted(acc)
    return Graph(labels,
                 [k[0] for k in keys],
                 [k[1] for k in keys],
                 [float(acc[k]) for k in keys],
                 [acc[k] for k in keys])


@dataclass(frozen=True)
class AttributeTable:
    """label -> {characteristic: value-or-None} with unique labels."""

    rows: dict

    def get(self, label: str, characteristic: str):
        if characteristic not in CHARACTERISTICS:
            raise InputError(f"unknown characteristic {characteristic!r}")
        rec = self.rows.get(label)
        if rec is None:
            return None
        return rec[characteristic]

    def labels(self):
        return self.rows.keys()

    def __len__(self):
        return len(self.rows)


def load_attributes(path) -> AttributeTable:
    """Read the attribute CSV (header id,department,affiliation,origin,
    position).  Blank cells become None; values are kept verbatim after
    trimming."""
    expected = {"id", *CHARACTERISTICS}
    rows: dict = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise InputError("attribute file is empty")
        got = set(reader.fieldnames)
        missing = expected - got
        if missing:
            raise InputError(f"missing header column(s): {', '.join(sorted(missing))}")
        extra = got - expected
        if extra:
            raise InputError(f"unexpected header column(s): {', '.join(sorted(extra))}")
        for rec in reader:
            ident = (rec["id"] or "").strip()
            if not ident:
                raise InputError("blank id cell")
            if ident in rows:
                raise InputError(f"duplicate id {ident!r}")
            rows[ident] = {
                ch: ((rec[ch] or "").strip() or None) for ch in CHARACTERISTICS
            }
    return AttributeTable(rows=rows)


def attribute_frequencies(table: AttributeTable, characteristic: str):
    """(value, count) pairs, nulls excluded, count descending then value
    ascending."""
    if characteristic not in CHARACTERISTICS:
        raise InputError(f"unknown characteristic {characteristic!r}")
    counts: dict[str, int] = {}
    for rec in table.rows.values():
        val = rec[characteristic]
        if val is None:
            continue
        counts[val] = counts.get(val, 0) + 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
