"""Site ingestion, timestamped events and canonical state snapshots.

Map tables (regions, roads, objects) become a fact program: road and
object coordinates are snapped to the nearest region centroid, so the
emitted graph only ever mentions region names. Fact sets are mutated
exclusively through events, and a canonical ordering plus a stable
64-bit digest make any two equal states byte-identical when printed.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    EmptyRegionsTableError,
    KbSyntaxError,
    NonFiniteCoordinateError,
    TableFormatError,
    UnknownObjectKindError,
)
from .parser import GStruct, read_structs
from .terms import Atom, Constant, NumberConstant, Program, format_atom, format_term

log = logging.getLogger(__name__)

# position/3 facts store coordinates in integer milli-units
COORD_SCALE = 1000

RESOURCE_KINDS = ("crane", "truck")

_REGION_HEADER = ["name", "x", "y"]
_ROAD_HEADER = ["x1", "y1", "x2", "y2"]
_OBJECT_HEADER = ["id", "kind", "subtype", "x", "y"]


@dataclass(frozen=True)
class EventRecord:
    timestamp: int
    op: str  # "assert" | "retract"
    fact: Atom


@dataclass(frozen=True)
class Snapshot:
    facts: tuple[Atom, ...]
    digest: int


# ==== canonical form ========================================================

def _atom_sort_key(atom: Atom):
    return (atom.predicate, len(atom.args), tuple(format_term(t) for t in atom.args))


def canonical_facts(facts: Iterable[Atom]) -> tuple[Atom, ...]:
    """Deduplicated facts in canonical order (predicate, arity, args)."""
    return tuple(sorted(set(facts), key=_atom_sort_key))


def snapshot(facts: Iterable[Atom]) -> Snapshot:
    ordered = canonical_facts(facts)
    text = "\n".join(format_atom(a) + "." for a in ordered)
    digest = int.from_bytes(
        hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest(), "big")
    return Snapshot(ordered, digest)


# ==== events ================================================================

def apply_event(state: frozenset[Atom], event: EventRecord) -> tuple[frozenset[Atom], bool]:
    """Apply one assert/retract; the flag reports whether the state changed."""
    if event.op == "assert":
        if event.fact in state:
            return state, False
        return state | {event.fact}, True
    if event.op == "retract":
        if event.fact not in state:
            return state, False
        return state - {event.fact}, True
    raise ValueError(f"unknown event op {event.op!r}")


def _struct_to_fact(node, source: str) -> Atom:
    if isinstance(node, Constant):
        return Atom(node.name)
    if isinstance(node, GStruct):
        args = []
        for arg in node.args:
            if not isinstance(arg, (Constant, NumberConstant)):
                raise KbSyntaxError("event fact must be flat and ground",
                                    source, node.line, node.column)
            args.append(arg)
        return Atom(node.functor, tuple(args))
    raise KbSyntaxError("event fact must be an atom", source)


def parse_events(text: str, source: str = "<events>") -> tuple[EventRecord, ...]:
    """Read an event(T, assert|retract, Fact) timeline file."""
    records = []
    for struct in read_structs(text, source):
        where = (source, struct.line, struct.column)
        if struct.functor != "event" or len(struct.args) != 3:
            raise KbSyntaxError("expected event(T, assert|retract, Fact)", *where)
        t, op, fact = struct.args
        if not isinstance(t, NumberConstant) or t.value < 0:
            raise KbSyntaxError("event timestamp must be a nonnegative integer", *where)
        if not isinstance(op, Constant) or op.name not in ("assert", "retract"):
            raise KbSyntaxError("event op must be assert or retract", *where)
        records.append(EventRecord(t.value, op.name, _struct_to_fact(fact, source)))
    return tuple(records)


# ==== table ingestion =======================================================

def load_tables(regions_path, roads_path, objects_path):
    """Read the three CSV files into plain row tuples (headers validated)."""
    def rows(path, header, caster):
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                first = next(reader)
            except StopIteration:
                raise TableFormatError(f"{path}: missing header row {header}")
            if [c.strip() for c in first] != header:
                raise TableFormatError(f"{path}: expected header {','.join(header)}")
            out = []
            for i, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != len(header):
                    raise TableFormatError(f"{path}:{i}: expected {len(header)} fields")
                out.append(caster(row))
            return out

    def region(row):
        return (row[0], _coord(row[1], row[0]), _coord(row[2], row[0]))

    def road(row):
        return tuple(_coord(v, "road") for v in row)

    def obj(row):
        return (row[0], row[1].strip(), row[2].strip(),
                _coord(row[3], row[0]), _coord(row[4], row[0]))

    return (rows(regions_path, _REGION_HEADER, region),
            rows(roads_path, _ROAD_HEADER, road),
            rows(objects_path, _OBJECT_HEADER, obj))


def _coord(raw, context) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise TableFormatError(f"bad coordinate {raw!r} for {context}")
    if not math.isfinite(value):
        raise NonFiniteCoordinateError(f"non-finite coordinate {raw!r} for {context}")
    return value


def _snap(x: float, y: float, regions: Sequence[tuple[str, float, float]]) -> str:
    """Nearest region centroid; ties go to the lexicographically smaller name."""
    best = None
    for name, rx, ry in regions:
        d = (x - rx) ** 2 + (y - ry) ** 2
        if best is None or d < best[0] or (d == best[0] and name < best[1]):
            best = (d, name)
    return best[1]


def ingest_site(regions: Sequence[tuple[str, float, float]],
                roads: Sequence[tuple[float, float, float, float]],
                objects: Sequence[tuple[str, str, str, float, float]]) -> Program:
    """Build the site fact program from map tables.

    Emits node/1, link/2, position/3 (milli-unit centroid coordinates),
    one crane/2 or truck/2 per object plus its at/2 placement. Output is
    canonical, so row order never matters. Degenerate roads (both ends
    snapping to one region) are dropped with a warning, duplicate roads
    between the same two regions collapse to a single link.
    """
    if not regions:
        raise EmptyRegionsTableError("regions table has no rows")
    for name, x, y in regions:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise NonFiniteCoordinateError(f"non-finite coordinate for region {name!r}")
    names = [r[0] for r in regions]
    if len(set(names)) != len(names):
        dup = sorted(n for n in set(names) if names.count(n) > 1)[0]
        raise TableFormatError(f"duplicate region name {dup!r}")

    facts: list[Atom] = []
    for name, x, y in regions:
        facts.append(Atom("node", (Constant(name),)))
        facts.append(Atom("position", (Constant(name),
                                       NumberConstant(round(x * COORD_SCALE)),
                                       NumberConstant(round(y * COORD_SCALE)))))

    # snap road endpoints, collapse duplicates per unordered region pair
    oriented: dict[frozenset[str], set[tuple[str, str]]] = {}
    row_count: dict[frozenset[str], int] = {}
    for x1, y1, x2, y2 in roads:
        a = _snap(x1, y1, regions)
        b = _snap(x2, y2, regions)
        if a == b:
            log.warning("road (%g,%g)-(%g,%g) collapsed: both endpoints snap to %r; dropped",
                        x1, y1, x2, y2, a)
            continue
        key = frozenset((a, b))
        oriented.setdefault(key, set()).add((a, b))
        row_count[key] = row_count.get(key, 0) + 1
    for pair, orientations in oriented.items():
        if row_count[pair] > 1:
            log.warning("duplicate roads between %s collapsed into one link",
                        " and ".join(repr(n) for n in sorted(pair)))
        a, b = min(orientations)
        facts.append(Atom("link", (Constant(a), Constant(b))))

    seen_ids: set[str] = set()
    for oid, kind, subtype, x, y in objects:
        if kind not in RESOURCE_KINDS:
            raise UnknownObjectKindError(f"object {oid!r} has unknown kind {kind!r}")
        if oid in seen_ids:
            raise TableFormatError(f"duplicate object id {oid!r}")
        seen_ids.add(oid)
        where = _snap(x, y, regions)
        facts.append(Atom(kind, (Constant(oid), Constant(subtype))))
        facts.append(Atom("at", (Constant(oid), Constant(where))))

    return Program(facts=canonical_facts(facts))
