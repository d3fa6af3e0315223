"""Versioned file formats: complexes, graphs, sheaves, sections, state.

Loaders apply the same validation as programmatic construction; a
malformed document surfaces as the matching domain error, never as a
partially repaired object.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

from .complexes import Cell, Chain, ChainComplex, build_complex
from .engine import ContentValue, ContextKey, MemoryStore
from .errors import ConfigInvalid, InvalidSheaf
from .search import ScaffoldTable, WorkingComplex
from .sheaf import CellularSheaf, LocalSection

PathLike = Union[str, Path]

COMPLEX_VERSION = 1
STATE_VERSION = 1


def _birth_out(birth: Fraction) -> Union[int, float]:
    return int(birth) if birth.denominator == 1 else float(birth)


def complex_to_payload(complex: ChainComplex) -> dict:
    return {
        "version": COMPLEX_VERSION,
        "cells": [
            {
                "id": c.id,
                "dim": c.dim,
                "boundary": list(c.boundary),
                "birth": _birth_out(c.birth),
            }
            for c in complex.all_cells()
        ],
    }


def payload_to_complex(payload: dict) -> ChainComplex:
    if not isinstance(payload, dict) or "cells" not in payload:
        raise ConfigInvalid("complex document needs a 'cells' list")
    cells = []
    for raw in payload["cells"]:
        cells.append(
            Cell(
                id=int(raw["id"]),
                dim=int(raw["dim"]),
                boundary=tuple(int(b) for b in raw.get("boundary", [])),
                birth=raw.get("birth", 0),
            )
        )
    return build_complex(cells)


def load_complex(path: PathLike) -> ChainComplex:
    return payload_to_complex(json.loads(Path(path).read_text()))


def dump_complex(complex: ChainComplex, path: PathLike) -> None:
    Path(path).write_text(dumps(complex_to_payload(complex)) + "\n")


def load_graph(path: PathLike) -> ChainComplex:
    """Complex document for .json paths, else 'u v' edge-list text."""
    path = Path(path)
    if path.suffix == ".json":
        return load_complex(path)
    vertices = set()
    edges: List[Tuple[int, int]] = []
    for line_no, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ConfigInvalid(f"{path}:{line_no}: expected 'u v', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        vertices.update((u, v))
        edges.append((u, v))
    cells = [Cell(v, 0) for v in sorted(vertices)]
    eid = max(vertices, default=-1) + 1
    for u, v in edges:
        cells.append(Cell(eid, 1, (u, v)))
        eid += 1
    return build_complex(cells)


def _matrix_from_rows(rows: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    out = []
    for row in rows:
        bits = 0
        for i, x in enumerate(row):
            if int(x) & 1:
                bits |= 1 << i
        out.append(bits)
    return tuple(out)


def _bits_from_list(values: Sequence[int]) -> int:
    bits = 0
    for i, x in enumerate(values):
        if int(x) & 1:
            bits |= 1 << i
    return bits


def load_sheaf(path: PathLike) -> CellularSheaf:
    payload = json.loads(Path(path).read_text())
    if not isinstance(payload, dict) or "base" not in payload:
        raise InvalidSheaf("sheaf document needs an embedded 'base' complex")
    base = payload_to_complex(payload["base"])
    stalks = {int(k): int(v) for k, v in payload.get("stalks", {}).items()}
    restriction = {}
    for entry in payload.get("restrictions", []):
        key = (int(entry["vertex"]), int(entry["edge"]))
        restriction[key] = _matrix_from_rows(entry["matrix"])
    return CellularSheaf(base=base, stalk_dim=stalks, restriction=restriction)


def load_sections(path: PathLike) -> List[LocalSection]:
    payload = json.loads(Path(path).read_text())
    if not isinstance(payload, list):
        raise ConfigInvalid("sections document must be a list")
    out = []
    for raw in payload:
        values = {int(k): _bits_from_list(v) for k, v in raw["values"].items()}
        out.append(LocalSection(domain=frozenset(values), values=values))
    return out


def load_edge_ids(path: PathLike) -> List[int]:
    """A cycle or trace given as a JSON list (or {'edges': [...]})."""
    payload = json.loads(Path(path).read_text())
    if isinstance(payload, dict):
        payload = payload.get("edges")
    if not isinstance(payload, list):
        raise ConfigInvalid("expected a JSON list of edge ids")
    return [int(x) for x in payload]


def load_traces(path: PathLike) -> List[List[int]]:
    payload = json.loads(Path(path).read_text())
    if isinstance(payload, dict):
        payload = payload.get("traces")
    if not isinstance(payload, list):
        raise ConfigInvalid("expected {'traces': [[edge ids], ...]}")
    return [[int(x) for x in trace] for trace in payload]


def dumps(payload) -> str:
    """Canonical JSON: sorted keys, no whitespace drift."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def state_to_payload(working: WorkingComplex, store: MemoryStore,
                     scaffold: ScaffoldTable) -> dict:
    entries = []
    for key, value in store.entries.items():
        entries.append({
            "endpoints": list(key.endpoints),
            "signature": list(key.class_signature or ()),
            "path": list(value.path),
            "vertices": list(value.vertices),
            "cost": value.cost,
            "ltm": sorted(value.ltm.ltm.support) if value.ltm else None,
            "class_vector": list(value.ltm.class_vector) if value.ltm else None,
            "return_edge": value.return_edge,
        })
    return {
        "version": STATE_VERSION,
        "complex": complex_to_payload(working.complex),
        "virtual_edges": sorted(working.virtual_edges),
        "store": entries,
        "scaffold": {
            "next_hop": [
                [s, t, eid, nxt]
                for (s, t), (eid, nxt) in sorted(scaffold.next_hop.items())
            ],
            "closed_classes": sorted(list(v) for v in scaffold.closed_classes),
        },
    }


def save_state(path: PathLike, working: WorkingComplex, store: MemoryStore,
               scaffold: ScaffoldTable) -> None:
    Path(path).write_text(dumps(state_to_payload(working, store, scaffold)) + "\n")


def load_scaffold(path: PathLike) -> ScaffoldTable:
    payload = json.loads(Path(path).read_text())
    scaffold = ScaffoldTable()
    for s, t, eid, nxt in payload.get("scaffold", {}).get("next_hop", []):
        scaffold.next_hop[(int(s), int(t))] = (int(eid), int(nxt))
    for vec in payload.get("scaffold", {}).get("closed_classes", []):
        scaffold.closed_classes.add(tuple(int(x) for x in vec))
    return scaffold
