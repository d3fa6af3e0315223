"""Cellular sheaves on graphs: coboundary, cohomology, gluing, recurrence.

Stalks are GF(2) vector spaces; restriction matrices are tuples of int
bitmask rows (row r is the r-th output coordinate as a mask over the
vertex stalk).  The unsigned coboundary on an edge (u, v) is
R_u x_u + R_v x_v, which is the right convention over GF(2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple

from . import _gf2
from .complexes import BirthLike, Chain, ChainComplex, Filtration
from .errors import (
    BandEmpty,
    CoverageGap,
    InvalidSheaf,
    InvalidTrajectory,
    MissingRestriction,
    NotClosed,
)
from .homology import persists

Matrix = Tuple[int, ...]  # rows as bitmasks


def mat_vec(matrix: Matrix, vec: int) -> int:
    """GF(2) matrix-vector product on bitmask rows."""
    out = 0
    for r, row in enumerate(matrix):
        if (row & vec).bit_count() & 1:
            out |= 1 << r
    return out


def _edge_endpoints(base: ChainComplex, edge_id: int) -> Tuple[int, int]:
    ends = sorted(base.cell(edge_id).endpoint_set())
    if len(ends) != 2:
        raise InvalidSheaf(
            f"edge {edge_id} must have two distinct endpoints for a sheaf base")
    return ends[0], ends[1]


@dataclass(frozen=True)
class CellularSheaf:
    """Stalks and restriction maps over a graph base.

    ``restriction[(vertex, edge)]`` maps the vertex stalk into the edge
    stalk.  Every incidence of the base graph needs a map; shapes are
    validated eagerly.
    """

    base: ChainComplex
    stalk_dim: Mapping[int, int]
    restriction: Mapping[Tuple[int, int], Matrix]

    def __post_init__(self):
        if self.base.max_dim > 1:
            raise InvalidSheaf("sheaf bases are graphs (dim <= 1)")
        for cell in self.base.all_cells():
            if cell.id not in self.stalk_dim:
                raise InvalidSheaf(f"no stalk dimension for cell {cell.id}")
            if self.stalk_dim[cell.id] < 0:
                raise InvalidSheaf(f"negative stalk dimension on cell {cell.id}")
        for edge in self.base.cells_of_dim(1):
            u, v = _edge_endpoints(self.base, edge.id)
            for vertex in (u, v):
                matrix = self.restriction.get((vertex, edge.id))
                if matrix is None:
                    raise MissingRestriction(
                        f"no restriction for vertex {vertex} on edge {edge.id}")
                if len(matrix) != self.stalk_dim[edge.id]:
                    raise InvalidSheaf(
                        f"restriction ({vertex},{edge.id}) has {len(matrix)} rows,"
                        f" edge stalk is {self.stalk_dim[edge.id]}")
                limit = 1 << self.stalk_dim[vertex]
                if any(row >= limit for row in matrix):
                    raise InvalidSheaf(
                        f"restriction ({vertex},{edge.id}) row exceeds vertex stalk")

    def vertices(self) -> Tuple[int, ...]:
        return tuple(c.id for c in self.base.cells_of_dim(0))

    def edges(self) -> Tuple[int, ...]:
        return tuple(c.id for c in self.base.cells_of_dim(1))

    def endpoints(self, edge_id: int) -> Tuple[int, int]:
        return _edge_endpoints(self.base, edge_id)


def constant_sheaf(base: ChainComplex, dim: int = 1) -> CellularSheaf:
    """Identity restrictions, equal stalks everywhere."""
    identity = tuple(1 << i for i in range(dim))
    stalks = {c.id: dim for c in base.all_cells()}
    restriction = {}
    for edge in base.cells_of_dim(1):
        u, v = _edge_endpoints(base, edge.id)
        restriction[(u, edge.id)] = identity
        restriction[(v, edge.id)] = identity
    return CellularSheaf(base=base, stalk_dim=stalks, restriction=restriction)


def coboundary(sheaf: CellularSheaf, assignment: Mapping[int, int]) -> Dict[int, int]:
    """Edgewise coboundary of a total vertex assignment."""
    for v in sheaf.vertices():
        if v not in assignment:
            raise CoverageGap(f"assignment missing vertex {v}")
    out: Dict[int, int] = {}
    for e in sheaf.edges():
        u, v = sheaf.endpoints(e)
        out[e] = mat_vec(sheaf.restriction[(u, e)], assignment[u]) ^ mat_vec(
            sheaf.restriction[(v, e)], assignment[v]
        )
    return out


def _delta_rows(sheaf: CellularSheaf) -> Tuple[List[int], int, Dict[int, int]]:
    """Coboundary matrix rows over the concatenated vertex stalks.

    Returns (rows, total C0 dimension, vertex offset map); one row per
    edge-stalk coordinate.
    """
    offsets: Dict[int, int] = {}
    pos = 0
    for v in sheaf.vertices():
        offsets[v] = pos
        pos += sheaf.stalk_dim[v]
    rows: List[int] = []
    for e in sheaf.edges():
        u, v = sheaf.endpoints(e)
        r_u = sheaf.restriction[(u, e)]
        r_v = sheaf.restriction[(v, e)]
        for r in range(sheaf.stalk_dim[e]):
            rows.append((r_u[r] << offsets[u]) | (r_v[r] << offsets[v]))
    return rows, pos, offsets


def sheaf_cohomology(sheaf: CellularSheaf) -> Tuple[int, int]:
    """(h0, h1) = (dim ker delta, dim C1 - rank delta)."""
    rows, c0_dim, _ = _delta_rows(sheaf)
    c1_dim = sum(sheaf.stalk_dim[e] for e in sheaf.edges())
    rank = _gf2.rank(rows, c0_dim)
    return c0_dim - rank, c1_dim - rank


@dataclass(frozen=True)
class LocalSection:
    """A vertex assignment over part of the base."""

    domain: frozenset
    values: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "domain", frozenset(self.domain))
        if set(self.values) != set(self.domain):
            raise CoverageGap("section values must be defined exactly on the domain")


@dataclass(frozen=True)
class GluingResult:
    gluable: bool
    global_section: Optional[Dict[int, int]]
    obstruction_dim: int
    kept: Tuple[int, ...]


def _violated_edges(
    sheaf: CellularSheaf, sections: Sequence[LocalSection], active: Sequence[int]
) -> Dict[int, Set[int]]:
    """Edges with at least one incompatible pair of covering sections.

    Maps edge id to the set of active section indices participating in
    a violating pair on that edge.
    """
    cover: Dict[int, List[int]] = {}
    for idx in active:
        for v in sections[idx].domain:
            cover.setdefault(v, []).append(idx)
    bad: Dict[int, Set[int]] = {}
    for e in sheaf.edges():
        u, v = sheaf.endpoints(e)
        r_u = sheaf.restriction[(u, e)]
        r_v = sheaf.restriction[(v, e)]
        offenders: Set[int] = set()
        for i in cover.get(u, ()):
            for j in cover.get(v, ()):
                if mat_vec(r_u, sections[i].values[u]) ^ mat_vec(
                    r_v, sections[j].values[v]
                ):
                    offenders.add(i)
                    offenders.add(j)
        if offenders:
            bad[e] = offenders
    return bad


def _vertex_conflicts(
    sections: Sequence[LocalSection], active: Sequence[int]
) -> Dict[int, Set[int]]:
    """Vertices where active sections disagree, with the sections involved."""
    seen: Dict[int, Dict[int, int]] = {}
    for idx in active:
        for v in sections[idx].domain:
            seen.setdefault(v, {})[idx] = sections[idx].values[v]
    return {
        v: set(vals)
        for v, vals in seen.items()
        if len(set(vals.values())) > 1
    }


def _subsheaf_on_vertices(sheaf: CellularSheaf, vertices: Set[int]) -> CellularSheaf:
    cells = [c for c in sheaf.base.cells_of_dim(0) if c.id in vertices]
    kept_edges = []
    for e in sheaf.base.cells_of_dim(1):
        u, v = sheaf.endpoints(e.id)
        if u in vertices and v in vertices:
            kept_edges.append(e)
    base = ChainComplex(cells + kept_edges)
    ids = {c.id for c in cells} | {e.id for e in kept_edges}
    return CellularSheaf(
        base=base,
        stalk_dim={i: sheaf.stalk_dim[i] for i in ids},
        restriction={
            key: m for key, m in sheaf.restriction.items() if key[1] in ids
        },
    )


def glue_sections(
    sheaf: CellularSheaf, locals: Sequence[LocalSection]
) -> GluingResult:
    """Glue local sections into a global one, or report the failure.

    The family glues when overlaps agree and the induced assignment has
    zero coboundary everywhere.  On failure the maximal gluable
    subfamily is approximated greedily: repeatedly drop the section
    involved in the most violated edges (ties broken toward the lowest
    index).  The obstruction dimension is h1 of the sheaf restricted to
    the subgraph induced by the vertices of the originally violated
    edges, and 0 for purely tree-like disagreements.
    """
    covered = set()
    for s in locals:
        covered |= s.domain
    missing = set(sheaf.vertices()) - covered
    if missing:
        raise CoverageGap(f"vertices {sorted(missing)} not covered by any section")

    all_indices = list(range(len(locals)))
    initial_bad = _violated_edges(sheaf, locals, all_indices)
    initial_conflicts = _vertex_conflicts(locals, all_indices)

    if not initial_bad and not initial_conflicts:
        section = {}
        for idx in all_indices:
            for v in locals[idx].domain:
                section.setdefault(v, locals[idx].values[v])
        return GluingResult(
            gluable=True,
            global_section=section,
            obstruction_dim=0,
            kept=tuple(all_indices),
        )

    if initial_bad:
        region = set()
        for e in initial_bad:
            region.update(sheaf.endpoints(e))
        _, obstruction_dim = sheaf_cohomology(_subsheaf_on_vertices(sheaf, region))
    else:
        obstruction_dim = 0

    active = list(all_indices)
    while len(active) > 0:
        bad = _violated_edges(sheaf, locals, active)
        conflicts = _vertex_conflicts(locals, active)
        if not bad and not conflicts:
            break
        scores = {idx: 0 for idx in active}
        for offenders in bad.values():
            for idx in offenders:
                scores[idx] += 1
        for offenders in conflicts.values():
            for idx in offenders:
                scores[idx] += 1
        worst = max(active, key=lambda idx: (scores[idx], -idx))
        active.remove(worst)
    return GluingResult(
        gluable=False,
        global_section=None,
        obstruction_dim=obstruction_dim,
        kept=tuple(active),
    )


def trajectory_chain(
    trajectory: Sequence[int], complex: ChainComplex
) -> Chain:
    """GF(2) edge chain induced by a vertex walk (lowest edge id per hop)."""
    edge_lookup: Dict[Tuple[int, int], int] = {}
    for edge in complex.cells_of_dim(1):
        ends = sorted(edge.endpoint_set())
        if len(ends) != 2:
            continue
        key = (ends[0], ends[1])
        if key not in edge_lookup:
            edge_lookup[key] = edge.id
    ids = []
    for a, b in zip(trajectory, trajectory[1:]):
        key = (min(a, b), max(a, b))
        eid = edge_lookup.get(key)
        if eid is None:
            raise InvalidTrajectory(f"no edge between {a} and {b}")
        ids.append(eid)
    return complex.chain(1, ids)


def content_recurrence(
    trajectory: Sequence[int],
    filtration: Filtration,
    band: Tuple[BirthLike, BirthLike],
) -> bool:
    """First-return recurrence with persistent nontriviality.

    The walk must revisit its start vertex (discrete first-return); the
    loop up to the first return must induce a chain that stays a
    nontrivial class across the band.  A backtracking walk cancels to
    the zero chain and fails.
    """
    if Fraction(band[0]) > Fraction(band[1]):
        raise BandEmpty(f"band ({band[0]}, {band[1]}) is empty")
    if len(trajectory) < 2:
        raise NotClosed("trajectory never leaves its start")
    start = trajectory[0]
    first_return = None
    for i in range(1, len(trajectory)):
        if trajectory[i] == start:
            first_return = i
            break
    if first_return is None:
        raise NotClosed(f"trajectory never returns to {start}")
    prefix = filtration.prefix_at(band[0])
    loop = trajectory[: first_return + 1]
    chain = trajectory_chain(loop, prefix)
    if chain.is_zero:
        return False
    return persists(chain, filtration, band)


def admissible(
    trajectory: Sequence[int],
    sheaf: CellularSheaf,
    locals: Sequence[LocalSection],
    filtration: Filtration,
    band: Tuple[BirthLike, BirthLike],
) -> bool:
    """Context gluing succeeds AND the content loop recurs persistently."""
    glued = glue_sections(sheaf, locals).gluable
    recurrent = content_recurrence(trajectory, filtration, band)
    return glued and recurrent


def effective_edges(e_psi: Sequence[int], e_phi: Sequence[int]) -> frozenset:
    """Edges validated by both the context and the content filter."""
    return frozenset(e_psi) & frozenset(e_phi)
