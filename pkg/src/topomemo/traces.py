"""Episodic trace decomposition and consolidation.

A closed 1-chain splits uniquely into a backbone part (class
coefficients shared by every trace in a bundle), a trace-specific part,
and a boundary residual that carries no homology.  Consolidation drops
the residual, keeping the class; condensation contracts a validated
cycle into a single vertex of the next-level complex.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Sequence, Tuple

from .complexes import Cell, Chain, ChainComplex, build_complex
from .errors import (
    DisconnectedSupport,
    EmptyBundle,
    EmptyStore,
    NotACycle,
    TrivialCycle,
)
from .homology import HomologyBasis, coordinates, homology_basis


@dataclass(frozen=True)
class TraceBundle:
    """A family of closed 1-chains with their shared class backbone.

    The backbone is the componentwise AND of the members' rep
    coefficient vectors: the homology content common to all of them.
    """

    traces: Tuple[Chain, ...]
    basis: HomologyBasis
    backbone: Tuple[int, ...]


@dataclass(frozen=True)
class MemoryTrace:
    raw: Chain
    sigma_coeffs: Tuple[int, ...]
    a_coeffs: Tuple[int, ...]
    noise: Chain

    @property
    def class_vector(self) -> Tuple[int, ...]:
        return tuple(s | a for s, a in zip(self.sigma_coeffs, self.a_coeffs))


@dataclass(frozen=True)
class ConsolidatedTrace:
    ltm: Chain
    class_vector: Tuple[int, ...]


def extract_backbone(traces: Sequence[Chain], basis: HomologyBasis) -> TraceBundle:
    """Backbone = AND of all member class vectors; deterministic."""
    traces = tuple(traces)
    if not traces:
        raise EmptyBundle("a bundle needs at least one trace")
    vectors = [coordinates(t, basis).a for t in traces]
    backbone = tuple(
        0 if any(v[i] == 0 for v in vectors) else 1 for i in range(len(basis.reps))
    )
    return TraceBundle(traces=traces, basis=basis, backbone=backbone)


def decompose_trace(c: Chain, bundle: TraceBundle) -> MemoryTrace:
    """Split a cycle into backbone, trace-specific, and noise parts.

    The three parts XOR back to the input exactly; sigma and a are
    componentwise disjoint; the noise is a pure boundary.
    """
    coords = coordinates(c, bundle.basis)
    sigma = tuple(a & b for a, b in zip(coords.a, bundle.backbone))
    specific = tuple(a & (1 - b) for a, b in zip(coords.a, bundle.backbone))
    return MemoryTrace(
        raw=c, sigma_coeffs=sigma, a_coeffs=specific, noise=coords.boundary_residual
    )


def consolidate(trace: MemoryTrace, basis: HomologyBasis) -> ConsolidatedTrace:
    """Drop the noise term; keep the exact class representative sum."""
    active = trace.class_vector
    ltm = basis.complex.zero_chain(basis.dim)
    for bit, rep in zip(active, basis.reps):
        if bit:
            ltm = ltm + rep
    return ConsolidatedTrace(ltm=ltm, class_vector=active)


def reconstruct(trace: MemoryTrace, basis: HomologyBasis) -> Chain:
    """Sum the three parts back; equals the raw chain for valid traces."""
    out = basis.complex.zero_chain(basis.dim)
    for bit, rep in zip(trace.class_vector, basis.reps):
        if bit:
            out = out + rep
    return out + trace.noise


def semanticize(complex: ChainComplex, cycle: Chain) -> ChainComplex:
    """Contract a validated nontrivial 1-cycle to a single vertex.

    The support vertices merge into one (the minimum id, born at the
    earliest member birth); support edges disappear; other edges are
    re-targeted, except edges turned into loops by the contraction,
    which are dropped.  Higher cells referencing any removed edge are
    dropped too.  Returns a fresh complex; the input is untouched.
    """
    if cycle.dim != 1:
        raise NotACycle("condensation applies to 1-chains")
    basis = homology_basis(complex, 1)
    coords = coordinates(cycle, basis)  # raises NotACycle on open chains
    if not coords.nontrivial:
        raise TrivialCycle("cycle bounds; nothing to condense")
    support_edges = set(cycle.support)
    touched: Dict[int, int] = {}
    for eid in support_edges:
        for v in complex.cell(eid).endpoint_set():
            touched.setdefault(v, v)
    # union-find over the support's endpoints
    def find(x: int) -> int:
        while touched[x] != x:
            touched[x] = touched[touched[x]]
            x = touched[x]
        return x

    for eid in support_edges:
        ends = sorted(complex.cell(eid).endpoint_set())
        for v in ends[1:]:
            touched[find(v)] = find(ends[0])
    roots = {find(v) for v in touched}
    if len(roots) > 1:
        raise DisconnectedSupport(
            f"cycle support splits into {len(roots)} components")
    merged = set(touched)
    new_vertex = min(merged)
    new_birth = min(complex.cell(v).birth for v in merged)

    cells: List[Cell] = []
    removed_edges = set(support_edges)
    for vert in complex.cells_of_dim(0):
        if vert.id not in merged:
            cells.append(vert)
    cells.append(Cell(id=new_vertex, dim=0, boundary=(), birth=new_birth))
    for edge in complex.cells_of_dim(1):
        if edge.id in support_edges:
            continue
        ends = edge.endpoint_set()
        was_loop = len(ends) <= 1
        mapped = tuple(new_vertex if v in merged else v for v in edge.boundary)
        if not was_loop and len(set(mapped)) <= 1 and ends & merged:
            removed_edges.add(edge.id)  # loop created by the contraction
            continue
        cells.append(Cell(id=edge.id, dim=1, boundary=mapped, birth=edge.birth))
    dropped = set(removed_edges)
    for dim in range(2, complex.max_dim + 1):
        for cell in complex.cells_of_dim(dim):
            if set(cell.boundary) & dropped:
                dropped.add(cell.id)
                continue
            cells.append(cell)
    return build_complex(cells)


def _entropy_bits(counts: Iterable[int]) -> float:
    total = sum(counts)
    h = 0.0
    for n in counts:
        if n:
            p = n / total
            h -= p * math.log2(p)
    return h


def conditional_entropy(
    pairs: Sequence[Tuple[Hashable, Hashable]], given: str = "psi"
) -> float:
    """Plug-in H(other | given) in bits over a multiset of (psi, phi) pairs."""
    if given not in ("psi", "phi"):
        raise ValueError("given must be 'psi' or 'phi'")
    idx = 0 if given == "psi" else 1
    total = len(pairs)
    groups: Dict[Hashable, Counter] = defaultdict(Counter)
    for pair in pairs:
        groups[pair[idx]][pair[1 - idx]] += 1
    h = 0.0
    for counter in groups.values():
        weight = sum(counter.values()) / total
        h += weight * _entropy_bits(counter.values())
    return h


def joint_uncertainty(store_or_pairs) -> float:
    """H(psi|phi) + H(phi|psi) in bits; zero iff the pairing is bijective.

    Accepts either a memory store (its consolidated observation log is
    used) or a raw multiset of (psi, phi) pairs.
    """
    pairs = getattr(store_or_pairs, "observations_consolidated", store_or_pairs)
    if not pairs:
        raise EmptyStore("cannot measure uncertainty of an empty store")
    return conditional_entropy(pairs, "phi") + conditional_entropy(pairs, "psi")
