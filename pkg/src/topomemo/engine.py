"""Key-value memory over navigation episodes with a wake/sleep driver.

Wake answers queries read-only (scaffold lookup, then retrieve+adapt,
then full search) and buffers every successful walk.  Sleep replays the
buffer: walks are closed into cycles, validated for persistent
nontriviality, decomposed, consolidated, stored, and memoized into the
next-hop scaffold.  The alternation is the concurrency contract: sleep
is the only writer.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import Chain, ChainComplex, Filtration
from .errors import AdaptationFailed, KeyAbsent, NotACycle, Unreachable
from .homology import HomologyBasis, coordinates, homology_basis, persists
from .parity import parity_profile
from .search import (
    GraphView,
    NavigationTask,
    ScaffoldTable,
    Trajectory,
    WorkingComplex,
    bfs_shortest,
    close_cycle,
    condense_to_scaffold,
    dp_lookup,
    savitch_reach,
)
from .traces import (
    TraceBundle,
    consolidate,
    conditional_entropy,
    decompose_trace,
    extract_backbone,
    joint_uncertainty as _pairs_uncertainty,
)
from .traces import ConsolidatedTrace


@dataclass(frozen=True, order=True)
class ContextKey:
    """Query context: endpoints plus an optional class signature.

    ``class_signature=None`` is a wildcard (query side): the Hamming
    term contributes nothing.  Keys are totally ordered so retrieval
    ties break deterministically.
    """

    endpoints: Tuple[int, int]
    class_signature: Optional[Tuple[int, ...]] = None

    def sort_key(self) -> Tuple:
        return (self.endpoints, self.class_signature or ())


@dataclass(frozen=True)
class ContentValue:
    """Stored content: a walk, its consolidated trace, and its cost.

    ``return_edge`` is the tagged virtual edge that closed the walk;
    it never appears in answered paths.
    """

    path: Tuple[int, ...]
    ltm: Optional[ConsolidatedTrace]
    cost: int
    vertices: Tuple[int, ...] = ()
    return_edge: Optional[int] = None


def key_distance(query: ContextKey, key: ContextKey) -> int:
    """Endpoint mismatch penalty (2 per endpoint) plus signature Hamming."""
    dist = 0
    if query.endpoints[0] != key.endpoints[0]:
        dist += 2
    if query.endpoints[1] != key.endpoints[1]:
        dist += 2
    if query.class_signature is not None:
        a, b = query.class_signature, key.class_signature or ()
        width = max(len(a), len(b))
        a = tuple(a) + (0,) * (width - len(a))
        b = tuple(b) + (0,) * (width - len(b))
        dist += sum(x != y for x, y in zip(a, b))
    return dist


class MemoryStore:
    """Ordered (key, value) memory with least-recently-retrieved eviction.

    Structural state is the entry mapping; retrieval recency is
    bookkeeping and excluded from snapshots, so read-only phases can
    retrieve without counting as mutation.  Every insertion also logs
    one raw and one consolidated (psi, phi) observation, the multiset
    the uncertainty metrics are computed over.
    """

    def __init__(self, capacity: Optional[int] = None):
        self.entries: Dict[ContextKey, ContentValue] = {}
        self.capacity = capacity
        self._recency: Dict[ContextKey, int] = {}
        self._clock = 0
        self.observations_raw: List[Tuple] = []
        self.observations_consolidated: List[Tuple] = []

    def __len__(self) -> int:
        return len(self.entries)

    def snapshot(self) -> Tuple:
        return tuple((k, v) for k, v in self.entries.items())

    def touch(self, key: ContextKey) -> None:
        self._clock += 1
        self._recency[key] = self._clock

    def insert(
        self,
        key: ContextKey,
        value: ContentValue,
        raw_label: Optional[Tuple] = None,
        consolidated_label: Optional[Tuple] = None,
    ) -> None:
        self.entries[key] = value
        self.touch(key)
        if raw_label is not None:
            self.observations_raw.append((key.endpoints, raw_label))
        if consolidated_label is not None:
            self.observations_consolidated.append((key.endpoints, consolidated_label))
        if self.capacity is not None:
            while len(self.entries) > self.capacity:
                victim = min(self.entries, key=lambda k: (self._recency[k], k.sort_key()))
                del self.entries[victim]
                del self._recency[victim]

    def replace_entries(self, items: Sequence[Tuple[ContextKey, ContentValue]]) -> None:
        """Rebuild the mapping in order, carrying recency over by key."""
        old_recency = self._recency
        self.entries = {}
        self._recency = {}
        for key, value in items:
            self.entries[key] = value
            self._recency[key] = old_recency.get(key, 0)


def retrieve(
    store: MemoryStore, query: ContextKey, tau: int
) -> Optional[Tuple[ContentValue, int]]:
    """Closest stored entry within distance ``tau``; absence is a value.

    Ties break toward the lower-ordered key.  A hit refreshes that
    key's recency.
    """
    best: Optional[Tuple[int, Tuple, ContextKey]] = None
    for key in store.entries:
        d = key_distance(query, key)
        candidate = (d, key.sort_key(), key)
        if best is None or candidate < best:
            best = candidate
    if best is None or best[0] > tau:
        return None
    store.touch(best[2])
    return store.entries[best[2]], best[0]


def _path_vertices(value: ContentValue, graph: GraphView) -> List[int]:
    """Vertex walk of a stored path, reconstructing from edges if needed."""
    if value.vertices:
        return list(value.vertices)
    if not value.path:
        raise AdaptationFailed("cannot orient an empty path without vertices")
    walks = []
    first = sorted(graph.complex.cell(value.path[0]).endpoint_set())
    for start in first:
        walk = [start]
        ok = True
        for eid in value.path:
            ends = sorted(graph.complex.cell(eid).endpoint_set())
            if walk[-1] not in ends:
                ok = False
                break
            walk.append(ends[0] if ends[1] == walk[-1] else ends[1])
        if ok:
            walks.append(walk)
    if not walks:
        raise AdaptationFailed("stored path is not a connected walk")
    return walks[0]


def _bounded_bfs(
    graph: GraphView, start: int, targets: set, budget: int
) -> Tuple[Optional[List[Tuple[int, int]]], int]:
    """BFS until any target vertex is reached; returns (edge walk, pops)."""
    if start in targets:
        return [], 0
    parent: Dict[int, Tuple[int, int]] = {}
    seen = {start}
    queue = deque([start])
    pops = 0
    while queue:
        if pops >= budget:
            return None, pops
        u = queue.popleft()
        pops += 1
        for v, eid in graph.neighbors(u):
            if v in seen:
                continue
            seen.add(v)
            parent[v] = (u, eid)
            if v in targets:
                walk = []
                cur = v
                while cur != start:
                    pu, pe = parent[cur]
                    walk.append((cur, pe))
                    cur = pu
                walk.reverse()
                return walk, pops
            queue.append(v)
    return None, pops


def adapt(
    candidate: ContentValue,
    query: ContextKey,
    graph: GraphView,
    budget: int,
) -> Tuple[ContentValue, int]:
    """Splice the query endpoints onto the candidate walk.

    Endpoints already on the walk cost nothing; otherwise a bounded
    breadth-first repair connects each endpoint to its nearest walk
    vertex.  Returns the repaired value and the expansions spent.
    Raises ``AdaptationFailed`` when the budget runs out first.
    """
    s, t = query.endpoints
    walk = _path_vertices(candidate, graph)
    spent = 0
    prefix: List[Tuple[int, int]] = []
    suffix: List[Tuple[int, int]] = []
    if s in walk:
        pos_s = walk.index(s)
    else:
        found, pops = _bounded_bfs(graph, s, set(walk), budget - spent)
        spent += pops
        if found is None:
            raise AdaptationFailed(f"no path from {s} to the stored walk in budget")
        prefix = found
        pos_s = walk.index(prefix[-1][0])
    if t in walk:
        pos_t = walk.index(t)
    else:
        found, pops = _bounded_bfs(graph, t, set(walk), budget - spent)
        spent += pops
        if found is None:
            raise AdaptationFailed(f"no path from {t} to the stored walk in budget")
        suffix = found
        pos_t = walk.index(suffix[-1][0])

    if pos_s <= pos_t:
        mid_vertices = walk[pos_s : pos_t + 1]
    else:
        mid_vertices = list(reversed(walk[pos_t : pos_s + 1]))
    mid_edges = []
    for a, b in zip(mid_vertices, mid_vertices[1:]):
        eid = graph.edge_between(a, b)
        if eid is None:
            raise AdaptationFailed(f"stored walk edge {a}-{b} is gone")
        mid_edges.append(eid)

    # prefix runs s -> hit vertex; suffix (reversed) runs hit vertex -> t
    vertices = [s] + [v for v, _ in prefix]
    edges = [e for _, e in prefix]
    vertices.extend(mid_vertices[1:])
    edges.extend(mid_edges)
    if suffix:
        vertices.extend([v for v, _ in suffix[:-1]][::-1] + [t])
        edges.extend([e for _, e in suffix][::-1])

    unchanged = tuple(edges) == tuple(candidate.path)
    value = ContentValue(
        path=tuple(edges),
        ltm=candidate.ltm if unchanged else None,
        cost=len(edges),
        vertices=tuple(vertices),
        return_edge=candidate.return_edge if unchanged else None,
    )
    return value, spent


def _closed_chain(value: ContentValue, complex: ChainComplex) -> Chain:
    """Chain of the walk's edges plus its recorded virtual return edge."""
    support: set = set()
    for eid in value.path:
        support ^= {eid}
    if value.vertices and value.vertices[0] != value.vertices[-1]:
        if value.return_edge is None:
            raise NotACycle("open walk has no recorded return edge")
        support ^= {value.return_edge}
    return complex.chain(1, support)


def bootstrap(
    phi: ContentValue,
    psi: ContextKey,
    basis: HomologyBasis,
    bundle: TraceBundle,
) -> ContentValue:
    """One structural-recurrence step: close, decompose, consolidate.

    Already-consolidated values are a fixed point and pass through
    unchanged.
    """
    if phi.ltm is not None:
        return phi
    chain = _closed_chain(phi, basis.complex)
    trace = decompose_trace(chain, bundle)
    cons = consolidate(trace, basis)
    return replace(phi, ltm=cons)


def half_step_consistency(
    store: MemoryStore,
    key: ContextKey,
    graph: GraphView,
    basis: HomologyBasis,
    bundle: TraceBundle,
) -> bool:
    """Does retrieve-then-adapt still recover the recorded class?

    Compares the class of the adapted walk's closure, measured in the
    current complex, against the class vector recorded at
    consolidation time.  A mismatch signals a stale entry (for
    example, a filling face killed the class).
    """
    if key not in store.entries:
        raise KeyAbsent(f"key {key} not stored")
    hit = retrieve(store, key, tau=0)
    if hit is None:
        raise KeyAbsent(f"key {key} not retrievable at tau=0")
    value, _ = hit
    adapted, _ = adapt(value, key, graph, budget=0)
    current = coordinates(_closed_chain(adapted, basis.complex), basis).a
    recorded = bootstrap(value, key, basis, bundle).ltm.class_vector
    return tuple(current) == tuple(recorded)


@dataclass
class QueryAnswer:
    query: Tuple[int, int]
    status: str  # scaffold | retrieved | searched | unreachable
    trajectory: Optional[Trajectory]
    expansions: int


@dataclass(frozen=True)
class AmortizationReport:
    full_cost: int
    retrieval_cost: int
    epsilon: int
    retrieved_length: int
    optimal_length: int


class WakeSleepDriver:
    """Owns the working complex, store, and scaffold across epochs."""

    def __init__(
        self,
        graph: ChainComplex,
        band: Tuple[float, float] = (0.0, 0.0),
        tau: int = 4,
        adapt_budget: Optional[int] = None,
        savitch_k: Optional[int] = None,
        capacity: Optional[int] = None,
    ):
        self.working = WorkingComplex(graph)
        self.store = MemoryStore(capacity=capacity)
        self.scaffold = ScaffoldTable()
        self.band = band
        self.tau = tau
        self.savitch_k = savitch_k
        n = len(graph.cells_of_dim(0))
        # default splice budget: four times a coarse diameter estimate
        self.adapt_budget = adapt_budget if adapt_budget is not None else 4 * max(1, n)
        self._basis_version = -1
        self._basis: Optional[HomologyBasis] = None

    def basis(self) -> HomologyBasis:
        if self._basis_version != self.working.version:
            self._basis = homology_basis(self.working.complex, 1)
            self._basis_version = self.working.version
        return self._basis

    def bundle(self) -> TraceBundle:
        """Backbone bundle over every stored consolidated trace.

        With no stored traces the bundle is a singleton over the zero
        chain, whose class vector is all zeros, so the backbone is
        empty and decomposition puts everything in the trace-specific
        part.
        """
        basis = self.basis()
        chains = [
            v.ltm.ltm for v in self.store.entries.values() if v.ltm is not None
        ]
        if not chains:
            chains = [self.working.complex.zero_chain(1)]
        return extract_backbone(chains, basis)

    def wake_step(
        self, queries: Sequence[Tuple[int, int]]
    ) -> Tuple[List[QueryAnswer], List[Trajectory]]:
        """Answer queries read-only; collect successes into a buffer.

        Order per query: scaffold lookup, then retrieve+adapt, then
        full search.  Neither the store entries nor the scaffold are
        modified.
        """
        answers: List[QueryAnswer] = []
        buffer: List[Trajectory] = []
        view = self.working.nav_view()
        for s, t in queries:
            hit = dp_lookup(self.scaffold, s, t)
            if hit is not None:
                answers.append(QueryAnswer((s, t), "scaffold", hit, hit.expansions))
                buffer.append(hit)
                continue
            found = retrieve(self.store, ContextKey((s, t)), self.tau)
            if found is not None:
                value, _ = found
                try:
                    adapted, spent = adapt(
                        value, ContextKey((s, t)), view, self.adapt_budget)
                except AdaptationFailed:
                    adapted, spent = None, self.adapt_budget
                if adapted is not None:
                    traj = Trajectory(
                        vertices=tuple(adapted.vertices),
                        edges=tuple(adapted.path),
                        expansions=spent,
                    )
                    answers.append(QueryAnswer((s, t), "retrieved", traj, spent))
                    buffer.append(traj)
                    continue
            task = NavigationTask(self.working.complex, s, t)
            traj = savitch_search_on_view(view, task, self.savitch_k)
            if traj is None:
                probe_k = self.savitch_k or max(1, view.n_vertices)
                answers.append(QueryAnswer((s, t), "unreachable", None, probe_k))
                continue
            answers.append(QueryAnswer((s, t), "searched", traj, traj.expansions))
            buffer.append(traj)
        return answers, buffer

    def sleep_step(self, buffer: Sequence[Trajectory]) -> dict:
        """Replay, validate, consolidate, store, memoize; emit metrics.

        Walks whose closure is trivial or fails the persistence band
        are dropped.  Existing entries are refreshed against the grown
        complex so every stored class vector is current.
        """
        survivors: List[Tuple[Trajectory, Chain]] = []
        for traj in buffer:
            if traj.cost == 0:
                continue
            chain = close_cycle(traj, self.working)
            if chain.is_zero:
                continue
            survivors.append((traj, chain))
        # the complex may have grown; validate against its final state
        filtration = Filtration(self.working.complex)
        basis = self.basis()
        bundle = self.bundle()
        kept: List[Tuple[Trajectory, Chain]] = []
        for traj, chain in survivors:
            refreshed = self.working.complex.chain(1, chain.support)
            if persists(refreshed, filtration, self.band):
                kept.append((traj, refreshed))

        # refresh existing entries under the current complex
        refreshed_items: List[Tuple[ContextKey, ContentValue]] = []
        for key, value in self.store.entries.items():
            chain = _closed_chain(value, self.working.complex)
            trace = decompose_trace(chain, bundle)
            cons = consolidate(trace, basis)
            new_key = ContextKey(key.endpoints, cons.class_vector)
            refreshed_items.append((new_key, replace(value, ltm=cons)))
        self.store.replace_entries(refreshed_items)

        for traj, chain in kept:
            trace = decompose_trace(chain, bundle)
            cons = consolidate(trace, basis)
            raw_label = tuple(sorted(chain.support))
            cons_label = tuple(cons.class_vector)
            key = ContextKey((traj.source, traj.target), cons.class_vector)
            value = ContentValue(
                path=tuple(traj.edges),
                ltm=cons,
                cost=traj.cost,
                vertices=tuple(traj.vertices),
                return_edge=self.working.virtual_edge_for(traj.source, traj.target),
            )
            self.store.insert(key, value, raw_label, cons_label)
            condense_to_scaffold(self.scaffold, traj, cons.class_vector)

        profile = parity_profile(self.working.complex)
        raw_pairs = self.store.observations_raw
        cons_pairs = self.store.observations_consolidated
        h_raw = conditional_entropy(raw_pairs, "psi") if raw_pairs else 0.0
        h_cons = conditional_entropy(cons_pairs, "psi") if cons_pairs else 0.0
        uncertainty = (
            _pairs_uncertainty(cons_pairs) if cons_pairs else 0.0
        )
        return {
            "chi": profile.chi,
            "capacity": profile.capacity,
            "phi_topo": profile.phi_topo,
            "U": uncertainty,
            "store_size": len(self.store),
            "scaffold_size": len(self.scaffold),
            "h_raw": h_raw,
            "h_consolidated": h_cons,
        }

    def half_step_all(self) -> bool:
        """Half-step consistency over every stored entry."""
        view = self.working.nav_view()
        basis = self.basis()
        bundle = self.bundle()
        return all(
            half_step_consistency(self.store, key, view, basis, bundle)
            for key in self.store.entries
        )


def savitch_search_on_view(
    view: GraphView, task: NavigationTask, k: Optional[int]
) -> Optional[Trajectory]:
    """Search on a prebuilt view (so virtual edges stay excluded)."""
    budget = k if k is not None else max(1, view.n_vertices)
    path, stats = savitch_reach(view, task.source, task.target, budget)
    if path is None:
        return None
    edges = tuple(view.edge_between(a, b) for a, b in zip(path, path[1:]))
    return Trajectory(tuple(path), edges, stats.expansions)


def amortization_gap(
    store: MemoryStore,
    scaffold: ScaffoldTable,
    query: Tuple[int, int],
    graph: GraphView,
    tau: int = 4,
    adapt_budget: int = 256,
    savitch_k: Optional[int] = None,
) -> AmortizationReport:
    """Measure the cost and loss gap of answering via memory.

    ``full_cost`` is a fresh bisection search; ``retrieval_cost`` is
    the cheapest memory route (scaffold, then retrieve+adapt, then the
    fallback search); ``epsilon`` is the answered walk length over the
    breadth-first optimum.
    """
    s, t = query
    optimal = bfs_shortest(graph, s, t)
    if optimal is None:
        raise Unreachable(f"no path between {s} and {t}")
    k = savitch_k if savitch_k is not None else max(1, graph.n_vertices)
    path, stats = savitch_reach(graph, s, t, k)
    if path is None:
        raise Unreachable(f"no path within {k} steps between {s} and {t}")
    full_cost = stats.expansions
    full_len = len(path) - 1

    hit = dp_lookup(scaffold, s, t)
    if hit is not None:
        retrieved_len, retrieval_cost = hit.cost, hit.expansions
    else:
        found = retrieve(store, ContextKey((s, t)), tau)
        adapted = None
        spent = 0
        if found is not None:
            try:
                adapted, spent = adapt(found[0], ContextKey((s, t)), graph, adapt_budget)
            except AdaptationFailed:
                adapted = None
        if adapted is not None:
            retrieved_len, retrieval_cost = adapted.cost, spent
        else:
            retrieved_len, retrieval_cost = full_len, full_cost
    return AmortizationReport(
        full_cost=full_cost,
        retrieval_cost=retrieval_cost,
        epsilon=retrieved_len - optimal.cost,
        retrieved_length=retrieved_len,
        optimal_length=optimal.cost,
    )
