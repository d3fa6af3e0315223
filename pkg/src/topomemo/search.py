"""Recursive-bisection search, cycle closure, and the memoized scaffold.

Search answers reachability-within-k by midpoint bisection, trading
time for a logarithmic stack.  A successful trajectory is closed into a
cycle by a tagged virtual return edge, and validated trajectories are
condensed into a next-hop table so repeat queries become lookups.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .complexes import Cell, Chain, ChainComplex, build_complex
from .errors import ConfigInvalid, CycleConflict, InvalidTrajectory


@dataclass(frozen=True)
class NavigationTask:
    graph: ChainComplex
    source: int
    target: int
    rng_seed: int = 0

    def __post_init__(self):
        for v in (self.source, self.target):
            if not self.graph.has_cell(v) or self.graph.cell(v).dim != 0:
                raise InvalidTrajectory(f"vertex {v} not in graph")


@dataclass(frozen=True)
class Trajectory:
    """A walk: vertex sequence, edge ids, and the search effort spent."""

    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]
    expansions: int = 0

    def __post_init__(self):
        if len(self.edges) != max(0, len(self.vertices) - 1):
            raise InvalidTrajectory("edge count must be vertex count - 1")

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def target(self) -> int:
        return self.vertices[-1]

    @property
    def cost(self) -> int:
        return len(self.edges)


class GraphView:
    """Adjacency view of a dim <= 1 complex; loops are not traversable."""

    __slots__ = ("complex", "adjacency", "vertex_ids", "_edge_between")

    def __init__(self, complex: ChainComplex, exclude_edges: frozenset = frozenset()):
        self.complex = complex
        adjacency: Dict[int, List[Tuple[int, int]]] = {
            c.id: [] for c in complex.cells_of_dim(0)
        }
        edge_between: Dict[Tuple[int, int], int] = {}
        for edge in complex.cells_of_dim(1):
            if edge.id in exclude_edges:
                continue
            ends = sorted(edge.endpoint_set())
            if len(ends) != 2:
                continue
            u, v = ends
            adjacency[u].append((v, edge.id))
            adjacency[v].append((u, edge.id))
            key = (u, v)
            if key not in edge_between or edge.id < edge_between[key]:
                edge_between[key] = edge.id
        for lst in adjacency.values():
            lst.sort()
        self.adjacency = adjacency
        self.vertex_ids = tuple(sorted(adjacency))
        self._edge_between = edge_between

    def neighbors(self, v: int) -> List[Tuple[int, int]]:
        return self.adjacency.get(v, [])

    def edge_between(self, u: int, v: int) -> Optional[int]:
        return self._edge_between.get((min(u, v), max(u, v)))

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_ids)


@dataclass
class SearchStats:
    expansions: int = 0
    max_depth: int = 0
    max_live_midpoints: int = 0


def savitch_reach(
    graph: GraphView, source: int, target: int, k: int
) -> Tuple[Optional[List[int]], SearchStats]:
    """Midpoint-bisection reachability within ``k`` steps.

    Midpoints are tried in ascending vertex id; results are memoized
    per (u, v, k) within this call only, and every invocation (memo
    hits included) counts as one expansion.  The recursion depth is
    asserted against ceil(log2 k) + 1.
    """
    stats = SearchStats()
    depth_bound = max(1, math.ceil(math.log2(k)) + 1) if k > 1 else 1
    memo: Dict[Tuple[int, int, int], Optional[List[int]]] = {}
    vertices = graph.vertex_ids
    edge_map = graph._edge_between
    live_midpoints = [0]
    missing = object()
    memo_get = memo.get

    def reach(u: int, v: int, budget: int, depth: int) -> Optional[List[int]]:
        stats.expansions += 1
        if depth > stats.max_depth:
            stats.max_depth = depth
        assert depth <= depth_bound, "bisection depth exceeded its bound"
        if u == v:
            return [u]
        key = (u, v, budget)
        hit = memo_get(key, missing)
        if hit is not missing:
            return hit
        if (u, v) in edge_map or (v, u) in edge_map:
            memo[key] = [u, v]
            return [u, v]
        if budget <= 1:
            memo[key] = None
            return None
        result = None
        live_midpoints[0] += 1
        if live_midpoints[0] > stats.max_live_midpoints:
            stats.max_live_midpoints = live_midpoints[0]
        half_up = (budget + 1) // 2
        half_down = budget // 2
        next_depth = depth + 1
        for m in vertices:
            left = reach(u, m, half_up, next_depth)
            if left is None:
                continue
            right = reach(m, v, half_down, next_depth)
            if right is not None:
                result = left + right[1:]
                break
        live_midpoints[0] -= 1
        memo[key] = result
        return result

    path = reach(source, target, k, 1)
    return path, stats


def savitch_search(task: NavigationTask, k: Optional[int] = None) -> Optional[Trajectory]:
    """Search for a walk of at most ``k`` edges; default k = |V|."""
    graph = GraphView(task.graph)
    if k is None:
        k = max(1, graph.n_vertices)
    if k < 1:
        raise InvalidTrajectory("k must be at least 1")
    path, stats = savitch_reach(graph, task.source, task.target, k)
    if path is None:
        return None
    edges = tuple(graph.edge_between(a, b) for a, b in zip(path, path[1:]))
    return Trajectory(vertices=tuple(path), edges=edges, expansions=stats.expansions)


def bfs_shortest(graph: GraphView, source: int, target: int) -> Optional[Trajectory]:
    """Breadth-first shortest path; the exactness oracle for the search."""
    from collections import deque

    if source == target:
        return Trajectory((source,), (), 0)
    parent: Dict[int, Tuple[int, int]] = {}
    seen = {source}
    queue = deque([source])
    pops = 0
    while queue:
        u = queue.popleft()
        pops += 1
        for v, eid in graph.neighbors(u):
            if v in seen:
                continue
            seen.add(v)
            parent[v] = (u, eid)
            if v == target:
                path_v = [v]
                path_e = []
                while path_v[-1] != source:
                    pu, pe = parent[path_v[-1]]
                    path_e.append(pe)
                    path_v.append(pu)
                return Trajectory(
                    tuple(reversed(path_v)), tuple(reversed(path_e)), pops)
            queue.append(v)
    return None


class WorkingComplex:
    """A graph that grows tagged virtual return edges as loops close.

    Virtual edges participate in homology but are excluded from every
    navigation view, so answered paths never contain them.
    """

    def __init__(self, base: ChainComplex):
        self._cells = list(base.all_cells())
        self._virtual: Dict[Tuple[int, int], int] = {}
        self._next_id = max((c.id for c in self._cells), default=-1) + 1
        self._complex = base
        self.version = 0

    @property
    def complex(self) -> ChainComplex:
        return self._complex

    @property
    def virtual_edges(self) -> frozenset:
        return frozenset(self._virtual.values())

    def virtual_edge_for(self, u: int, v: int) -> Optional[int]:
        return self._virtual.get((min(u, v), max(u, v)))

    def ensure_virtual(self, u: int, v: int) -> int:
        """Virtual edge joining u and v, creating it on first use."""
        key = (min(u, v), max(u, v))
        if key in self._virtual:
            return self._virtual[key]
        birth = max(self._complex.cell(u).birth, self._complex.cell(v).birth)
        eid = self._next_id
        self._next_id += 1
        self._cells.append(Cell(eid, 1, key, birth))
        self._virtual[key] = eid
        self._complex = build_complex(self._cells)
        self.version += 1
        return eid

    def nav_view(self) -> GraphView:
        return GraphView(self._complex, exclude_edges=self.virtual_edges)


def close_cycle(traj: Trajectory, working: WorkingComplex) -> Chain:
    """Close a walk into a cycle with a virtual return edge.

    A walk that already cancels to the zero chain (pure backtracking)
    stays zero; an open walk gains the virtual (target, source) edge,
    after which the result is always a cycle.
    """
    support: Set[int] = set()
    for eid in traj.edges:
        support ^= {eid}
    if traj.vertices and traj.source != traj.target:
        support ^= {working.ensure_virtual(traj.target, traj.source)}
    return working.complex.chain(1, support)


@dataclass
class ScaffoldTable:
    """Memoized next-hop table plus the set of condensed class vectors.

    ``next_hop[(source, target)]`` holds ``(edge_id, next_vertex)``;
    carrying the far endpoint keeps lookups free of graph access.
    """

    next_hop: Dict[Tuple[int, int], Tuple[int, int]] = field(default_factory=dict)
    closed_classes: Set[Tuple[int, ...]] = field(default_factory=set)

    def snapshot(self) -> Tuple:
        return (
            tuple(sorted(self.next_hop.items())),
            tuple(sorted(self.closed_classes)),
        )

    def __len__(self) -> int:
        return len(self.next_hop)


def condense_to_scaffold(
    scaffold: ScaffoldTable,
    traj: Trajectory,
    class_vec: Sequence[int] = (),
) -> ScaffoldTable:
    """Memoize every suffix of the walk; record the class when nonzero.

    Idempotent for identical trajectories; a later walk through the
    same vertex overwrites that vertex's hop.  The merged table is
    validated before mutation and ``CycleConflict`` is raised instead
    of storing a looping hop set.
    """
    target = traj.target
    new_entries: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for i in range(len(traj.edges)):
        new_entries[(traj.vertices[i], target)] = (traj.edges[i], traj.vertices[i + 1])
    merged = {
        key[0]: hop[1]
        for key, hop in scaffold.next_hop.items()
        if key[1] == target
    }
    for (src, _), (_, nxt) in new_entries.items():
        merged[src] = nxt
    for start in merged:
        seen = set()
        cur = start
        while cur != target and cur in merged:
            if cur in seen:
                raise CycleConflict(
                    f"next-hop entries for target {target} would loop at {cur}")
            seen.add(cur)
            cur = merged[cur]
    scaffold.next_hop.update(new_entries)
    vec = tuple(class_vec)
    if any(vec):
        scaffold.closed_classes.add(vec)
    return scaffold


def dp_lookup(
    scaffold: ScaffoldTable, source: int, target: int
) -> Optional[Trajectory]:
    """Follow next-hop entries; expansions equal the hop count exactly."""
    if source == target:
        return Trajectory((source,), (), 0)
    vertices = [source]
    edges: List[int] = []
    seen = {source}
    cur = source
    while cur != target:
        hop = scaffold.next_hop.get((cur, target))
        if hop is None:
            return None
        eid, nxt = hop
        if nxt in seen:
            raise CycleConflict(f"stored hops loop at vertex {nxt}")
        seen.add(nxt)
        vertices.append(nxt)
        edges.append(eid)
        cur = nxt
    return Trajectory(tuple(vertices), tuple(edges), expansions=len(edges))


@dataclass(frozen=True)
class RunConfig:
    """Seeded wake/sleep experiment configuration."""

    family: str
    n: int = 8
    m: int = 8
    p: float = 0.2
    chords: int = 4
    seed: int = 0
    queries: int = 50
    epochs: int = 2
    band: Tuple[float, float] = (0.0, 0.0)
    tau: int = 4
    adapt_budget: Optional[int] = None
    savitch_k: Optional[int] = None

    @staticmethod
    def from_dict(raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigInvalid("config must be a JSON object")
        graph = raw.get("graph")
        if not isinstance(graph, dict) or "family" not in graph:
            raise ConfigInvalid("config needs a graph object with a family")
        family = graph["family"]
        if family not in ("grid", "gnp", "ring_chords"):
            raise ConfigInvalid(f"unknown graph family {family!r}")
        band = raw.get("band", [0.0, 0.0])
        if (not isinstance(band, (list, tuple))) or len(band) != 2:
            raise ConfigInvalid("band must be a two-element list")
        try:
            return RunConfig(
                family=family,
                n=int(graph.get("n", 8)),
                m=int(graph.get("m", graph.get("n", 8))),
                p=float(graph.get("p", 0.2)),
                chords=int(graph.get("chords", 4)),
                seed=int(raw.get("seed", 0)),
                queries=int(raw.get("queries", 50)),
                epochs=int(raw.get("epochs", 2)),
                band=(float(band[0]), float(band[1])),
                tau=int(raw.get("tau", 4)),
                adapt_budget=(
                    None if raw.get("adapt_budget") is None
                    else int(raw["adapt_budget"])
                ),
                savitch_k=(
                    None if raw.get("savitch_k") is None
                    else int(raw["savitch_k"])
                ),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigInvalid(f"bad config value: {exc}") from exc

    def build_graph(self) -> ChainComplex:
        from . import generators

        if self.family == "grid":
            return generators.grid_graph(self.n, self.m)
        if self.family == "gnp":
            return generators.gnp_graph(self.n, self.p, self.seed)
        return generators.ring_with_chords(self.n, self.chords, self.seed)


def run_experiment(config: RunConfig) -> dict:
    """Drive wake/sleep epochs over a seeded graph and query schedule.

    The same seeded query set repeats each epoch, so later epochs hit
    the scaffold.  Returns per-epoch metric dicts plus a CSV summary.
    """
    from .engine import WakeSleepDriver

    graph = config.build_graph()
    view = GraphView(graph)
    rng = random.Random(config.seed)
    vertices = view.vertex_ids
    if not vertices:
        raise ConfigInvalid("graph has no vertices")
    queries = []
    for _ in range(config.queries):
        s = vertices[rng.randrange(len(vertices))]
        t = vertices[rng.randrange(len(vertices))]
        queries.append((s, t))
    driver = WakeSleepDriver(
        graph,
        band=config.band,
        tau=config.tau,
        adapt_budget=config.adapt_budget,
        savitch_k=config.savitch_k,
    )
    epochs = []
    for epoch in range(config.epochs):
        answers, buffer = driver.wake_step(queries)
        wake_expansions = sum(a.expansions for a in answers)
        epsilons = []
        for answer in answers:
            if answer.trajectory is None:
                continue
            oracle = bfs_shortest(driver.working.nav_view(),
                                  answer.query[0], answer.query[1])
            if oracle is not None:
                epsilons.append(answer.trajectory.cost - oracle.cost)
        sleep_metrics = driver.sleep_step(buffer)
        record = {
            "epoch": epoch,
            "expansions": wake_expansions,
            "store_size": sleep_metrics["store_size"],
            "scaffold_size": sleep_metrics["scaffold_size"],
            "chi": sleep_metrics["chi"],
            "capacity": sleep_metrics["capacity"],
            "phi_topo": sleep_metrics["phi_topo"],
            "U": sleep_metrics["U"],
            "epsilon_mean": (
                sum(epsilons) / len(epsilons) if epsilons else 0.0
            ),
            "h_raw": sleep_metrics["h_raw"],
            "h_consolidated": sleep_metrics["h_consolidated"],
            "answered": sum(1 for a in answers if a.trajectory is not None),
            "unreachable": sum(1 for a in answers if a.trajectory is None),
        }
        epochs.append(record)
    csv_lines = ["epoch,expansions,store_size,chi,capacity,phi_topo,U,epsilon_mean"]
    for r in epochs:
        csv_lines.append(
            f"{r['epoch']},{r['expansions']},{r['store_size']},{r['chi']},"
            f"{r['capacity']},{r['phi_topo']},{r['U']!r},{r['epsilon_mean']!r}"
        )
    return {"epochs": epochs, "csv": csv_lines, "driver": driver}
