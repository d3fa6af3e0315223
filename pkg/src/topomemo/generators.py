"""Named fixtures and seeded random generators for complexes and graphs.

Random complexes are valid by construction: higher cells attach along
random nonzero elements of the current cycle space, so the boundary law
holds without repair.  ``corrupt_complex`` then breaks exactly one
incidence for negative tests.
"""

from __future__ import annotations

import random
from typing import List, Optional, Tuple

from . import _gf2
from .complexes import Cell, ChainComplex, build_complex
from .homology import boundary_matrix_rows


def hollow_triangle() -> ChainComplex:
    """Three vertices, three edges: a circle."""
    return build_complex([
        Cell(0, 0), Cell(1, 0), Cell(2, 0),
        Cell(3, 1, (0, 1)), Cell(4, 1, (1, 2)), Cell(5, 1, (0, 2)),
    ])


def filled_triangle() -> ChainComplex:
    """The triangle with its face: a disk."""
    return build_complex([
        Cell(0, 0), Cell(1, 0), Cell(2, 0),
        Cell(3, 1, (0, 1)), Cell(4, 1, (1, 2)), Cell(5, 1, (0, 2)),
        Cell(6, 2, (3, 4, 5)),
    ])


def triangle_filtration_complex() -> ChainComplex:
    """Vertices at t=0, edges at t=1, face at t=2."""
    return build_complex([
        Cell(0, 0, (), 0), Cell(1, 0, (), 0), Cell(2, 0, (), 0),
        Cell(3, 1, (0, 1), 1), Cell(4, 1, (1, 2), 1), Cell(5, 1, (0, 2), 1),
        Cell(6, 2, (3, 4, 5), 2),
    ])


def theta_graph() -> ChainComplex:
    """Two vertices joined by three parallel edges (ids 2, 3, 4)."""
    return build_complex([
        Cell(0, 0), Cell(1, 0),
        Cell(2, 1, (0, 1)), Cell(3, 1, (0, 1)), Cell(4, 1, (0, 1)),
    ])


def theta_filled() -> ChainComplex:
    """Theta graph with a 2-cell filling the loop on edges 2 and 3."""
    return build_complex([
        Cell(0, 0), Cell(1, 0),
        Cell(2, 1, (0, 1)), Cell(3, 1, (0, 1)), Cell(4, 1, (0, 1)),
        Cell(5, 2, (2, 3)),
    ])


def sphere_complex() -> ChainComplex:
    """Boundary of a tetrahedron: 4 vertices, 6 edges, 4 faces."""
    return build_complex([
        Cell(0, 0), Cell(1, 0), Cell(2, 0), Cell(3, 0),
        Cell(4, 1, (0, 1)), Cell(5, 1, (0, 2)), Cell(6, 1, (0, 3)),
        Cell(7, 1, (1, 2)), Cell(8, 1, (1, 3)), Cell(9, 1, (2, 3)),
        Cell(10, 2, (4, 5, 7)), Cell(11, 2, (4, 6, 8)),
        Cell(12, 2, (5, 6, 9)), Cell(13, 2, (7, 8, 9)),
    ])


def torus_complex() -> ChainComplex:
    """2x2 square-grid torus: 4 vertices, 8 edges, 4 faces (16 cells)."""
    h = {(i, j): 4 + 2 * i + j for i in range(2) for j in range(2)}
    u = {(i, j): 8 + 2 * i + j for i in range(2) for j in range(2)}
    vid = lambda i, j: 2 * (i % 2) + (j % 2)
    cells = [Cell(vid(i, j), 0) for i in range(2) for j in range(2)]
    for i in range(2):
        for j in range(2):
            cells.append(Cell(h[(i, j)], 1, (vid(i, j), vid(i, j + 1))))
            cells.append(Cell(u[(i, j)], 1, (vid(i, j), vid(i + 1, j))))
    fid = 12
    for i in range(2):
        for j in range(2):
            cells.append(Cell(
                fid, 2,
                (h[(i, j)], h[((i + 1) % 2, j)], u[(i, j)], u[(i, (j + 1) % 2)]),
            ))
            fid += 1
    return build_complex(cells)


def klein_bottle_complex() -> ChainComplex:
    """Minimal cell structure; over GF(2) every incidence cancels."""
    return build_complex([
        Cell(0, 0),
        Cell(1, 1, (0, 0)), Cell(2, 1, (0, 0)),
        Cell(3, 2, (1, 1, 2, 2)),
    ])


def square_plus_pendant() -> ChainComplex:
    """A 4-cycle on vertices 0..3 plus a pendant edge to vertex 4."""
    return build_complex([
        Cell(0, 0), Cell(1, 0), Cell(2, 0), Cell(3, 0), Cell(4, 0),
        Cell(5, 1, (0, 1)), Cell(6, 1, (1, 2)),
        Cell(7, 1, (2, 3)), Cell(8, 1, (0, 3)),
        Cell(9, 1, (0, 4)),
    ])


def grid_graph(rows: int, cols: int) -> ChainComplex:
    """Grid as a dim-1 complex; vertices row-major 0..rows*cols-1."""
    n = rows * cols
    cells = [Cell(i, 0) for i in range(n)]
    eid = n
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                cells.append(Cell(eid, 1, (v, v + 1)))
                eid += 1
            if r + 1 < rows:
                cells.append(Cell(eid, 1, (v, v + cols)))
                eid += 1
    return build_complex(cells)


def gnp_graph(n: int, p: float, seed: int) -> ChainComplex:
    """Erdos-Renyi graph, seeded; isolated vertices kept."""
    rng = random.Random(seed)
    cells = [Cell(i, 0) for i in range(n)]
    eid = n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                cells.append(Cell(eid, 1, (u, v)))
                eid += 1
    return build_complex(cells)


def ring_with_chords(n: int, chords: int, seed: int) -> ChainComplex:
    """Cycle on n vertices plus seeded random chords."""
    rng = random.Random(seed)
    cells = [Cell(i, 0) for i in range(n)]
    eid = n
    seen = set()
    for i in range(n):
        j = (i + 1) % n
        seen.add((min(i, j), max(i, j)))
        cells.append(Cell(eid, 1, (i, j)))
        eid += 1
    added = 0
    attempts = 0
    while added < chords and attempts < 50 * max(1, chords):
        attempts += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen.add(key)
        cells.append(Cell(eid, 1, (u, v)))
        eid += 1
        added += 1
    return build_complex(cells)


def random_connected_graph(n: int, extra_edges: int, seed: int) -> ChainComplex:
    """Random spanning tree plus extra random edges."""
    rng = random.Random(seed)
    cells = [Cell(i, 0) for i in range(n)]
    eid = n
    seen = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        u = order[i]
        v = order[rng.randrange(i)]
        seen.add((min(u, v), max(u, v)))
        cells.append(Cell(eid, 1, (u, v)))
        eid += 1
    added = 0
    attempts = 0
    while added < extra_edges and attempts < 50 * max(1, extra_edges):
        attempts += 1
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen.add(key)
        cells.append(Cell(eid, 1, (u, v)))
        eid += 1
        added += 1
    return build_complex(cells)


def _random_cycle_bits(kernel: List[int], rng: random.Random) -> int:
    """Random nonzero GF(2) combination of kernel basis vectors."""
    for _ in range(16):
        bits = 0
        for vec in kernel:
            if rng.random() < 0.5:
                bits ^= vec
        if bits:
            return bits
    return kernel[0]


def random_complex(seed: int, max_cells: int = 50, max_dim: int = 3) -> ChainComplex:
    """Seeded random valid complex (boundary law holds by construction).

    Starts from a triangle so the 1-cycle space is never empty, then
    grows random edges, faces attached along random 1-cycles, and
    3-cells attached along random 2-cycles.  Births are monotone by
    construction.
    """
    rng = random.Random(seed)
    n_vertices = rng.randint(3, 8)
    cells: List[Cell] = []
    births = {}
    for i in range(n_vertices):
        births[i] = rng.randint(0, 2)
        cells.append(Cell(i, 0, (), births[i]))
    next_id = n_vertices
    # guaranteed triangle 0-1-2
    edge_list: List[Tuple[int, Tuple[int, int]]] = []
    for u, v in ((0, 1), (1, 2), (0, 2)):
        birth = max(births[u], births[v]) + rng.randint(0, 1)
        births[next_id] = birth
        cells.append(Cell(next_id, 1, (u, v), birth))
        edge_list.append((next_id, (u, v)))
        next_id += 1
    n_edges = rng.randint(0, max(0, min(10, max_cells - len(cells) - 4)))
    for _ in range(n_edges):
        u = rng.randrange(n_vertices)
        v = rng.randrange(n_vertices)
        if u == v:
            continue
        birth = max(births[u], births[v]) + rng.randint(0, 1)
        births[next_id] = birth
        cells.append(Cell(next_id, 1, (u, v), birth))
        edge_list.append((next_id, (u, v)))
        next_id += 1

    def attach(dim: int, count: int, next_id: int) -> int:
        for _ in range(count):
            if len(cells) >= max_cells:
                break
            snapshot = build_complex(cells)
            kernel = _gf2.nullspace(
                boundary_matrix_rows(snapshot, dim - 1),
                snapshot.n_cells(dim - 1),
            ) if dim - 1 > 0 else []
            if not kernel:
                break
            bits = _random_cycle_bits(kernel, rng)
            lower_cells = snapshot.cells_of_dim(dim - 1)
            support = [lower_cells[i].id for i in range(len(lower_cells))
                       if (bits >> i) & 1]
            birth = max(births[i] for i in support) + rng.randint(0, 1)
            births[next_id] = birth
            cells.append(Cell(next_id, dim, tuple(support), birth))
            next_id += 1
        return next_id

    if max_dim >= 2:
        next_id = attach(2, rng.randint(1, 4), next_id)
    if max_dim >= 3:
        next_id = attach(3, rng.randint(0, 2), next_id)
    return build_complex(cells)


def corrupt_complex(complex: ChainComplex, seed: int) -> Optional[ChainComplex]:
    """Flip one incidence so the boundary law fails; None if impossible.

    Toggles, inside the boundary list of a cell of dim >= 2, one cell
    that itself has nonzero boundary; the result stays buildable but
    fails ``verify_d2``.
    """
    rng = random.Random(seed)
    candidates = []
    for dim in range(2, complex.max_dim + 1):
        for cell in complex.cells_of_dim(dim):
            for lower in complex.cells_of_dim(dim - 1):
                if not lower.odd_boundary:
                    continue
                if lower.birth <= cell.birth:
                    candidates.append((cell.id, lower.id))
    if not candidates:
        return None
    target_id, toggle_id = candidates[rng.randrange(len(candidates))]
    cells = []
    for cell in complex.all_cells():
        if cell.id != target_id:
            cells.append(cell)
            continue
        if toggle_id in cell.odd_boundary:
            new_boundary = tuple(sorted(b for b in cell.odd_boundary if b != toggle_id))
        else:
            new_boundary = tuple(sorted(cell.odd_boundary)) + (toggle_id,)
        cells.append(Cell(cell.id, cell.dim, new_boundary, cell.birth))
    return build_complex(cells)


def random_cycle(complex: ChainComplex, dim: int, seed: int):
    """Random element of the cycle space Z_dim (may be zero)."""
    from .homology import homology_basis

    rng = random.Random(seed)
    basis = homology_basis(complex, dim)
    chain = complex.zero_chain(dim)
    for z in basis.Z_basis:
        if rng.random() < 0.5:
            chain = chain + z
    return chain
