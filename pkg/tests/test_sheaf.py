"""Sheaf tests: exhaustive enumeration oracles at small scale."""

import itertools
import random

import pytest

from topomemo import generators
from topomemo.complexes import Cell, Filtration, build_complex
from topomemo.errors import BandEmpty, CoverageGap, InvalidSheaf, NotClosed
from topomemo.sheaf import (
    CellularSheaf,
    LocalSection,
    admissible,
    coboundary,
    constant_sheaf,
    content_recurrence,
    effective_edges,
    glue_sections,
    mat_vec,
    sheaf_cohomology,
)


def path_graph(n):
    cells = [Cell(i, 0) for i in range(n)]
    cells += [Cell(n + i, 1, (i, i + 1)) for i in range(n - 1)]
    return build_complex(cells)


def cycle_graph(n):
    cells = [Cell(i, 0) for i in range(n)]
    cells += [Cell(n + i, 1, (i, (i + 1) % n)) for i in range(n)]
    return build_complex(cells)


SWAP = (0b10, 0b01)
IDENT2 = (0b01, 0b10)


def twisted_c3():
    base = cycle_graph(3)
    stalks = {i: 2 for i in range(6)}
    restriction = {}
    for edge in base.cells_of_dim(1):
        u, v = sorted(edge.endpoint_set())
        restriction[(u, edge.id)] = IDENT2
        restriction[(v, edge.id)] = IDENT2
    restriction[(0, 5)] = SWAP  # one coordinate flip around the loop
    return CellularSheaf(base=base, stalk_dim=stalks, restriction=restriction)


# ------------------------------------------------------------- coboundary

def test_coboundary_on_path():
    sheaf = constant_sheaf(path_graph(2), 1)
    assert coboundary(sheaf, {0: 1, 1: 1}) == {2: 0}
    assert coboundary(sheaf, {0: 1, 1: 0}) == {2: 1}


def test_coboundary_on_c3():
    sheaf = constant_sheaf(cycle_graph(3), 1)
    # edge order (v0v1, v1v2, v0v2) = ids (3, 4, 5)
    assert coboundary(sheaf, {0: 1, 1: 0, 2: 0}) == {3: 1, 4: 0, 5: 1}


def test_coboundary_requires_total_assignment():
    sheaf = constant_sheaf(path_graph(2), 1)
    with pytest.raises(CoverageGap):
        coboundary(sheaf, {0: 1})


# ------------------------------------------------------------- cohomology

def test_constant_sheaf_on_trees():
    for n in (2, 3, 6):
        assert sheaf_cohomology(constant_sheaf(path_graph(n), 1)) == (1, 0)


def test_constant_sheaf_on_c3():
    assert sheaf_cohomology(constant_sheaf(cycle_graph(3), 1)) == (1, 1)


def random_sheaf(seed, max_vertices=4, max_stalk=2):
    rng = random.Random(seed)
    n = rng.randint(2, max_vertices)
    cells = [Cell(i, 0) for i in range(n)]
    eid = n
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.6:
                cells.append(Cell(eid, 1, (u, v)))
                edges.append((eid, u, v))
                eid += 1
    base = build_complex(cells)
    stalks = {i: rng.randint(0, max_stalk) for i in range(n)}
    for e, _, _ in edges:
        stalks[e] = rng.randint(0, max_stalk)
    restriction = {}
    for e, u, v in edges:
        for vertex in (u, v):
            rows = tuple(
                rng.randrange(1 << stalks[vertex]) for _ in range(stalks[e])
            )
            restriction[(vertex, e)] = rows
    return CellularSheaf(base=base, stalk_dim=stalks, restriction=restriction)


def enumerate_cohomology(sheaf):
    """Brute force over every vertex assignment (small sheaves only)."""
    vertices = sheaf.vertices()
    dims = [sheaf.stalk_dim[v] for v in vertices]
    c0 = sum(dims)
    assert c0 <= 12
    kernel = 0
    images = set()
    for combo in itertools.product(*[range(1 << d) for d in dims]):
        assignment = dict(zip(vertices, combo))
        delta = coboundary(sheaf, assignment)
        image = tuple(delta[e] for e in sheaf.edges())
        images.add(image)
        if all(x == 0 for x in image):
            kernel += 1
    c1 = sum(sheaf.stalk_dim[e] for e in sheaf.edges())
    h0 = kernel.bit_length() - 1
    rank = len(images).bit_length() - 1
    return h0, c1 - rank


def test_cohomology_matches_enumeration():
    checked = 0
    for seed in range(80):
        sheaf = random_sheaf(seed)
        c0 = sum(sheaf.stalk_dim[v] for v in sheaf.vertices())
        if c0 > 10:
            continue
        assert sheaf_cohomology(sheaf) == enumerate_cohomology(sheaf), f"seed={seed}"
        checked += 1
    assert checked >= 60


def test_constant_sheaf_cycle_rank_law():
    for seed in range(40):
        rng = random.Random(seed)
        cx = generators.random_connected_graph(rng.randint(2, 10), rng.randint(0, 6), seed)
        v = cx.n_cells(0)
        e = sum(1 for c in cx.cells_of_dim(1) if len(c.endpoint_set()) == 2)
        kept = [c for c in cx.all_cells() if c.dim == 0 or len(c.endpoint_set()) == 2]
        sheaf = constant_sheaf(build_complex(kept), 1)
        assert sheaf_cohomology(sheaf) == (1, e - v + 1)


def test_cochain_euler_identity():
    for seed in range(40):
        sheaf = random_sheaf(seed)
        h0, h1 = sheaf_cohomology(sheaf)
        c0 = sum(sheaf.stalk_dim[v] for v in sheaf.vertices())
        c1 = sum(sheaf.stalk_dim[e] for e in sheaf.edges())
        assert h0 - h1 == c0 - c1


# ------------------------------------------------------------- gluing

def test_glue_overlapping_path_sections():
    sheaf = constant_sheaf(path_graph(3), 1)
    result = glue_sections(sheaf, [
        LocalSection(frozenset({0, 1}), {0: 1, 1: 1}),
        LocalSection(frozenset({1, 2}), {1: 1, 2: 1}),
    ])
    assert result.gluable
    assert result.global_section == {0: 1, 1: 1, 2: 1}
    assert result.kept == (0, 1)
    # the glued assignment is a cocycle
    assert all(x == 0 for x in coboundary(sheaf, result.global_section).values())


def test_glue_single_total_section():
    sheaf = constant_sheaf(cycle_graph(3), 1)
    result = glue_sections(sheaf, [
        LocalSection(frozenset({0, 1, 2}), {0: 0, 1: 0, 2: 0})])
    assert result.gluable and result.obstruction_dim == 0


def test_glue_coverage_gap():
    sheaf = constant_sheaf(path_graph(3), 1)
    with pytest.raises(CoverageGap):
        glue_sections(sheaf, [LocalSection(frozenset({0, 1}), {0: 0, 1: 0})])


def test_monodromy_twist_blocks_gluing():
    sheaf = twisted_c3()
    sections = [
        LocalSection(frozenset({0, 1}), {0: 0b01, 1: 0b01}),
        LocalSection(frozenset({1, 2}), {1: 0b01, 2: 0b01}),
        LocalSection(frozenset({2, 0}), {2: 0b01, 0: 0b10}),
    ]
    # each section is internally consistent on its own edge
    for section in sections:
        for edge in sheaf.base.cells_of_dim(1):
            u, v = sorted(sheaf.base.cell(edge.id).endpoint_set())
            if u in section.domain and v in section.domain:
                delta = mat_vec(sheaf.restriction[(u, edge.id)], section.values[u])
                delta ^= mat_vec(sheaf.restriction[(v, edge.id)], section.values[v])
                assert delta == 0
    result = glue_sections(sheaf, sections)
    assert not result.gluable
    assert result.obstruction_dim >= 1
    assert len(result.kept) < 3
    # enumeration oracle: no global assignment restricts to all three
    dims = [2, 2, 2]
    for combo in itertools.product(*[range(4) for _ in dims]):
        assignment = dict(zip((0, 1, 2), combo))
        if any(v for v in coboundary(sheaf, assignment).values()):
            continue
        matches = all(
            assignment[v] == section.values[v]
            for section in sections
            for v in section.domain
        )
        assert not matches


def test_greedy_subfamily_is_deterministic_and_clean():
    sheaf = twisted_c3()
    sections = [
        LocalSection(frozenset({0, 1}), {0: 0b01, 1: 0b01}),
        LocalSection(frozenset({1, 2}), {1: 0b01, 2: 0b01}),
        LocalSection(frozenset({2, 0}), {2: 0b01, 0: 0b10}),
    ]
    first = glue_sections(sheaf, sections)
    second = glue_sections(sheaf, sections)
    assert first.kept == second.kept


# ------------------------------------------------------------- recurrence

def test_recurrence_on_hollow_triangle(hollow_triangle):
    filt = Filtration(hollow_triangle)
    assert content_recurrence([0, 1, 2, 0], filt, (0, 0))
    assert not content_recurrence([0, 1, 0], filt, (0, 0))
    with pytest.raises(NotClosed):
        content_recurrence([0, 1, 2], filt, (0, 0))
    with pytest.raises(BandEmpty):
        content_recurrence([0, 1, 0], filt, (1, 0))


def test_recurrence_false_on_filled_face(filled_triangle):
    filt = Filtration(filled_triangle)
    assert not content_recurrence([0, 1, 2, 0], filt, (0, 0))


def test_admissible_truth_table(hollow_triangle, filled_triangle):
    sheaf = constant_sheaf(path_graph(2), 1)
    good = [LocalSection(frozenset({0, 1}), {0: 1, 1: 1})]
    bad = [
        LocalSection(frozenset({0}), {0: 1}),
        LocalSection(frozenset({0, 1}), {0: 0, 1: 1}),
    ]
    recur = [0, 1, 2, 0]
    hollow_f = Filtration(hollow_triangle)
    filled_f = Filtration(filled_triangle)
    assert admissible(recur, sheaf, good, hollow_f, (0, 0)) is True
    assert admissible(recur, sheaf, good, filled_f, (0, 0)) is False
    assert admissible(recur, sheaf, bad, hollow_f, (0, 0)) is False
    assert admissible(recur, sheaf, bad, filled_f, (0, 0)) is False


# ------------------------------------------------------------- edge sets

def test_effective_edges():
    assert effective_edges([1, 2], [3, 4]) == frozenset()
    assert effective_edges([1, 2, 3], [1, 2, 3]) == frozenset({1, 2, 3})
    rng = random.Random(8)
    for _ in range(30):
        a = {rng.randrange(20) for _ in range(rng.randint(0, 12))}
        b = {rng.randrange(20) for _ in range(rng.randint(0, 12))}
        oracle = {x for x in a if x in b}
        assert effective_edges(sorted(a), sorted(b)) == frozenset(oracle)


def test_invalid_sheaf_shapes_rejected():
    base = path_graph(2)
    with pytest.raises(InvalidSheaf):
        CellularSheaf(base=base, stalk_dim={0: 1, 1: 1},
                      restriction={(0, 2): (1,), (1, 2): (1,)})  # missing stalk for edge
    with pytest.raises(InvalidSheaf):
        CellularSheaf(base=base, stalk_dim={0: 1, 1: 1, 2: 2},
                      restriction={(0, 2): (1,), (1, 2): (1,)})  # wrong row count
