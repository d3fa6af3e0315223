"""Construction, boundary algebra, filtrations, and the file format."""

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topomemo import generators, io
from topomemo.complexes import (
    Cell,
    Chain,
    ChainComplex,
    Filtration,
    boundary,
    build_complex,
    is_cycle,
    verify_d2,
)
from topomemo.errors import (
    DanglingBoundary,
    DimensionMismatch,
    DuplicateCell,
    FiltrationViolation,
    IndexOutOfRange,
)


def test_hollow_triangle_construction(hollow_triangle):
    assert hollow_triangle.total_cells == 6
    assert hollow_triangle.max_dim == 1
    assert hollow_triangle.n_cells(0) == 3
    assert hollow_triangle.n_cells(1) == 3


def test_dimension_mismatch_rejected():
    with pytest.raises(DimensionMismatch):
        build_complex([
            Cell(0, 0), Cell(1, 0), Cell(2, 1, (0, 1)),
            Cell(3, 1, (2, 0)),  # boundary lists a 1-cell
        ])


def test_filtration_violation_rejected():
    with pytest.raises(FiltrationViolation):
        build_complex([
            Cell(0, 0, (), 1), Cell(1, 0, (), 1),
            Cell(2, 1, (0, 1), 0),  # edge born before its vertices
        ])


def test_dangling_and_duplicate_rejected():
    with pytest.raises(DanglingBoundary):
        build_complex([Cell(0, 0), Cell(1, 1, (0, 9))])
    with pytest.raises(DuplicateCell):
        build_complex([Cell(0, 0), Cell(0, 0)])


def test_boundary_examples(hollow_triangle, filled_triangle):
    loop = hollow_triangle.chain(1, [3, 4, 5])
    assert boundary(loop, hollow_triangle).is_zero
    single = hollow_triangle.chain(1, [3])
    assert boundary(single, hollow_triangle).support == frozenset({0, 1})
    face = filled_triangle.chain(2, [6])
    d = boundary(face, filled_triangle)
    assert d.support == frozenset({3, 4, 5})
    assert boundary(d, filled_triangle).is_zero


def test_boundary_of_vertices_is_empty(hollow_triangle):
    c = hollow_triangle.chain(0, [0, 2])
    out = boundary(c, hollow_triangle)
    assert out.dim == -1 and out.is_zero


def test_boundary_index_error(hollow_triangle):
    with pytest.raises(IndexOutOfRange):
        boundary(Chain(1, frozenset({99})), hollow_triangle)
    with pytest.raises(IndexOutOfRange):
        hollow_triangle.chain(1, [99])


def test_is_cycle_examples(hollow_triangle):
    assert is_cycle(hollow_triangle.chain(1, [3, 4, 5]), hollow_triangle)
    assert not is_cycle(hollow_triangle.chain(1, [3]), hollow_triangle)


def test_disjoint_loop_sum_is_cycle():
    # two vertex-disjoint triangles; the sum of both loops is a cycle
    cells = []
    for base in (0, 10):
        cells += [Cell(base + i, 0) for i in range(3)]
        cells += [
            Cell(base + 3, 1, (base, base + 1)),
            Cell(base + 4, 1, (base + 1, base + 2)),
            Cell(base + 5, 1, (base, base + 2)),
        ]
    cx = build_complex(cells)
    both = cx.chain(1, [3, 4, 5, 13, 14, 15])
    assert is_cycle(both, cx)


def test_verify_d2_on_fixtures(filled_triangle, sphere, torus, klein):
    for cx in (filled_triangle, sphere, torus, klein):
        assert verify_d2(cx)


def test_verify_d2_random_and_corrupted():
    for seed in range(25):
        cx = generators.random_complex(seed, max_cells=30)
        assert verify_d2(cx)
        mutated = generators.corrupt_complex(cx, seed)
        assert mutated is not None
        assert not verify_d2(mutated)


edge_subsets = st.sets(st.sampled_from([3, 4, 5]))


@given(edge_subsets, edge_subsets, edge_subsets)
@settings(max_examples=60)
def test_chain_algebra(a_ids, b_ids, c_ids):
    a, b, c = (Chain(1, frozenset(s)) for s in (a_ids, b_ids, c_ids))
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert (a + a).is_zero


@given(edge_subsets, edge_subsets)
@settings(max_examples=60)
def test_boundary_linearity(a_ids, b_ids):
    cx = generators.hollow_triangle()
    a, b = Chain(1, frozenset(a_ids)), Chain(1, frozenset(b_ids))
    assert boundary(a + b, cx) == boundary(a, cx) + boundary(b, cx)


def test_boundary_squared_on_random_chains():
    rng = random.Random(3)
    for seed in range(10):
        cx = generators.random_complex(seed)
        for dim in range(2, cx.max_dim + 1):
            ids = [c.id for c in cx.cells_of_dim(dim)]
            pick = [i for i in ids if rng.random() < 0.5]
            chain = cx.chain(dim, pick)
            assert boundary(boundary(chain, cx), cx).is_zero


def test_every_filtration_prefix_is_valid():
    for seed in range(10):
        cx = generators.random_complex(seed)
        filt = Filtration(cx)
        for n in range(len(filt) + 1):
            prefix = filt.prefix_cells(n)  # raises if invalid
            assert prefix.total_cells == n
        for t in filt.critical_values:
            filt.prefix_at(t)


def test_complex_file_round_trip(tmp_path, torus):
    path = tmp_path / "torus.json"
    io.dump_complex(torus, path)
    again = io.load_complex(path)
    assert io.complex_to_payload(again) == io.complex_to_payload(torus)
    # loader validates like build_complex
    payload = io.complex_to_payload(torus)
    payload["cells"][5]["boundary"] = [999]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(payload))
    with pytest.raises(DanglingBoundary):
        io.load_complex(bad)


def test_empty_complex_is_valid():
    cx = build_complex([])
    assert cx.max_dim == -1
    assert cx.total_cells == 0
