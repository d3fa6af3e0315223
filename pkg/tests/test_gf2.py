"""Kernel tests: both backends, algebraic postconditions, cross-checks."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topomemo import _gf2
from topomemo._gf2 import pure

try:
    from topomemo._gf2 import compiled
except ImportError:  # extension not built
    compiled = None

BACKENDS = [pure] + ([compiled] if compiled is not None else [])


def random_matrix(rng, nrows, ncols, density=0.4):
    rows = []
    for _ in range(nrows):
        bits = 0
        for c in range(ncols):
            if rng.random() < density:
                bits |= 1 << c
        rows.append(bits)
    return rows


def naive_rank(rows, ncols):
    """Independent O(n^3) elimination on 0/1 lists."""
    grid = [[(r >> c) & 1 for c in range(ncols)] for r in rows]
    rank = 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, len(grid)):
            if grid[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        grid[rank], grid[pivot] = grid[pivot], grid[rank]
        for i in range(len(grid)):
            if i != rank and grid[i][col]:
                grid[i] = [a ^ b for a, b in zip(grid[i], grid[rank])]
        rank += 1
    return rank


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.split(".")[-1])
def test_rref_pivots_and_rank(backend):
    rng = random.Random(11)
    for _ in range(60):
        nrows, ncols = rng.randint(0, 12), rng.randint(1, 16)
        rows = random_matrix(rng, nrows, ncols)
        red, pivots = backend.rref(rows, ncols)
        assert pivots == sorted(pivots)
        assert len(red) == len(pivots) == naive_rank(rows, ncols)
        for row, p in zip(red, pivots):
            assert (row >> p) & 1
            # pivot column is cleared in every other row
            for other in red:
                if other is not row:
                    assert not (other >> p) & 1


def test_backends_agree_exactly():
    if compiled is None:
        pytest.skip("compiled backend unavailable")
    rng = random.Random(23)
    for _ in range(80):
        nrows, ncols = rng.randint(0, 20), rng.randint(1, 90)
        rows = random_matrix(rng, nrows, ncols, density=rng.uniform(0.05, 0.6))
        assert pure.rref(rows, ncols) == compiled.rref(rows, ncols)
        cols = random_matrix(rng, rng.randint(0, 20), rng.randint(1, 90))
        assert pure.column_reduce(cols) == compiled.column_reduce(cols)


def test_nullspace_annihilates_and_counts():
    rng = random.Random(5)
    for _ in range(40):
        nrows, ncols = rng.randint(0, 10), rng.randint(1, 14)
        rows = random_matrix(rng, nrows, ncols)
        kernel = _gf2.nullspace(rows, ncols)
        assert len(kernel) == ncols - naive_rank(rows, ncols)
        for v in kernel:
            for r in rows:
                assert (r & v).bit_count() % 2 == 0


@given(st.lists(st.integers(min_value=0, max_value=2**12 - 1), max_size=8),
       st.integers(min_value=0, max_value=255))
@settings(max_examples=120)
def test_solve_round_trip(columns, picker):
    target = 0
    for i, c in enumerate(columns):
        if (picker >> i) & 1:
            target ^= c
    solution = _gf2.solve(columns, target, 12)
    assert solution is not None
    rebuilt = 0
    for i, c in enumerate(columns):
        if (solution >> i) & 1:
            rebuilt ^= c
    assert rebuilt == target


def test_solve_detects_unsolvable():
    assert _gf2.solve([0b011, 0b110], 0b001, 3) is None
    assert _gf2.solve([], 0b1, 3) is None
    assert _gf2.solve([], 0, 3) == 0


def in_span(vec, basis_rows, ncols):
    return naive_rank(basis_rows + [vec], ncols) == naive_rank(basis_rows, ncols)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__.split(".")[-1])
def test_column_reduce_postconditions(backend):
    rng = random.Random(77)
    for _ in range(30):
        ncols, nbits = rng.randint(0, 12), 14
        cols = random_matrix(rng, ncols, nbits)
        reduced, lows = backend.column_reduce(cols)
        nonzero_lows = [l for l in lows if l >= 0]
        assert len(nonzero_lows) == len(set(nonzero_lows))
        for j, (red, low) in enumerate(zip(reduced, lows)):
            if low >= 0:
                assert red.bit_length() - 1 == low
            else:
                assert red == 0
            # reduced_j differs from col_j by a combination of earlier columns
            assert in_span(red ^ cols[j], cols[:j], nbits)
