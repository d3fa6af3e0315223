"""GF(2) homology: Betti numbers, explicit bases, coordinates, persistence.

All reductions pivot on the lowest available column under the canonical
(birth, id) cell order, so bases, representatives, and residuals are
deterministic and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from . import _gf2
from .complexes import BirthLike, Chain, ChainComplex, Filtration, boundary, is_cycle
from .errors import BandEmpty, IndexOutOfRange, NotACycle


def chain_to_bits(c: Chain, complex: ChainComplex) -> int:
    index = complex.index_of_dim(c.dim)
    bits = 0
    for i in c.support:
        pos = index.get(i)
        if pos is None:
            raise IndexOutOfRange(f"id {i} is not a dim-{c.dim} cell")
        bits |= 1 << pos
    return bits


def bits_to_chain(bits: int, complex: ChainComplex, dim: int) -> Chain:
    cells = complex.cells_of_dim(dim)
    support = set()
    pos = 0
    while bits:
        if bits & 1:
            support.add(cells[pos].id)
        bits >>= 1
        pos += 1
    return Chain(dim, frozenset(support))


def boundary_matrix_rows(complex: ChainComplex, k: int) -> List[int]:
    """Rows of the dim-k boundary operator.

    Row ``i`` (one per (k-1)-cell) is a bitmask over dim-k cell
    positions; entry set iff the k-cell is incident an odd number of
    times.
    """
    rows = [0] * complex.n_cells(k - 1)
    if k <= 0:
        return []
    index_low = complex.index_of_dim(k - 1)
    for j, cell in enumerate(complex.cells_of_dim(k)):
        for b in cell.odd_boundary:
            rows[index_low[b]] |= 1 << j
    return rows


def _boundary_columns(complex: ChainComplex, k: int) -> List[int]:
    """Columns of the dim-(k+1) boundary operator as bitmasks over k-cells."""
    index = complex.index_of_dim(k)
    cols = []
    for cell in complex.cells_of_dim(k + 1):
        bits = 0
        for b in cell.odd_boundary:
            bits |= 1 << index[b]
        cols.append(bits)
    return cols


def betti_numbers(complex: ChainComplex) -> List[int]:
    """Betti numbers b_0 .. b_max_dim via GF(2) rank computations."""
    out = []
    for k in range(complex.max_dim + 1):
        n_k = complex.n_cells(k)
        rank_dk = _gf2.rank(boundary_matrix_rows(complex, k), n_k) if k > 0 else 0
        rank_dk1 = _gf2.rank(
            boundary_matrix_rows(complex, k + 1), complex.n_cells(k + 1))
        out.append((n_k - rank_dk) - rank_dk1)
    return out


@dataclass(frozen=True)
class HomologyBasis:
    """Bases for cycles, boundaries, and homology representatives in one dim.

    ``reps`` extends ``B_basis`` to a basis of the cycle space; the
    quotient classes of the reps form a basis of homology.
    """

    complex: ChainComplex
    dim: int
    Z_basis: Tuple[Chain, ...]
    B_basis: Tuple[Chain, ...]
    reps: Tuple[Chain, ...]
    _solve_columns: Tuple[int, ...] = field(repr=False, compare=False, default=())

    @property
    def betti(self) -> int:
        return len(self.reps)


@dataclass(frozen=True)
class HomologyCoords:
    """Coordinates of a cycle: rep coefficients plus a boundary residual."""

    a: Tuple[int, ...]
    boundary_residual: Chain

    @property
    def nontrivial(self) -> bool:
        return any(self.a)


@lru_cache(maxsize=256)
def homology_basis(complex: ChainComplex, k: int) -> HomologyBasis:
    """Deterministic Z/B/rep bases at dimension ``k``.

    Z comes from the kernel of the boundary rows, B from the RREF of
    the (k+1)-boundary columns, and reps are the Z basis vectors that
    survive elimination against B (original vectors, not their reduced
    forms).
    """
    n_k = complex.n_cells(k)
    z_bits = _gf2.nullspace(boundary_matrix_rows(complex, k), n_k) if k > 0 else [
        1 << i for i in range(n_k)
    ]
    b_rows, b_pivots = _gf2.rref(_boundary_columns(complex, k), n_k)
    echelon: List[Tuple[int, int]] = list(zip(b_pivots, b_rows))
    reps_bits: List[int] = []
    for z in z_bits:
        residue = z
        for pivot, row in echelon:
            if (residue >> pivot) & 1:
                residue ^= row
        if residue:
            low = residue & -residue
            echelon.append((low.bit_length() - 1, residue))
            reps_bits.append(z)
    to_chain = lambda bits: bits_to_chain(bits, complex, k)
    solve_columns = tuple(b_rows) + tuple(reps_bits)
    return HomologyBasis(
        complex=complex,
        dim=k,
        Z_basis=tuple(to_chain(z) for z in z_bits),
        B_basis=tuple(to_chain(b) for b in b_rows),
        reps=tuple(to_chain(r) for r in reps_bits),
        _solve_columns=solve_columns,
    )


def coordinates(c: Chain, basis: HomologyBasis) -> HomologyCoords:
    """Unique expression of a cycle over B_basis + reps.

    The rep coefficient vector depends only on the homology class; the
    residual depends on the deterministic basis.  Raises ``NotACycle``
    for chains with nonzero boundary (closing open chains is the search
    module's job, not a silent projection here).
    """
    complex = basis.complex
    if not is_cycle(c, complex):
        raise NotACycle(f"chain of dim {c.dim} has nonzero boundary")
    if c.dim != basis.dim:
        raise IndexOutOfRange(
            f"chain dim {c.dim} does not match basis dim {basis.dim}")
    n_k = complex.n_cells(basis.dim)
    target = chain_to_bits(c, complex)
    solution = _gf2.solve(basis._solve_columns, target, n_k)
    if solution is None:
        raise NotACycle("cycle is outside the computed cycle space")
    n_b = len(basis.B_basis)
    residual_bits = 0
    for i in range(n_b):
        if (solution >> i) & 1:
            residual_bits ^= chain_to_bits(basis.B_basis[i], complex)
    a = tuple((solution >> (n_b + j)) & 1 for j in range(len(basis.reps)))
    return HomologyCoords(a=a, boundary_residual=bits_to_chain(residual_bits, complex, basis.dim))


def is_nontrivial_cycle(c: Chain, complex: ChainComplex) -> bool:
    """True iff the cycle's homology class is nonzero."""
    return coordinates(c, homology_basis(complex, c.dim)).nontrivial


@dataclass(frozen=True)
class Barcode:
    """Persistence intervals for one dimension; death None means infinity."""

    dim: int
    intervals: Tuple[Tuple[Fraction, Optional[Fraction]], ...]

    def count_at(self, t: BirthLike) -> int:
        value = Fraction(t)
        return sum(
            1
            for birth, death in self.intervals
            if birth <= value and (death is None or value < death)
        )

    def to_payload(self) -> dict:
        return {
            "dim": self.dim,
            "intervals": [
                [float(birth), None if death is None else float(death)]
                for birth, death in self.intervals
            ],
        }


def persistence_barcode(filtration: Filtration, k: int) -> Barcode:
    """Standard boundary-matrix column reduction in filtration order."""
    order = filtration.ordering
    position = {cell.id: i for i, cell in enumerate(order)}
    columns = []
    for cell in order:
        bits = 0
        for b in cell.odd_boundary:
            bits |= 1 << position[b]
        columns.append(bits)
    reduced, lows = _gf2.column_reduce(columns)
    death_of: dict = {}
    paired = set()
    for j, low in enumerate(lows):
        if low >= 0:
            death_of[low] = j
            paired.add(low)
    intervals: List[Tuple[Fraction, Optional[Fraction]]] = []
    for i, cell in enumerate(order):
        if cell.dim != k:
            continue
        if reduced[i]:
            continue  # i is a death column, not a class birth
        if i in paired:
            birth = cell.birth
            death = order[death_of[i]].birth
            if birth < death:
                intervals.append((birth, death))
        else:
            intervals.append((cell.birth, None))
    intervals.sort(key=lambda iv: (iv[0], iv[1] is None, iv[1] if iv[1] is not None else 0))
    return Barcode(dim=k, intervals=tuple(intervals))


def persists(c: Chain, filtration: Filtration, band: Tuple[BirthLike, BirthLike]) -> bool:
    """Nontriviality of a cycle across a tolerance band.

    Class death is monotone along the filtration, so checking the two
    endpoints suffices: once a class dies it stays dead.
    """
    lo, hi = Fraction(band[0]), Fraction(band[1])
    if lo > hi:
        raise BandEmpty(f"band ({band[0]}, {band[1]}) is empty")
    prefix_lo = filtration.prefix_at(lo)
    if not is_cycle(c, prefix_lo):
        raise NotACycle("chain is not a cycle in the prefix at the band start")
    if not is_nontrivial_cycle(c, prefix_lo):
        return False
    if hi == lo:
        return True
    return is_nontrivial_cycle(c, filtration.prefix_at(hi))
