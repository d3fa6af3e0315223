"""Cellular chain complexes over GF(2).

Cells carry explicit boundary incidence lists (cellular, not purely
simplicial), so parallel edges and loops are representable.  Repeated
ids inside a boundary list cancel pairwise, as GF(2) demands.  A
complex is immutable once built; construction validates and fails
rather than repairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .errors import (
    DanglingBoundary,
    DimensionMismatch,
    DuplicateCell,
    FiltrationViolation,
    IndexOutOfRange,
)

BirthLike = Union[int, float, str, Fraction]


def as_birth(value: BirthLike) -> Fraction:
    """Coerce a birth value to an exact non-negative rational."""
    birth = Fraction(value)
    if birth < 0:
        raise FiltrationViolation(f"birth must be non-negative, got {value}")
    return birth


def _odd_multiplicity(ids: Sequence[int]) -> frozenset:
    out = set()
    for i in ids:
        if i in out:
            out.discard(i)
        else:
            out.add(i)
    return frozenset(out)


@dataclass(frozen=True)
class Cell:
    """A single cell: id, dimension, GF(2) boundary incidences, birth.

    ``boundary`` keeps the raw incidence list (needed to recover edge
    endpoints for loops); ``odd_boundary`` is the mod-2 reduction used
    by the boundary operator.
    """

    id: int
    dim: int
    boundary: Tuple[int, ...] = ()
    birth: Fraction = Fraction(0)
    odd_boundary: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.id < 0 or self.dim < 0:
            raise IndexOutOfRange(f"cell id and dim must be non-negative: {self.id}, {self.dim}")
        object.__setattr__(self, "boundary", tuple(int(b) for b in self.boundary))
        object.__setattr__(self, "birth", as_birth(self.birth))
        object.__setattr__(self, "odd_boundary", _odd_multiplicity(self.boundary))

    def endpoint_set(self) -> frozenset:
        """Distinct ids mentioned in the raw boundary list (loop aware)."""
        return frozenset(self.boundary)


@dataclass(frozen=True)
class Chain:
    """A GF(2) chain: dimension plus the set of cells with coefficient 1."""

    dim: int
    support: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))

    def __add__(self, other: "Chain") -> "Chain":
        if self.dim != other.dim:
            raise DimensionMismatch(f"cannot add chains of dim {self.dim} and {other.dim}")
        return Chain(self.dim, self.support ^ other.support)

    __xor__ = __add__

    @property
    def is_zero(self) -> bool:
        return not self.support

    def sorted_ids(self) -> List[int]:
        return sorted(self.support)

    def __iter__(self):
        return iter(self.support)

    def __len__(self):
        return len(self.support)


class ChainComplex:
    """Graded, validated, immutable collection of cells.

    Within each dimension cells are ordered by (birth, id); that order
    fixes every downstream basis choice.
    """

    __slots__ = ("_cells", "_by_dim", "_index", "max_dim")

    def __init__(self, cells: Iterable[Cell]):
        cell_map: Dict[int, Cell] = {}
        for cell in cells:
            if cell.id in cell_map:
                raise DuplicateCell(f"cell id {cell.id} declared twice")
            cell_map[cell.id] = cell
        for cell in cell_map.values():
            for b in cell.boundary:
                ref = cell_map.get(b)
                if ref is None:
                    raise DanglingBoundary(
                        f"cell {cell.id} references missing boundary cell {b}")
                if ref.dim != cell.dim - 1:
                    raise DimensionMismatch(
                        f"cell {cell.id} (dim {cell.dim}) has boundary cell "
                        f"{b} of dim {ref.dim}, expected {cell.dim - 1}")
                if ref.birth > cell.birth:
                    raise FiltrationViolation(
                        f"cell {cell.id} born at {cell.birth} before its "
                        f"boundary cell {b} born at {ref.birth}")
        self._cells = cell_map
        by_dim: Dict[int, List[Cell]] = {}
        for cell in cell_map.values():
            by_dim.setdefault(cell.dim, []).append(cell)
        for dim in by_dim:
            by_dim[dim].sort(key=lambda c: (c.birth, c.id))
        self._by_dim = {d: tuple(cs) for d, cs in by_dim.items()}
        self._index = {
            d: {c.id: i for i, c in enumerate(cs)} for d, cs in self._by_dim.items()
        }
        self.max_dim = max(by_dim, default=-1)

    def cells_of_dim(self, dim: int) -> Tuple[Cell, ...]:
        return self._by_dim.get(dim, ())

    def index_of_dim(self, dim: int) -> Mapping[int, int]:
        return self._index.get(dim, {})

    def n_cells(self, dim: int) -> int:
        return len(self._by_dim.get(dim, ()))

    def cell(self, cell_id: int) -> Cell:
        try:
            return self._cells[cell_id]
        except KeyError:
            raise IndexOutOfRange(f"no cell with id {cell_id}") from None

    def has_cell(self, cell_id: int) -> bool:
        return cell_id in self._cells

    def all_cells(self) -> Tuple[Cell, ...]:
        return tuple(
            c for d in sorted(self._by_dim) for c in self._by_dim[d]
        )

    @property
    def total_cells(self) -> int:
        return len(self._cells)

    def zero_chain(self, dim: int) -> Chain:
        return Chain(dim, frozenset())

    def chain(self, dim: int, ids: Iterable[int]) -> Chain:
        """Build a chain, checking every id exists in the right dimension."""
        index = self.index_of_dim(dim)
        support = _odd_multiplicity(list(ids))
        for i in support:
            if i not in index:
                raise IndexOutOfRange(f"id {i} is not a dim-{dim} cell")
        return Chain(dim, support)


def build_complex(cells: Iterable[Cell]) -> ChainComplex:
    """Validate and assemble a complex; fails rather than repairs."""
    return ChainComplex(cells)


def boundary(c: Chain, complex: ChainComplex) -> Chain:
    """GF(2) boundary of a chain; dim-0 chains map to the empty chain."""
    if c.dim <= 0:
        for i in c.support:
            complex.cell(i)
        return Chain(c.dim - 1, frozenset())
    index = complex.index_of_dim(c.dim)
    acc: set = set()
    for i in c.support:
        if i not in index:
            raise IndexOutOfRange(f"id {i} is not a dim-{c.dim} cell")
        acc ^= complex.cell(i).odd_boundary
    return Chain(c.dim - 1, frozenset(acc))


def is_cycle(c: Chain, complex: ChainComplex) -> bool:
    return boundary(c, complex).is_zero


def verify_d2(complex: ChainComplex) -> bool:
    """Check the boundary-of-boundary law on every cell of dim >= 2."""
    for dim in range(2, complex.max_dim + 1):
        for cell in complex.cells_of_dim(dim):
            acc: set = set()
            for b in cell.odd_boundary:
                acc ^= complex.cell(b).odd_boundary
            if acc:
                return False
    return True


class Filtration:
    """Cells of a complex ordered by (birth, dim, id).

    Filtration monotonicity (validated at build time) plus the dim
    tie-break guarantees every prefix is itself a valid complex.
    """

    __slots__ = ("complex", "ordering")

    def __init__(self, complex: ChainComplex):
        self.complex = complex
        self.ordering: Tuple[Cell, ...] = tuple(
            sorted(complex.all_cells(), key=lambda c: (c.birth, c.dim, c.id))
        )

    def __len__(self) -> int:
        return len(self.ordering)

    @property
    def critical_values(self) -> List[Fraction]:
        seen: List[Fraction] = []
        for cell in self.ordering:
            if not seen or cell.birth != seen[-1]:
                seen.append(cell.birth)
        return seen

    def prefix_at(self, t: BirthLike) -> ChainComplex:
        """Subcomplex of cells born at or before ``t``."""
        cutoff = Fraction(t)
        return ChainComplex(c for c in self.ordering if c.birth <= cutoff)

    def prefix_cells(self, n: int) -> ChainComplex:
        """Subcomplex of the first ``n`` cells in filtration order."""
        return ChainComplex(self.ordering[:n])
