"""GF(2) linear algebra over int bitmask rows.

Two interchangeable backends implement the hot kernels (``rref`` and
``column_reduce``): a Cython extension working on bit-packed uint64
words and a pure-Python fallback.  The compiled one is preferred when
importable; ``TOPOMEMO_GF2_BACKEND=pure|compiled`` forces a choice.
Everything else (rank, nullspace, solve) is derived here from ``rref``
and is therefore backend-agnostic.
"""

from __future__ import annotations

import os
from typing import Iterable, List, Optional, Sequence, Tuple

from . import pure as _pure

_requested = os.environ.get("TOPOMEMO_GF2_BACKEND", "").strip().lower()

if _requested == "pure":
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import compiled as _compiled

        _impl = _compiled
        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        _impl = _pure
        BACKEND = "pure"


def rref(rows: Iterable[int], ncols: int) -> Tuple[List[int], List[int]]:
    """Canonical RREF: ``(reduced_rows, pivot_columns)``, pivots ascending."""
    return _impl.rref(rows, ncols)


def column_reduce(columns: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Left-to-right low-pivot reduction: ``(reduced_columns, lows)``."""
    return _impl.column_reduce(columns)


def rank(rows: Iterable[int], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Iterable[int], ncols: int) -> List[int]:
    """Deterministic kernel basis of the row system ``{x : A x = 0}``.

    One basis vector per free column, in ascending free-column order;
    each has a 1 at its free column plus the pivot columns needed to
    cancel it.  With no rows every unit vector is returned.
    """
    red, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis: List[int] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        fbit = 1 << free
        vec = fbit
        for row, p in zip(red, pivots):
            if row & fbit:
                vec |= 1 << p
        basis.append(vec)
    return basis


def solve(columns: Sequence[int], target: int, nbits: int) -> Optional[int]:
    """Express ``target`` as an XOR of ``columns``.

    Returns a bitmask over column indices (bit ``i`` set means column
    ``i`` participates) or ``None`` when ``target`` is outside the
    span.  Deterministic: the RREF-derived solution is used.
    """
    cols = [int(c) for c in columns]
    augmented = [c | (1 << (nbits + i)) for i, c in enumerate(cols)]
    red, pivots = rref(augmented, nbits)
    t = int(target)
    for row, p in zip(red, pivots):
        if (t >> p) & 1:
            t ^= row
    if t & ((1 << nbits) - 1):
        return None
    return t >> nbits


def popcount(x: int) -> int:
    return int(x).bit_count()
