"""Pure-Python GF(2) kernels on int bitmask rows.

A matrix row is a Python int whose bit ``i`` is the entry in column
``i``.  Python's arbitrary-precision ints make XOR on whole rows a
single operation, which keeps this backend usable at desk scale even
without the compiled extension.
"""

from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple


def rref(rows: Iterable[int], ncols: int) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form over GF(2).

    Pivots are chosen in ascending column order within ``[0, ncols)``;
    bits at or beyond ``ncols`` ride along untouched (used for
    augmented solves).  Returns ``(reduced_rows, pivot_columns)`` with
    row ``i`` pivoting at ``pivot_columns[i]``.  RREF is canonical, so
    the output depends only on the row space.
    """
    work = [int(r) for r in rows]
    out: List[int] = []
    pivots: List[int] = []
    for col in range(ncols):
        if not work:
            break
        bit = 1 << col
        pivot_row = None
        for i, r in enumerate(work):
            if r & bit:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        piv = work.pop(pivot_row)
        work = [r ^ piv if r & bit else r for r in work]
        out = [r ^ piv if r & bit else r for r in out]
        out.append(piv)
        pivots.append(col)
    return out, pivots


def column_reduce(columns: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Left-to-right persistence-style reduction.

    Each column is an int bitmask over row indices; ``low`` is the
    highest set bit.  Column ``j`` is repeatedly XORed with the earlier
    column owning its current low until the low is unclaimed or the
    column empties.  Returns ``(reduced_columns, lows)`` with ``-1``
    marking emptied columns.
    """
    cols = [int(c) for c in columns]
    low_owner: dict[int, int] = {}
    lows: List[int] = []
    for j, c in enumerate(cols):
        low = c.bit_length() - 1
        while low >= 0 and low in low_owner:
            c ^= cols[low_owner[low]]
            low = c.bit_length() - 1
        cols[j] = c
        if low >= 0:
            low_owner[low] = j
        lows.append(low)
    return cols, lows
