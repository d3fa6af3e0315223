"""Adapter exposing the packed Cython kernels on int bitmask rows."""

from __future__ import annotations

from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import _gf2ext


def _pack(rows: Sequence[int], nbits: int) -> np.ndarray:
    nwords = max(1, (nbits + 63) // 64)
    arr = np.zeros((len(rows), nwords), dtype=np.uint64)
    nbytes = nwords * 8
    for i, r in enumerate(rows):
        arr[i] = np.frombuffer(int(r).to_bytes(nbytes, "little"), dtype=np.uint64)
    return arr


def _unpack(arr: np.ndarray, i: int) -> int:
    return int.from_bytes(arr[i].tobytes(), "little")


def rref(rows: Iterable[int], ncols: int) -> Tuple[List[int], List[int]]:
    rows = [int(r) for r in rows]
    if not rows:
        return [], []
    width = max([ncols] + [r.bit_length() for r in rows])
    arr = _pack(rows, width)
    pivots = _gf2ext.rref_packed(arr, ncols)
    return [_unpack(arr, i) for i in range(len(pivots))], list(pivots)


def column_reduce(columns: Sequence[int]) -> Tuple[List[int], List[int]]:
    cols = [int(c) for c in columns]
    if not cols:
        return [], []
    width = max(1, max(c.bit_length() for c in cols))
    arr = _pack(cols, width)
    lows = _gf2ext.column_reduce_packed(arr, width)
    return [_unpack(arr, i) for i in range(len(cols))], [int(x) for x in lows]
