"""Parity split of homology: Euler characteristic, capacity, bottleneck metric.

Even-index Betti numbers count scaffold features (components, cavities),
odd-index ones count flow features (independent cycles).  The bottleneck
metric is capacity minus absolute Euler characteristic, which equals
twice the weaker parity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .complexes import ChainComplex
from .homology import betti_numbers


@dataclass(frozen=True)
class ParityProfile:
    betti: Tuple[int, ...]
    dim_phi: int
    dim_psi: int
    chi: int
    capacity: int
    phi_topo: int

    def to_payload(self) -> dict:
        return {
            "betti": list(self.betti),
            "dim_phi": self.dim_phi,
            "dim_psi": self.dim_psi,
            "chi": self.chi,
            "capacity": self.capacity,
            "phi_topo": self.phi_topo,
        }


def parity_profile(complex: ChainComplex) -> ParityProfile:
    """Compute the full parity profile from the Betti numbers.

    Identities guaranteed exactly: chi = dim_phi - dim_psi,
    capacity = dim_phi + dim_psi, phi_topo = capacity - |chi|
    = 2 * min(dim_phi, dim_psi).
    """
    betti = tuple(betti_numbers(complex))
    dim_phi = sum(b for k, b in enumerate(betti) if k % 2 == 0)
    dim_psi = sum(b for k, b in enumerate(betti) if k % 2 == 1)
    chi = dim_phi - dim_psi
    capacity = dim_phi + dim_psi
    return ParityProfile(
        betti=betti,
        dim_phi=dim_phi,
        dim_psi=dim_psi,
        chi=chi,
        capacity=capacity,
        phi_topo=capacity - abs(chi),
    )


def euler_characteristic(complex: ChainComplex, method: str = "cells") -> int:
    """Alternating sum over cell counts or over Betti numbers.

    The two methods agree on every valid complex; exposing both keeps
    the identity testable.
    """
    if method == "cells":
        return sum(
            (-1) ** k * complex.n_cells(k) for k in range(complex.max_dim + 1)
        )
    if method == "betti":
        return sum((-1) ** k * b for k, b in enumerate(betti_numbers(complex)))
    raise ValueError(f"unknown method {method!r}; use 'cells' or 'betti'")
