"""GF(2) cellular homology with sheaf gluing and memoized navigation.

The hot linear algebra lives in :mod:`topomemo._gf2`, backed by a
compiled extension when available (``topomemo._gf2.BACKEND`` says
which).  Everything above it is pure Python over immutable complexes.
"""

from ._gf2 import BACKEND as GF2_BACKEND
from .complexes import (
    Cell,
    Chain,
    ChainComplex,
    Filtration,
    boundary,
    build_complex,
    is_cycle,
    verify_d2,
)
from .homology import (
    Barcode,
    HomologyBasis,
    HomologyCoords,
    betti_numbers,
    coordinates,
    homology_basis,
    is_nontrivial_cycle,
    persistence_barcode,
    persists,
)
from .parity import ParityProfile, euler_characteristic, parity_profile
from .traces import (
    ConsolidatedTrace,
    MemoryTrace,
    TraceBundle,
    consolidate,
    decompose_trace,
    extract_backbone,
    joint_uncertainty,
    semanticize,
)
from .sheaf import (
    CellularSheaf,
    GluingResult,
    LocalSection,
    admissible,
    coboundary,
    constant_sheaf,
    content_recurrence,
    effective_edges,
    glue_sections,
    sheaf_cohomology,
)
from .search import (
    NavigationTask,
    RunConfig,
    ScaffoldTable,
    Trajectory,
    WorkingComplex,
    close_cycle,
    condense_to_scaffold,
    dp_lookup,
    run_experiment,
    savitch_search,
)
from .engine import (
    AmortizationReport,
    ContentValue,
    ContextKey,
    MemoryStore,
    WakeSleepDriver,
    adapt,
    amortization_gap,
    bootstrap,
    half_step_consistency,
    retrieve,
)

__version__ = "0.1.0"
