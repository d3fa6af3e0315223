"""Error taxonomy shared by all modules.

Every domain failure raises a named subclass of :class:`TopomemoError`
so callers (and the CLI) can map failures to stable error strings.
"""


class TopomemoError(Exception):
    """Base class for all domain errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


# complex construction / indexing
class DuplicateCell(TopomemoError):
    """Two cells were declared with the same id."""


class DanglingBoundary(TopomemoError):
    """A boundary list references a cell id that does not exist."""


class DimensionMismatch(TopomemoError):
    """A boundary cell does not have dimension dim - 1."""


class FiltrationViolation(TopomemoError):
    """A cell is born before one of its boundary cells."""


class IndexOutOfRange(TopomemoError):
    """A chain references cell ids absent from the complex."""


# homology
class NotACycle(TopomemoError):
    """Operation requires a chain with zero boundary."""


class BandEmpty(TopomemoError):
    """Persistence band has lower endpoint above upper endpoint."""


# memory traces
class EmptyBundle(TopomemoError):
    """A trace bundle needs at least one member."""


class TrivialCycle(TopomemoError):
    """Operation requires a homologically nontrivial cycle."""


class DisconnectedSupport(TopomemoError):
    """Cycle support must induce a connected subgraph."""


class EmptyStore(TopomemoError):
    """Uncertainty of an empty store is undefined."""


# sheaves
class InvalidSheaf(TopomemoError):
    """Sheaf data is malformed (stalks, shapes, or base graph)."""


class MissingRestriction(TopomemoError):
    """No restriction map for a (vertex, edge) incidence."""


class CoverageGap(TopomemoError):
    """Local sections leave part of the base uncovered."""


class NotClosed(TopomemoError):
    """Trajectory never returns to its start vertex."""


class InvalidTrajectory(TopomemoError):
    """Consecutive trajectory vertices are not adjacent."""


# memoized navigation
class CycleConflict(TopomemoError):
    """Scaffold insertion would create a next-hop loop."""


class AdaptationFailed(TopomemoError):
    """Splice repair exhausted its expansion budget."""


class KeyAbsent(TopomemoError):
    """Exact key lookup failed."""


class Unreachable(TopomemoError):
    """No path exists between the query endpoints."""


class ConfigInvalid(TopomemoError):
    """Experiment configuration is malformed."""
