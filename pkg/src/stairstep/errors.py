"""Exception types shared across the package.

Every operation failure is a subclass of StairstepError so callers can
distinguish contract violations from genuine bugs.
"""


class StairstepError(Exception):
    """Base class for all package errors."""


# ---- surface kernel ----------------------------------------------------

class MatchingViolation(StairstepError):
    """Normal coordinates fail the parity or triangle-inequality conditions."""


class InessentialComponent(StairstepError):
    """A traced component bounds a disk or is puncture/boundary parallel."""


class IsotopicComponents(StairstepError):
    """Two components of a multicurve are parallel (same isotopy class)."""


class SurfaceMismatch(StairstepError):
    """Operands live on different surfaces."""


class UnorientedInput(StairstepError):
    """An orientation-dependent operation received an unoriented multicurve."""


class MultiComponentInput(StairstepError):
    """A single-curve operation received a multicurve."""


# ---- mapping classes ---------------------------------------------------

class DisjointFromAxis(StairstepError):
    """Annular projection undefined: the curve misses the axis."""


class MissesSubsurface(StairstepError):
    """Subsurface projection undefined: the curve can be isotoped off W."""


class AxisNotFixed(StairstepError):
    """The word does not fix the required curve."""


class UnachievableBound(StairstepError):
    """Requested twist bound below the module's minimal achievable R0."""


# ---- curve graph / certificates ----------------------------------------

class BudgetExceeded(StairstepError):
    """Search budget exhausted; carries the partial bound."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ProjectionUndefined(StairstepError):
    """A tree neighbor label misses the subsurface it must project to."""


class NoSeparatingVertex(StairstepError):
    """Balance check requires at least one separating vertex."""


class LabelCollision(StairstepError):
    """Orbit enumeration produced duplicate labels (not tree-like)."""


# ---- tree model ---------------------------------------------------------

class UnresolvedDistances(StairstepError):
    """Distance matrix entries too wide for the requested approximation."""


class InconsistentLeafMap(StairstepError):
    """Tree-link leaf maps do not match the tree's edges."""


# ---- track --------------------------------------------------------------

class NoBoundingSelection(StairstepError):
    """No union of cut pieces has the required boundary (labels not homologous)."""


class AmbiguousSelection(StairstepError):
    """Strict tread selection found more than one admissible choice."""


class MissingSign(StairstepError):
    """Euler pairing needs a coorientation sign on every tread."""


class NotTwoSided(StairstepError):
    """Splitting requires a two-sided track."""


class WindowTooSmall(StairstepError):
    """Separation probe window too small to contain the track."""


# ---- pipelines ----------------------------------------------------------

class StageFailed(StairstepError):
    """A pipeline stage refuted; carries the stage name and certificate."""

    def __init__(self, stage, certificate=None):
        super().__init__("stage failed: %s" % stage)
        self.stage = stage
        self.certificate = certificate


class TamperDetected(StairstepError):
    """Replay found a certificate that does not match its witnesses."""


class InputError(StairstepError):
    """Bad configuration or file input (CLI exit code 2)."""
