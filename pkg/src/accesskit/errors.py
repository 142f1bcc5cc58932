"""Exception classes shared across the toolkit.

Every error carries a ``code`` of the form ``<module>.<ClassName>`` so batch
front ends can report failures with a stable, grep-friendly identifier.
"""


class AccessKitError(Exception):
    """Base class for all toolkit errors."""

    module = "accesskit"

    @property
    def code(self) -> str:
        return f"{self.module}.{type(self).__name__}"


# --- data_model ---------------------------------------------------------

class DataModelError(AccessKitError):
    module = "data_model"


class MissingColumn(DataModelError):
    """A required column is absent from an input file header."""


class DuplicateId(DataModelError):
    """Two records in one dataset share an id."""


class NonFiniteCoordinate(DataModelError):
    """A coordinate is NaN or infinite."""


class OutOfRangeCoordinate(DataModelError):
    """A geographic coordinate falls outside [-180, 180] x [-90, 90]."""


class NegativePopulation(DataModelError):
    """A population value is negative."""


class NonPositiveCapacity(DataModelError):
    """A supply capacity is zero or negative."""


class NonPositiveArea(DataModelError):
    """A region area is zero or negative."""


class NegativeResource(DataModelError):
    """A region resource count is negative."""


class MalformedRow(DataModelError):
    """A cell could not be parsed under the declared schema."""


# --- travel -------------------------------------------------------------

class TravelError(AccessKitError):
    module = "travel"


class MetricMismatch(TravelError):
    """The distance metric does not match the dataset's coordinate kind."""


class UnknownId(TravelError):
    """An origin-destination row references an id not in the dataset."""


class DuplicatePair(TravelError):
    """An origin-destination pair appears more than once."""


class NegativeCost(TravelError):
    """A travel cost is negative."""


# --- decay --------------------------------------------------------------

class DecayError(AccessKitError):
    module = "decay"


class InvalidDecaySpec(DecayError):
    """Decay parameters are incomplete or out of range for the chosen kind."""


class NonAscendingBreakpoints(DecayError):
    """Zone breakpoints are not strictly ascending and positive."""


# --- fca ----------------------------------------------------------------

class FcaError(AccessKitError):
    module = "fca"


class DimensionMismatch(FcaError):
    """Matrix dimensions disagree with the dataset."""


class WrongDecayKind(FcaError):
    """The method requires a different decay kind."""


# --- spatial_stats ------------------------------------------------------

class SpatialStatsError(AccessKitError):
    module = "spatial_stats"


class KTooLarge(SpatialStatsError):
    """k-nearest-neighbors requested with k outside [1, n-1]."""


class ZeroVariance(SpatialStatsError):
    """The attribute is constant, so autocorrelation is undefined."""


class NotRowStandardized(SpatialStatsError):
    """The statistic requires row-standardized spatial weights."""


# --- equity -------------------------------------------------------------

class EquityError(AccessKitError):
    module = "equity"


class ZeroTotalResource(EquityError):
    """All regions have zero resource; agglomeration is undefined."""


class MissingPopulation(EquityError):
    """A region lacks the population needed for the demographic comparison."""


class ZeroTotalPopulation(EquityError):
    """Total population is zero; the demographic ratio is undefined."""


class AllZeroValues(EquityError):
    """Every weighted value is zero; the inequality index is undefined."""


# --- optimize -----------------------------------------------------------

class OptimizeError(AccessKitError):
    module = "optimize"


class InstanceTooLarge(OptimizeError):
    """Exhaustive enumeration would exceed the allocation-count cap."""


class InfeasibleAllocation(OptimizeError):
    """An allocation vector violates the problem's budget or shape."""


# --- cli ----------------------------------------------------------------

class ConfigError(AccessKitError):
    """A run configuration is missing a field or references a bad path."""

    module = "cli"
