"""Exception types shared across the toolkit."""


class WandError(Exception):
    """Base class for all toolkit errors."""


class MalformedInputError(WandError, ValueError):
    """A configuration or argument does not have the expected shape."""


class SizeLimitError(WandError, ValueError):
    """Exhaustive enumeration would exceed the vertex budget."""


class DomainError(WandError, ValueError):
    """A numeric argument lies outside the domain of an operation."""


class SolverError(WandError, RuntimeError):
    """A numerical search failed where solutions are known to exist."""


class FoldDetectionError(WandError, RuntimeError):
    """The two-cycle existence predicate was not monotone in the activity."""


class ContractViolation(WandError, RuntimeError):
    """Two sufficient conditions reached contradictory conclusions."""
