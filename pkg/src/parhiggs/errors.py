class ParhiggsError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ParhiggsError, ValueError):
    """Input data violates a type invariant or an operation precondition."""


class RegimeError(ParhiggsError, ValueError):
    """Input is well formed but lies outside the range where a formula holds.

    Raised, for example, when a signature has no even isotropy order, where
    the Z/2 cohomology ranks and the component counts are not defined.
    """
