"""Exception hierarchy."""


class ZetaStarError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ZetaStarError, ValueError):
    """Argument outside the domain of the operation."""


class NonCanonicalInput(DomainError):
    pass


class ZeroValue(DomainError):
    pass


class Inadmissible(DomainError):
    """Index with first entry < 2 passed to a direct evaluator."""


class HypothesisUnmet(DomainError):
    pass


class Pole(DomainError):
    pass


class NotConverged(ZetaStarError, ArithmeticError):
    """Truncation caps exhausted before reaching the requested tolerance."""
