"""Exception and warning types shared across the package."""


class PruwalkError(Exception):
    pass


class ValuationError(PruwalkError):
    """Divisor has larger z-valuation than the dividend."""


class NonDivisibleError(PruwalkError):
    """A polynomial division inside a series division left a remainder."""


class BranchError(PruwalkError):
    """Square root requested of a series whose constant term is not 1."""


class TruncationError(PruwalkError):
    """Substitution would need coefficients beyond the truncation order."""


class LimitError(PruwalkError):
    """Requested size exceeds the configured cost guard."""


class UnsupportedModel(PruwalkError):
    pass


class DegenerateError(PruwalkError):
    """Root isolation asked of the zero polynomial."""


class OscillationWarning(UserWarning):
    pass


class NearCriticalWarning(UserWarning):
    pass
