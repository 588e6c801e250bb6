"""Exception taxonomy shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain of definition (e.g. x outside [0,1])."""


class SchemaError(ValueError):
    """Scenario document malformed; message points at the offending field."""


class UnsupportedDerivativeError(ValueError):
    """Requested derivative order exceeds the model's smoothness."""


class ConvergenceError(RuntimeError):
    """An iterative numeric solve failed to reach its tolerance."""


class TruncationError(LookupError):
    """Breakpoint-family query beyond the generated index range."""


class UnresolvedStructureError(RuntimeError):
    """Fixed-point structure could not be resolved at the working tolerance."""


class Refusal(RuntimeError):
    """The closed-form engine declines a scenario it cannot treat soundly.

    Carries a machine-readable reason; the CLI maps this to exit code 2.
    """

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason
