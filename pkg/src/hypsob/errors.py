"""Exception types shared across the package."""


class HypsobError(Exception):
    """Base class; ``kind`` is the machine-readable tag used by the CLI."""

    kind = "error"

    def __init__(self, message="", details=None):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        d = {"error": self.kind, "message": str(self)}
        if self.details is not None:
            d["details"] = self.details
        return d


class DomainError(HypsobError, ValueError):
    kind = "domain"


class SpecError(HypsobError, ValueError):
    kind = "spec"


class DivergenceError(HypsobError, ArithmeticError):
    kind = "divergence"


class ApplicabilityError(HypsobError):
    """A theorem hypothesis required by the requested construction fails."""

    kind = "applicability"

    def __init__(self, message, failed=None, details=None):
        super().__init__(message, details)
        self.failed = failed or []

    def to_dict(self):
        d = super().to_dict()
        d["failed_checks"] = list(self.failed)
        return d


class ResolutionError(HypsobError):
    kind = "resolution"


class RestrictedScopeError(HypsobError):
    kind = "restricted-scope"
