"""Exception types. Each carries a short machine code used by the CLI."""


class PadicError(Exception):
    code = "error"


class DomainError(PadicError, ValueError):
    code = "domain"


class GridError(PadicError, ValueError):
    code = "invalid-grid"


class PoleError(PadicError, ArithmeticError):
    code = "pole"

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class LizorkinError(PadicError, ValueError):
    """Raised when an operator input is not in the required Lizorkin space."""

    code = "lizorkin-membership"


class SymbolError(PadicError, ValueError):
    code = "symbol"


class NonInvertibleError(SymbolError):
    code = "non-invertible"


class UnsolvableError(PadicError, ValueError):
    code = "unsolvable"


class HypothesisError(PadicError, ValueError):
    code = "hypothesis"


class DegenerateError(PadicError, ValueError):
    code = "degenerate-automodel"
