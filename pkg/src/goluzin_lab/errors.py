"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(ArithmeticError):
    """Evaluation was requested at (or too close to) a pole."""


class ThetaOverflowError(OverflowError):
    """A theta series multiplier exceeds the representable range."""


class BranchCutError(ValueError):
    """The requested point sits on a branch cut and no side was selected."""


class BranchAmbiguityError(ValueError):
    """Square-root continuation hit a value too close to zero to fix a sign."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge within its depth budget.

    The partial result is attached so callers can inspect how far the
    integration got.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
