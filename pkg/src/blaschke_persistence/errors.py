"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularityError(ArithmeticError):
    """Evaluation was requested at (or too close to) a singular point."""


class PoleError(SingularityError):
    """A logarithmic derivative was requested at a zero of the product."""


class NonConvergenceError(RuntimeError):
    """An iterative solver failed to reach its residual bound."""


class PreconditionError(ValueError):
    """A stated hypothesis of a bound or check does not hold; the message
    names the failed inequality."""
