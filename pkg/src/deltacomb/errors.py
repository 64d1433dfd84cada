"""Error taxonomy shared by the core library, the service, and the CLI.

Input problems (malformed JSON, off-grid points, mode mixing, violated
preconditions) derive from InputError; numerical failures (root finding,
perturbation budgets, non-coprime solves) derive from NumericalError.
The CLI maps InputError to exit code 3 and NumericalError to exit code 4.
"""

__all__ = [
    "InputError",
    "ParseError",
    "ModeMismatchError",
    "SupportError",
    "OrderCapError",
    "NumericalError",
    "RootConvergenceError",
    "PerturbationBudgetError",
    "NotCoprimeError",
]


class InputError(ValueError):
    """Invalid input or violated precondition."""


class ParseError(InputError):
    """Malformed serialized object; carries a location string when known."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{message} (at {location})"
        super().__init__(message)


class ModeMismatchError(InputError):
    """Operands with different scalar modes."""


class SupportError(InputError):
    """Support lies outside the bound required by the operation."""


class OrderCapError(InputError):
    """Derivative order above the supported cap."""


class NumericalError(ArithmeticError):
    """Numerical procedure failed to meet its tolerance."""


class RootConvergenceError(NumericalError):
    """Root iteration hit the cap without meeting the residual tolerance."""

    def __init__(self, message, best_residual=None):
        self.best_residual = best_residual
        super().__init__(message)


class PerturbationBudgetError(NumericalError):
    """Coprimality not reachable within the coefficient budget."""

    def __init__(self, message, cluster=None):
        self.cluster = cluster
        super().__init__(message)


class NotCoprimeError(NumericalError):
    """Bezout solve residual above threshold: inputs numerically share a root."""
