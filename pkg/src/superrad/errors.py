"""Exception hierarchy.

Validation problems subclass :class:`ValueError`; numerical-contract
failures (truncation leaks, integrator refusal, broken invariants) subclass
:class:`NumericalContractError` so callers such as the CLI can map them to
distinct exit codes.
"""


class SuperradError(Exception):
    """Base class for all package errors."""


class ValidationError(SuperradError, ValueError):
    """An input violates a documented invariant."""


class BasisSizeError(SuperradError, OverflowError):
    """An enumeration would exceed the configured element limit."""


class NoClosedFormError(SuperradError, TypeError):
    """The requested state family has no closed-form Dicke expansion."""


class NumericalContractError(SuperradError, ArithmeticError):
    """A numerical guarantee (trace, positivity, tolerance) was breached."""


class TruncationError(NumericalContractError):
    """Probability mass leaked past a Fock-space cutoff.

    Attributes
    ----------
    tail : float
        The measured discarded (or leaked) mass.
    """

    def __init__(self, message, tail=float("nan")):
        super().__init__(message)
        self.tail = tail


class IntegrationError(NumericalContractError):
    """Fixed-step refinement failed to converge within the step budget."""
