"""Exception hierarchy shared by all modules.

The CLI maps :class:`PreconditionError` to exit code 2 and
:class:`InvariantViolation` to exit code 3.
"""


class HacalcError(Exception):
    pass


class PreconditionError(HacalcError, ValueError):
    """Input violates a documented precondition (bad file, bad grid, ...)."""


class InvariantViolation(HacalcError, RuntimeError):
    """An internal invariant failed; this indicates a bug, not bad input."""


class PrecisionError(HacalcError, ArithmeticError):
    """A p-adic computation ran out of precision."""


class InstanceTooLarge(PreconditionError):
    pass
