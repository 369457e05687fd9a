"""Exception hierarchy shared across the package.

Two families: `ValidationError` for bad parameters, configuration, or
violated preconditions (a user problem), and `NumericalFailure` for a
broken internal certificate such as a root bracket without a sign change
(an implementation problem).  The CLI maps the first to exit status 2 and
the second to exit status 1.
"""


class ValidationError(ValueError):
    """A parameter, configuration, or precondition constraint was violated."""


class NumericalFailure(RuntimeError):
    """An internal numerical certificate failed (bug, not bad input)."""
