"""Exception types shared across the package.

Two failure families are kept apart on purpose: inputs that violate a
documented precondition (caller error, CLI exit code 2) and resource
budgets being exceeded (environment problem, also exit code 2 but with a
different message shape). Computation checks that fail -- a sandwich
violation, a certified bound that does not hold -- are not exceptions;
they are returned as data so the verification layer can report them.
"""


class PreconditionError(ValueError):
    """An argument violates a documented precondition."""


class BudgetError(RuntimeError):
    """A memory or term-count budget would be exceeded."""
