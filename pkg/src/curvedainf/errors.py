"""Exception types shared by every subpackage.

Each class corresponds to one CLI exit status so that scripted runs can tell
a malformed input apart from a mathematical obstruction.
"""


class ParseError(ValueError):
    """Input document could not be read into a domain object (exit 1)."""


class InvariantError(ValueError):
    """A type invariant or operation precondition does not hold (exit 2)."""


class ObstructionError(ArithmeticError):
    """An integer linear system required by a solver has no solution (exit 3).

    ``order`` and ``monomial`` locate the failing system when known.
    """

    def __init__(self, message, order=None, monomial=None, log=None):
        super().__init__(message)
        self.order = order
        self.monomial = monomial
        self.log = log if log is not None else []


class PropertyCheckError(AssertionError):
    """A verification run found a counterexample (exit 4)."""


EXIT_CODES = {
    ParseError: 1,
    InvariantError: 2,
    ObstructionError: 3,
    PropertyCheckError: 4,
}
