"""Exception hierarchy shared by all plog modules.

The CLI maps these onto its exit-code contract, so raising the right
class matters more than the message text.
"""


class PlogError(Exception):
    """Base class for all errors raised by plog."""


class KbSyntaxError(PlogError):
    """Malformed knowledge-base text; carries a 1-based line/column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class CapExceededError(PlogError):
    """A configured resource cap (atoms, worlds, variables) was exceeded."""


class UndefinedConditionalError(PlogError):
    """Conditioning on a sentence of probability zero."""


class InfeasibleError(PlogError):
    """The constraint set admits no probability at all."""


class NumericalFailureError(PlogError):
    """A solver stalled before reaching its residual target.

    Distinct from InfeasibleError: the constraints may be satisfiable,
    but the iteration did not converge. Carries the best iterate found.
    """

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best
