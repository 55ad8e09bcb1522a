"""Exception hierarchy shared by every module.

Each class carries the process exit code the CLI maps it to.
"""


class TcArithError(Exception):
    exit_code = 1


class PreconditionError(TcArithError, ValueError):
    """An operation was called outside its documented domain."""

    exit_code = 3


class ConvergenceDomainError(PreconditionError):
    """|a0| is not below 1/(4a), so the inversion series is not certified."""


class ShapeError(PreconditionError):
    """The polynomial does not have the required normalized shape."""


class BudgetExceeded(TcArithError):
    """An enumeration or iteration bound was hit before an answer was found."""

    exit_code = 4


class NormalizationFailed(BudgetExceeded):
    """No admissible shift/scale was found within the bisection budget."""


class CertificateError(TcArithError, AssertionError):
    """An internally computed certificate failed its own exact re-check."""


class FormulaSyntaxError(TcArithError, ValueError):
    exit_code = 2

    def __init__(self, message: str, pos: int, src: str = ""):
        self.pos = pos
        self.src = src
        super().__init__(f"{message} at position {pos}")
