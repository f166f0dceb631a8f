"""Exception hierarchy shared by all modules.

Every error carries a short machine-readable ``code`` (used by the CLI in
its ``error=<Code>`` line) and an ``exit_code`` grouping: 2 for usage and
input problems, 3 for numerical failures.
"""


class GraphFilterError(Exception):
    """Base class for all library errors."""

    code = "Error"
    exit_code = 2


class InputError(GraphFilterError):
    """Invalid user input: bad graphs, bad parameters, bad files."""

    exit_code = 2


class NumericalError(GraphFilterError):
    """A numerical procedure failed to meet its contract."""

    exit_code = 3


# graph construction
class DuplicateEdge(InputError):
    code = "DuplicateEdge"


class IndexOutOfRange(InputError):
    code = "IndexOutOfRange"


class SelfLoopInInput(InputError):
    code = "SelfLoopInInput"


class IsolatedNode(InputError):
    code = "IsolatedNode"


# operators
class UnsupportedScheme(InputError):
    code = "UnsupportedScheme"


class DimensionMismatch(InputError):
    code = "DimensionMismatch"


# filters
class OrderTooLarge(InputError):
    code = "OrderTooLarge"


class UnknownModel(InputError):
    code = "UnknownModel"


class InvalidParam(InputError):
    code = "InvalidParam"


class BasisMismatch(InputError):
    code = "BasisMismatch"


class UnsupportedFamily(InputError):
    code = "UnsupportedFamily"


class SolverDiverged(NumericalError):
    code = "SolverDiverged"


class SingularDenominator(NumericalError):
    code = "SingularDenominator"


class MethodUnsupported(InputError):
    code = "MethodUnsupported"


# spectral
class NotSymmetric(InputError):
    code = "NotSymmetric"


class TooLarge(InputError):
    code = "TooLarge"


class UnsupportedBasis(InputError):
    code = "UnsupportedBasis"


class NotDiagonalizableByThisOracle(InputError):
    code = "NotDiagonalizableByThisOracle"


# fitting
class IllConditioned(NumericalError):
    code = "IllConditioned"


class PoleInDomain(NumericalError):
    code = "PoleInDomain"


# analysis
class BudgetExceeded(InputError):
    code = "BudgetExceeded"


class InvalidConfig(InputError):
    code = "InvalidConfig"


# io
class ParseError(InputError):
    code = "ParseError"

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class RaggedRows(ParseError):
    code = "RaggedRows"
