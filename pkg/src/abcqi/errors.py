"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can map it
to an exit status and a JSON diagnostic without string matching.
"""


class AbcqiError(Exception):
    code = "ERROR"


class ParseError(AbcqiError, ValueError):
    code = "PARSE_ERROR"


class SingularMatrixError(AbcqiError, ValueError):
    code = "SINGULAR"


class ZeroMatrixError(SingularMatrixError):
    code = "ZERO_MATRIX"


class NotEigenfactorError(AbcqiError, ValueError):
    code = "NOT_AN_EIGENFACTOR"


class NonIntegralMatrixError(AbcqiError, ValueError):
    code = "NON_INTEGRAL"


class PolycyclicError(AbcqiError, ValueError):
    """|det M| <= 1: the group is polycyclic and outside the classifier."""

    code = "POLYCYCLIC_OUT_OF_SCOPE"


class CenterPresentError(AbcqiError, ValueError):
    code = "CENTER_PRESENT"


class LogarithmError(AbcqiError, ArithmeticError):
    code = "NO_REAL_LOGARITHM"


class PreconditionError(AbcqiError, ValueError):
    code = "PRECONDITION_FAILED"
