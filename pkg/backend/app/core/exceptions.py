"""
Domain Exceptions - Error hierarchy shared by the services, CLI and API
"""

from typing import Any, Dict, Optional


class AlgebraError(Exception):
    """Base class for every error raised by the algebra services"""

    code: str = "algebra_error"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"error": self.code, "detail": self.message}
        if self.context:
            payload["context"] = {k: str(v) for k, v in self.context.items()}
        return payload


class NotDivisible(AlgebraError):
    """Exact division in the Laurent ring has no quotient"""

    code = "not_divisible"


class DivisionByZero(AlgebraError, ZeroDivisionError):
    code = "division_by_zero"


class InvalidQValue(AlgebraError):
    """Evaluation point violates q != 0 and q^2 != 1"""

    code = "invalid_q"


class AlphabetMismatch(AlgebraError):
    """Words over the U-alphabet and the A-alphabet were mixed"""

    code = "alphabet_mismatch"


class ExpressionSyntaxError(AlgebraError):
    """Malformed expression text; carries the offending position"""

    code = "syntax_error"

    def __init__(self, message: str, position: int, source: Optional[str] = None):
        super().__init__(f"{message} at position {position}", position=position)
        self.position = position
        self.source = source


class NonTermination(AlgebraError):
    """Reduction exceeded its step cap; signals a broken rule table"""

    code = "non_termination"


class NotApplicable(AlgebraError):
    code = "not_applicable"


class KernelTooLarge(AlgebraError):
    """ker(nu_y) is not one-dimensional, so the input is not irreducible"""

    code = "kernel_too_large"


class NotEigen(AlgebraError):
    """A vector that must be an eigenvector is not one"""

    code = "not_eigen"


class InvalidModule(AlgebraError):
    """Module data is malformed or violates a classification postcondition"""

    code = "invalid_module"
