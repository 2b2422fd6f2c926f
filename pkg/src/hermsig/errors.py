"""Exception types.

Domain errors are raised for inputs that violate an operation's preconditions
(the CLI maps them to exit code 2). ``ContractViolation`` signals that an
internal mathematical invariant failed, which indicates a bug.
"""


class DomainError(ValueError):
    """Base class for precondition failures on user input."""

    code = "DomainError"


class SingularPhi(DomainError):
    code = "SingularPhi"


class InvolutionAxiomViolation(DomainError):
    code = "InvolutionAxiomViolation"


class IllegalEpsilon(DomainError):
    code = "IllegalEpsilon"


class NotDivision(DomainError):
    code = "NotDivision"


class DimensionMismatch(DomainError):
    code = "DimensionMismatch"


class NotHermitian(DomainError):
    code = "NotHermitian"


class NotSymmetric(DomainError):
    code = "NotSymmetric"


class NotInvertible(DomainError):
    code = "NotInvertible"


class ZeroCoefficient(DomainError):
    code = "ZeroCoefficient"


class AlgebraMismatch(DomainError):
    code = "AlgebraMismatch"


class IndivisibleDimension(DomainError):
    code = "IndivisibleDimension"


class SingularForm(DomainError):
    code = "SingularForm"


class SearchExhausted(DomainError):
    code = "SearchExhausted"


class EmptyXSigma(DomainError):
    code = "EmptyXSigma"


class MalformedCertificate(DomainError):
    code = "MalformedCertificate"


class NotPSD(DomainError):
    """Raised with the congruence-diagonal entry that is negative."""

    code = "NotPSD"

    def __init__(self, message, index=None, entry=None):
        super().__init__(message)
        self.index = index
        self.entry = entry


class ParseError(DomainError):
    code = "ParseError"


class ContractViolation(RuntimeError):
    code = "ContractViolation"


class NotAPerfectSquare(ContractViolation):
    code = "NotAPerfectSquare"
