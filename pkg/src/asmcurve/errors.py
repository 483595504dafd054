"""Exception hierarchy.

Three families matter to callers (and to the CLI exit codes):
``SpecError`` for malformed input, ``VerificationFailed`` for a check that
ran and disagreed, and ``BudgetExceeded`` for searches cut off by a cap.
"""


class AsmError(Exception):
    pass


# --- input / validation -------------------------------------------------

class SpecError(AsmError, ValueError):
    pass


class NonPrime(SpecError):
    pass


class DegreeZero(SpecError):
    pass


class QTooSmall(SpecError):
    pass


class ZeroConstant(SpecError):
    pass


class NotMonic(SpecError):
    pass


class ZeroLinearTerm(SpecError):
    pass


class SpecParseError(SpecError):
    pass


# --- field plumbing -----------------------------------------------------

class CtxMismatch(AsmError, ValueError):
    pass


class NotADivisor(AsmError, ValueError):
    pass


class NotASubfield(AsmError, ValueError):
    pass


class CharMismatch(NotASubfield):
    pass


class FieldTooSmall(AsmError, ValueError):
    pass


# --- math failures ------------------------------------------------------

class SingularPoint(AsmError, ValueError):
    pass


class ZeroFunction(AsmError, ValueError):
    pass


class ZeroCovector(AsmError, ValueError):
    pass


class LiftFailed(AsmError, ValueError):
    pass


class NoGaloisPoints(AsmError, ValueError):
    pass


class VerificationFailed(AsmError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class StructureMismatch(VerificationFailed):
    pass


# --- budgets ------------------------------------------------------------

class BudgetExceeded(AsmError):
    pass


class FieldTooLarge(BudgetExceeded, SpecError):
    pass


class SearchBudgetExceeded(BudgetExceeded):
    pass


class PrecisionBudgetExceeded(BudgetExceeded):
    pass


class ClosureBudgetExceeded(BudgetExceeded):
    pass


class EnumBudgetExceeded(BudgetExceeded):
    pass
