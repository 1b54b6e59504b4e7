"""Exception types. Each carries a short machine-readable ``code``."""


class ToastLabError(Exception):
    code = "error"

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidParameter(ToastLabError, ValueError):
    code = "invalid-parameter"


class UnsupportedTopology(ToastLabError):
    code = "unsupported-topology"


class DegenerateInput(ToastLabError, ValueError):
    code = "degenerate-input"


class NotFillable(ToastLabError):
    code = "not-fillable"


class InvalidToast(ToastLabError):
    code = "invalid-toast"


class NotFound(ToastLabError, KeyError):
    code = "not-found"


class GenerationFailed(ToastLabError):
    code = "generation-failed"


class NoEscape(ToastLabError):
    code = "no-escape"


class NoSolution(ToastLabError):
    code = "no-solution"


class NoCycle(ToastLabError):
    code = "no-cycle"


class NotEvenDegree(ToastLabError):
    code = "not-even-degree"


class InvalidInput(ToastLabError, ValueError):
    code = "invalid-input"


class ParityError(ToastLabError):
    code = "parity-error"


class OutOfRange(ToastLabError):
    code = "out-of-range"


class ChainTooShort(ToastLabError):
    code = "chain-too-short"


class UndefinedRatio(ToastLabError, ZeroDivisionError):
    code = "undefined-ratio"


class BudgetExceeded(ToastLabError):
    code = "budget-exceeded"

    def __init__(self, message="", witness=None, partial=None):
        super().__init__(message, witness)
        self.partial = partial
