"""Exception and warning types raised across the package."""


class QuasiflowError(Exception):
    """Base class for all package errors."""


class UnsupportedFrame(QuasiflowError):
    pass


class SingularFrame(QuasiflowError):
    pass


class DimensionMismatch(QuasiflowError):
    pass


class FrameMismatch(QuasiflowError):
    pass


class NotAState(QuasiflowError):
    pass


class NotAnEffect(QuasiflowError):
    pass


class NotTracePreserving(QuasiflowError):
    pass


class NotTraceAnnihilating(QuasiflowError):
    pass


class NotCPTP(QuasiflowError):
    pass


class InvalidParams(QuasiflowError):
    pass


class SingularDecoherence(QuasiflowError):
    """Raised when a rate is requested at a zero of the decoherence function."""


class IndexOutOfRange(QuasiflowError):
    pass


class QuadratureFailure(QuasiflowError):
    pass


class NotSymmetric(QuasiflowError):
    pass


class UnsupportedModel(QuasiflowError):
    pass


class UnsupportedDimension(QuasiflowError):
    pass


class InvalidAlpha(QuasiflowError):
    pass


class DivergentSum(QuasiflowError):
    pass


class ParseError(QuasiflowError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class ValidationError(QuasiflowError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class NonPositiveProbability(UserWarning):
    """Random-unitary mixing weights dipped below zero."""
